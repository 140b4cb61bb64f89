"""Command-line interface: ``schurkit <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .homology import (CLAIMS, DEFAULT_BAR_CAP, bar_h2_oracle, exponent_divisibility_verdict,
                       finite_quotient, miller_cover)
from .magnus import IdentityId, finite_difference_degrees, identity_check
from .nq import nilpotent_quotient
from .pc import is_consistent
from .presentation import PresentationError
from .reports import FAIL
from .runner import FORMATS, RunOptions, as_finite_presentation, emit_report, load_group, run_corpus
from .structure import (DEFAULT_ENUM_THRESHOLD, classify, fundamental_subgroup, hall_inclusion_check,
                        hall_pairs, lemma11_hypotheses, lemma_l2_check, lower_central_series,
                        mann_check, upper_central_series)

GLOBAL_DEFAULTS = {"seed": 0, "json": False, "enum_threshold": DEFAULT_ENUM_THRESHOLD,
                   "bar_cap": DEFAULT_BAR_CAP, "class_cap": 12}

IDENTITY_SUITE = (["eq1.1", "eq1.2"] + [f"multilinear:{r}" for r in (2, 3, 4)]
                  + [f"class5:{n}" for n in range(13)] + [f"lemma2.3i:{n}" for n in range(13)]
                  + [f"lemma2.3ii:{n}" for n in range(13)])


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in GLOBAL_DEFAULTS:
            raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
        default = GLOBAL_DEFAULTS[key]
        if isinstance(default, bool):
            out[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            out[key] = int(value)
    return out


def _group(args, P, G):
    if G is None:
        return finite_quotient(P, args.class_cap).quotient
    report = is_consistent(G)
    if not report:
        raise ValueError(f"inconsistent pc-presentation: overlap {report.witness} fails")
    return G


def _emit(args, data, text=None):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        print(text if text is not None else json.dumps(data, indent=2, default=str))


def _fp(path):
    return as_finite_presentation(path)


# ----------------------------------------------------------------------
# commands

def cmd_parse(args):
    P, G = load_group(args.file)
    if P is not None:
        data = {"name": P.name, "prime": P.prime, "generators": P.names,
                "relators": [r.to_str(P.names) for r in P.relators], "expect": P.expect}
        _emit(args, data, P.to_text().rstrip())
    else:
        data = {"name": G.name, "prime": G.prime, "generators": G.names, "orders": G.orders,
                "consistent": is_consistent(G).consistent}
        _emit(args, data, G.to_text().rstrip())
    return 0


def cmd_analyze(args):
    P, G = load_group(args.file)
    G = _group(args, P, G)
    pred = classify(G, args.enum_threshold, samples=20, seed=args.seed)
    lcs = lower_central_series(G)
    ucs = upper_central_series(G, args.enum_threshold)
    data = {"entry": G.name, "predicates": pred.to_dict(), "lower_central": lcs.to_dict(),
            "upper_central": ucs.to_dict()}
    status = 0
    if P is not None and P.expect:
        got = {"order": pred.order, "class": pred.nilpotency_class, "exponent": pred.exponent}
        checks = {k: {"expected": v, "computed": got.get(k), "ok": str(got.get(k)) == v}
                  for k, v in P.expect.items()}
        data["expectations"] = checks
        if not all(c["ok"] for c in checks.values()):
            status = 1
    if pred.maximal_class:
        try:
            data["fundamental_subgroup"] = fundamental_subgroup(G, args.enum_threshold).to_dict()
        except ValueError as exc:
            data["fundamental_subgroup"] = {"error": str(exc)}
    lines = [f"group {G.name or '?'}: order {pred.order}, class {pred.nilpotency_class}, "
             f"coclass {pred.coclass}, exponent {pred.exponent}"]
    for key in ("powerful", "potent", "maximal_class", "gamma_p_in_p2", "gamma_p1_in_Gp", "regular_status"):
        lines.append(f"  {key}: {getattr(pred, key)}")
    lines.append(f"  lower central orders: {lcs.orders()}  layers: {', '.join(map(str, lcs.layers))}")
    lines.append(f"  upper central orders: {ucs.orders()}")
    for k, c in data.get("expectations", {}).items():
        lines.append(f"  expect {k}={c['expected']}: computed {c['computed']} "
                     f"{'ok' if c['ok'] else 'MISMATCH'}")
    _emit(args, data, "\n".join(lines))
    return status


def cmd_nq(args):
    P = _fp(args.file)
    r = nilpotent_quotient(P, args.klass)
    data = r.to_dict()
    text = [f"achieved class {r.achieved_class}, order {r.quotient.order() or 'infinite'}",
            "layers: " + ", ".join(str(inv) for inv in r.layer_invariants),
            r.quotient.to_text().rstrip()]
    _emit(args, data, "\n".join(text))
    return 0


def cmd_verify_identities(args):
    names = args.identities or IDENTITY_SUITE
    results = []
    failed = False
    for name in names:
        ident = IdentityId.parse(name)
        trials = args.trials if args.trials is not None else (200 if ident.kind.value == "lemma2.3i" else 100)
        rep = identity_check(ident, None, trials, args.seed)
        failed |= rep.conclusion == FAIL
        results.append(rep.to_dict())
    degrees = finite_difference_degrees()
    failed |= not all(degrees.values())
    data = {"identities": results, "finite_differences": all(degrees.values())}
    text = "\n".join(f"{r['claim']}: {r['conclusion']} ({r['computed']['instances']} instances)"
                     for r in results)
    text += f"\nfinite-difference degrees: {'pass' if all(degrees.values()) else 'fail'}"
    _emit(args, data, text)
    return 1 if failed else 0


def cmd_check(args):
    P, G = load_group(args.file)
    G = _group(args, P, G)
    t = args.enum_threshold
    if args.lemma == "mann":
        reps = [mann_check(G, args.policy, args.samples, args.seed)]
    elif args.lemma == "hall":
        reps = []
        for label, (N, M) in hall_pairs(G, t).items():
            rep = hall_inclusion_check(G, N, M, t)
            rep.claim = f"hall{label}"
            reps.append(rep)
    elif args.lemma == "lemma1.1":
        reps = [lemma11_hypotheses(G, t)]
    else:
        reps = [lemma_l2_check(G, args.samples, args.seed, t)]
    data = [r.to_dict() for r in reps]
    text = "\n".join(f"{r.claim}: {r.conclusion}" + "".join(f"\n  {h.name}: {h.holds}" for h in r.hypotheses)
                     + (f"\n  witnesses: {r.witnesses}" if r.witnesses else "") for r in reps)
    _emit(args, data, text)
    return 1 if any(r.conclusion == FAIL for r in reps) else 0


def cmd_multiplier(args):
    P, G = load_group(args.file)
    data = {}
    if args.method in ("miller", "both"):
        data["miller"] = str(miller_cover(_fp(args.file), class_cap=args.class_cap).multiplier)
    if args.method in ("bar", "both"):
        G = _group(args, P, G)
        data["bar"] = str(bar_h2_oracle(G, args.bar_cap))
    status = 0
    if args.method == "both":
        data["agree"] = data["miller"] == data["bar"]
        status = 0 if data["agree"] else 1
    _emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    return status


def cmd_exterior(args):
    P = _fp(args.file)
    cv = miller_cover(P, class_cap=args.class_cap)
    data = cv.to_dict()
    text = (f"|G^G| = {cv.wedge_order}, exp(G^G) = {cv.wedge_exponent}, M(G) = {cv.multiplier}, "
            f"|G'| = {cv.gprime_order}")
    _emit(args, data, text)
    return 0


def cmd_verdict(args):
    P = _fp(args.file)
    v = exponent_divisibility_verdict(P, args.claim, threshold=args.enum_threshold, class_cap=args.class_cap)
    data = v.to_dict()
    text = (f"{v.claim}: {v.conclusion}  exp(G) = {v.exp_G}, exp(G^G) = {v.exp_wedge}, "
            f"exp(M) = {v.exp_M}, divides = {v.divides}")
    text += "".join(f"\n  {h.name}: {h.holds}" for h in v.hypotheses)
    _emit(args, data, text)
    return 1 if v.conclusion == FAIL else 0


def cmd_corpus(args):
    fmt = "json" if args.json else args.format
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    opts = RunOptions(seed=args.seed, threshold=args.enum_threshold, class_cap=args.class_cap,
                      samples=args.samples)
    report = run_corpus(args.dir, args.filter or (), args.seed, opts, args.jobs)
    out = emit_report(report, fmt)
    if args.output:
        Path(args.output).write_bytes(out)
    else:
        sys.stdout.write(out.decode())
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_oracle(args):
    P, G = load_group(args.file)
    G = _group(args, P, G)
    inv = bar_h2_oracle(G, args.bar_cap)
    _emit(args, inv.to_dict(), f"H_2 = {inv}")
    return 0


# ----------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a flag given before it
    quiet = argparse.SUPPRESS
    common.add_argument("--seed", type=int, default=quiet)
    common.add_argument("--json", action="store_true", default=quiet)
    common.add_argument("--enum-threshold", type=int, default=quiet)
    common.add_argument("--bar-cap", type=int, default=quiet)
    common.add_argument("--class-cap", type=int, default=quiet)
    common.add_argument("--config", default=quiet, help="file of 'key = value' defaults")

    parser = argparse.ArgumentParser(prog="schurkit", parents=[common],
                                     description="Power structure and Schur multipliers of finite p-groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("parse", cmd_parse, "parse and print a presentation")
    p.add_argument("file")
    p = add("analyze", cmd_analyze, "central series, exponent and predicates")
    p.add_argument("file")
    p = add("nq", cmd_nq, "nilpotent quotient")
    p.add_argument("--class", dest="klass", type=int, required=True)
    p.add_argument("file")
    p = add("verify-identities", cmd_verify_identities, "Magnus-embedding identity checks")
    p.add_argument("identities", nargs="*", help="e.g. eq1.1 multilinear:3 class5:7 (default: full suite)")
    p.add_argument("--trials", type=int, default=None)
    p = add("check", cmd_check, "lemma checkers")
    p.add_argument("lemma", choices=["mann", "hall", "lemma1.1", "lemma2.4"])
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--policy", choices=["exhaustive", "sampled"], default="exhaustive")
    p = add("multiplier", cmd_multiplier, "Schur multiplier")
    p.add_argument("file")
    p.add_argument("--method", choices=["miller", "bar", "both"], default="miller")
    p = add("exterior", cmd_exterior, "nonabelian exterior square")
    p.add_argument("file")
    p = add("verdict", cmd_verdict, "exponent divisibility verdict")
    p.add_argument("file")
    p.add_argument("--claim", choices=CLAIMS, required=True)
    corpus = sub.add_parser("corpus", help="corpus operations")
    csub = corpus.add_subparsers(dest="corpus_command", required=True)
    p = csub.add_parser("run", parents=[common], help="run every check over a corpus directory")
    p.set_defaults(func=cmd_corpus)
    p.add_argument("dir", nargs="?", default=None)
    p.add_argument("--format", default="markdown")
    p.add_argument("--filter", action="append")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output")
    oracle = sub.add_parser("oracle", help="independent oracles")
    osub = oracle.add_subparsers(dest="oracle_command", required=True)
    p = osub.add_parser("h2", parents=[common], help="H_2 from the normalized bar complex")
    p.set_defaults(func=cmd_oracle)
    p.add_argument("file")
    return parser


def resolve_settings(args):
    settings = dict(GLOBAL_DEFAULTS)
    if getattr(args, "config", None):
        settings.update(read_config(args.config))
    for key in GLOBAL_DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    for key, val in settings.items():
        setattr(args, key, val)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = resolve_settings(parser.parse_args(argv))
    try:
        return args.func(args)
    except (PresentationError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
