"""Batch verification over a directory of presentations."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .homology import CLAIMS, exponent_divisibility_verdict, miller_cover
from .pc import is_consistent, parse_pc_presentation
from .presentation import iter_directives, parse_presentation
from .reports import FAIL, PASS, VerdictReport
from .structure import (DEFAULT_ENUM_THRESHOLD, classify, hall_inclusion_check, hall_pairs,
                        lemma11_hypotheses, lemma_l2_check, mann_check)

FORMATS = ("markdown", "json")


def task_seed(master: int, task: str) -> int:
    """Per-task seed derived by stable hashing, independent of execution order."""
    digest = hashlib.sha256(f"{master}:{task}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


def load_group(path):
    """``(FinitePresentation or None, pc-group or None)`` from either text format."""
    text = Path(path).read_text(encoding="utf-8")
    first = next(iter_directives(text), None)
    if first is not None and first[0] == "pcgroup":
        return None, parse_pc_presentation(text)
    return parse_presentation(text), None


def as_finite_presentation(path):
    """A finite presentation for a file in either format; pc-input must be consistent."""
    P, G = load_group(path)
    if P is not None:
        return P
    report = is_consistent(G)
    if not report:
        raise ValueError(f"inconsistent pc-presentation: overlap {report.witness} fails")
    return G.to_finite_presentation()


def default_corpus_dir() -> Path:
    return Path(str(resources.files("schurkit") / "corpus"))


@dataclass
class RunOptions:
    seed: int = 0
    threshold: int = DEFAULT_ENUM_THRESHOLD
    class_cap: int = 12
    samples: int = 100
    mann_exhaustive_max: int = 3 ** 5


@dataclass
class RunReport:
    entries: list = field(default_factory=list)
    seed: int = 0
    version: str = __version__
    warnings: list = field(default_factory=list)

    @property
    def totals(self):
        counts = {"entries": len(self.entries), "errors": 0, "pass": 0, "fail": 0, "not-applicable": 0}
        for e in self.entries:
            if e.get("error"):
                counts["errors"] += 1
                continue
            for c in e["claims"]:
                counts[c["conclusion"]] += 1
        return counts

    @property
    def ok(self):
        t = self.totals
        return t["fail"] == 0 and t["errors"] == 0

    def to_dict(self):
        return {"version": self.version, "seed": self.seed, "totals": self.totals,
                "warnings": self.warnings, "entries": self.entries}


def _claim(rep: VerdictReport, claim_id=None):
    d = rep.to_dict()
    return {"id": claim_id or rep.claim, "hypotheses": d["hypotheses"], "conclusion": d["conclusion"],
            "witnesses": d["witnesses"], "computed": d["computed"]}


def _expectations(P, pred):
    computed = {"order": pred.order, "class": pred.nilpotency_class, "exponent": pred.exponent}
    rep = VerdictReport("expect")
    for key, val in sorted(P.expect.items()):
        got = computed.get(key)
        ok = got is not None and str(got) == str(val)
        rep.computed[key] = {"expected": val, "computed": got, "provenance": "computed"}
        if not ok:
            rep.fail({key: {"expected": val, "computed": got}})
    return rep


def analyze_entry(path, opts: RunOptions) -> dict:
    """All checks for one presentation file; errors are captured in the entry."""
    path = Path(path)
    entry = {"entry": path.name, "claims": [], "timings": {}}
    clock = time.perf_counter()

    def lap(label):
        nonlocal clock
        now = time.perf_counter()
        entry["timings"][label] = round(now - clock, 4)
        clock = now

    try:
        P = as_finite_presentation(path)
        entry["entry"] = P.name or path.stem
        cover = miller_cover(P, class_cap=opts.class_cap)
        G = cover.group.quotient
        consistent = is_consistent(G)
        if not consistent:
            raise ValueError(f"quotient presentation is inconsistent at {consistent.witness}")
        lap("cover")
        pred = classify(G, opts.threshold, samples=20, seed=task_seed(opts.seed, f"{path.name}:regular"))
        entry.update({"order": pred.order, "class": pred.nilpotency_class, "exponent": pred.exponent,
                      "predicates": pred.to_dict(), "multiplier": cover.multiplier.to_dict(),
                      "wedge": {"order": cover.wedge_order, "exponent": cover.wedge_exponent}})
        lap("classify")
        claims = entry["claims"]
        if P.expect:
            claims.append(_claim(_expectations(P, pred)))
        if pred.order <= opts.mann_exhaustive_max:
            claims.append(_claim(mann_check(G)))
        else:
            claims.append(_claim(mann_check(G, "sampled", opts.samples,
                                            task_seed(opts.seed, f"{path.name}:mann"))))
        for label, (N, M) in hall_pairs(G, opts.threshold).items():
            claims.append(_claim(hall_inclusion_check(G, N, M, opts.threshold), f"hall{label}"))
        claims.append(_claim(lemma11_hypotheses(G, opts.threshold), "lemma1.1-hypotheses"))
        claims.append(_claim(lemma_l2_check(G, opts.samples, task_seed(opts.seed, f"{path.name}:l2"),
                                            opts.threshold)))
        lap("lemmas")
        for claim in CLAIMS:
            v = exponent_divisibility_verdict(P, claim, cover=cover, threshold=opts.threshold)
            d = _claim(v, f"verdict:{claim}")
            d["divides"] = v.divides
            claims.append(d)
        lap("verdicts")
    except Exception as exc:  # one bad entry must not abort the run
        entry["error"] = f"{type(exc).__name__}: {exc}"
    return entry


def _run_one(args):
    return analyze_entry(*args)


def run_corpus(directory=None, filters=(), seed: int = 0, opts: RunOptions | None = None,
               jobs: int = 1) -> RunReport:
    opts = opts or RunOptions(seed=seed)
    opts.seed = seed
    directory = Path(directory) if directory is not None else default_corpus_dir()
    files = sorted(directory.glob("*.txt"))
    if filters:
        files = [f for f in files if any(s in f.name for s in filters)]
    report = RunReport(seed=seed)
    if not files:
        report.warnings.append(f"no presentation files in {directory}")
        return report
    tasks = [(f, opts) for f in files]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            report.entries = list(pool.map(_run_one, tasks))
    else:
        report.entries = [_run_one(t) for t in tasks]
    return report


def _entry_status(e):
    if e.get("error"):
        return "error"
    if any(c["conclusion"] == FAIL for c in e["claims"]):
        return "fail"
    return PASS


def emit_report(report: RunReport, fmt: str = "markdown") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n").encode()
    if fmt != "markdown":
        raise ValueError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")
    lines = [f"# corpus run (seed {report.seed}, version {report.version})", "",
             "| entry | order | class | exponent | M(G) | exp(G^G) | pass | n/a | fail | status |",
             "|---|---|---|---|---|---|---|---|---|---|"]
    for e in report.entries:
        if e.get("error"):
            lines.append(f"| {e['entry']} | | | | | | | | | error: {e['error']} |")
            continue
        counts = {k: sum(c["conclusion"] == k for c in e["claims"]) for k in ("pass", "not-applicable", "fail")}
        mult = e["multiplier"]["torsion"]
        lines.append(f"| {e['entry']} | {e['order']} | {e['class']} | {e['exponent']} | "
                     f"({', '.join(map(str, mult))}) | {e['wedge']['exponent']} | {counts['pass']} | "
                     f"{counts['not-applicable']} | {counts['fail']} | {_entry_status(e)} |")
    t = report.totals
    lines += ["", f"totals: {t['entries']} entries, {t['pass']} pass, {t['not-applicable']} not-applicable, "
                  f"{t['fail']} fail, {t['errors']} errors"]
    lines += [f"warning: {w}" for w in report.warnings]
    return ("\n".join(lines) + "\n").encode()
