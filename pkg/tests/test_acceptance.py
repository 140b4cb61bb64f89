"""Acceptance criteria, one test each; every test prints a single pass/fail line."""

import random
import time

import pytest

from schurkit.homology import bar_h2_oracle, exponent_divisibility_verdict, miller_cover
from schurkit.lattice import matmul, smith_normal_form
from schurkit.magnus import IdentityKind, finite_difference_degrees, identity_sweep, witt_rank
from schurkit.nq import nilpotent_quotient
from schurkit.pc import is_consistent
from schurkit.presentation import parse_presentation
from schurkit.reports import NOT_APPLICABLE, PASS
from schurkit.structure import (group_exponent, hall_inclusion_check, hall_pairs, lemma11_hypotheses,
                                lemma_l2_check, mann_check, nilpotency_class, subgroup_exponent,
                                verbal_power_subgroup)

from conftest import ALL, cover, group, presentation


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
        assert ok, detail
    return emit


def test_identity_suite(report):
    start = time.perf_counter()
    reps = []
    reps += identity_sweep(IdentityKind.EQ_1_1, [None])
    reps += identity_sweep(IdentityKind.EQ_1_2, [None])
    reps += identity_sweep(IdentityKind.MULTILINEAR, [2, 3, 4])
    ns = list(range(13))
    reps += identity_sweep(IdentityKind.CLASS5_EXPANSION, ns)
    reps += identity_sweep(IdentityKind.L1_I, ns, trials=200, seed=2024)
    reps += identity_sweep(IdentityKind.L1_II, ns)
    degrees = finite_difference_degrees()
    elapsed = time.perf_counter() - start
    failures = [r.claim for r in reps if r.conclusion != PASS]
    instances = sum(r.computed["instances"] for r in reps)
    ok = not failures and all(degrees.values()) and elapsed < 10
    report(1, "Magnus identity suite", ok,
           f"{len(reps)} identities, {instances} instances, failures {failures}, "
           f"finite differences {'ok' if all(degrees.values()) else 'bad'}, {elapsed:.1f}s")


def test_witt_oracle(report):
    start = time.perf_counter()
    got = {}
    for k in (2, 3):
        P = parse_presentation("generators " + " ".join("abc"[:k]) + "\n")
        got[k] = tuple(nilpotent_quotient(P, 5).layer_ranks)
    elapsed = time.perf_counter() - start
    witt = {k: tuple(witt_rank(k, c) for c in range(1, 6)) for k in (2, 3)}
    ok = got == witt and got[2] == (2, 1, 2, 3, 6) and got[3] == (3, 3, 8, 18, 48) and elapsed < 60
    report(2, "free nilpotent layer ranks", ok, f"rank 2 {got[2]}, rank 3 {got[3]}, {elapsed:.1f}s")


def test_oracle_agreement(report):
    expected = {"c27": (), "c9xc3": (3,), "c3cubed": (3, 3, 3), "heisenberg27": (3, 3), "m27": ()}
    small = [s for s in ALL if group(s).order() <= 27]
    details, ok = [], True
    for stem in small:
        start = time.perf_counter()
        miller = miller_cover(presentation(stem)).multiplier.torsion
        bar = bar_h2_oracle(group(stem)).torsion
        elapsed = time.perf_counter() - start
        good = miller == bar and expected.get(stem, miller) == miller and elapsed < 300
        ok &= good
        details.append(f"{stem} {miller}/{bar} {elapsed:.1f}s")
    ok &= set(expected) <= set(small)
    report(3, "Miller multiplier vs bar H_2", ok, "; ".join(details))


def test_exponent_theorems(report):
    stems = ["heisenberg27", "m27", "c3cubed", "c9xc3", "b23_quotient", "c3wrc3", "c9wrc3"]
    start = time.perf_counter()
    wr = miller_cover(presentation("c9wrc3"))
    wr_verdicts = [exponent_divisibility_verdict(presentation("c9wrc3"), c, cover=wr).divides
                   for c in ("thm2.5", "cor2.6")]
    wreath_time = time.perf_counter() - start
    bad, counts = [], {PASS: 0, NOT_APPLICABLE: 0}
    for stem in stems:
        for claim in ("thm2.5", "cor2.6", "maximal-class"):
            v = exponent_divisibility_verdict(presentation(stem), claim, cover=cover(stem))
            must_apply = claim != "maximal-class"
            if not v.divides or (must_apply and v.conclusion != PASS) or v.conclusion not in counts:
                bad.append((stem, claim, v.conclusion))
            else:
                counts[v.conclusion] += 1
    # the cover is run with class bound 6 and must stabilize at or below it
    shape = (wr.group.quotient.order(), wr.group.achieved_class, wr.cover.achieved_class)
    ok = (not bad and all(wr_verdicts) and shape[:2] == (3 ** 7, 5) and shape[2] <= 6
          and wreath_time < 600)
    report(4, "exponent divisibility verdicts", ok,
           f"{counts[PASS]} pass, {counts[NOT_APPLICABLE]} not-applicable, bad {bad}; "
           f"C9wrC3 order/class/cover class {shape} in {wreath_time:.1f}s")


def test_lemma_exp_g3(report):
    start = time.perf_counter()
    G = group("c9wrc3")
    exp = group_exponent(G)
    exp3 = subgroup_exponent(verbal_power_subgroup(G, 1))
    rep = lemma_l2_check(G, samples=100, seed=7)
    elapsed = time.perf_counter() - start
    ok = exp == 27 and exp3 == 9 and rep.conclusion == PASS and rep.samples >= 100 and elapsed < 120
    report(5, "exp(G^3) on C9wrC3", ok,
           f"exp(G) = {exp}, exp(G^3) = {exp3}, trace {rep.conclusion} on {rep.samples} triples, {elapsed:.1f}s")


def test_lemma11_gate(report):
    details, ok = [], True
    for stem in ("c3wrc3", "c9wrc3"):
        rep = lemma11_hypotheses(group(stem))
        v = exponent_divisibility_verdict(presentation(stem), "lemma1.1", cover=cover(stem))
        holds = [h.holds for h in rep.hypotheses]
        ok &= all(holds) and len(holds) == 3 and v.conclusion == PASS
        details.append(f"{stem} hypotheses {holds} verdict {v.conclusion}")
    report(6, "lemma1.1 gate and verdict", ok, "; ".join(details))


def test_mann(report):
    details, ok, seen = [], True, set()
    for stem in ALL:
        G = group(stem)
        cls = nilpotency_class(G)
        rep = mann_check(G, "exhaustive", ns=(1, 2))
        want = PASS if cls <= 3 else NOT_APPLICABLE
        ok &= rep.conclusion == want
        seen.add(cls)
        details.append(f"{stem}:{rep.conclusion}")
    ok &= 5 in seen
    report(7, "Mann commutator-power equivalence", ok, ", ".join(details))


def test_hall(report):
    details, ok = [], True
    for stem in ALL:
        G = group(stem)
        results = [hall_inclusion_check(G, N, M).conclusion for N, M in hall_pairs(G).values()]
        ok &= len(results) == 3 and all(r == PASS for r in results)
        details.append(f"{stem}:{'/'.join(results)}")
    report(8, "Hall inclusion for three pairs", ok, ", ".join(details))


def test_infrastructure(report):
    start = time.perf_counter()
    bad = []
    for stem in ALL:
        G = group(stem)
        if not is_consistent(G):
            bad.append((stem, "consistency"))
        rng = random.Random(stem)
        for _ in range(1000):
            x, y, z = (G.random_element(rng) for _ in range(3))
            if G.mul(G.mul(x, y), z) != G.mul(x, G.mul(y, z)):
                bad.append((stem, x, y, z))
                break
    rng = random.Random(99)
    snf_bad = 0
    for _ in range(1000):
        m, n = rng.randint(1, 20), rng.randint(1, 20)
        A = [[rng.randint(-100, 100) for _ in range(n)] for _ in range(m)]
        sf = smith_normal_form(A)
        d = [x for x in sf.diagonal if x]
        diag_ok = all(sf.D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
        chain_ok = all(b % a == 0 for a, b in zip(d, d[1:])) and all(x >= 0 for x in sf.diagonal)
        if matmul(matmul(sf.P, A), sf.Q) != sf.D or not diag_ok or not chain_ok:
            snf_bad += 1
    elapsed = time.perf_counter() - start
    ok = not bad and snf_bad == 0
    report(9, "pc consistency, associativity, SNF", ok,
           f"{len(ALL)} corpus groups x 1000 triples, bad {bad}; 1000 random SNFs, bad {snf_bad}; {elapsed:.1f}s")
