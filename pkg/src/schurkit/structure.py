"""Power structure of finite p-groups given by pc-presentations.

Central series, verbal power subgroups ``G^{p^k}``, exponents, the
powerful/potent/maximal-class predicates, the fundamental subgroup of a
group of maximal class, and the checkers for Mann's lemma, Hall's inclusion
``[N^p, M] <= [N, M]^p [M, _p N]`` and the power-structure lemmas.

Centralizer-type subgroups are computed either by enumeration (small
groups) or as kernels of commutator maps into a central section, which are
homomorphisms and therefore reduce to integer linear algebra.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field

from .lattice import AbelianInvariants, abelian_invariants, solve_integer_system
from .pc import PcError, PcPresentation
from .reports import FAIL, NOT_APPLICABLE, PASS, Hypothesis, VerdictReport
from .subgroups import (PcSubgroup, Quotient, commutator_subgroup, derived_subgroup, join,
                        trivial_subgroup, whole_group)

DEFAULT_ENUM_THRESHOLD = 3 ** 8


class UncertifiedError(PcError):
    """A result could not be certified within the enumeration threshold."""


def _memo(G, key, fn):
    cache = G.__dict__.setdefault("_analysis_cache", {})
    if key not in cache:
        cache[key] = fn()
    return cache[key]


def _ilog(p, n):
    k = 0
    while n % p == 0 and n > 1:
        n //= p
        k += 1
    if n != 1:
        raise ValueError(f"{n * p ** k} is not a power of {p}")
    return k


# ----------------------------------------------------------------------
# sections and series

def abelian_subgroup_invariants(S: PcSubgroup) -> AbelianInvariants:
    """Invariants of an abelian subgroup from its induced generating sequence."""
    gens = S.gens
    rel = S.relative_orders()
    rows = []
    for i, h in enumerate(gens):
        if rel[i] is None:
            continue
        row = [-c for c in S.coordinates(S.pcp.pow(h, rel[i]))]
        row[i] += rel[i]
        rows.append(row)
    return abelian_invariants(rows, len(gens))


def section_invariants(G: PcPresentation, upper: PcSubgroup, lower: PcSubgroup) -> AbelianInvariants:
    """Invariants of ``upper/lower`` (assumed abelian, ``lower`` normal)."""
    Qt = Quotient(G, lower, check_normal=False)
    image = PcSubgroup(Qt.pcp, [Qt.project(h) for h in upper.gens])
    return abelian_subgroup_invariants(image)


@dataclass
class SeriesChain:
    kind: str
    terms: list
    layers: list

    @property
    def length(self):
        return len(self.terms) - 1

    def term(self, i):
        """``i``-th term counted from 1 for descending series (trivial past the end)."""
        if self.kind == "upper-central":
            return self.terms[min(i, len(self.terms) - 1)]
        if i - 1 < len(self.terms):
            return self.terms[i - 1]
        return trivial_subgroup(self.terms[0].pcp)

    def orders(self):
        return [H.order() for H in self.terms]

    def to_dict(self):
        return {"kind": self.kind, "orders": self.orders(),
                "layers": [inv.to_dict() for inv in self.layers]}


def lower_central_series(G: PcPresentation) -> SeriesChain:
    def build():
        Gs = whole_group(G)
        terms = [Gs]
        while not terms[-1].is_trivial():
            nxt = commutator_subgroup(terms[-1], Gs)
            if nxt == terms[-1]:
                raise PcError("group is not nilpotent")
            terms.append(nxt)
        layers = [section_invariants(G, a, b) for a, b in zip(terms, terms[1:])]
        return SeriesChain("lower-central", terms, layers)
    return _memo(G, "lcs", build)


def nilpotency_class(G: PcPresentation) -> int:
    return lower_central_series(G).length


def gamma(G: PcPresentation, i: int) -> PcSubgroup:
    return lower_central_series(G).term(i)


def commutator_kernel(G, S: PcSubgroup, elems, upper: PcSubgroup, lower: PcSubgroup) -> PcSubgroup:
    """``{x in S : [x, e] in lower for all e in elems}``.

    Requires ``[S, elems] <= upper`` with ``upper/lower`` central in
    ``G/lower``, so that ``x -> ([x, e] lower)_e`` is a homomorphism on ``S``.
    """
    Qt = Quotient(G, lower, check_normal=False)
    A = PcSubgroup(Qt.pcp, [Qt.project(u) for u in upper.gens])
    a = len(A.gens)
    hs = S.gens
    if not hs or not elems or a == 0:
        return PcSubgroup(G, hs)
    rel_rows = []
    for i, (h, r) in enumerate(zip(A.gens, A.relative_orders())):
        if r is not None:
            row = [-c for c in A.coordinates(A.pcp.pow(h, r))]
            row[i] += r
            rel_rows.append(row)
    images = []
    for h in hs:
        vec = []
        for e in elems:
            vec.extend(A.coordinates(Qt.project(G.comm(h, e))))
        images.append(vec)
    k = len(elems)
    # unknowns: exponents of the generators of S, then slack multiples of the relations
    eqs = []
    for blk in range(k):
        for col in range(a):
            row = [images[i][blk * a + col] for i in range(len(hs))]
            slack = [0] * (k * len(rel_rows))
            for r, rr in enumerate(rel_rows):
                slack[blk * len(rel_rows) + r] = -rr[col]
            eqs.append(row + slack)
    sol = solve_integer_system(eqs, [0] * len(eqs))
    gens = [S.element(b[: len(hs)]) for b in sol.homogeneous] if sol else []
    gens += derived_subgroup(S).gens
    return PcSubgroup(G, gens)


def center(G: PcPresentation, threshold: int = DEFAULT_ENUM_THRESHOLD, method: str = "auto") -> PcSubgroup:
    """Centre by enumeration (small groups) or by kernels down the lower central series."""
    if method == "auto":
        method = "enumerate" if G.is_finite and G.order() <= threshold else "linear"
    gens = G.gens()
    if method == "enumerate":
        ident = G.identity()
        return PcSubgroup(G, [x for x in G.elements() if all(G.comm(x, g) == ident for g in gens)])
    lcs = lower_central_series(G)
    S = whole_group(G)
    for w in range(2, lcs.length + 1):
        S = commutator_kernel(G, S, gens, lcs.term(w), lcs.term(w + 1))
    return S


def upper_central_series(G: PcPresentation, threshold: int = DEFAULT_ENUM_THRESHOLD,
                         method: str = "auto") -> SeriesChain:
    def build():
        terms = [trivial_subgroup(G)]
        full = G.order()
        while terms[-1].order() != full:
            Z = terms[-1]
            Qt = Quotient(G, Z, check_normal=False)
            C = center(Qt.pcp, threshold, method)
            if C.is_trivial():
                raise PcError("group is not nilpotent")
            terms.append(PcSubgroup(G, [Qt.lift(c) for c in C.gens] + Z.gens))
        layers = [section_invariants(G, b, a) for a, b in zip(terms, terms[1:])]
        return SeriesChain("upper-central", terms, layers)
    return _memo(G, ("ucs", method), build)


# ----------------------------------------------------------------------
# verbal subgroups and exponents

def verbal_power_subgroup(G: PcPresentation, k: int, threshold: int = DEFAULT_ENUM_THRESHOLD) -> PcSubgroup:
    """``G^{p^k}``, certified by enumerating ``G/G^{p^k}``."""
    def build():
        q = G.prime ** k
        N = PcSubgroup(G, [G.pow(g, q) for g in G.gens()], normal=True)
        while True:
            Qt = Quotient(G, N, check_normal=False)
            size = Qt.pcp.order()
            if size is None or size > threshold:
                raise UncertifiedError(
                    f"G/G^{q} has order {size}, above the enumeration threshold {threshold}")
            changed = False
            for x in Qt.pcp.elements():
                if any(Qt.pcp.pow(x, q)):
                    z = G.pow(Qt.lift(x), q)
                    if z not in N:
                        N.add(z, normal=True)
                        changed = True
            if not changed:
                return N
    return _memo(G, ("verbal", k, threshold), build)


def subgroup_group(H: PcSubgroup):
    """``H`` as a pc-group, with the map from its exponent vectors back into the parent."""
    P = getattr(H, "_as_group", None)
    if P is None:
        P = H._as_group = H.presentation()
    return P, H.element


def power_subgroup(H: PcSubgroup, k: int = 1, threshold: int = DEFAULT_ENUM_THRESHOLD) -> PcSubgroup:
    """The verbal subgroup ``H^{p^k}`` of a subgroup, as a subgroup of the parent group."""
    G = H.pcp
    if H.order() == G.order():
        return verbal_power_subgroup(G, k, threshold)
    P, embed = subgroup_group(H)
    V = verbal_power_subgroup(P, k, threshold)
    return PcSubgroup(G, [embed(v) for v in V.gens])


def group_exponent(G: PcPresentation, threshold: int = DEFAULT_ENUM_THRESHOLD, method: str = "auto") -> int:
    """Exponent via maximal element order (small groups) or the verbal chain."""
    if not G.is_finite:
        raise PcError("exponent of an infinite group")
    if method == "auto":
        method = "orders" if G.order() <= threshold else "verbal"
    if method == "orders":
        return _memo(G, "exp", lambda: max((G.element_order(x) for x in G.elements()), default=1))
    k = 0
    while not verbal_power_subgroup(G, k, threshold).is_trivial():
        k += 1
    return G.prime ** k


def subgroup_exponent(H: PcSubgroup, threshold: int = DEFAULT_ENUM_THRESHOLD) -> int:
    if H.order() <= threshold:
        return max((H.pcp.element_order(x) for x in H.elements()), default=1)
    return group_exponent(subgroup_group(H)[0], threshold)


def is_powerful(H: PcSubgroup, threshold: int = DEFAULT_ENUM_THRESHOLD) -> bool:
    """``[H, H] <= H^p`` (odd ``p``)."""
    return derived_subgroup(H) <= power_subgroup(H, 1, threshold)


# ----------------------------------------------------------------------
# classification

def _require_odd(G):
    if G.prime == 2:
        raise ValueError("prime 2 is not supported: only odd primes are handled")


def is_regular_pair(G, x, y, threshold=DEFAULT_ENUM_THRESHOLD) -> bool:
    """``(xy)^p = x^p y^p`` modulo ``(<x, y>')^p``."""
    p = G.prime
    d = G.mul(G.inv(G.pow(G.mul(x, y), p)), G.mul(G.pow(x, p), G.pow(y, p)))
    if not any(d):
        return True
    H = PcSubgroup(G, [x, y])
    D = derived_subgroup(H)
    if D.is_trivial():
        return False
    return d in power_subgroup(D, 1, threshold)


def regularity_status(G, threshold=DEFAULT_ENUM_THRESHOLD, samples=20, seed=0):
    """``("holds-exhaustive" | "holds-sampled" | "fails", witness)``."""
    order = G.order()
    if order * order <= threshold:
        pairs = itertools.product(list(G.elements()), repeat=2)
        label = "holds-exhaustive"
    else:
        rng = random.Random(seed)
        pairs = [(G.random_element(rng), G.random_element(rng)) for _ in range(samples)]
        label = "holds-sampled"
    for x, y in pairs:
        if not is_regular_pair(G, x, y, threshold):
            return "fails", (x, y)
    return label, None


@dataclass
class PredicateReport:
    order: int
    nilpotency_class: int
    coclass: int
    exponent: int
    powerful: bool
    potent: bool
    maximal_class: bool
    gamma_p_in_p2: bool
    gamma_p1_in_Gp: bool
    regular_status: str = "skipped"
    regular_witness: tuple | None = None
    series_orders: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def classify(G: PcPresentation, threshold: int = DEFAULT_ENUM_THRESHOLD, regularity: str = "auto",
             samples: int = 20, seed: int = 0) -> PredicateReport:
    """Power-structure predicates of a finite p-group (odd ``p``)."""
    _require_odd(G)
    p = G.prime
    order = G.order()
    lcs = lower_central_series(G)
    cls = lcs.length
    coclass = _ilog(p, order) - cls
    Gp = verbal_power_subgroup(G, 1, threshold)
    Gp2 = verbal_power_subgroup(G, 2, threshold)
    status, witness = "skipped", None
    if regularity != "skip":
        status, witness = regularity_status(G, threshold, samples, seed)
    ucs = upper_central_series(G, threshold)
    return PredicateReport(
        order=order,
        nilpotency_class=cls,
        coclass=coclass,
        exponent=group_exponent(G, threshold),
        powerful=lcs.term(2) <= Gp,
        potent=lcs.term(p - 1) <= Gp,
        maximal_class=coclass == 1,
        gamma_p_in_p2=lcs.term(p) <= Gp2,
        gamma_p1_in_Gp=lcs.term(p + 1) <= Gp,
        regular_status=status,
        regular_witness=witness,
        series_orders={"lower_central": lcs.orders(), "upper_central": ucs.orders(),
                       "G^p": Gp.order(), "G^p^2": Gp2.order()},
    )


@dataclass
class FundamentalReport:
    subgroup: PcSubgroup
    index: int
    index_is_p: bool
    identity_status: str
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"order": self.subgroup.order(), "index": self.index, "index_is_p": self.index_is_p,
                "identity_status": self.identity_status, "details": self.details}


def fundamental_subgroup(G: PcPresentation, threshold: int = DEFAULT_ENUM_THRESHOLD,
                         method: str = "auto", samples: int = 20, seed: int = 0) -> FundamentalReport:
    """``G_1 = C_G(gamma_2/gamma_4)`` for a group of maximal class."""
    _require_odd(G)
    p = G.prime
    order = G.order()
    lcs = lower_central_series(G)
    if _ilog(p, order) - lcs.length != 1:
        raise ValueError(f"group is not of maximal class (coclass {_ilog(p, order) - lcs.length})")
    g2, g3, g4 = lcs.term(2), lcs.term(3), lcs.term(4)
    if method == "auto":
        method = "enumerate" if order <= threshold else "linear"
    if method == "enumerate":
        keep = [x for x in G.elements() if all(G.comm(x, s) in g4 for s in g2.gens)]
        G1 = PcSubgroup(G, keep)
    else:
        G1 = commutator_kernel(G, whole_group(G), g2.gens, g3, g4)
    index = order // G1.order()
    details = {"order": G1.order()}
    if order < p ** (p + 2):
        status = NOT_APPLICABLE
    else:
        Gp = verbal_power_subgroup(G, 1, threshold)
        G1p = power_subgroup(G1, 1, threshold)
        gp = lcs.term(p)
        equal = gp == G1p == Gp
        reg, wit = regularity_status(subgroup_group(G1)[0], threshold, samples, seed)
        details.update({"gamma_p": gp.order(), "G1^p": G1p.order(), "G^p": Gp.order(),
                        "G1_regular": reg, "G1_regular_witness": wit})
        status = PASS if equal and reg != "fails" else FAIL
    return FundamentalReport(G1, index, index == p, status, details)


# ----------------------------------------------------------------------
# lemma checkers

def mann_check(G: PcPresentation, policy: str = "exhaustive", samples: int = 1000, seed: int = 0,
               ns=(1, 2)) -> VerdictReport:
    """For class ``<= p``: ``[x, y^q] = 1``, ``[x, y]^q = 1`` and ``[x^q, y] = 1`` agree, ``q = p^n``."""
    p = G.prime
    cls = nilpotency_class(G)
    rep = VerdictReport("lemma2.2", seed=seed if policy == "sampled" else None)
    rep.hypotheses.append(Hypothesis("class <= p", cls <= p, {"class": cls, "p": p}))
    rep.computed["class"] = cls
    if cls > p:
        rep.conclusion = NOT_APPLICABLE
        return rep
    if policy == "exhaustive":
        elems = list(G.elements())
        pairs = itertools.product(elems, repeat=2)
        rep.samples = len(elems) ** 2
    elif policy == "sampled":
        rng = random.Random(seed)
        pairs = [(G.random_element(rng), G.random_element(rng)) for _ in range(samples)]
        rep.samples = samples
    else:
        raise ValueError(f"unknown policy {policy!r}")
    pairs = list(pairs)
    for n in ns:
        q = p ** n
        powers = {}

        def pw(x):
            if x not in powers:
                powers[x] = G.pow(x, q)
            return powers[x]

        for x, y in pairs:
            a = not any(G.comm(x, pw(y)))
            b = not any(G.pow(G.comm(x, y), q))
            c = not any(G.comm(pw(x), y))
            if not a == b == c:
                rep.fail({"x": x, "y": y, "n": n, "conditions": [a, b, c]})
    rep.computed["ns"] = list(ns)
    return rep


def _lower_commutator(A: PcSubgroup, B: PcSubgroup, times: int) -> PcSubgroup:
    for _ in range(times):
        A = commutator_subgroup(A, B)
    return A


def hall_inclusion_check(G: PcPresentation, N: PcSubgroup, M: PcSubgroup,
                         threshold: int = DEFAULT_ENUM_THRESHOLD) -> VerdictReport:
    """``[N^p, M] <= [N, M]^p [M, _p N]`` for normal ``N``, ``M``."""
    if not (N.is_normal() and M.is_normal()):
        raise ValueError("both subgroups must be normal")
    p = G.prime
    lhs = commutator_subgroup(power_subgroup(N, 1, threshold), M)
    rhs = join(power_subgroup(commutator_subgroup(N, M), 1, threshold),
               _lower_commutator(M, N, p), normal=True)
    rep = VerdictReport("hall")
    rep.computed.update({"lhs_order": lhs.order(), "rhs_order": rhs.order(),
                         "N_order": N.order(), "M_order": M.order()})
    for g in lhs.gens:
        if g not in rhs:
            rep.fail({"element": g})
            break
    return rep


def hall_pairs(G: PcPresentation, threshold: int = DEFAULT_ENUM_THRESHOLD):
    Gs = whole_group(G)
    return {"(G,G)": (Gs, Gs), "(gamma2,G)": (gamma(G, 2), Gs),
            "(G^p,G)": (verbal_power_subgroup(G, 1, threshold), Gs)}


def lemma11_hypotheses(G: PcPresentation, threshold: int = DEFAULT_ENUM_THRESHOLD) -> VerdictReport:
    """(i) ``G^p`` powerful, (ii) ``exp(G^p) = p^(n-1)``, (iii) ``gamma_{p+1}(G) <= G^p``."""
    _require_odd(G)
    p = G.prime
    exp = group_exponent(G, threshold)
    n = _ilog(p, exp)
    Gp = verbal_power_subgroup(G, 1, threshold)
    exp_p = subgroup_exponent(Gp, threshold)
    rep = VerdictReport("lemma1.1")
    rep.hypotheses = [
        Hypothesis("G^p powerful", is_powerful(Gp, threshold), {"order": Gp.order()}),
        Hypothesis("exp(G^p) = p^(n-1)", exp_p == p ** max(n - 1, 0), {"exp(G^p)": exp_p, "exp(G)": exp}),
        Hypothesis("gamma_{p+1}(G) <= G^p", gamma(G, p + 1) <= Gp, {"order": gamma(G, p + 1).order()}),
    ]
    rep.computed.update({"exp_G": exp, "exp_Gp": exp_p, "Gp_order": Gp.order()})
    rep.conclusion = PASS if all(h.holds for h in rep.hypotheses) else NOT_APPLICABLE
    return rep


def lemma_l2_gate(p: int, cls: int, exp: int):
    """``(applicable, contradiction)`` for the exponent-of-``G^3`` lemma."""
    if p != 3 or cls != 5:
        return False, False
    if exp == 3:
        return False, True  # exponent-3 groups have class at most 3
    return True, False


def lemma_l2_check(G: PcPresentation, samples: int = 100, seed: int = 0,
                   threshold: int = DEFAULT_ENUM_THRESHOLD) -> VerdictReport:
    """``exp(G^3) = 3^(n-1)`` for a 3-group of class 5 and exponent ``3^n``, with proof-step traces."""
    p = G.prime
    cls = nilpotency_class(G)
    exp = group_exponent(G, threshold)
    rep = VerdictReport("lemma2.4", samples=samples, seed=seed)
    applicable, contradiction = lemma_l2_gate(p, cls, exp)
    rep.hypotheses = [Hypothesis("p = 3", p == 3), Hypothesis("class = 5", cls == 5, {"class": cls}),
                      Hypothesis("exp(G) = 3^n, n >= 2", p == 3 and exp >= 9, {"exp": exp})]
    rep.computed.update({"class": cls, "exp_G": exp})
    if contradiction:
        rep.fail({"contradiction": f"exponent 3 with class {cls} > 3"})
        return rep
    if not applicable:
        rep.conclusion = NOT_APPLICABLE
        return rep
    n = _ilog(3, exp)
    G3 = verbal_power_subgroup(G, 1, threshold)
    exp3 = subgroup_exponent(G3, threshold)
    rep.computed.update({"exp_G3": exp3, "expected": 3 ** (n - 1)})
    if exp3 != 3 ** (n - 1):
        rep.fail({"exp_G3": exp3})
    g5 = gamma(G, 5)
    rng = random.Random(seed)
    C, P = G.comm, G.pow
    for _ in range(samples):
        x, y, z = (G.random_element(rng) for _ in range(3))
        x3, y3, z3 = P(x, 3), P(y, 3), P(z, 3)
        a = C(y3, x3)
        if any(P(a, 3 ** (n - 1))):
            rep.fail({"step": "[y^3,x^3]^(3^(n-1))", "x": x, "y": y})
        if any(P(C(a, z3), 3 ** (n - 2))):
            rep.fail({"step": "[y^3,x^3,z^3]^(3^(n-2))", "x": x, "y": y, "z": z})
        lhs = C(a, y3)
        ay = C(a, y)
        rhs = G.mul(P(ay, 3), P(C(ay, y), 3))
        if G.mul(G.inv(lhs), rhs) not in g5:
            rep.fail({"step": "congruence mod gamma_5", "x": x, "y": y})
    return rep
