"""Schur multiplier and nonabelian exterior square of finite p-groups.

For ``G = F/R`` the group ``N = F/[F,R]`` is nilpotent of class at most
``class(G) + 1``.  Its derived subgroup ``F'/[F,R]`` is the exterior square
``G ^ G`` and the torsion of the central subgroup ``R/[F,R]`` (generated by
the images of the relators) is the Schur multiplier ``M(G)``.  Both come out
of a single nilpotent-quotient run on ``<X | [x, r] : x in X, r in R>``.

An independent check is :func:`bar_h2_oracle`, which reads ``H_2(G; Z)``
off the normalized bar complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .lattice import AbelianInvariants, local_elementary_divisors
from .nq import NqResult, nilpotent_quotient
from .pc import PcError, PcPresentation
from .presentation import FinitePresentation
from .reports import FAIL, NOT_APPLICABLE, PASS, Hypothesis, VerdictReport
from .structure import (DEFAULT_ENUM_THRESHOLD, abelian_subgroup_invariants, classify, gamma,
                        group_exponent, lemma11_hypotheses, nilpotency_class)
from .subgroups import PcSubgroup, commutator_subgroup, whole_group
from .words import FreeWord, commutator, evaluate_word

DEFAULT_CLASS_CAP = 12
DEFAULT_BAR_CAP = 81


class CoverError(PcError):
    pass


def relator_commutator_presentation(P: FinitePresentation) -> FinitePresentation:
    """``<X | [x, r]>``, a presentation of ``F/[F, R]``."""
    rels = [commutator(FreeWord.gen(i), r) for r in P.relators for i in range(len(P.generators))]
    return FinitePresentation(list(P.generators), rels, P.prime, f"{P.name}/[F,R]" if P.name else "",
                              {})


def finite_quotient(P: FinitePresentation, class_cap: int = DEFAULT_CLASS_CAP) -> NqResult:
    """Nilpotent quotient of ``P`` certified to have stabilized at a finite group."""
    # a nilpotent group is finite iff its abelianization is
    if not nilpotent_quotient(P, 1).quotient.is_finite:
        raise CoverError("the presented group has an infinite abelianization")
    r = nilpotent_quotient(P, class_cap + 1)
    if r.achieved_class > class_cap:
        raise CoverError(f"nilpotent quotient did not stabilize within class {class_cap}")
    if not r.quotient.is_finite:
        raise CoverError("the presented group has an infinite nilpotent quotient")
    return r


@dataclass
class CoverResult:
    group: NqResult
    cover: NqResult
    relator_images: list
    derived: PcSubgroup
    multiplier: AbelianInvariants
    gprime_order: int
    wedge_order: int
    wedge_exponent: int
    details: dict = field(default_factory=dict)

    @property
    def multiplier_order(self):
        return self.multiplier.order

    def to_dict(self):
        return {
            "group_order": self.group.quotient.order(),
            "group_class": self.group.achieved_class,
            "cover_class": self.cover.achieved_class,
            "cover_hirsch_length": self.cover.quotient.hirsch_length,
            "multiplier": self.multiplier.to_dict(),
            "wedge_order": self.wedge_order,
            "wedge_exponent": self.wedge_exponent,
            "gprime_order": self.gprime_order,
        }


def miller_cover(P: FinitePresentation, class_hint: int | None = None,
                 class_cap: int = DEFAULT_CLASS_CAP) -> CoverResult:
    """``G ^ G`` and ``M(G)`` from the nilpotent group ``F/[F, R]``."""
    group = finite_quotient(P, class_cap)
    c = group.achieved_class
    hint = c + 1 if class_hint is None else class_hint
    cover_pres = relator_commutator_presentation(P)
    cover = None
    for h in range(hint, c + 3):
        cover = nilpotent_quotient(cover_pres, h)
        if cover.achieved_class < h:
            break
    else:
        raise CoverError(f"cover did not stabilize by class {c + 2}")
    N = cover.quotient
    images = [evaluate_word(r, cover.images, N) for r in P.relators]
    ident = N.identity()
    for img in images:
        if any(N.comm(img, g) != ident for g in N.gens()):
            raise CoverError("relator image is not central in the cover")
    rel_sub = PcSubgroup(N, images)
    inv = abelian_subgroup_invariants(rel_sub)
    multiplier = AbelianInvariants(inv.torsion, 0)
    whole = whole_group(N)
    derived = commutator_subgroup(whole, whole)
    if any(m is None for m in derived.relative_orders()):
        raise CoverError("derived subgroup of the cover is not finite")
    wedge_order = derived.order()
    wedge_exp = max((N.element_order(x) for x in derived.elements()), default=1)
    gprime = gamma(group.quotient, 2).order()
    if wedge_order != multiplier.order * gprime:
        raise CoverError(f"|G^G| = {wedge_order} but |M| * |G'| = {multiplier.order * gprime}")
    return CoverResult(group, cover, images, derived, multiplier, gprime, wedge_order, wedge_exp,
                       {"relator_subgroup_free_rank": inv.free_rank})


def schur_multiplier(P: FinitePresentation, **kwargs) -> AbelianInvariants:
    return miller_cover(P, **kwargs).multiplier


# ----------------------------------------------------------------------
# bar resolution oracle

def _ilog(p, n):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def bar_h2_oracle(G: PcPresentation, max_order: int = DEFAULT_BAR_CAP) -> AbelianInvariants:
    """``H_2(G; Z)`` as the torsion of the cokernel of the normalized ``d_3``.

    ``C_2 / im d_3`` is ``H_2`` plus the free group ``im d_2``, so its
    torsion is ``H_2``.  The torsion is read off the ``p``-local elementary
    divisors of ``d_3``; the rank found must equal the rational rank
    ``(|G|-1)^2 - (|G|-1)``, which certifies no divisor was lost.
    """
    if not G.is_finite:
        raise ValueError("bar oracle needs a finite group")
    order = G.order()
    if order > max_order:
        raise ValueError(f"group order {order} exceeds the bar oracle cap {max_order}; "
                         "raise the cap explicitly (cost grows like |G|^3)")
    p = G.prime
    elems = list(G.elements())
    index = {x: k for k, x in enumerate(elems)}
    one = index[G.identity()]
    table = [[index[G.mul(x, y)] for y in elems] for x in elems]
    nontriv = [k for k in range(order) if k != one]
    m = len(nontriv)
    pos = {k: a for a, k in enumerate(nontriv)}

    def cell(g, h):
        return pos[g] * m + pos[h]

    rows = []
    for g, h, k in itertools.product(nontriv, repeat=3):
        row = {}

        def add(a, b, s):
            if a != one and b != one:
                c = cell(a, b)
                v = row.get(c, 0) + s
                if v:
                    row[c] = v
                else:
                    row.pop(c, None)

        add(h, k, 1)
        add(table[g][h], k, -1)
        add(g, table[h][k], 1)
        add(g, h, -1)
        if row:
            rows.append(row)
    precision = _ilog(p, order) + 1
    vals, rank = local_elementary_divisors(rows, m * m, p, precision)
    expected = m * m - m
    if rank != expected:
        raise ArithmeticError(f"local rank {rank} differs from the rational rank {expected}")
    return AbelianInvariants(tuple(sorted(p ** v for v in vals if v >= 1)), 0)


# ----------------------------------------------------------------------
# divisibility verdicts

CLAIMS = ("thm2.5", "cor2.6", "lemma1.1", "maximal-class", "potent", "gammap-p2")


@dataclass
class DivisibilityVerdict(VerdictReport):
    exp_G: int = 1
    exp_wedge: int = 1
    exp_M: int = 1
    divides: bool = True


def _gate(claim, G, threshold):
    p = G.prime
    cls = nilpotency_class(G)
    if claim == "thm2.5":
        return [Hypothesis("p = 3", p == 3), Hypothesis("class <= 5", cls <= 5, {"class": cls})]
    if claim == "cor2.6":
        return [Hypothesis("p odd", p % 2 == 1), Hypothesis("class <= 5", cls <= 5, {"class": cls})]
    if claim == "lemma1.1":
        return lemma11_hypotheses(G, threshold).hypotheses
    pred = classify(G, threshold, regularity="skip")
    if claim == "maximal-class":
        return [Hypothesis("maximal class", pred.maximal_class, {"coclass": pred.coclass})]
    if claim == "potent":
        return [Hypothesis("potent", pred.potent)]
    if claim == "gammap-p2":
        return [Hypothesis("gamma_p(G) <= G^(p^2)", pred.gamma_p_in_p2)]
    raise ValueError(f"unknown claim {claim!r}; expected one of {', '.join(CLAIMS)}")


def exponent_divisibility_verdict(P: FinitePresentation, claim: str, cover: CoverResult | None = None,
                                  threshold: int = DEFAULT_ENUM_THRESHOLD,
                                  class_cap: int = DEFAULT_CLASS_CAP) -> DivisibilityVerdict:
    """Check ``e(G ^ G) | e(G)`` under the hypotheses of ``claim``."""
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {', '.join(CLAIMS)}")
    if cover is None:
        cover = miller_cover(P, class_cap=class_cap)
    G = cover.group.quotient
    exp_G = group_exponent(G, threshold)
    exp_M = cover.multiplier.exponent
    v = DivisibilityVerdict(claim=claim, exp_G=exp_G, exp_wedge=cover.wedge_exponent, exp_M=exp_M)
    v.divides = exp_G % cover.wedge_exponent == 0
    v.hypotheses = _gate(claim, G, threshold)
    v.computed.update({"exp_G": exp_G, "exp_wedge": cover.wedge_exponent, "exp_M": exp_M,
                       "wedge_order": cover.wedge_order, "multiplier": str(cover.multiplier)})
    if cover.wedge_exponent % exp_M:
        v.fail({"exp_M": exp_M, "exp_wedge": cover.wedge_exponent})
    if not all(h.holds for h in v.hypotheses):
        if v.conclusion != FAIL:
            v.conclusion = NOT_APPLICABLE
    elif not v.divides:
        v.fail({"exp_G": exp_G, "exp_wedge": cover.wedge_exponent})
    elif v.conclusion != FAIL:
        v.conclusion = PASS
    return v
