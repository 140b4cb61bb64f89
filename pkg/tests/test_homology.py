import pytest

from schurkit.homology import (CLAIMS, CoverError, bar_h2_oracle, exponent_divisibility_verdict,
                               finite_quotient, miller_cover, relator_commutator_presentation)
from schurkit.presentation import parse_presentation
from schurkit.reports import FAIL

from conftest import SMALL, cover, group, presentation

MULTIPLIERS = {"c27": (), "c9xc3": (3,), "c3cubed": (3, 3, 3), "heisenberg27": (3, 3), "m27": (),
               "b23_quotient": (3, 3), "c3wrc3": (3,), "c9wrc3": (9,)}


@pytest.mark.parametrize("stem", sorted(MULTIPLIERS))
def test_miller_multiplier(stem):
    cv = cover(stem)
    assert cv.multiplier.torsion == MULTIPLIERS[stem]
    assert cv.wedge_order == cv.multiplier.order * cv.gprime_order


@pytest.mark.parametrize("stem", SMALL)
def test_bar_oracle_agrees(stem):
    assert bar_h2_oracle(group(stem)).torsion == MULTIPLIERS[stem]


def test_bar_oracle_small_groups():
    for text, expect in [("generators a\nrelators a^9\n", ()), ("generators a b\nrelators a^3, b^3, [a,b]\n", (3,))]:
        G = finite_quotient(parse_presentation(text)).quotient
        assert bar_h2_oracle(G).torsion == expect
        assert miller_cover(parse_presentation(text)).multiplier.torsion == expect


def test_bar_oracle_cap():
    with pytest.raises(ValueError):
        bar_h2_oracle(group("c3wrc3"), max_order=27)


def test_infinite_group_rejected():
    with pytest.raises(CoverError):
        miller_cover(parse_presentation("generators a b\nrelators a^3\n"))


def test_cover_presentation_shape():
    P = presentation("heisenberg27")
    assert len(relator_commutator_presentation(P).relators) == len(P.relators) * len(P.names)


def test_wedge_of_wreath():
    cv = cover("c9wrc3")
    assert cv.wedge_exponent == 9 and cv.wedge_order == 729


@pytest.mark.parametrize("stem", sorted(MULTIPLIERS))
def test_verdicts_never_fail(stem):
    cv = cover(stem)
    for claim in CLAIMS:
        v = exponent_divisibility_verdict(presentation(stem), claim, cover=cv)
        assert v.conclusion != FAIL and v.divides


def test_unknown_claim():
    with pytest.raises(ValueError):
        exponent_divisibility_verdict(presentation("c27"), "thm9")
