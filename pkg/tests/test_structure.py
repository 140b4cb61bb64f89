import pytest

from schurkit.reports import NOT_APPLICABLE, PASS
from schurkit.structure import (center, classify, fundamental_subgroup, gamma, group_exponent,
                                hall_inclusion_check, hall_pairs, is_powerful, lemma11_hypotheses,
                                lemma_l2_check, lemma_l2_gate, lower_central_series, mann_check,
                                nilpotency_class, subgroup_exponent, upper_central_series,
                                verbal_power_subgroup)
from schurkit.subgroups import PcSubgroup, whole_group

from conftest import ALL, group


def brute_center(G):
    elems = list(G.elements())
    return {x for x in elems if all(G.mul(x, y) == G.mul(y, x) for y in elems)}


def brute_power_subgroup(G, k):
    q = G.prime ** k
    return PcSubgroup(G, [G.pow(x, q) for x in G.elements()])


@pytest.mark.parametrize("stem", ["heisenberg27", "c3wrc3", "m27", "c9xc3"])
def test_center_matches_brute_force(stem):
    G = group(stem)
    Z = brute_center(G)
    for method in ("enumerate", "linear"):
        assert set(center(G, method=method).elements()) == Z


@pytest.mark.parametrize("stem", ["heisenberg27", "c3wrc3", "m27"])
def test_power_subgroup_matches_brute_force(stem):
    G = group(stem)
    for k in (1, 2):
        assert verbal_power_subgroup(G, k) == brute_power_subgroup(G, k)


def test_exponent_methods_agree():
    for stem in ("c3wrc3", "m27", "c27", "heisenberg27"):
        G = group(stem)
        assert group_exponent(G, method="orders") == group_exponent(G, method="verbal")


@pytest.mark.parametrize("stem, order, cls, exp", [
    ("c27", 27, 1, 27), ("c9xc3", 27, 1, 9), ("c3cubed", 27, 1, 3), ("heisenberg27", 27, 2, 3),
    ("m27", 27, 2, 9), ("c3wrc3", 81, 3, 9), ("c9wrc3", 2187, 5, 27),
])
def test_invariants(stem, order, cls, exp):
    G = group(stem)
    assert G.order() == order and nilpotency_class(G) == cls and group_exponent(G) == exp


def test_series_meet_at_the_ends():
    G = group("c3wrc3")
    lcs, ucs = lower_central_series(G), upper_central_series(G)
    assert lcs.length == ucs.length == 3
    assert lcs.orders()[0] == 81 and lcs.orders()[-1] == 1
    assert ucs.orders()[0] == 1 and ucs.orders()[-1] == 81
    # gamma_{i+1} <= Z_{c-i}
    for i in range(lcs.length + 1):
        assert lcs.term(i + 1) <= ucs.term(lcs.length - i)


def test_predicates():
    wr = classify(group("c3wrc3"))
    assert wr.maximal_class and not wr.powerful and not wr.potent and wr.regular_status == "fails"
    m = classify(group("m27"))
    assert m.powerful and m.potent
    h = classify(group("heisenberg27"))
    assert h.maximal_class and not h.powerful


def test_fundamental_subgroup():
    rep = fundamental_subgroup(group("c3wrc3"))
    assert rep.index == 3 and rep.index_is_p
    lin = fundamental_subgroup(group("c3wrc3"), method="linear")
    assert lin.subgroup == rep.subgroup
    with pytest.raises(ValueError):
        fundamental_subgroup(group("c9xc3"))


def test_g3_of_wreath():
    G = group("c9wrc3")
    G3 = verbal_power_subgroup(G, 1)
    assert G3.order() == 81 and subgroup_exponent(G3) == 9 and is_powerful(G3)


@pytest.mark.parametrize("stem", ALL)
def test_hall_inclusion(stem):
    G = group(stem)
    for N, M in hall_pairs(G).values():
        assert hall_inclusion_check(G, N, M).conclusion == PASS


def test_mann():
    assert mann_check(group("c3wrc3")).conclusion == PASS
    assert mann_check(group("c9wrc3")).conclusion == NOT_APPLICABLE


def test_lemma_gates():
    assert lemma_l2_gate(3, 5, 27) == (True, False)
    assert lemma_l2_gate(3, 5, 3) == (False, True)
    assert lemma_l2_gate(5, 5, 25) == (False, False)
    assert lemma_l2_check(group("heisenberg27")).conclusion == NOT_APPLICABLE
    assert lemma11_hypotheses(group("c3wrc3")).conclusion == PASS


def test_gamma_is_normal():
    G = group("c9wrc3")
    for i in range(1, 7):
        assert gamma(G, i).is_normal()
    assert gamma(G, 6).is_trivial() and not gamma(G, 5).is_trivial()
    assert gamma(G, 1) == whole_group(G)
