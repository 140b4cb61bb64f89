import pytest

from schurkit.nq import nilpotent_quotient, quotient_lcs_check, verify_quotient
from schurkit.presentation import parse_presentation

from conftest import ALL, presentation


def free(k):
    return parse_presentation("generators " + " ".join("abcd"[:k]) + "\n")


def test_free_rank2_layers():
    r = nilpotent_quotient(free(2), 5)
    assert r.layer_ranks == [2, 1, 2, 3, 6]
    assert r.achieved_class == 5 and r.quotient.hirsch_length == 14
    assert verify_quotient(free(2), r)


def test_cyclic_stops_early():
    r = nilpotent_quotient(parse_presentation("generators a\nrelators a^3\n"), 4)
    assert r.achieved_class == 1 and r.quotient.order() == 3


@pytest.mark.parametrize("stem", ALL)
def test_corpus_quotients(stem):
    P = presentation(stem)
    r = nilpotent_quotient(P, 8)
    assert verify_quotient(P, r)
    quotient_lcs_check(r)
    expect = P.expect
    if "order" in expect:
        assert r.quotient.order() == int(expect["order"])
    if "class" in expect:
        assert r.achieved_class == int(expect["class"])


def test_pruning_does_not_change_the_result():
    P = parse_presentation("generators a b\nrelators a^9, b^9, [a,b]^3\n")
    a, b = nilpotent_quotient(P, 4), nilpotent_quotient(P, 4, prune=False)
    assert a.layer_invariants == b.layer_invariants
    assert a.quotient.order() == b.quotient.order()


def test_presentation_independence():
    # two presentations of the Heisenberg group of order 27
    r1 = nilpotent_quotient(presentation("heisenberg27"), 6)
    r2 = nilpotent_quotient(presentation("b23_quotient"), 6)
    assert r1.layer_invariants == r2.layer_invariants
    assert r1.quotient.order() == r2.quotient.order() == 27


def test_rejects_bad_class():
    with pytest.raises(ValueError):
        nilpotent_quotient(free(2), 0)


def test_to_dict_keys():
    d = nilpotent_quotient(presentation("c9xc3"), 3).to_dict()
    assert d["order"] == 27 and d["achieved_class"] == 1
