from schurkit.subgroups import (PcSubgroup, commutator_subgroup, join, membership, normal_closure,
                                quotient, trivial_subgroup, whole_group)

from conftest import group


def brute_span(G, gens):
    seen = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def test_span_matches_closure():
    G = group("c3wrc3")
    rng_elems = list(G.elements())
    for gens in ([rng_elems[5]], [rng_elems[10], rng_elems[40]], [G.gens()[1]]):
        H = PcSubgroup(G, gens)
        assert H.order() == len(brute_span(G, gens))
        assert set(H.elements()) == brute_span(G, gens)


def test_derived_subgroup_and_quotient():
    G = group("heisenberg27")
    W = whole_group(G)
    D = commutator_subgroup(W, W)
    assert D.order() == 3 and D.is_normal()
    Q = quotient(G, D)
    assert Q.pcp.order() == 9
    for x in G.elements():
        assert Q.lift(Q.project(x)) in {Q.canonical(x)}


def test_membership_and_lattice_ops():
    G = group("c3cubed")
    a, b, c = G.gens()
    A, B = PcSubgroup(G, [a]), PcSubgroup(G, [b])
    J = join(A, B)
    assert J.order() == 9 and membership(G, G.mul(a, b), J) and not membership(G, c, J)
    assert trivial_subgroup(G).is_trivial()
    assert A <= J and not J <= A


def test_normal_closure():
    G = group("c3wrc3")
    N = normal_closure(G, [G.gens()[1]])
    assert N.is_normal() and N.order() == 27
