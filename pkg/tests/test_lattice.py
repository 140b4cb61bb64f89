import random

import pytest
from hypothesis import given, settings, strategies as st

from schurkit.lattice import (AbelianInvariants, Lattice, abelian_invariants, determinant,
                              hermite_normal_form, local_elementary_divisors, matmul,
                              smith_normal_form, solve_integer_system)


def check_snf(A):
    sf = smith_normal_form(A, inverse=True)
    m, n = len(A), len(A[0])
    assert matmul(matmul(sf.P, A), sf.Q) == sf.D
    assert abs(determinant(sf.P)) == 1 and abs(determinant(sf.Q)) == 1
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    assert matmul(sf.Q, sf.Qinv) == ident
    for i in range(m):
        for j in range(n):
            if i != j:
                assert sf.D[i][j] == 0
    d = sf.diagonal
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return sf


def test_snf_known():
    assert check_snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).diagonal == [2, 6, 12]


matrices = st.integers(1, 6).flatmap(lambda m: st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-100, 100), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_self_verifies(A):
    check_snf(A)


@settings(max_examples=60, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_invariants_unchanged_by_row_operations(A, rnd):
    # elementary row operations and row permutations preserve the cokernel
    B = [list(r) for r in A]
    for _ in range(5):
        i, j = rnd.randrange(len(B)), rnd.randrange(len(B))
        if i != j:
            c = rnd.randint(-3, 3)
            B[i] = [x + c * y for x, y in zip(B[i], B[j])]
    rnd.shuffle(B)
    assert abelian_invariants(A) == abelian_invariants(B)


def test_invariants_of_direct_sum():
    # Z/4 + Z/6 = Z/2 + Z/12
    assert abelian_invariants([[4, 0], [0, 6]]) == AbelianInvariants((2, 12), 0)
    assert abelian_invariants([[0, 0, 0]]) == AbelianInvariants((), 3)
    inv = abelian_invariants([[3, 0]], 2)
    assert inv.free_rank == 1 and inv.order is None and inv.exponent is None
    assert AbelianInvariants().exponent == 1


def test_invariants_reject_bad_chain():
    with pytest.raises(ValueError):
        AbelianInvariants((3, 2))


def test_lattice_membership():
    L = Lattice(3)
    L.add([2, 0, 0])
    L.add([0, 3, 3])
    assert L.coordinates([4, 6, 6]) is not None
    assert L.coordinates([1, 0, 0]) is None
    assert not any(L.reduce([2, 3, 3]))


def test_hermite_is_upper_echelon():
    H = hermite_normal_form([[2, 3, 1], [4, 1, 5]])
    assert H[0][0] > 0 and H[1][0] == 0


def test_solve_integer_system():
    A, b = [[2, 4], [0, 3]], [6, 3]
    sol = solve_integer_system(A, b)
    assert sol.satisfies(A, b, sol.particular)
    assert solve_integer_system([[2]], [1]) is None
    # 2x = 1 mod 3 has x = 2
    sol = solve_integer_system([[2]], [1], [3])
    assert sol is not None and (2 * sol.particular[0] - 1) % 3 == 0


def test_local_divisors_match_snf():
    rnd = random.Random(5)
    for _ in range(20):
        A = [[rnd.choice([0, 0, 3, 9, -6, 1, 27]) for _ in range(5)] for _ in range(6)]
        vals, rank = local_elementary_divisors([{j: v for j, v in enumerate(r) if v} for r in A], 5, 3, 6)
        d = [x for x in smith_normal_form(A).diagonal if x]
        assert rank == len(d)
        three = []
        for x in d:
            k = 0
            while x % 3 == 0:
                x //= 3
                k += 1
            three.append(k)
        assert sorted(vals) == sorted(three)
