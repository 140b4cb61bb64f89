import pytest

from schurkit.magnus import (IdentityId, IdentityKind, TruncatedAlgebra, _gen_binom, finite_difference_degrees,
                             identity_check, magnus_embed, witt_rank)
from schurkit.words import FreeWord, commutator


def test_gen_binom_negative():
    from math import comb
    for n in range(-6, 7):
        for k in range(5):
            expect = comb(n, k) if n >= 0 else (-1) ** k * comb(k - n - 1, k)
            assert _gen_binom(n, k) == expect


def test_embedding_is_a_homomorphism():
    alg = TruncatedAlgebra(2, 4)
    a, b = FreeWord.gen(0), FreeWord.gen(1)
    u, v = a * b * a.inverse(), b ** 3 * a
    assert alg.embed(u * v) == alg.mul(alg.embed(u), alg.embed(v))
    assert alg.mul(alg.embed(u), alg.inv(alg.embed(u))) == alg.identity()


def test_commutator_has_no_linear_part():
    s = magnus_embed(commutator(FreeWord.gen(0), FreeWord.gen(1)), 2, 3)
    assert all(len(mono) != 1 for mono in s.terms(2))
    assert s.coefficient((0, 1), 2) == 1 and s.coefficient((1, 0), 2) == -1


def test_truncation_kills_high_commutators():
    alg = TruncatedAlgebra(2, 2)
    x, y = alg.gen(0), alg.gen(1)
    assert alg.comm(alg.comm(x, y), x) == alg.identity()
    assert alg.comm(x, y) != alg.identity()


def test_pow_matches_repeated_product():
    alg = TruncatedAlgebra(2, 5)
    w = alg.mul(alg.gen(0), alg.gen(1))
    acc = alg.identity()
    for n in range(8):
        assert alg.pow(w, n) == acc
        acc = alg.mul(acc, w)
    assert alg.pow(w, -3) == alg.inv(alg.pow(w, 3))


def test_large_exponents_stay_exact():
    alg = TruncatedAlgebra(2, 5)
    w = alg.mul(alg.gen(0), alg.gen(1))
    big = 3 ** 30
    assert alg.mul(alg.pow(w, big), alg.pow(w, -big)) == alg.identity()


def test_witt_ranks():
    assert [witt_rank(2, k) for k in range(1, 6)] == [2, 1, 2, 3, 6]
    assert [witt_rank(3, k) for k in range(1, 6)] == [3, 3, 8, 18, 48]


def test_identity_id_parse():
    assert IdentityId.parse("multilinear:3") == IdentityId(IdentityKind.MULTILINEAR, 3)
    assert str(IdentityId.parse("class5:7")) == "class5:7"
    with pytest.raises(ValueError):
        IdentityId.parse("nope")
    with pytest.raises(ValueError):
        IdentityId.parse("eq1.1:2")


@pytest.mark.parametrize("name", ["eq1.1", "eq1.2", "multilinear:2", "multilinear:3", "class5:0", "class5:7",
                                  "lemma2.3ii:5", "lemma2.3i:4"])
def test_identities_hold(name):
    rep = identity_check(name, trials=10)
    assert rep.conclusion == "pass", rep.witnesses
    assert rep.computed["instances"] >= 1


def test_wrong_class_bound_rejected():
    with pytest.raises(ValueError):
        identity_check("class5:3", class_bound=4)


def test_identity_detects_a_false_claim():
    # [x^n, y] = [x, y]^n fails once class 2 terms are visible
    alg = TruncatedAlgebra(2, 3)
    x, y = alg.gen(0), alg.gen(1)
    assert alg.comm(alg.pow(x, 2), y) != alg.pow(alg.comm(x, y), 2)


def test_finite_differences():
    degrees = finite_difference_degrees()
    assert len(degrees) == sum(2 ** k for k in range(6))
    assert all(degrees.values())
