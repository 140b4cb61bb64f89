"""Free nilpotent groups through the Magnus embedding.

Generator ``i`` maps to ``1 + X_i`` in the free associative algebra over Z
truncated above degree ``c``.  Two words are equal in the free nilpotent
group of class ``c`` iff their images agree, so identities of class-``c``
groups can be verified exactly.

A series is stored degree by degree: part ``k`` is a flat array of
length ``d**k`` indexed by the monomial read as a base-``d`` number, so the
degree ``a + b`` part of a product is ``outer(A[a], B[b]).ravel()``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np

from .reports import FAIL, PASS, VerdictReport
from .words import FreeWord, GroupOps, commutator

DEFAULT_CLASS_CAP = 6


_SAFE = 1 << 62


def _norm(part):
    return int(np.abs(part).max()) if part.size else 0


def _gen_binom(n: int, k: int) -> int:
    """``binom(n, k)`` for any integer ``n``."""
    if n >= 0:
        return comb(n, k)
    sign = -1 if k % 2 else 1
    return sign * comb(k - n - 1, k)


class Series:
    """Truncated series; ``bounds[k]`` bounds the absolute values in part ``k``.

    Parts are int64 while the bounds prove no overflow can occur and switch
    to Python-int object arrays otherwise, so arithmetic is always exact.
    """

    __slots__ = ("parts", "bounds", "_upows")

    def __init__(self, parts, bounds=None):
        self.parts = parts
        self.bounds = bounds if bounds is not None else [_norm(p) for p in parts]
        self._upows = None

    def __eq__(self, other):
        return all(np.array_equal(a, b) for a, b in zip(self.parts, other.parts))

    def degree_support(self):
        return [k for k, part in enumerate(self.parts) if part.any()]

    def coefficient(self, monomial, d):
        k = len(monomial)
        idx = 0
        for g in monomial:
            idx = idx * d + g
        return int(self.parts[k][idx])

    def terms(self, d):
        """``{monomial: coefficient}`` for the nonzero coefficients."""
        out = {}
        for k, part in enumerate(self.parts):
            for idx in np.flatnonzero(part != 0):
                mono, j = [], int(idx)
                for _ in range(k):
                    mono.append(j % d)
                    j //= d
                out[tuple(reversed(mono))] = int(part[idx])
        return out


def _as_object(part):
    return part if part.dtype == object else part.astype(object)


class TruncatedAlgebra(GroupOps):
    """Group of units ``1 + (augmentation ideal)`` in the truncated algebra."""

    def __init__(self, ngens: int, class_bound: int, cap: int = DEFAULT_CLASS_CAP):
        if class_bound < 1:
            raise ValueError("class bound must be at least 1")
        if class_bound > cap:
            raise ValueError(f"class bound {class_bound} exceeds the cap {cap}")
        self.d = ngens
        self.c = class_bound

    def _zero_parts(self):
        return [np.zeros(self.d ** k, dtype=np.int64) for k in range(self.c + 1)]

    def identity(self):
        parts = self._zero_parts()
        parts[0][0] = 1
        return Series(parts, [1] + [0] * self.c)

    def gen(self, i):
        return self.gen_power(i, 1)

    def gen_power(self, i, e):
        """``(1 + X_i)^e`` written down directly."""
        parts = self._zero_parts()
        bounds = [0] * (self.c + 1)
        idx = 0
        for k in range(self.c + 1):
            coeff = _gen_binom(e, k)
            if abs(coeff) >= _SAFE:
                parts[k] = parts[k].astype(object)
            parts[k][idx] = coeff
            bounds[k] = abs(coeff)
            idx = idx * self.d + i
        return Series(parts, bounds)

    def _mul(self, A, Ab, B, Bb):
        parts, bounds = [], []
        for k in range(self.c + 1):
            acc = None
            bound = 0
            pieces = []
            for a in range(k + 1):
                b = k - a
                if Ab[a] and Bb[b]:
                    pieces.append((a, b))
                    bound += Ab[a] * Bb[b]
            # each coefficient of degree k is one product per split point a + b = k
            if bound >= _SAFE:
                for a, b in pieces:
                    term = np.outer(_as_object(A[a]), _as_object(B[b])).ravel()
                    acc = term if acc is None else acc + term
            else:
                for a, b in pieces:
                    term = np.outer(A[a], B[b]).ravel()
                    acc = term if acc is None else acc + term
            if acc is None:
                acc = np.zeros(self.d ** k, dtype=np.int64)
                bound = 0
            elif acc.dtype == object:
                bound = _norm(acc)
                if bound < _SAFE:
                    acc = acc.astype(np.int64)
            parts.append(acc)
            bounds.append(bound)
        return parts, bounds

    def mul(self, x, y):
        parts, bounds = self._mul(x.parts, x.bounds, y.parts, y.bounds)
        return Series(parts, bounds)

    def _upowers(self, x):
        if x._upows is None:
            u = [p.copy() for p in x.parts]
            u[0] = u[0] - 1
            ub = list(x.bounds)
            ub[0] = 0
            pows = [(u, ub)]
            for _ in range(2, self.c + 1):
                P, Pb = pows[-1]
                pows.append(self._mul(P, Pb, u, ub))
            x._upows = pows
        return x._upows

    def pow(self, x, n):
        # (1 + u)^n = sum_k binom(n, k) u^k, exact for every integer n since u is nilpotent
        if n == 0:
            return self.identity()
        if n == 1:
            return x
        ident = self.identity()
        parts = [p.copy() for p in ident.parts]
        bounds = list(ident.bounds)
        for k, (P, Pb) in enumerate(self._upowers(x), start=1):
            coeff = _gen_binom(n, k)
            if not coeff:
                continue
            for deg in range(self.c + 1):
                if not Pb[deg]:
                    continue
                nb = bounds[deg] + abs(coeff) * Pb[deg]
                if nb >= _SAFE:
                    parts[deg] = _as_object(parts[deg]) + coeff * _as_object(P[deg])
                else:
                    parts[deg] = parts[deg] + coeff * P[deg]
                bounds[deg] = nb
        for deg in range(self.c + 1):
            if parts[deg].dtype == object:
                bounds[deg] = _norm(parts[deg])
                if bounds[deg] < _SAFE:
                    parts[deg] = parts[deg].astype(np.int64)
        return Series(parts, bounds)

    def inv(self, x):
        return self.pow(x, -1)

    def is_identity(self, x):
        return x == self.identity()

    def embed(self, w: FreeWord):
        acc = self.identity()
        for g, e in w.letters:
            acc = self.mul(acc, self.gen_power(g, e))
        return acc


def magnus_embed(w: FreeWord, ngens: int, class_bound: int) -> Series:
    return TruncatedAlgebra(ngens, class_bound).embed(w)


# ----------------------------------------------------------------------
# Witt ranks

def _mobius(n):
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def witt_rank(d: int, k: int) -> int:
    """Rank of the k-th lower central factor of the free group of rank d."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    total = sum(_mobius(m) * d ** (k // m) for m in range(1, k + 1) if k % m == 0)
    return total // k


# ----------------------------------------------------------------------
# identities

class IdentityKind(Enum):
    EQ_1_1 = "eq1.1"
    EQ_1_2 = "eq1.2"
    MULTILINEAR = "multilinear"
    CLASS5_EXPANSION = "class5"
    L1_I = "lemma2.3i"
    L1_II = "lemma2.3ii"


@dataclass(frozen=True)
class IdentityId:
    kind: IdentityKind
    param: int | None = None

    def __post_init__(self):
        k = self.kind
        if k is IdentityKind.MULTILINEAR:
            if self.param is None or self.param < 2:
                raise ValueError("multilinear needs r >= 2")
        elif k in (IdentityKind.CLASS5_EXPANSION, IdentityKind.L1_I, IdentityKind.L1_II):
            if self.param is None or self.param < 0:
                raise ValueError(f"{k.value} needs n >= 0")
        elif self.param is not None:
            raise ValueError(f"{k.value} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "IdentityId":
        name, _, arg = text.partition(":")
        try:
            kind = IdentityKind(name)
        except ValueError:
            raise ValueError(f"unknown identity {name!r}") from None
        return cls(kind, int(arg) if arg else None)

    def __str__(self):
        return self.kind.value + ("" if self.param is None else f":{self.param}")

    def required_class(self):
        if self.kind in (IdentityKind.CLASS5_EXPANSION, IdentityKind.L1_I, IdentityKind.L1_II):
            return 5
        if self.kind is IdentityKind.MULTILINEAR:
            return self.param
        return None


def _g(i):
    return FreeWord.gen(i)


def class5_expansion_rhs(ops, n, x, y):
    """Factors ``(element, exponent)`` of the class-5 expansion of ``(xy)^n``."""
    b2, b3, b4, b5 = comb(n, 2), comb(n, 3), comb(n, 4), comb(n, 5)
    C = ops.comm
    yx = C(y, x)
    yxx, yxy = C(yx, x), C(yx, y)
    yxxx, yxxy, yxyy = C(yxx, x), C(yxx, y), C(yxy, y)
    return [
        (x, n), (y, n),
        (yx, b2),
        (yxx, b3),
        (yxy, b2 + 2 * b3),
        (yxxx, b4),
        (yxxy, 2 * b3 + 3 * b4),
        (yxyy, 2 * b3 + 3 * b4),
        (C(yxx, yx), b3 + 7 * b4 + 6 * b5),
        (C(yxy, yx), 6 * b3 + 18 * b4 + 12 * b5),
        (C(yxxx, x), b5),
        (C(yxxx, y), 3 * b4 + 4 * b5),
        (C(yxxy, y), b3 + 6 * b4 + 6 * b5),
        (C(yxyy, y), 3 * b4 + 4 * b5),
    ]


def lemma_i_factors(ops, x, y):
    """n-independent commutators for ``(yx)^n`` with ``x`` in the derived subgroup."""
    C = ops.comm
    xy = C(x, y)
    xyy = C(xy, y)
    return [y, x, xy, xyy, C(xy, x), C(xyy, y)]


def lemma_i_exponents(n):
    b2, b3, b4 = comb(n, 2), comb(n, 3), comb(n, 4)
    return [n, n, b2, b3, b2 + 2 * b3, b4]


def lemma_ii_factors(ops, x, y):
    """n-independent commutators for ``[y^n, x]``."""
    C = ops.comm
    yx = C(y, x)
    yxy = C(yx, y)
    yxyy = C(yxy, y)
    return [yx, yxy, yxyy, C(yxy, yx), C(yxyy, y)]


def lemma_ii_exponents(n):
    b2, b3, b4 = comb(n, 2), comb(n, 3), comb(n, 4)
    return [n, b2, b3, b2 + 2 * b3, b4]


def _product(ops, factors, exponents):
    acc = ops.identity()
    for f, e in zip(factors, exponents):
        if e:
            acc = ops.mul(acc, ops.pow(f, e))
    return acc


def random_word(rng, ngens, max_len=4, min_len=1):
    length = rng.randint(min_len, max_len)
    letters = []
    for _ in range(length):
        letters.append((rng.randrange(ngens), rng.choice((-1, 1))))
    w = FreeWord(letters)
    return w if w or min_len == 0 else FreeWord.gen(rng.randrange(ngens))


def random_gamma2_word(rng, ngens, max_terms=3, max_len=4):
    w = FreeWord()
    for _ in range(rng.randint(1, max_terms)):
        w = w * commutator(random_word(rng, ngens, max_len), random_word(rng, ngens, max_len))
    return w


def identity_check(ident: IdentityId | str, class_bound: int | None = None, trials: int = 100,
                   seed: int = 0) -> VerdictReport:
    """Verify an identity exactly in the truncated Magnus algebra.

    Exact identities are checked on generic generators and on ``trials``
    random word substitutions; the derived-subgroup identity is checked on
    ``trials`` random products of commutators.
    """
    if isinstance(ident, str):
        ident = IdentityId.parse(ident)
    return identity_sweep(ident.kind, [ident.param], class_bound, trials, seed)[0]


def identity_sweep(kind: IdentityKind, params, class_bound=None, trials=100, seed=0):
    """Check one identity family for several parameters, sharing the random samples."""
    idents = [IdentityId(kind, p) for p in params]
    if class_bound is None:
        class_bound = max(i.required_class() or DEFAULT_CLASS_CAP for i in idents)
    for ident in idents:
        req = ident.required_class()
        if req is not None and class_bound != req and len(idents) == 1:
            raise ValueError(f"{ident} requires class bound {req}, got {class_bound}")
        if req is not None and class_bound != req and kind is not IdentityKind.MULTILINEAR:
            raise ValueError(f"{ident} requires class bound {req}, got {class_bound}")
    reports = [VerdictReport(claim=str(i), samples=trials, seed=seed,
                             computed={"class_bound": class_bound, "instances": 0}) for i in idents]
    rng = random.Random(seed)

    if kind in (IdentityKind.EQ_1_1, IdentityKind.EQ_1_2):
        alg = TruncatedAlgebra(3, class_bound)
        cases = [(_g(0), _g(1), _g(2))]
        cases += [tuple(random_word(rng, 3) for _ in range(3)) for _ in range(trials)]
        for x, y, z in cases:
            ex, ey, ez = (alg.embed(w) for w in (x, y, z))
            C = alg.comm
            if kind is IdentityKind.EQ_1_1:
                lhs = C(alg.mul(ex, ey), ez)
                rhs = alg.mul(alg.conjugate(C(ex, ez), ey), C(ey, ez))
            else:
                lhs = C(ez, alg.mul(ex, ey))
                rhs = alg.mul(C(ez, ey), alg.conjugate(C(ez, ex), ey))
            _record(reports[0], lhs == rhs, {"x": x.letters, "y": y.letters, "z": z.letters})

    elif kind is IdentityKind.MULTILINEAR:
        for rep, ident in zip(reports, idents):
            r = ident.param
            ngens = r + 1
            alg = TruncatedAlgebra(ngens, r)
            rep.computed["class_bound"] = r
            cases = [[_g(i) for i in range(r + 1)]]
            cases += [[random_word(rng, ngens) for _ in range(r + 1)] for _ in range(trials)]
            for entries in cases:
                emb = [alg.embed(w) for w in entries]
                gs, extra = emb[:r], emb[r]
                for slot in range(r):
                    a = list(gs)
                    a[slot] = alg.mul(gs[slot], extra)
                    b = list(gs)
                    b[slot] = extra
                    lhs = _left_normed(alg, a)
                    rhs = alg.mul(_left_normed(alg, gs), _left_normed(alg, b))
                    _record(rep, lhs == rhs, {"slot": slot, "entries": [w.letters for w in entries]})

    elif kind in (IdentityKind.CLASS5_EXPANSION, IdentityKind.L1_II):
        alg = TruncatedAlgebra(2, 5)
        x, y = alg.gen(0), alg.gen(1)
        for rep, ident in zip(reports, idents):
            n = ident.param
            if kind is IdentityKind.CLASS5_EXPANSION:
                lhs = alg.pow(alg.mul(x, y), n)
                factors = class5_expansion_rhs(alg, n, x, y)
                rhs = _product(alg, [f for f, _ in factors], [e for _, e in factors])
            else:
                lhs = alg.comm(alg.pow(y, n), x)
                rhs = _product(alg, lemma_ii_factors(alg, x, y), lemma_ii_exponents(n))
            _record(rep, lhs == rhs, {"n": n})

    elif kind is IdentityKind.L1_I:
        alg = TruncatedAlgebra(3, 5)
        for _ in range(trials):
            xw = random_gamma2_word(rng, 3)
            yw = random_word(rng, 3)
            x, y = alg.embed(xw), alg.embed(yw)
            yx = alg.mul(y, x)
            factors = lemma_i_factors(alg, x, y)
            for rep, ident in zip(reports, idents):
                n = ident.param
                lhs = alg.pow(yx, n)
                rhs = _product(alg, factors, lemma_i_exponents(n))
                _record(rep, lhs == rhs, {"n": n, "x": xw.letters, "y": yw.letters})

    for rep in reports:
        if rep.conclusion != FAIL:
            rep.conclusion = PASS
    return reports


def _left_normed(ops, xs):
    acc = xs[0]
    for x in xs[1:]:
        acc = ops.comm(acc, x)
    return acc


def _record(report, ok, witness):
    report.computed["instances"] += 1
    if not ok:
        report.fail(witness)


def finite_difference_degrees(n_max: int = 12):
    """For each monomial of ``(xy)^n`` in class 5, the order of the first vanishing difference.

    Returns ``{monomial: ok}`` where ``ok`` says the ``(deg+1)``-st finite
    difference over ``n = 0 .. deg+1`` vanishes.
    """
    alg = TruncatedAlgebra(2, 5)
    xy = alg.embed(_g(0) * _g(1))
    values = [alg.pow(xy, n) for n in range(max(n_max, 7))]
    out = {}
    for k in range(6):
        for idx in range(2 ** k):
            mono = tuple((idx >> (k - 1 - t)) & 1 for t in range(k))
            seq = [int(v.parts[k][idx]) for v in values[: k + 2]]
            diff = seq
            for _ in range(k + 1):
                diff = [b - a for a, b in zip(diff, diff[1:])]
            out[mono] = all(v == 0 for v in diff)
    return out
