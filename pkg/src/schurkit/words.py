"""Free-group words.

A word is stored as a tuple of ``(generator_index, exponent)`` letters with
nonzero exponents.  Conjugation and commutators follow right-action
conventions: ``x^y = y^-1 x y`` and ``[x, y] = x^-1 x^y = x^-1 y^-1 x y``;
longer commutators are left normed, ``[x, y, z] = [[x, y], z]``.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence


class FreeWord:
    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        self.letters = free_reduce_letters(letters)

    @classmethod
    def gen(cls, index: int, exp: int = 1) -> "FreeWord":
        return cls(((index, exp),))

    @classmethod
    def identity(cls) -> "FreeWord":
        return cls(())

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "FreeWord":
        if n < 0:
            return self.inverse() ** (-n)
        # exact repetition; reduction happens once at construction
        return FreeWord(self.letters * n)

    def conj(self, by: "FreeWord") -> "FreeWord":
        return by.inverse() * self * by

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __repr__(self):
        return f"FreeWord({list(self.letters)})"

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def exponent_sums(self, ngens: int) -> list[int]:
        sums = [0] * ngens
        for g, e in self.letters:
            sums[g] += e
        return sums

    def to_str(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return " ".join(parts)


def free_reduce_letters(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out[-1][1]
            out.pop()
            if e:
                out.append((g, e))
        else:
            out.append((g, e))
    return tuple(out)


def free_reduce(w: FreeWord) -> FreeWord:
    """Freely reduced form of ``w`` (words are kept reduced, so this is a copy)."""
    return FreeWord(w.letters)


def commutator(*ws: FreeWord) -> FreeWord:
    """Left-normed commutator ``[w1, w2, ..., wr]``."""
    if len(ws) < 2:
        raise ValueError("a commutator needs at least two entries")
    acc = ws[0]
    for w in ws[1:]:
        acc = acc.inverse() * w.inverse() * acc * w
    return acc


class GroupOps:
    """Minimal target-group interface used by :func:`evaluate_word`.

    Subclasses provide ``identity``, ``mul`` and ``inv``; ``pow`` defaults to
    binary exponentiation.
    """

    def identity(self):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def pow(self, x, n: int):
        if n < 0:
            x, n = self.inv(x), -n
        result = self.identity()
        while n:
            if n & 1:
                result = self.mul(result, x)
            n >>= 1
            if n:
                x = self.mul(x, x)
        return result

    def comm(self, x, y):
        return self.mul(self.inv(x), self.mul(self.inv(y), self.mul(x, y)))

    def conjugate(self, x, y):
        """``x^y = y^-1 x y``."""
        return self.mul(self.inv(y), self.mul(x, y))


def evaluate_word(w: FreeWord, interp: Mapping[int, object] | Sequence | Callable[[int], object], target: GroupOps):
    """Image of ``w`` under the homomorphism given by ``interp`` on generators."""
    if callable(interp) and not isinstance(interp, (Mapping, Sequence)):
        lookup = interp
    else:
        def lookup(g):
            try:
                return interp[g]
            except (KeyError, IndexError):
                raise KeyError(f"no image bound for generator {g}") from None
    result = target.identity()
    for g, e in w.letters:
        result = target.mul(result, target.pow(lookup(g), e))
    return result
