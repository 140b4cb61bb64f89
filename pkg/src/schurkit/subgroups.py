"""Subgroups of pc-groups via induced generating sequences.

A :class:`PcSubgroup` keeps one generator per leading depth.  Adding an
element sifts it through the table; a nontrivial residue is inserted (with
gcd recombination when leading exponents clash), and closure under powers
and commutators keeps the table an induced sequence of the subgroup it
spans.
"""

from __future__ import annotations

import itertools
from math import gcd, prod

from .lattice import xgcd
from .pc import PcError, PcPresentation


class UnsupportedSubgroup(PcError):
    pass


def depth(x):
    for k, e in enumerate(x):
        if e:
            return k
    return len(x)


class PcSubgroup:
    def __init__(self, pcp: PcPresentation, gens=(), normal=False, close=True):
        self.pcp = pcp
        self.table: dict[int, tuple] = {}
        for g in gens:
            self._insert(tuple(g))
        if close:
            self._close(normal)

    # -- construction -------------------------------------------------

    def _normalize(self, x):
        d = depth(x)
        m = self.pcp.orders[d]
        b = x[d]
        if m is None:
            return x if b > 0 else self.pcp.inv(x)
        g = gcd(b, m)
        if b == g:
            return x
        u, _, _ = xgcd(b, m)
        return self.pcp.pow(x, u % m)

    def sift(self, x):
        """Residue of ``x`` after right division by table elements."""
        pcp = self.pcp
        n = pcp.n
        d = depth(x)
        while d < n:
            h = self.table.get(d)
            if h is None:
                return x
            a, b = h[d], x[d]
            if b % a:
                return x
            x = pcp.mul(x, pcp.pow(h, -(b // a)))
            d = depth(x)
        return x

    def _insert(self, x) -> bool:
        pcp = self.pcp
        changed = False
        pending = [x]
        while pending:
            r = self.sift(pending.pop())
            d = depth(r)
            if d == pcp.n:
                continue
            changed = True
            h = self.table.get(d)
            if h is None:
                self.table[d] = self._normalize(r)
                continue
            a, b = h[d], r[d]
            m = pcp.orders[d]
            if m is not None:
                new = self._normalize(r)
            else:
                u, v, _ = xgcd(a, b)
                new = self._normalize(pcp.mul(pcp.pow(h, u), pcp.pow(r, v)))
            self.table[d] = new
            pending.append(h)
            pending.append(r)
        return changed

    def _close(self, normal=False, conjugators=None):
        pcp = self.pcp
        if normal and conjugators is None:
            conjugators = pcp.gens()
            conjugators += [pcp.inv(g) for k, g in enumerate(conjugators) if pcp.orders[k] is None]
        done_pairs = set()
        done_single = set()
        while True:
            changed = False
            gens = list(self.table.values())
            for h in gens:
                if h not in done_single:
                    done_single.add(h)
                    d = depth(h)
                    m = pcp.orders[d]
                    if m is not None:
                        changed |= self._insert(pcp.pow(h, m // h[d]))
                    if conjugators:
                        for c in conjugators:
                            changed |= self._insert(pcp.conjugate(h, c))
            for h, k in itertools.combinations(gens, 2):
                if (h, k) not in done_pairs:
                    done_pairs.add((h, k))
                    changed |= self._insert(pcp.comm(h, k))
            if not changed and all(h in done_single for h in self.table.values()):
                break

    def add(self, *xs, normal=False):
        changed = False
        for x in xs:
            changed |= self._insert(tuple(x))
        if changed:
            self._close(normal)
        return changed

    # -- queries ------------------------------------------------------

    @property
    def gens(self):
        return [self.table[d] for d in sorted(self.table)]

    @property
    def depths(self):
        return sorted(self.table)

    def relative_orders(self):
        out = []
        for d in self.depths:
            m = self.pcp.orders[d]
            out.append(None if m is None else m // self.table[d][d])
        return out

    def order(self):
        rel = self.relative_orders()
        if any(r is None for r in rel):
            return None
        return prod(rel)

    def is_trivial(self):
        return not self.table

    def __contains__(self, x):
        return not any(self.sift(tuple(x)))

    def contains_subgroup(self, other: "PcSubgroup") -> bool:
        return all(g in self for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, PcSubgroup):
            return NotImplemented
        return self.order() == other.order() and self.contains_subgroup(other) and other.contains_subgroup(self)

    def __le__(self, other):
        return other.contains_subgroup(self)

    def coordinates(self, x):
        """Exponents ``e`` with ``x = h_1^e_1 ... h_r^e_r`` (left division)."""
        pcp = self.pcp
        x = tuple(x)
        out = []
        for d in self.depths:
            h = self.table[d]
            a = h[d]
            if x[:d] != (0,) * d:
                raise PcError("element is not in the subgroup")
            e, r = divmod(x[d], a)
            if r:
                raise PcError("element is not in the subgroup")
            out.append(e)
            if e:
                x = pcp.mul(pcp.pow(h, -e), x)
        if any(x):
            raise PcError("element is not in the subgroup")
        return tuple(out)

    def element(self, coords):
        pcp = self.pcp
        x = pcp.identity()
        for h, e in zip(self.gens, coords):
            if e:
                x = pcp.mul(x, pcp.pow(h, e))
        return x

    def elements(self):
        rel = self.relative_orders()
        if any(r is None for r in rel):
            raise PcError("cannot enumerate an infinite subgroup")
        for coords in itertools.product(*(range(r) for r in rel)):
            yield self.element(coords)

    def is_normal(self, in_group=None) -> bool:
        pcp = self.pcp
        conj = pcp.gens() if in_group is None else list(in_group.gens)
        if in_group is None:
            conj += [pcp.inv(g) for k, g in enumerate(pcp.gens()) if pcp.orders[k] is None]
        return all(pcp.conjugate(h, c) in self for h in self.gens for c in conj)

    def presentation(self, name=None):
        """Pc-presentation of the subgroup on its induced generators."""
        pcp = self.pcp
        gens = self.gens
        rel = self.relative_orders()
        names = [f"h{k + 1}" for k in range(len(gens))]
        weights = [pcp.weights[d] for d in self.depths]
        power, conj, conj_inv = {}, {}, {}
        for i, h in enumerate(gens):
            if rel[i] is not None:
                power[i] = self.coordinates(pcp.pow(h, rel[i]))
            for j in range(i + 1, len(gens)):
                conj[(j, i)] = self.coordinates(pcp.conjugate(gens[j], h))
                if rel[i] is None:
                    conj_inv[(j, i)] = self.coordinates(pcp.conjugate(gens[j], pcp.inv(h)))
        return PcPresentation(names, rel, weights, power, conj, conj_inv, pcp.prime,
                              name or f"subgroup of {pcp.name}")

    def __repr__(self):
        return f"PcSubgroup(order={self.order()}, depths={self.depths})"


def subgroup_span(pcp, S) -> PcSubgroup:
    return PcSubgroup(pcp, S)


def normal_closure(pcp, S) -> PcSubgroup:
    return PcSubgroup(pcp, S, normal=True)


def whole_group(pcp) -> PcSubgroup:
    return PcSubgroup(pcp, pcp.gens())


def trivial_subgroup(pcp) -> PcSubgroup:
    return PcSubgroup(pcp, ())


def membership(pcp, x, H: PcSubgroup) -> bool:
    return x in H


def join(*subgroups: PcSubgroup, normal=False) -> PcSubgroup:
    pcp = subgroups[0].pcp
    return PcSubgroup(pcp, [g for H in subgroups for g in H.gens], normal=normal)


def commutator_subgroup(H: PcSubgroup, K: PcSubgroup) -> PcSubgroup:
    """``[H, K]`` for subgroups normal in the whole group."""
    pcp = H.pcp
    return PcSubgroup(pcp, [pcp.comm(h, k) for h in H.gens for k in K.gens], normal=True)


def derived_subgroup(H: PcSubgroup) -> PcSubgroup:
    """``H'`` for an arbitrary subgroup: commutators closed under conjugation by ``H``."""
    pcp = H.pcp
    D = PcSubgroup(pcp, [pcp.comm(a, b) for a, b in itertools.combinations(H.gens, 2)], close=False)
    conj = list(H.gens) + [pcp.inv(h) for h in H.gens]
    D._close(normal=True, conjugators=conj)
    return D


class Quotient:
    """``G/N`` with its pc-presentation and the projection map."""

    def __init__(self, pcp: PcPresentation, N: PcSubgroup, check_normal=True):
        if check_normal and not N.is_normal():
            raise PcError("subgroup is not normal")
        self.parent = pcp
        self.N = N
        keep, orders = [], []
        for d in range(pcp.n):
            h = N.table.get(d)
            a = pcp.orders[d] if h is None else h[d]
            if a != 1:
                keep.append(d)
                orders.append(a)
        self.keep = keep
        pos = {d: k for k, d in enumerate(keep)}
        power, conj, conj_inv = {}, {}, {}
        for k, d in enumerate(keep):
            if orders[k] is not None:
                power[k] = self.project(pcp.collect([(d, orders[k])]))
            for l in range(k + 1, len(keep)):
                j = keep[l]
                conj[(l, k)] = self.project(pcp.conjugate(pcp.gen(j), pcp.gen(d)))
                if orders[k] is None:
                    conj_inv[(l, k)] = self.project(pcp.conjugate(pcp.gen(j), pcp.inv(pcp.gen(d))))
        self.pcp = PcPresentation([pcp.names[d] for d in keep], orders, [pcp.weights[d] for d in keep],
                                  power, conj, conj_inv, pcp.prime, f"{pcp.name}/N" if pcp.name else "")
        self._pos = pos

    def canonical(self, x):
        pcp = self.parent
        x = tuple(x)
        for d in range(pcp.n):
            h = self.N.table.get(d)
            if h is None or not x[d]:
                continue
            q = x[d] // h[d]
            if q:
                x = pcp.mul(x, pcp.pow(h, -q))
        return x

    def project(self, x):
        c = self.canonical(x)
        return tuple(c[d] for d in self.keep)

    def lift(self, y):
        pcp = self.parent
        v = [0] * pcp.n
        for k, d in enumerate(self.keep):
            v[d] = y[k]
        return tuple(v)


def quotient(pcp, N: PcSubgroup) -> Quotient:
    return Quotient(pcp, N)
