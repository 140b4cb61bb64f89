"""Weighted polycyclic presentations and collection.

Generators ``g_0 .. g_{k-1}`` carry a relative order (a prime power, or None
for infinite order) and a weight.  Relations are stored as normal-form
exponent vectors:

* ``power[i]``        the value of ``g_i^{m_i}`` (finite ``m_i`` only),
* ``conj[(j, i)]``    the value of ``g_j^{g_i}`` for ``i < j``,
* ``conj_inv[(j, i)]`` the value of ``g_j^{g_i^-1}`` for infinite ``m_i``.

Missing entries mean the trivial relation.  Elements are tuples of
exponents in collected form.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .presentation import (PresentationError, PresentationSyntaxError, iter_directives,
                           parse_header, parse_relation_list, _check_prime)
from .words import FreeWord, GroupOps


class PcError(ValueError):
    pass


class PcPresentation(GroupOps):
    def __init__(self, names, orders, weights=None, power=None, conj=None, conj_inv=None,
                 prime=3, name=""):
        self.names = list(names)
        self.n = n = len(self.names)
        self.orders = [None if m is None else int(m) for m in orders]
        self.weights = list(weights) if weights is not None else [1] * n
        self.prime = prime
        self.name = name
        if len(self.orders) != n or len(self.weights) != n:
            raise PcError("orders/weights must have one entry per generator")
        for m in self.orders:
            if m is not None and m < 2:
                raise PcError(f"relative order {m} must be at least 2")
        for a, b in zip(self.weights, self.weights[1:]):
            if b < a:
                raise PcError("weights must be nondecreasing")
        self.power = {}
        for i, v in (power or {}).items():
            v = self._vec(v)
            if self.orders[i] is None:
                raise PcError(f"generator {self.names[i]} has infinite order but a power relation")
            if any(v[: i + 1]):
                raise PcError(f"power relation of {self.names[i]} references a generator of index <= {i}")
            if any(v):
                self.power[i] = v
        self.conj = {}
        self.conj_inv = {}
        for table, src, inv in ((self.conj, conj, False), (self.conj_inv, conj_inv, True)):
            for (j, i), v in (src or {}).items():
                v = self._vec(v)
                if not i < j:
                    raise PcError("conjugate relations need i < j")
                if inv and self.orders[i] is not None:
                    raise PcError("inverse conjugates are only stored for infinite generators")
                if any(v[:j]) or v[j] != 1:
                    raise PcError(f"conjugate of {self.names[j]} by {self.names[i]} must be "
                                  f"{self.names[j]} times higher generators")
                if any(v[j + 1:]):
                    table[(j, i)] = v
        self._prepare()

    def _vec(self, v):
        v = tuple(int(x) for x in v)
        if len(v) != self.n:
            raise PcError("relation vector has wrong length")
        for k, e in enumerate(v):
            m = self.orders[k]
            if m is not None and not 0 <= e < m:
                raise PcError(f"relation exponent {e} of {self.names[k]} outside [0, {m})")
        return v

    def _prepare(self):
        n = self.n
        self._pw = [None] * n
        self._pw_inv = [None] * n
        for i, v in self.power.items():
            w = _letters(v)
            self._pw[i] = w
            self._pw_inv[i] = _inverse_letters(w)
        self._cj = [dict() for _ in range(n)]
        self._cj_neg = [dict() for _ in range(n)]
        self._cji = [dict() for _ in range(n)]
        self._cji_neg = [dict() for _ in range(n)]
        for (j, i), v in self.conj.items():
            w = _letters(v)
            self._cj[i][j] = w
            self._cj_neg[i][j] = _inverse_letters(w)
        for (j, i), v in self.conj_inv.items():
            w = _letters(v)
            self._cji[i][j] = w
            self._cji_neg[i][j] = _inverse_letters(w)
        self._nontriv = [sorted(set(self._cj[i]) | set(self._cji[i])) for i in range(n)]
        self._infinite = [m is None for m in self.orders]

    # ------------------------------------------------------------------
    # group operations

    def identity(self):
        return (0,) * self.n

    def gen(self, i, e=1):
        return self.collect([(i, e)])

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    def collect(self, letters, start=None):
        """Normal form of ``start * letters`` (``start`` defaults to the identity)."""
        vec = list(start) if start is not None else [0] * self.n
        self._collect(vec, list(letters))
        return tuple(vec)

    def _collect(self, vec, letters):
        orders = self.orders
        n = self.n
        stack = letters[::-1]
        pop, push, extend = stack.pop, stack.append, stack.extend
        while stack:
            i, e = pop()
            if e == 0:
                continue
            m = orders[i]
            if m is not None and e < 0:
                q, r = divmod(e, m)
                if q:
                    extend(self._pw_inv[i][::-1] * (-q) if self._pw[i] else ())
                if r:
                    push((i, r))
                continue
            nz = [j for j in range(i + 1, n) if vec[j]]
            if not nz:
                v = vec[i] + e
                if m is not None:
                    q, v = divmod(v, m)
                    vec[i] = v
                    if q and self._pw[i]:
                        extend(self._pw[i][::-1] * q)
                else:
                    vec[i] = v
                continue
            nt = self._nontriv[i]
            if m is None or 0 <= vec[i] + e < m:
                if not any(vec[j] for j in nt):
                    vec[i] += e
                    continue
            # general step: move one g_i^{+-1} across the tail
            s = 1 if e > 0 else -1
            tail = [(j, vec[j]) for j in nz]
            for j in nz:
                vec[j] = 0
            if e != s:
                push((i, e - s))
            if s > 0:
                cj, cjn = self._cj[i], self._cj_neg[i]
            else:
                cj, cjn = self._cji[i], self._cji_neg[i]
            conj_letters = []
            for j, t in tail:
                w = cj.get(j)
                if w is None:
                    conj_letters.append((j, t))
                elif t > 0:
                    conj_letters.extend(w * t)
                else:
                    conj_letters.extend(cjn[j] * (-t))
            extend(conj_letters[::-1])
            v = vec[i] + s
            if m is not None and v == m:
                vec[i] = 0
                if self._pw[i]:
                    extend(self._pw[i][::-1])
            else:
                vec[i] = v

    def mul(self, x, y):
        vec = list(x)
        self._collect(vec, _letters(y))
        return tuple(vec)

    def inv(self, x):
        return self.collect(_inverse_letters(_letters(x)))

    def comm(self, x, y):
        """``[x, y] = x^-1 y^-1 x y``."""
        return self.collect(_inverse_letters(_letters(x)) + _inverse_letters(_letters(y))
                            + _letters(x) + _letters(y))

    def conjugate(self, x, y):
        """``x^y = y^-1 x y``."""
        return self.collect(_inverse_letters(_letters(y)) + _letters(x) + _letters(y))

    def power_of(self, x, n):
        return self.pow(x, n)

    def is_identity(self, x):
        return not any(x)

    def element_order(self, x):
        """Order of ``x`` (a power of the prime), or None for infinite order."""
        if any(x[k] and self.orders[k] is None for k in range(self.n)):
            # leading infinite coordinate forces infinite order
            lead = next(k for k in range(self.n) if x[k])
            if self.orders[lead] is None:
                return None
        order = 1
        y = x
        p = self.prime
        limit = self.finite_order_bound()
        while any(y):
            y = self.pow(y, p)
            order *= p
            if limit is not None and order > limit:
                return None
        return order

    def finite_order_bound(self):
        out = 1
        for m in self.orders:
            if m is not None:
                out *= m
        return out

    # ------------------------------------------------------------------
    # structure

    @property
    def hirsch_length(self):
        return sum(1 for m in self.orders if m is None)

    @property
    def is_finite(self):
        return self.hirsch_length == 0

    def order(self):
        """Group order; None when some generator has infinite order."""
        if not self.is_finite:
            return None
        return self.finite_order_bound()

    def group_order(self):
        return {"order": self.order(), "torsion_bound": self.finite_order_bound(),
                "hirsch_length": self.hirsch_length}

    def elements(self):
        if not self.is_finite:
            raise PcError("cannot enumerate an infinite group")
        return (tuple(v) for v in itertools.product(*(range(m) for m in self.orders)))

    def random_element(self, rng: random.Random, spread: int = 5):
        return tuple(rng.randrange(m) if m is not None else rng.randint(-spread, spread)
                     for m in self.orders)

    def word_value(self, w: FreeWord):
        """Collect a free word over the pc generators."""
        return self.collect(list(w.letters))

    def normal_form_str(self, x):
        parts = [f"{self.names[k]}^{e}" for k, e in enumerate(x) if e]
        return " ".join(parts) if parts else "1"

    def with_name(self, name):
        return PcPresentation(self.names, self.orders, self.weights, self.power, self.conj,
                              self.conj_inv, self.prime, name)

    def relation_value(self, kind, j, i=None):
        if kind == "power":
            return self.power.get(j, self.identity())
        base = tuple(int(k == j) for k in range(self.n))
        table = self.conj if kind == "conj" else self.conj_inv
        return table.get((j, i), base)

    def __eq__(self, other):
        if not isinstance(other, PcPresentation):
            return NotImplemented
        return (self.names == other.names and self.orders == other.orders
                and self.weights == other.weights and self.power == other.power
                and self.conj == other.conj and self.conj_inv == other.conj_inv
                and self.prime == other.prime)

    def __repr__(self):
        return f"PcPresentation({self.name or '?'}, n={self.n}, orders={self.orders})"

    def to_finite_presentation(self):
        """The power and conjugate relations read as relators of a finite presentation."""
        from .presentation import FinitePresentation

        def word(v):
            return FreeWord([(k, e) for k, e in enumerate(v) if e])

        rels = []
        for i, m in enumerate(self.orders):
            if m is not None:
                rels.append(FreeWord.gen(i, m) * word(self.power.get(i, self.identity())).inverse())
        for i in range(self.n):
            for j in range(i + 1, self.n):
                lhs = FreeWord.gen(j).conj(FreeWord.gen(i))
                rels.append(lhs * word(self.relation_value("conj", j, i)).inverse())
        return FinitePresentation.from_names(self.names, rels, self.prime, self.name)

    # ------------------------------------------------------------------
    # text format

    def to_text(self):
        lines = []
        if self.name:
            lines.append(f'pcgroup "{self.name}"')
        lines.append(f"prime {self.prime}")
        for k in range(self.n):
            m = "inf" if self.orders[k] is None else str(self.orders[k])
            lines.append(f"generator {self.names[k]} order {m} weight {self.weights[k]}")
        names = self.names
        for i, v in sorted(self.power.items()):
            lines.append(f"relations {names[i]}^{self.orders[i]} = {self.normal_form_str(v)}")
        for (j, i), v in sorted(self.conj.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            lines.append(f"relations {names[j]}^{names[i]} = {self.normal_form_str(v)}")
        for (j, i), v in sorted(self.conj_inv.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            lines.append(f"relations {names[j]}^({names[i]}^-1) = {self.normal_form_str(v)}")
        return "\n".join(lines) + "\n"


def _letters(v):
    return [(k, e) for k, e in enumerate(v) if e]


def _inverse_letters(letters):
    return [(k, -e) for k, e in reversed(letters)]


def letters_of(v):
    return _letters(v)


# ----------------------------------------------------------------------
# consistency

@dataclass
class ConsistencyReport:
    consistent: bool
    witness: tuple | None = None
    lhs: tuple | None = None
    rhs: tuple | None = None

    def __bool__(self):
        return self.consistent


def consistency_checks(pcp: PcPresentation):
    """Yield ``(label, lhs_plan, rhs_plan)`` overlap tests.

    A plan is a list of letter-groups multiplied left to right, where each
    group is first collected on its own (that is what the parentheses in the
    classical overlap conditions mean).
    """
    n = pcp.n
    orders = pcp.orders

    def signs(k):
        return (1, -1) if orders[k] is None else (1,)

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for sk in signs(k):
                    for sj in signs(j):
                        for si in signs(i):
                            a, b, c = [(k, sk)], [(j, sj)], [(i, si)]
                            yield (("assoc", k, j, i, sk, sj, si), [a + b, c], [a, b + c])
    for i in range(n):
        mi = orders[i]
        for j in range(i + 1, n):
            mj = orders[j]
            if mj is not None:
                yield (("power-left", j, i), [[(j, mj)], [(i, 1)]], [[(j, mj - 1)], [(j, 1), (i, 1)]])
            if mi is not None:
                yield (("power-right", j, i), [[(j, 1)], [(i, mi)]], [[(j, 1), (i, 1)], [(i, mi - 1)]])
            else:
                for sj in signs(j):
                    yield (("inverse", j, i, sj), [[(j, sj), (i, -1)], [(i, 1)]], [[(j, sj)]])
                    yield (("inverse", j, i, sj, -1), [[(j, sj), (i, 1)], [(i, -1)]], [[(j, sj)]])
            if mj is None:
                for si in signs(i):
                    yield (("inverse-left", j, i, si), [[(j, -1)], [(j, 1), (i, si)]], [[(i, si)]])
        if mi is not None:
            yield (("power-self", i), [[(i, 1)], [(i, mi)]], [[(i, mi)], [(i, 1)]])


def evaluate_plan(pcp: PcPresentation, plan):
    vec = None
    for group in plan:
        part = pcp.collect(group)
        vec = part if vec is None else pcp.mul(vec, part)
    return vec


def is_consistent(pcp: PcPresentation) -> ConsistencyReport:
    """Run the overlap tests; the first failing test is returned as witness."""
    for label, lhs, rhs in consistency_checks(pcp):
        a = evaluate_plan(pcp, lhs)
        b = evaluate_plan(pcp, rhs)
        if a != b:
            return ConsistencyReport(False, label, a, b)
    return ConsistencyReport(True)


# ----------------------------------------------------------------------
# text format

def parse_pc_presentation(text: str) -> PcPresentation:
    """Parse the pc text format::

        pcgroup "Heisenberg-27"
        prime 3
        generator a order 3 weight 1
        generator b order 3 weight 1
        generator c order 3 weight 2
        relations b^a = b c

    Relations are ``g^m = w`` (power), ``g^h = w`` and ``g^(h^-1) = w``
    (conjugates); right-hand sides are collected words in later generators.
    """
    state = {"name": "", "prime": 3, "expect": {}}
    names, orders, weights = [], [], []
    raw_relations = []
    for key, rest, lineno, col in iter_directives(text):
        if key == "pcgroup":
            key = "group"
        if parse_header(key, rest, lineno, col, state):
            continue
        if key == "generator":
            parts = rest.split()
            if not parts:
                raise PresentationSyntaxError("generator needs a name", lineno, col + 1)
            gname, opts = parts[0], parts[1:]
            if gname in names:
                raise PresentationSyntaxError(f"duplicate generator {gname!r}", lineno, col + 1)
            order, weight = None, 1
            if len(opts) % 2:
                raise PresentationSyntaxError("expected 'order <m|inf>' and 'weight <w>' pairs", lineno, col + 1)
            for k, v in zip(opts[::2], opts[1::2]):
                if k == "order":
                    order = None if v == "inf" else int(v)
                elif k == "weight":
                    weight = int(v)
                else:
                    raise PresentationSyntaxError(f"unknown generator option {k!r}", lineno, col + 1)
            names.append(gname)
            orders.append(order)
            weights.append(weight)
        elif key == "relations":
            raw_relations.append((rest, lineno, col))
        else:
            raise PresentationSyntaxError(f"unknown directive {key!r}", lineno, 1)
    if not names:
        raise PresentationSyntaxError("no generators declared", 1, 1)
    _check_prime(state["prime"])
    base = PcPresentation(names, orders, weights, prime=state["prime"], name=state["name"])
    power, conj, conj_inv = {}, {}, {}
    for rest, lineno, col in raw_relations:
        for lhs, rhs in parse_relation_list(rest, names, lineno, col):
            if rhs is None:
                rhs = FreeWord()
            kind = _classify_lhs(lhs, orders)
            if kind is None:
                raise PresentationSyntaxError("left side must be g^m, g^h or g^(h^-1)", lineno, col + 1)
            value = base.collect(list(rhs.letters))
            if kind[0] == "power":
                power[kind[1]] = value
            elif kind[0] == "conj":
                conj[(kind[1], kind[2])] = value
            else:
                conj_inv[(kind[1], kind[2])] = value
    try:
        return PcPresentation(names, orders, weights, power, conj, conj_inv, state["prime"], state["name"])
    except PcError as exc:
        raise PresentationError(str(exc)) from None


def _classify_lhs(w: FreeWord, orders):
    L = w.letters
    if len(L) == 1:
        g, e = L[0]
        if orders[g] is not None and e == orders[g]:
            return ("power", g)
        return None
    if len(L) == 3:
        (h1, e1), (g, e), (h2, e2) = L
        if e == 1 and h1 == h2 and e1 == -e2 and abs(e1) == 1 and h1 < g:
            return ("conj", g, h1) if e2 == 1 else ("conj_inv", g, h1)
    return None


def load_pc_presentation(path) -> PcPresentation:
    with open(path, encoding="utf-8") as fh:
        return parse_pc_presentation(fh.read())
