"""Nilpotent quotients of finitely presented groups.

The class-``c`` quotient is built one lower-central layer at a time.  Given
the class-``c`` quotient ``Q`` with pc-generators ``g_k``, the next layer is
found in an extension ``Q*`` where every power and conjugate relation of
``Q`` (and the image of every defining generator) acquires its own free
central tail.  Three families of linear conditions on the tails cut ``Q*``
down to the class-``c+1`` quotient:

* the overlap (consistency) tests of the extended presentation,
* the relators of the input presentation evaluated on the generator images,
* for every old generator, agreement with its *recipe*: the expression that
  built it from the input generators.

Recipes replace the classical choice of defining commutators.  Every
generator of a new layer is a product of tails, and each tail is itself
``lhs * rhs^-1`` of an old relation, so every pc-generator has an explicit
formula in the input generators that can be re-evaluated in any extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import AbelianInvariants, Lattice, smith_normal_form
from .pc import PcError, PcPresentation, consistency_checks, evaluate_plan, is_consistent
from .presentation import FinitePresentation
from .words import evaluate_word


@dataclass
class NqResult:
    quotient: PcPresentation
    images: list
    layer_invariants: list
    achieved_class: int
    recipes: list = field(default_factory=list, repr=False)

    @property
    def layer_ranks(self):
        return [inv.free_rank for inv in self.layer_invariants]

    def to_dict(self):
        return {
            "order": self.quotient.order(),
            "hirsch_length": self.quotient.hirsch_length,
            "achieved_class": self.achieved_class,
            "layers": [inv.to_dict() for inv in self.layer_invariants],
            "images": [self.quotient.normal_form_str(v) for v in self.images],
        }


def _word(ops, vals, vec):
    acc = ops.identity()
    for k, e in enumerate(vec):
        if e:
            acc = ops.mul(acc, ops.pow(vals[k], e))
    return acc


def _tail_value(ops, tail, vals, xi):
    kind = tail[0]
    if kind == "lift":
        _, i, v = tail
        lhs = xi[i]
        rhs = v
    elif kind == "power":
        _, i, m, rhs = tail
        lhs = ops.pow(vals[i], m)
    elif kind == "conj":
        _, j, i, rhs = tail
        lhs = ops.conjugate(vals[j], vals[i])
    else:
        _, j, i, rhs = tail
        lhs = ops.conjugate(vals[j], ops.inv(vals[i]))
    return ops.mul(ops.inv(_word(ops, vals, rhs)), lhs)


def evaluate_recipes(ops, recipes, xi):
    """Values of the pc-generators in ``ops`` given images ``xi`` of the input generators."""
    vals = []
    cache = {}
    for recipe in recipes:
        acc = ops.identity()
        for tail, coeff in recipe:
            key = id(tail)
            if key not in cache:
                cache[key] = _tail_value(ops, tail, vals, xi)
            acc = ops.mul(acc, ops.pow(cache[key], coeff))
        vals.append(acc)
    return vals


def _extend(vec, n_new, values=None):
    out = list(vec) + [0] * n_new
    if values:
        for k, e in values.items():
            out[len(vec) + k] = e
    return tuple(out)


def _tails(Q: PcPresentation, c: int, images):
    """Tail descriptors for the extension of ``Q`` by a weight ``c+1`` layer."""
    n = Q.n
    tails = []
    for i, v in enumerate(images):
        tails.append(("lift", i, tuple(v)))
    for i in range(n):
        m = Q.orders[i]
        if m is not None:
            tails.append(("power", i, m, Q.power.get(i, (0,) * n)))
    for i in range(n):
        for j in range(i + 1, n):
            if Q.weights[i] + Q.weights[j] > c + 1:
                continue
            unit = tuple(1 if k == j else 0 for k in range(n))
            tails.append(("conj", j, i, Q.conj.get((j, i), unit)))
            if Q.orders[i] is None:
                tails.append(("conj_inv", j, i, Q.conj_inv.get((j, i), unit)))
    return tails


def _extension(Q: PcPresentation, c: int, tails):
    """``Q*``: the relations of ``Q`` with a free central generator added to each."""
    n, m = Q.n, len(tails)
    power = {i: _extend(v, m) for i, v in Q.power.items()}
    conj = {key: _extend(v, m) for key, v in Q.conj.items()}
    conj_inv = {key: _extend(v, m) for key, v in Q.conj_inv.items()}
    for t, tail in enumerate(tails):
        kind = tail[0]
        if kind == "power":
            power[tail[1]] = _extend(tail[3], m, {t: 1})
        elif kind == "conj":
            conj[(tail[1], tail[2])] = _extend(tail[3], m, {t: 1})
        elif kind == "conj_inv":
            conj_inv[(tail[1], tail[2])] = _extend(tail[3], m, {t: 1})
    names = Q.names + [f"_t{t}" for t in range(m)]
    return PcPresentation(names, Q.orders + [None] * m, Q.weights + [c + 1] * m,
                          power, conj, conj_inv, Q.prime, Q.name)


def _check_needed(label, weights, c):
    if label[0] == "assoc":
        _, k, j, i = label[:4]
        return weights[i] + weights[j] + weights[k] <= c + 1
    return True


def _tail_relations(P: FinitePresentation, Q, c, images, recipes, tails, prune=True):
    n = Q.n
    E = _extension(Q, c, tails)
    rows = []

    def tail_part(vec, expect):
        if tuple(vec[:n]) != tuple(expect):
            raise PcError("quotient presentation is inconsistent")
        return list(vec[n:])

    # overlaps involving a (central, free) tail generator hold trivially
    for label, lhs, rhs in consistency_checks(Q):
        if prune and not _check_needed(label, Q.weights, c):
            continue
        a = evaluate_plan(E, lhs)
        b = evaluate_plan(E, rhs)
        ra = tail_part(a, b[:n])
        rows.append([y - x for x, y in zip(ra, b[n:])])

    xi = [E.collect([(k, e) for k, e in enumerate(v) if e] + [(n + t, 1)])
          for t, v in enumerate(images)]
    vals = evaluate_recipes(E, recipes, xi)
    for k, val in enumerate(vals):
        rows.append(tail_part(val, tuple(1 if q == k else 0 for q in range(n))))
    for r in P.relators:
        rows.append(tail_part(evaluate_word(r, xi, E), (0,) * n))
    return rows


def _reduce_rows(rows, m):
    lat = Lattice(m)
    for r in rows:
        if any(r):
            lat.add(r)
    return [list(b) for b in lat.basis]


def _next_layer(P, Q, c, images, recipes, prune=True):
    tails = _tails(Q, c, images)
    m = len(tails)
    basis = _reduce_rows(_tail_relations(P, Q, c, images, recipes, tails, prune), m)
    if basis:
        sf = smith_normal_form(basis, transforms=True, inverse=True)
        diag = sf.diagonal + [0] * (m - len(sf.diagonal))
        Qm, Qinv = sf.Q, sf.Qinv
    else:
        diag = [0] * m
        Qm = Qinv = [[1 if a == b else 0 for b in range(m)] for a in range(m)]
    keep = [j for j in range(m) if diag[j] != 1]
    orders = [diag[j] if diag[j] else None for j in keep]

    def coords(t):
        out = {}
        for pos, j in enumerate(keep):
            e = Qm[t][j]
            if orders[pos] is not None:
                e %= orders[pos]
            if e:
                out[pos] = e
        return out

    r = len(keep)
    n = Q.n
    power = {i: _extend(v, r) for i, v in Q.power.items()}
    conj = {key: _extend(v, r) for key, v in Q.conj.items()}
    conj_inv = {key: _extend(v, r) for key, v in Q.conj_inv.items()}
    new_images = list(images)
    for t, tail in enumerate(tails):
        kind = tail[0]
        if kind == "lift":
            new_images[tail[1]] = _extend(tail[2], r, coords(t))
        elif kind == "power":
            vec = _extend(tail[3], r, coords(t))
            if any(vec):
                power[tail[1]] = vec
            else:
                power.pop(tail[1], None)
        else:
            table = conj if kind == "conj" else conj_inv
            table[(tail[1], tail[2])] = _extend(tail[3], r, coords(t))
    names = Q.names + [f"g{n + k + 1}" for k in range(r)]
    new_Q = PcPresentation(names, Q.orders + orders, Q.weights + [c + 1] * r,
                           power, conj, conj_inv, Q.prime, Q.name)
    new_recipes = list(recipes)
    for j in keep:
        new_recipes.append([(tails[t], Qinv[j][t]) for t in range(m) if Qinv[j][t]])
    torsion = tuple(sorted(o for o in orders if o is not None))
    inv = AbelianInvariants(torsion, sum(o is None for o in orders))
    return new_Q, new_images, new_recipes, inv


def nilpotent_quotient(P: FinitePresentation, c: int, prune: bool = True) -> NqResult:
    """The largest quotient of ``P`` of nilpotency class at most ``c``."""
    if c < 1:
        raise ValueError("class bound must be at least 1")
    Q = PcPresentation([], [], [], prime=P.prime, name=P.name)
    images = [() for _ in P.generators]
    recipes = []
    layers = []
    achieved = 0
    for level in range(c):
        new_Q, new_images, new_recipes, inv = _next_layer(P, Q, level, images, recipes, prune)
        if new_Q.n == Q.n:
            break
        Q, images, recipes = new_Q, new_images, new_recipes
        layers.append(inv)
        achieved = level + 1
    return NqResult(Q, [tuple(v) for v in images], layers, achieved, recipes)


def quotient_lcs_check(r: NqResult):
    """Recompute the layers from the lower central series of the quotient.

    Returns the recomputed list of layer invariants; raises ``PcError`` when
    it disagrees with the layers recorded during construction.
    """
    from .structure import lower_central_series

    series = lower_central_series(r.quotient)
    layers = series.layers
    if list(layers) != list(r.layer_invariants):
        raise PcError(f"lower central layers {layers} disagree with quotient layers {r.layer_invariants}")
    return layers


def verify_quotient(P: FinitePresentation, r: NqResult) -> bool:
    """Relators vanish on the images and the presentation is consistent."""
    Q = r.quotient
    ident = Q.identity()
    if any(evaluate_word(w, r.images, Q) != ident for w in P.relators):
        return False
    return is_consistent(Q).consistent
