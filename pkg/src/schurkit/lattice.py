"""Exact integer linear algebra: Smith/Hermite forms, lattices, integer systems.

Dense matrices are lists of rows of Python ints.  Nothing here touches floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    if a < 0:
        return -x, -y, -a
    return x, y, a


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    inner = len(B)
    if not cols:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] if inner else [0] * len(cols) for row in A]


def determinant(A) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    D: list
    P: list
    Q: list
    Qinv: list | None = None

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(A, transforms: bool = True, inverse: bool = False) -> SmithForm:
    """Smith normal form ``P*A*Q = D`` with unimodular ``P``, ``Q``.

    Pivoting takes the entry of least absolute value; rows and columns are
    reduced by division with remainder until the pivot divides its row, its
    column and the remaining block.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, r)) for r in A]
    P = identity(m) if transforms else None
    Q = identity(n) if transforms else None
    Qi = identity(n) if transforms and inverse else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if P is not None:
            P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        if Q is not None:
            for r in Q:
                r[i], r[j] = r[j], r[i]
        if Qi is not None:
            Qi[i], Qi[j] = Qi[j], Qi[i]

    def add_row(dst, src, c):  # row dst += c * row src
        rd, rs = D[dst], D[src]
        for k in range(n):
            if rs[k]:
                rd[k] += c * rs[k]
        if P is not None:
            pd, ps = P[dst], P[src]
            for k in range(m):
                if ps[k]:
                    pd[k] += c * ps[k]

    def add_col(dst, src, c):  # col dst += c * col src
        for r in D:
            if r[src]:
                r[dst] += c * r[src]
        if Q is not None:
            for r in Q:
                if r[src]:
                    r[dst] += c * r[src]
        if Qi is not None:  # inverse column operation is a row operation on Q^-1
            qs, qd = Qi[src], Qi[dst]
            for k in range(n):
                if qd[k]:
                    qs[k] -= c * qd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // piv
                    add_row(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // piv
                    add_col(j, t, -q)
                    if D[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cand = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                cand += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            if P is not None:
                P[t] = [-v for v in P[t]]
        t += 1
    return SmithForm(D, P, Q, Qi)


def smith_diagonal(A) -> list[int]:
    """Nonzero Smith invariants of ``A`` (ones included), in divisibility order."""
    if not A or not A[0]:
        return []
    sf = smith_normal_form(A, transforms=False)
    return [d for d in sf.diagonal if d]


def rank(A) -> int:
    lat = Lattice(len(A[0]) if A else 0)
    for r in A:
        lat.add(r)
    return len(lat.basis)


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank`` plus cyclic factors ``Z/d_i`` with ``d_1 | d_2 | ...``."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion invariants must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariants {self.torsion} do not form a divisibility chain")

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    @property
    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def to_dict(self):
        return {"torsion": list(self.torsion), "free_rank": self.free_rank}


def invariants_from_diagonal(diag, ncols: int) -> AbelianInvariants:
    nz = [abs(d) for d in diag if d]
    return AbelianInvariants(tuple(sorted(d for d in nz if d != 1)), ncols - len(nz))


def abelian_invariants(relations, ncols: int | None = None) -> AbelianInvariants:
    """Invariants of ``Z^n / rowspace(relations)``."""
    if ncols is None:
        ncols = len(relations[0]) if relations else 0
    rows = [list(r) for r in relations if any(r)]
    if not rows:
        return AbelianInvariants((), ncols)
    return invariants_from_diagonal(smith_diagonal(rows), ncols)


class Lattice:
    """Integer row lattice kept in echelon form (strictly increasing pivots).

    ``add`` inserts a vector with gcd-based row operations, so the basis spans
    exactly the lattice generated by everything added.  Off-pivot entries are
    not reduced.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.basis: list[list[int]] = []
        self.pivots: list[int] = []

    def copy(self) -> "Lattice":
        other = Lattice(self.dim)
        other.basis = [list(r) for r in self.basis]
        other.pivots = list(self.pivots)
        return other

    def _find(self, col):
        # binary search over sorted pivots
        lo, hi = 0, len(self.pivots)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.pivots[mid] < col:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def add(self, vec) -> bool:
        """Add ``vec``; return True if the lattice changed."""
        v = list(vec)
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        changed = False
        j = 0
        while True:
            while j < self.dim and v[j] == 0:
                j += 1
            if j == self.dim:
                return changed
            k = self._find(j)
            if k == len(self.pivots) or self.pivots[k] != j:
                if v[j] < 0:
                    v = [-x for x in v]
                self.basis.insert(k, v)
                self.pivots.insert(k, j)
                return True
            row = self.basis[k]
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                for jj in range(j, self.dim):
                    if row[jj]:
                        v[jj] -= q * row[jj]
            else:
                x, y, g = xgcd(a, b)
                ag, bg = a // g, b // g
                new = [x * r + y * s for r, s in zip(row, v)]
                v = [ag * s - bg * r for r, s in zip(row, v)]
                self.basis[k] = new
                changed = True
            j += 1

    def reduce(self, vec) -> list[int]:
        """Remainder of ``vec`` after subtracting lattice vectors pivot by pivot."""
        v = list(vec)
        for row, j in zip(self.basis, self.pivots):
            if v[j]:
                q = v[j] // row[j]
                if q:
                    for jj in range(j, self.dim):
                        if row[jj]:
                            v[jj] -= q * row[jj]
        return v

    def __contains__(self, vec) -> bool:
        return not any(self.reduce(vec))

    def coordinates(self, vec) -> list[int] | None:
        """Integer ``y`` with ``y * basis == vec``, or None when ``vec`` is not in the lattice."""
        v = list(vec)
        y = []
        for row, j in zip(self.basis, self.pivots):
            if any(v[:j]):
                return None
            q, r = divmod(v[j], row[j])
            if r:
                return None
            y.append(q)
            if q:
                for jj in range(j, self.dim):
                    if row[jj]:
                        v[jj] -= q * row[jj]
        if any(v):
            return None
        return y

    def __len__(self):
        return len(self.basis)


def hermite_normal_form(A) -> list[list[int]]:
    """Row-style Hermite normal form (nonzero rows only)."""
    ncols = len(A[0]) if A else 0
    lat = Lattice(ncols)
    for r in A:
        lat.add(r)
    H = [list(r) for r in lat.basis]
    # reduce entries above pivots into [0, pivot)
    for i in range(len(H)):
        j = lat.pivots[i]
        for k in range(i):
            q = H[k][j] // H[i][j]
            if q:
                H[k] = [a - q * b for a, b in zip(H[k], H[i])]
    return H


@dataclass
class IntegerSolution:
    particular: list[int]
    homogeneous: list[list[int]]
    moduli: list[int | None] = field(default_factory=list)

    def satisfies(self, A, b, x) -> bool:
        return _check_congruences(A, b, self.moduli, x)


def _check_congruences(A, b, moduli, x) -> bool:
    for row, rhs, m in zip(A, b, moduli):
        lhs = sum(a * xi for a, xi in zip(row, x))
        if m is None or m == 0:
            if lhs != rhs:
                return False
        elif (lhs - rhs) % m:
            return False
    return True


def solve_integer_system(A, b, moduli=None) -> IntegerSolution | None:
    """Solve ``A x = b`` where row ``i`` holds modulo ``moduli[i]`` (None: over Z).

    Returns a particular solution and a basis of the homogeneous solutions
    (reduced to echelon form), or None if there is no integer solution.
    """
    m = len(A)
    if len(b) != m:
        raise ValueError("dimension mismatch between A and b")
    n = len(A[0]) if m else 0
    if any(len(r) != n for r in A):
        raise ValueError("ragged matrix")
    if moduli is None:
        moduli = [None] * m
    if len(moduli) != m:
        raise ValueError("dimension mismatch between A and moduli")
    slack = [i for i, md in enumerate(moduli) if md]
    M = [list(A[i]) + [moduli[i] if i == s else 0 for s in slack] for i in range(m)]
    N = n + len(slack)
    if m == 0:
        return IntegerSolution([0] * n, identity(n), list(moduli))
    sf = smith_normal_form(M)
    Pb = [sum(p * bb for p, bb in zip(row, b)) for row in sf.P]
    y = [0] * N
    r = 0
    for i in range(min(m, N)):
        d = sf.D[i][i]
        if d == 0:
            break
        if Pb[i] % d:
            return None
        y[i] = Pb[i] // d
        r += 1
    if any(Pb[i] for i in range(r, m)):
        return None
    z = [sum(q * yy for q, yy in zip(row, y)) for row in sf.Q]
    kernel = [[sf.Q[row][col] for row in range(n)] for col in range(r, N)]
    hom = Lattice(n)
    for v in kernel:
        hom.add(v)
    # finite moduli: shifts by the modulus are homogeneous too (already in kernel via slack)
    basis = hermite_normal_form(hom.basis) if hom.basis else []
    x = z[:n]
    red = Lattice(n)
    for v in basis:
        red.add(v)
    x = red.reduce(x)
    return IntegerSolution(x, basis, list(moduli))


def local_elementary_divisors(rows, ncols: int, p: int, precision: int):
    """Elementary divisors of a sparse integer matrix over ``Z/p^precision``.

    ``rows`` is a list of ``{column: value}`` dicts (consumed).  Returns
    ``(valuations, rank)``: one valuation ``v < precision`` per pivot, so the
    cokernel torsion at ``p`` is the sum of ``Z/p^v`` over ``v >= 1`` provided
    ``rank`` matches the rational rank.  Pivots of valuation ``>= precision``
    are invisible; callers compare ``rank`` with the expected rank.
    """
    mod = p ** precision
    level = 0
    work: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for idx, r in enumerate(rows):
        rr = {c: v % mod for c, v in r.items() if v % mod}
        if rr:
            work[idx] = rr
            for c in rr:
                cols.setdefault(c, set()).add(idx)
    valuations: list[int] = []
    while work and mod > 1:
        progress = True
        while progress:
            progress = False
            # Markowitz-style: short rows first, unit pivot in the sparsest column
            for ridx in sorted(work, key=lambda k: len(work[k])):
                row = work.get(ridx)
                if row is None:
                    continue
                units = [c for c, v in row.items() if v % p]
                if not units:
                    continue
                col = min(units, key=lambda c: len(cols[c]))
                piv = row[col]
                inv = pow(piv, -1, mod)
                del work[ridx]
                for c in row:
                    cols[c].discard(ridx)
                for other in list(cols[col]):
                    orow = work[other]
                    f = (orow[col] * inv) % mod
                    for c, v in row.items():
                        nv = (orow.get(c, 0) - f * v) % mod
                        if nv:
                            if c not in orow:
                                cols[c].add(other)
                            orow[c] = nv
                        elif c in orow:
                            del orow[c]
                            cols[c].discard(other)
                    if not orow:
                        del work[other]
                del cols[col]
                valuations.append(level)
                progress = True
        if not work:
            break
        # every remaining entry is divisible by p
        mod //= p
        level += 1
        for ridx in list(work):
            row = work[ridx]
            nr = {}
            for c, v in row.items():
                nv = (v // p) % mod if mod > 1 else 0
                if nv:
                    nr[c] = nv
                else:
                    cols[c].discard(ridx)
            if nr:
                work[ridx] = nr
            else:
                del work[ridx]
    return valuations, len(valuations)
