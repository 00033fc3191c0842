"""
Exact integer linear algebra
============================

Column-style Hermite normal form, Smith invariants, integer system solving,
saturated kernel bases and lattice comparison.  Everything runs on Python
ints, so there is no overflow at any size.

Matrices are accepted as a sequence of rows, or as any object exposing an
``entries`` attribute holding such rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

Vector = list[int]
Rows = list[list[int]]


def _rows(m) -> Rows:
    m = getattr(m, "entries", m)
    return [list(map(int, r)) for r in m]


def _ncols(m, rows: Rows) -> int:
    if rows:
        return len(rows[0])
    return int(getattr(m, "ncols", 0))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> Rows:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Rows:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v: Sequence[int]) -> Vector:
    return [sum(x * y for x, y in zip(row, v)) for row in _rows(a)]


def determinant(m) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    a = _rows(m)
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class HNFDecomposition(NamedTuple):
    """``M @ U == H`` with ``U`` unimodular.

    ``H`` is lower column-echelon: its first ``rank`` columns carry the
    pivots at strictly increasing rows, pivots are positive, and within a
    pivot row the entries left of the pivot lie in ``[0, pivot)``.  The
    remaining columns of ``H`` are zero, so the matching columns of ``U``
    form a basis of the integer kernel.
    """

    H: Rows
    U: Rows
    rank: int
    pivot_rows: list[int]


def hnf(m) -> HNFDecomposition:
    a = _rows(m)
    nr, nc = len(a), _ncols(m, a)
    u = identity(nc)
    col = 0
    pivot_rows: list[int] = []

    def colop(j: int, k: int, p: int, q: int, r: int, s: int) -> None:
        # (col_j, col_k) <- (p*col_j + r*col_k, q*col_j + s*col_k)
        for mat in (a, u):
            for row in mat:
                x, y = row[j], row[k]
                row[j] = p * x + r * y
                row[k] = q * x + s * y

    for i in range(nr):
        if col >= nc:
            break
        row = a[i]
        for j in range(col + 1, nc):
            if row[j] == 0:
                continue
            x, y = row[col], row[j]
            g, s, t = xgcd(x, y)
            colop(col, j, s, -y // g, t, x // g)
        p = row[col]
        if p == 0:
            continue
        if p < 0:
            for mat in (a, u):
                for r in mat:
                    r[col] = -r[col]
            p = -p
        for k in range(col):
            q = row[k] // p
            if q:
                for mat in (a, u):
                    for r in mat:
                        r[k] -= q * r[col]
        pivot_rows.append(i)
        col += 1
    return HNFDecomposition(a, u, col, pivot_rows)


def smith_invariants(m) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = _rows(m)
    nr, nc = len(a), _ncols(m, a)
    out: list[int] = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                bad = next(
                    (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                dirty = True
            # move the smallest nonzero entry of row/column t to the corner
            cands = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        out.append(abs(a[t][t]))
        t += 1
    return out


def rank(m, method: str = "hnf") -> int:
    if method == "hnf":
        return hnf(m).rank
    if method == "snf":
        return len(smith_invariants(m))
    raise ValueError(f"unknown rank method {method!r}")


def kernel_lattice(m) -> list[Vector]:
    """Saturated basis of {u : M u = 0}; size is ncols - rank."""
    dec = hnf(m)
    nc = len(dec.U)
    return [[dec.U[i][j] for i in range(nc)] for j in range(dec.rank, nc)]


class IntegerSolution(NamedTuple):
    particular: Vector
    kernel: list[Vector]


def solve_integer(m, b: Sequence[int]) -> Optional[IntegerSolution]:
    """Solve M u = b over the integers.

    Returns a particular solution together with a saturated kernel basis, or
    None when no integer solution exists.  The particular solution is checked
    by substitution before it is returned.
    """
    rows = _rows(m)
    b = [int(x) for x in b]
    if len(b) != len(rows):
        raise ValueError("right-hand side length does not match row count")
    dec = hnf(m)
    h, u, r = dec.H, dec.U, dec.rank
    nc = len(u)
    y = [0] * nc
    for k, i in enumerate(dec.pivot_rows):
        rest = b[i] - sum(h[i][j] * y[j] for j in range(k))
        q, rem = divmod(rest, h[i][k])
        if rem:
            return None
        y[k] = q
    if any(sum(h[i][j] * y[j] for j in range(r)) != b[i] for i in range(len(rows))):
        return None
    x = [sum(u[i][j] * y[j] for j in range(r)) for i in range(nc)]
    if matvec(rows, x) != b:
        raise ArithmeticError("integer solve produced a non-solution")
    kern = [[u[i][j] for i in range(nc)] for j in range(r, nc)]
    return IntegerSolution(x, kern)


def _rational_system(a: Sequence[Sequence], t: Sequence) -> tuple[Optional[list[Fraction]], list[list[Fraction]]]:
    """Gauss-Jordan over Q: (one solution or None, basis of the null space)."""
    n = len(a[0]) if a else 0
    m = [[Fraction(v) for v in row] + [Fraction(tv)] for row, tv in zip(a, t)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [v / piv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [v - f * w for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    null = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        null.append(v)
    if any(m[i][n] != 0 for i in range(r, len(m))):
        return None, null
    sol = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        sol[pc] = m[i][n]
    return sol, null


def infeasibility_certificate(m, b: Sequence[int]) -> Optional[list[Fraction]]:
    """A rational y with y M integral and y b not an integer, or None if M u = b is solvable.

    Such a y proves that no integer solution exists.
    """
    if solve_integer(m, b) is not None:
        return None
    rows = _rows(m)
    dec = hnf(m)
    r = dec.rank
    basis_t = [[dec.H[i][k] for i in range(len(rows))] for k in range(r)]
    z, _ = _rational_system([[dec.H[i][k] for k in range(r)] for i in range(len(rows))], b)
    if z is None:
        # b is outside the rational span: use a left null vector of H
        if r:
            _, null = _rational_system(basis_t, [0] * r)
        else:
            null = [[Fraction(int(i == j)) for j in range(len(rows))] for i in range(len(rows))]
        y = next(v for v in null if sum(vi * bi for vi, bi in zip(v, b)) != 0)
        s = sum(vi * bi for vi, bi in zip(y, b))
        y = [vi / (2 * s) for vi in y]
    else:
        k = next(i for i, zi in enumerate(z) if zi.denominator != 1)
        y, _ = _rational_system(basis_t, [int(j == k) for j in range(r)])
    ya = [sum(yi * row[j] for yi, row in zip(y, rows)) for j in range(_ncols(m, rows))]
    yb = sum(yi * bi for yi, bi in zip(y, b))
    if any(v.denominator != 1 for v in ya) or yb.denominator == 1:
        raise ArithmeticError("infeasibility certificate failed its own check")
    return y


def lattice_hnf(vectors: Sequence[Sequence[int]], dim: int) -> Rows:
    """Canonical generator matrix (nonzero HNF columns, as a list of columns)."""
    if not vectors:
        return []
    cols = [list(map(int, v)) for v in vectors]
    if any(len(v) != dim for v in cols):
        raise ValueError("vector dimension mismatch")
    mat = [[v[i] for v in cols] for i in range(dim)]
    dec = hnf(mat)
    return [[dec.H[i][j] for i in range(dim)] for j in range(dec.rank)]


def lattice_equal(basis1: Sequence[Sequence[int]], basis2: Sequence[Sequence[int]], dim: Optional[int] = None) -> bool:
    """True iff the two generating sets span the same sublattice of Z^dim."""
    if dim is None:
        sample = list(basis1) or list(basis2)
        if not sample:
            return True
        dim = len(sample[0])
    return lattice_hnf(basis1, dim) == lattice_hnf(basis2, dim)


def in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    if not basis:
        return not any(v)
    mat = [[w[i] for w in basis] for i in range(len(v))]
    return solve_integer(mat, v) is not None
