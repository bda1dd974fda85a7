"""Exact rational linear algebra.

Scalars are ``fractions.Fraction``; vectors are tuples of them and matrices
are sequences of such rows. Nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Rat = Fraction
QVec = tuple  # tuple[Fraction, ...]
QMat = Sequence[Sequence[Fraction]]


def rat(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    return Fraction(x)


def qvec(xs: Iterable) -> QVec:
    return tuple(rat(x) for x in xs)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u, v) -> QVec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> QVec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u) -> QVec:
    return tuple(c * a for a in u)


def mat_vec(m, v) -> QVec:
    return tuple(dot(row, v) for row in m)


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def integer_rows(m: QMat) -> list[list[int]]:
    """Scale every row by the lcm of its denominators."""
    out = []
    for row in m:
        if all(type(x) is int for x in row):
            out.append(list(row))
            continue
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def primitive(v) -> tuple[int, ...]:
    """Positive multiple of ``v`` with coprime integer entries."""
    ints = integer_rows([v])[0]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def bareiss_rank(m: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = [list(row) for row in m]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - aic * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r


def rank(m: QMat) -> int:
    """Exact rank of a rational matrix."""
    if not m:
        return 0
    width = len(m[0])
    if any(len(row) != width for row in m):
        raise ValueError("matrix is not rectangular")
    return bareiss_rank(integer_rows(m))


def affine_dim(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of a nonempty point list."""
    if not points:
        raise ValueError("affine_dim of an empty point list is undefined")
    p0 = points[0]
    return rank([vsub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def rref(m: QMat) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(m: QMat, ncols: Optional[int] = None) -> list[QVec]:
    """Basis of {x : m x = 0}."""
    if not m:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    ncols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def inverse(m: QMat) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(map(Fraction, row)) + e for row, e in zip(m, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def mat_mul(a: QMat, b: QMat) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


# -- exact LP -----------------------------------------------------------------

def _pivot(t, basis, r, c):
    prow = t[r]
    inv = 1 / prow[c]
    t[r] = prow = [x * inv for x in prow]
    for i, row in enumerate(t):
        if i != r and row[c] != 0:
            f = row[c]
            t[i] = [x - f * y for x, y in zip(row, prow)]
    basis[r] = c


def _optimize(t, basis, obj, allowed):
    """Bland's-rule primal simplex on tableau ``t`` (last column = rhs).

    Returns False if unbounded, True at optimum.
    """
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            rc = obj[j] - sum((obj[b] * t[i][j] for i, b in enumerate(basis)), Fraction(0))
            if rc > 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i, row in enumerate(t):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(t, basis, best[1], entering)


def linprog_max(a_eq: QMat, b_eq: Sequence, c: Sequence):
    """Maximize ``c.z`` subject to ``a_eq z = b_eq``, ``z >= 0``.

    Returns ``(status, z, value)`` with status in {"optimal", "infeasible",
    "unbounded"}.
    """
    m, n = len(a_eq), len(c)
    rows = []
    for i, (row, b) in enumerate(zip(a_eq, b_eq)):
        row = [Fraction(x) for x in row]
        b = Fraction(b)
        if b < 0:
            row, b = [-x for x in row], -b
        rows.append(row + [Fraction(int(k == i)) for k in range(m)] + [b])
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _optimize(rows, basis, phase1, range(n + m))
    if sum((rows[i][-1] for i, b in enumerate(basis) if b >= n), Fraction(0)) != 0:
        return "infeasible", None, None
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(rows):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j] != 0), None)
            if col is None:
                del rows[i]
                del basis[i]
                continue
            _pivot(rows, basis, i, col)
        i += 1
    rows = [row[:n] + [row[-1]] for row in rows]
    obj = [Fraction(x) for x in c]
    if not _optimize(rows, basis, obj, range(n)):
        return "unbounded", None, None
    z = [Fraction(0)] * n
    for i, b in enumerate(basis):
        z[b] = rows[i][-1]
    return "optimal", tuple(z), dot(obj, z)


def solve_strict_feasibility(eqs: QMat, strict_ineqs: QMat, weak_ineqs: QMat = (),
                             nvars: Optional[int] = None) -> Optional[QVec]:
    """Find x with ``a.x = b`` for each row of ``eqs``, ``a.x > b`` for each
    row of ``strict_ineqs`` and ``a.x >= b`` for each row of ``weak_ineqs``.

    Every row is ``(a_1, ..., a_n, b)``. Solved as one exact LP maximizing a
    common slack ``t <= 1`` on the strict rows; returns None when the optimum
    slack is not positive or the system is infeasible.
    """
    all_rows = list(eqs) + list(strict_ineqs) + list(weak_ineqs)
    if nvars is None:
        if not all_rows:
            raise ValueError("cannot infer the number of variables")
        nvars = len(all_rows[0]) - 1
    if any(len(row) != nvars + 1 for row in all_rows):
        raise ValueError("constraint rows have inconsistent length")
    # z = (x+, x-, t+, t-, surplus for each inequality, s for t <= 1)
    n_ineq = len(strict_ineqs) + len(weak_ineqs)
    width = 2 * nvars + 2 + n_ineq + 1
    a_eq, b_eq = [], []

    def base(a):
        a = [Fraction(x) for x in a]
        return a + [-x for x in a]

    for row in eqs:
        a_eq.append(base(row[:-1]) + [Fraction(0)] * (width - 2 * nvars))
        b_eq.append(row[-1])
    for k, row in enumerate(list(strict_ineqs) + list(weak_ineqs)):
        strict = k < len(strict_ineqs)
        tail = [Fraction(-1 if strict else 0), Fraction(1 if strict else 0)]
        slack = [Fraction(0)] * (n_ineq + 1)
        slack[k] = Fraction(-1)
        a_eq.append(base(row[:-1]) + tail + slack)
        b_eq.append(row[-1])
    slack = [Fraction(0)] * (n_ineq + 1)
    slack[-1] = Fraction(1)
    a_eq.append([Fraction(0)] * (2 * nvars) + [Fraction(1), Fraction(-1)] + slack)
    b_eq.append(Fraction(1))

    c = [Fraction(0)] * width
    c[2 * nvars], c[2 * nvars + 1] = Fraction(1), Fraction(-1)
    status, z, value = linprog_max(a_eq, b_eq, c)
    if status != "optimal":
        return None
    if strict_ineqs and value <= 0:
        return None
    x = tuple(z[i] - z[nvars + i] for i in range(nvars))
    return x
