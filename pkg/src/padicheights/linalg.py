"""Small dense linear algebra over PadicNumber.

Gaussian elimination pivots on the entry of smallest valuation, so the
tracked precision of results reflects the actual conditioning.  Matrices
are lists of rows.
"""

from __future__ import annotations

from .errors import PrecisionExhausted
from .padic import PadicNumber


def zeros(n: int, m: int, p: int, precision: int):
    return [[PadicNumber.zero(p, precision) for _ in range(m)] for _ in range(n)]


def identity(n: int, p: int, precision: int):
    out = zeros(n, n, p, precision)
    for i in range(n):
        out[i][i] = PadicNumber.one(p, precision)
    return out


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        acc = row[0] * v[0]
        for t in range(1, len(v)):
            acc = acc + row[t] * v[t]
        out.append(acc)
    return out


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def _pivot_row(rows, col, start):
    best = None
    best_val = None
    for r in range(start, len(rows)):
        e = rows[r][col]
        if e.is_zero():
            continue
        if best is None or e.valuation < best_val:
            best, best_val = r, e.valuation
    return best


def solve_matrix(A, B):
    """Solve A X = B for X (B a matrix of column right-hand sides)."""
    n = len(A)
    m = len(B[0])
    rows = [list(A[i]) + list(B[i]) for i in range(n)]
    for col in range(n):
        piv = _pivot_row(rows, col, col)
        if piv is None:
            raise PrecisionExhausted(f"singular system (column {col})")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col].inv()
        rows[col] = [e * inv for e in rows[col]]
        for r in range(n):
            if r == col:
                continue
            factor = rows[r][col]
            if factor.is_zero():
                continue
            rows[r] = [e - factor * pe for e, pe in zip(rows[r], rows[col])]
    return [row[n:n + m] for row in rows]


def solve(A, b):
    X = solve_matrix(A, [[e] for e in b])
    return [row[0] for row in X]


def inverse(A):
    n = len(A)
    p = A[0][0].prime
    prec = max(e.precision for row in A for e in row)
    return solve_matrix(A, identity(n, p, prec))


def det(A):
    n = len(A)
    rows = [list(r) for r in A]
    p = rows[0][0].prime
    prec = max(e.precision for row in rows for e in row)
    result = PadicNumber.one(p, prec + 4)
    for col in range(n):
        piv = _pivot_row(rows, col, col)
        if piv is None:
            return PadicNumber.zero(p, prec)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            result = -result
        result = result * rows[col][col]
        inv = rows[col][col].inv()
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if factor.is_zero():
                continue
            rows[r] = [e - factor * pe for e, pe in zip(rows[r], rows[col])]
    return result


def charpoly(A):
    """Characteristic polynomial det(T - A), ascending coefficients, via
    Faddeev-LeVerrier (divisions only by 1..n, units for n < p)."""
    n = len(A)
    p = A[0][0].prime
    prec = max(e.precision for row in A for e in row)
    M = identity(n, p, prec + 4)
    coeffs = [None] * (n + 1)
    coeffs[n] = PadicNumber.one(p, prec + 4)
    c = coeffs[n]
    for k in range(1, n + 1):
        AM = mat_mul(A, M)
        tr = AM[0][0]
        for i in range(1, n):
            tr = tr + AM[i][i]
        c = -(tr / k)
        coeffs[n - k] = c
        if k < n:
            M = [[(AM[i][j] + c) if i == j else AM[i][j] for j in range(n)]
                 for i in range(n)]
    return coeffs


def nullspace(A):
    """Basis of the right kernel of A (rows may be fewer than columns)."""
    if not A:
        return []
    n, m = len(A), len(A[0])
    p = A[0][0].prime
    prec = max(e.precision for row in A for e in row)
    rows = [list(r) for r in A]
    pivots = []  # (row, col)
    r = 0
    for col in range(m):
        piv = _pivot_row(rows, col, r)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inv()
        rows[r] = [e * inv for e in rows[r]]
        for rr in range(n):
            if rr != r and not rows[rr][col].is_zero():
                factor = rows[rr][col]
                rows[rr] = [e - factor * pe for e, pe in zip(rows[rr], rows[r])]
        pivots.append((r, col))
        r += 1
        if r == n:
            break
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(m):
        if free in pivot_cols:
            continue
        vec = [PadicNumber.zero(p, prec) for _ in range(m)]
        vec[free] = PadicNumber.one(p, prec)
        for rr, c in pivots:
            vec[c] = -rows[rr][free]
        basis.append(vec)
    return basis


def column_echelon(V, target_precision=None):
    """Normalize the column span of V (2g x k): unit pivots, echelon shape.

    Used to compare subspaces and to stabilize iterated images."""
    cols = transpose(V)
    p = V[0][0].prime
    out = []
    used_rows = set()
    for vec in cols:
        vec = list(vec)
        for done, prow in out:
            c = vec[prow]
            if not c.is_zero():
                vec = [a - c * b for a, b in zip(vec, done)]
        piv = None
        piv_val = None
        for i, e in enumerate(vec):
            if i in used_rows or e.is_zero():
                continue
            if piv is None or e.valuation < piv_val:
                piv, piv_val = i, e.valuation
        if piv is None:
            continue
        inv = vec[piv].inv()
        vec = [e * inv for e in vec]
        out.append((vec, piv))
        used_rows.add(piv)
    return transpose([v for v, _ in out]) if out else []


def min_precision(A) -> int:
    return min(e.precision for row in A for e in row)


def residual_valuation(vec) -> int:
    """min over entries of (valuation if nonzero else precision): how close a
    vector is to zero."""
    out = None
    for e in vec:
        v = e.precision if e.is_zero() else e.valuation
        out = v if out is None else min(out, v)
    return out if out is not None else 0
