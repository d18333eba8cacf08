"""Small dense exact linear algebra over mpq / GaussQ entries.

Matrices are lists of row lists.  Determinant and rank use Bareiss
fraction-free elimination (every division is exact); solving uses
Gauss-Jordan elimination over the field.
"""
from __future__ import annotations

from gmpy2 import mpq

from .scalars import is_zero


class SingularMatrix(ArithmeticError):
    pass


def _copy(m):
    return [list(row) for row in m]


def identity(k: int):
    return [[mpq(1) if i == j else mpq(0) for j in range(k)] for i in range(k)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), mpq(0)) for col in bt] for row in a]


def bareiss(m):
    """Fraction-free forward elimination.

    Returns ``(rank, det, reduced)``; ``det`` is ``None`` unless the matrix
    is square and nonsingular.
    """
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    prev = mpq(1)
    sign = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if not is_zero(a[i][c])), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(r + 1, rows):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, cols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) / prev
            row_i[c] = mpq(0)
        # entries left of the pivot column in rows below r stay zero
        prev = p
        r += 1
    det = None
    if rows == cols and r == rows:
        det = sign * a[rows - 1][cols - 1] if rows else mpq(1)
    return r, det, a


def rank(m) -> int:
    if not m:
        return 0
    return bareiss(m)[0]


def det(m):
    if not m:
        return mpq(1)
    r, d, _ = bareiss(m)
    return mpq(0) if d is None else d


def solve_many(a, bs):
    """Solve ``a X = B`` for the columns ``bs`` (a list of right-hand sides).

    ``a`` may be tall but must have full column rank; raises
    :class:`SingularMatrix` otherwise or when a system is inconsistent.
    """
    rows = len(a)
    cols = len(a[0])
    nrhs = len(bs)
    aug = [list(a[i]) + [b[i] for b in bs] for i in range(rows)]
    width = cols + nrhs
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not is_zero(aug[i][c])), None)
        if piv is None:
            raise SingularMatrix(f"no pivot in column {c}")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        prow = [x * inv for x in aug[r]]
        aug[r] = prow
        nz = [j for j in range(c, width) if not is_zero(prow[j])]
        for i in range(rows):
            if i != r:
                f = aug[i][c]
                if is_zero(f):
                    continue
                row = aug[i]
                for j in nz:
                    row[j] = row[j] - f * prow[j]
        r += 1
    for i in range(r, rows):
        if any(not is_zero(aug[i][cols + k]) for k in range(nrhs)):
            raise SingularMatrix("inconsistent system")
    return [[aug[i][cols + k] for i in range(cols)] for k in range(nrhs)]


def solve(a, b):
    return solve_many(a, [b])[0]


def inverse(m):
    k = len(m)
    cols = solve_many(m, transpose(identity(k)))
    return transpose(cols)
