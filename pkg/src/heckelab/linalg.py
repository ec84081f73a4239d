"""Small exact linear algebra over the rationals.

Matrices are tuples of row tuples of :class:`fractions.Fraction`; vectors are
tuples.  Everything here is dense and naive, which is fine at the ranks the
library is meant for (at most 4 or 5).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = tuple
Mat = tuple


def fvec(v: Sequence) -> Vec:
    return tuple(Fraction(x) for x in v)


def fmat(rows: Sequence[Sequence]) -> Mat:
    return tuple(fvec(r) for r in rows)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vec:
    return tuple(c * a for a in v)


def neg(v: Sequence) -> Vec:
    return tuple(-a for a in v)


def zeros(n: int) -> Vec:
    return tuple(Fraction(0) for _ in range(n))


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Mat:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in m)


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> Vec:
    return mat_vec(transpose(m), v) if m else ()


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [[Fraction(x) for x in r] for r in m]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1]) if m else 0


def independent(vectors: Sequence[Sequence]) -> bool:
    return rank(vectors) == len(vectors)


def kernel(m: Sequence[Sequence], ncols: int | None = None) -> list[Vec]:
    """Basis of {x : m x = 0}."""
    if not m:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    rows, pivots = rref(m)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -rows[i][f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vec | None:
    """One solution of a x = b (free variables set to zero), or None."""
    if not a:
        return None if any(x != 0 for x in b) else ()
    n = len(a[0])
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = rows[i][n]
    return tuple(x)


def inverse(m: Sequence[Sequence]) -> Mat:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in rows)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def as_int(v: Sequence) -> tuple[int, ...]:
    return tuple(int(Fraction(x)) for x in v)
