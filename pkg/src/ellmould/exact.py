"""Exact rational arithmetic and dense rational linear algebra.

Rationals are ``gmpy2.mpq`` values: always reduced, denominator positive.
Matrices are plain lists of rows; every routine copies its input.
"""
from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

from gmpy2 import mpq

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


class NoSolution(ValueError):
    """The target vector is outside the column span."""


def Q(x=0, y=None) -> Rational:
    """Coerce ``x`` (int, str "p/q", Fraction, mpq) or ``x/y`` to a rational."""
    if y is not None:
        return mpq(x, y)
    if isinstance(x, Rational):
        return x
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def fmt(q) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_matrix(rows: Iterable[Sequence]) -> list[list[Rational]]:
    m = [[Q(x) for x in row] for row in rows]
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def rref(m: Sequence[Sequence], ncols: int | None = None):
    """Reduced row-echelon form and pivot columns.

    Returns ``(R, pivots)``. Zero rows are kept at the bottom so ``R`` has the
    shape of ``m``.
    """
    a = as_matrix(m)
    nrows = len(a)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            inv = 1 / piv
            a[r] = [x * inv for x in a[r]]
        row = a[r]
        nz = [j for j in range(c, ncols) if row[j]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    ai = a[i]
                    for j in nz:
                        ai[j] -= f * row[j]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1])


def canonical_vector(v: Sequence) -> list[Rational]:
    """Scale to coprime integers with first nonzero entry positive."""
    v = [Q(x) for x in v]
    nz = [x for x in v if x]
    if not nz:
        return v
    den = 1
    for x in nz:
        d = int(x.denominator)
        den = den * d // gcd(den, d)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if nz[0] < 0:
        g = -g
    return [mpq(x // g) for x in ints]


def kernel_basis(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Rational]]:
    """Right null space, one canonical vector per free column, ordered by free column."""
    a = as_matrix(m)
    if ncols is None:
        if not a:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(a[0])
    r, pivots = rref(a, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(canonical_vector(v))
    return basis


def solve(m: Sequence[Sequence], target: Sequence, ncols: int | None = None) -> list[Rational]:
    """One solution of ``m x = target`` with free variables set to zero.

    Raises :class:`NoSolution` when ``target`` is not in the column span.
    """
    a = as_matrix(m)
    if len(a) != len(target):
        raise ValueError("row count mismatch")
    if ncols is None:
        ncols = len(a[0]) if a else 0
    aug = [row + [Q(t)] for row, t in zip(a, target)]
    r, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        raise NoSolution("target outside column span")
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        x[p] = r[i][ncols]
    return x


def matvec(m: Sequence[Sequence], v: Sequence) -> list[Rational]:
    return [sum((Q(a) * Q(b) for a, b in zip(row, v)), ZERO) for row in m]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]
