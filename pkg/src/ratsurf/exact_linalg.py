"""Exact linear algebra over the rationals.

Everything here works on dense matrices of :class:`fractions.Fraction`.
Matrices are plain tuples of row tuples, so they are hashable and
immutable; use :func:`qmatrix` to coerce ints, strings or nested lists.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
QVector = tuple[Fraction, ...]
QMatrix = tuple[QVector, ...]

RationalLike = Union[int, str, Fraction]


class LinalgError(ValueError):
    """Raised on malformed input to an exact linear-algebra routine."""


class Definiteness(str, enum.Enum):
    NEGATIVE_DEFINITE = "negative_definite"
    NEGATIVE_SEMIDEFINITE_SINGULAR = "negative_semidefinite_singular"
    INDEFINITE_OR_POSITIVE = "indefinite_or_positive"


def rational(value: RationalLike) -> Fraction:
    """Parse ``value`` as an exact rational; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise LinalgError(f"refusing inexact value {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LinalgError(f"not a rational literal: {value!r}") from exc
    raise LinalgError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    """Render as ``"p"`` or ``"p/q"``."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def qvector(values: Iterable[RationalLike]) -> QVector:
    return tuple(rational(v) for v in values)


def qmatrix(rows: Iterable[Iterable[RationalLike]]) -> QMatrix:
    m = tuple(qvector(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise LinalgError("ragged matrix")
    return m


def shape(m: QMatrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def is_symmetric(m: QMatrix) -> bool:
    n, c = shape(m)
    return n == c and all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def mat_vec(m: QMatrix, v: Sequence[Fraction]) -> QVector:
    if m and len(m[0]) != len(v):
        raise LinalgError(f"dimension mismatch: {shape(m)} times {len(v)}")
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def quadratic_form(m: QMatrix, x: Sequence[Fraction], y: Sequence[Fraction] | None = None) -> Fraction:
    """``x^T m y`` (``y`` defaults to ``x``)."""
    y = x if y is None else y
    return sum((a * b for a, b in zip(x, mat_vec(m, y))), Fraction(0))


def submatrix(m: QMatrix, idx: Sequence[int]) -> QMatrix:
    return tuple(tuple(m[i][j] for j in idx) for i in idx)


def rref(m: QMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with pivots taken in column order.

    Returns the reduced rows and the pivot column of each nonzero row.
    """
    rows = [list(r) for r in m]
    n_rows, n_cols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows, pivots


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: QMatrix) -> list[QVector]:
    """Basis of ``{v : m v = 0}``, one vector per free column of the RREF.

    The vector for free column ``f`` has a 1 in position ``f`` and zeros at
    the other free columns, so the output is fully determined by ``m``.
    """
    n_cols = shape(m)[1]
    if not m:
        return []
    rows, pivots = rref(m)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(m: QMatrix, b: Sequence[RationalLike]) -> QVector | None:
    """Exact solution of ``m x = b`` or ``None`` when inconsistent.

    Underdetermined systems return the particular solution with every free
    variable set to zero.
    """
    n_rows, n_cols = shape(m)
    if len(b) != n_rows:
        raise LinalgError(f"right-hand side has length {len(b)}, expected {n_rows}")
    aug = tuple(tuple(row) + (rational(bi),) for row, bi in zip(m, b))
    rows, pivots = rref(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for row, pc in zip(rows, pivots):
        x[pc] = row[n_cols]
    return tuple(x)


def definiteness(m: QMatrix) -> Definiteness:
    """Exact negative-(semi)definiteness test by symmetric elimination.

    Pivots only on negative diagonal entries.  A positive diagonal entry,
    or a zero diagonal entry with a nonzero entry in its row, exhibits a
    vector with positive square, so the form is not negative semidefinite.
    """
    if not is_symmetric(m):
        raise LinalgError("definiteness requires a symmetric matrix")
    a = [list(r) for r in m]
    active = list(range(len(a)))
    singular = False
    while active:
        diag = [(a[i][i], i) for i in active]
        if any(d > 0 for d, _ in diag):
            return Definiteness.INDEFINITE_OR_POSITIVE
        for d, i in diag:
            if d == 0:
                if any(a[i][j] != 0 for j in active):
                    return Definiteness.INDEFINITE_OR_POSITIVE
                singular = True
        active = [i for i in active if a[i][i] != 0]
        if not active:
            break
        p = active[0]
        d = a[p][p]
        rest = active[1:]
        for i in rest:
            f = a[i][p] / d
            if f:
                for j in rest:
                    a[i][j] -= f * a[p][j]
        active = rest
    return Definiteness.NEGATIVE_SEMIDEFINITE_SINGULAR if singular else Definiteness.NEGATIVE_DEFINITE


def is_negative_definite(m: QMatrix) -> bool:
    return definiteness(m) is Definiteness.NEGATIVE_DEFINITE


def primitive_integer_generator(v: Sequence[RationalLike]) -> tuple[int, ...]:
    """Scale ``v`` to a coprime integer vector whose first nonzero entry is positive."""
    q = [rational(x) for x in v]
    if not any(q):
        raise LinalgError("zero vector has no primitive generator")
    den = lcm(*(x.denominator for x in q))
    ints = [int(x * den) for x in q]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)
