"""Zariski decomposition relative to a curve configuration.

"Nef" here means non-negative against every component of the
configuration; the surface is not assumed to carry any other curves.

Integral Gram matrices go through an integer kernel (fraction-free
determinants and Cramer's rule with one common denominator).  The kernel is
written in the subset of Python that ``numba.njit`` accepts, so
:func:`build_kernel` can compile the very same code for exhaustive runs.
Other inputs use the rational implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from . import exact_linalg as la
from .config import CurveConfig
from .exact_linalg import QMatrix, QVector, RationalLike, format_rational


class ZariskiError(ValueError):
    """No decomposition exists inside the configuration."""


@dataclass(frozen=True)
class ZariskiResult:
    positive_part: QVector
    negative_part: QVector
    negative_support: frozenset[int]

    def to_json(self, labels: Sequence[str] | None = None) -> dict[str, Any]:
        support = sorted(self.negative_support)
        return {
            "P": [format_rational(x) for x in self.positive_part],
            "N": [format_rational(x) for x in self.negative_part],
            "support": [labels[i] for i in support] if labels is not None else support,
        }


def _gram(c: CurveConfig | QMatrix) -> QMatrix:
    return c.gram if isinstance(c, CurveConfig) else la.qmatrix(c)


def is_nef_within(c: CurveConfig | QMatrix, d: Sequence[RationalLike]) -> bool:
    return all(x >= 0 for x in la.mat_vec(_gram(c), la.qvector(d)))


# --- integer kernel ------------------------------------------------------------

OK, NOT_DEFINITE, NEGATIVE_COEFFICIENT = 0, 1, 2


def _det(a, k):
    """Determinant of the leading ``k x k`` block of ``a`` (overwritten), Bareiss elimination."""
    sign = 1
    prev = 1
    for c in range(k - 1):
        if a[c, c] == 0:
            swap = -1
            for r in range(c + 1, k):
                if a[r, c] != 0:
                    swap = r
                    break
            if swap < 0:
                return 0
            for j in range(k):
                t = a[c, j]
                a[c, j] = a[swap, j]
                a[swap, j] = t
            sign = -sign
        for r in range(c + 1, k):
            for j in range(c + 1, k):
                a[r, j] = (a[r, j] * a[c, c] - a[r, c] * a[c, j]) // prev
            a[r, c] = 0
        prev = a[c, c]
    return sign * a[k - 1, k - 1]


def _negative_definite(a, k):
    """Sylvester's criterion on ``-a``: every Bareiss pivot is a leading principal minor."""
    for r in range(k):
        for c in range(k):
            a[r, c] = -a[r, c]
    prev = 1
    for c in range(k):
        if a[c, c] <= 0:
            return False
        for r in range(c + 1, k):
            for j in range(c + 1, k):
                a[r, j] = (a[r, j] * a[c, c] - a[r, c] * a[c, j]) // prev
            a[r, c] = 0
        prev = a[c, c]
    return True


def build_kernel(jit: Callable | None = None) -> Callable:
    """The Fujita iteration on integer data, optionally passed through ``jit``.

    ``kernel(G, d, num)`` fills ``num`` with the numerators of ``N`` and
    returns ``(status, den, mask)``: ``N = num / den`` and ``mask`` holds
    the support bits collected by the iteration.
    """
    wrap = jit if jit is not None else (lambda f: f)
    det = wrap(_det)
    negdef = wrap(_negative_definite)

    def kernel(G, d, num):
        n = G.shape[0]
        gd = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for j in range(n):
                gd[i] += G[i, j] * d[j]
        for i in range(n):
            num[i] = 0
        den = 1
        mask = 0
        idx = np.zeros(n, dtype=np.int64)
        work = np.zeros((n, n), dtype=np.int64)
        for _ in range(n + 1):
            bad = 0
            for i in range(n):
                gp = 0
                for j in range(n):
                    gp += G[i, j] * (den * d[j] - num[j])
                if gp < 0:
                    bad |= 1 << i
            if bad == 0:
                break
            mask |= bad
            k = 0
            for i in range(n):
                if mask >> i & 1:
                    idx[k] = i
                    k += 1
            for r in range(k):
                for c in range(k):
                    work[r, c] = G[idx[r], idx[c]]
            if not negdef(work, k):
                return NOT_DEFINITE, den, mask
            for r in range(k):
                for c in range(k):
                    work[r, c] = G[idx[r], idx[c]]
            D = det(work, k)
            s = 1 if D > 0 else -1
            den = D * s
            for i in range(n):
                num[i] = 0
            for col in range(k):
                for r in range(k):
                    for c in range(k):
                        work[r, c] = gd[idx[r]] if c == col else G[idx[r], idx[c]]
                num[idx[col]] = det(work, k) * s
            g = den
            for i in range(n):
                a = num[i] if num[i] >= 0 else -num[i]
                while a:
                    g, a = a, g % a
            if g > 1:
                den //= g
                for i in range(n):
                    num[i] //= g
            for i in range(n):
                if num[i] < 0:
                    return NEGATIVE_COEFFICIENT, den, mask
        return OK, den, mask

    return wrap(kernel)


_KERNEL = build_kernel()
_INT64_SAFE = 2**62


def _fits_kernel(g: QMatrix, dv: Sequence[int]) -> bool:
    """Conservative bound keeping every minor, and its square, inside int64."""
    n = len(g)
    m = max([abs(x) for row in g for x in row] + [1])
    gd = max([abs(sum(g[i][j] * dv[j] for j in range(n))) for i in range(n)] + [1])
    top = max(m, gd)
    log_minor = n * (0.5 * math.log2(n) + math.log2(top)) if n else 0.0
    log_rest = math.log2(n * m * (max(dv) + 1) * 4 + 1)
    return 2 * log_minor < 62 and log_minor + log_rest < 62


def _validate(g: QMatrix, d: Sequence[RationalLike]) -> QVector:
    dv = la.qvector(d)
    n = len(g)
    if len(dv) != n:
        raise ZariskiError(f"coefficient vector of length {len(dv)} for {n} components")
    if any(x < 0 for x in dv) or not any(dv):
        raise ZariskiError("coefficients must be non-negative and not all zero")
    return dv


def zariski_decompose(c: CurveConfig | QMatrix, d: Sequence[RationalLike]) -> ZariskiResult:
    """Split ``d = P + N`` by growing the negative support until ``P`` is nef.

    Each round adds every component on which the current ``P`` is negative,
    checks that the support block is negative definite and solves
    ``(d - N).Cj = 0`` for ``j`` in the support.
    """
    g = _gram(c)
    dv = _validate(g, d)
    if all(x.denominator == 1 for row in g for x in row):
        scale = math.lcm(*(x.denominator for x in dv))
        ints = [int(x * scale) for x in dv]
        if _fits_kernel(g, ints):
            return _decompose_integral(g, ints, scale)
    return zariski_decompose_rational(g, dv)


def _decompose_integral(g: QMatrix, d: Sequence[int], scale: int) -> ZariskiResult:
    n = len(g)
    G = np.array([[int(x) for x in row] for row in g], dtype=np.int64).reshape(n, n)
    num = np.zeros(n, dtype=np.int64)
    status, den, mask = _KERNEL(G, np.array(d, dtype=np.int64), num)
    support = [i for i in range(n) if int(mask) >> i & 1]
    if status == NOT_DEFINITE:
        raise ZariskiError(
            "no Zariski decomposition within configuration: components "
            f"{support} span a block that is not negative definite"
        )
    if status == NEGATIVE_COEFFICIENT:  # pragma: no cover - Fujita's negative part only grows
        raise ZariskiError("negative part acquired a negative coefficient")
    N = tuple(Fraction(int(x), int(den) * scale) for x in num)
    P = tuple(Fraction(a, scale) - b for a, b in zip(d, N))
    return ZariskiResult(P, N, frozenset(i for i in support if N[i] != 0))


def zariski_decompose_rational(c: CurveConfig | QMatrix, d: Sequence[RationalLike]) -> ZariskiResult:
    """Same iteration in rational arithmetic; accepts any rational Gram matrix."""
    g = _gram(c)
    dv = _validate(g, d)
    n = len(g)
    gd = la.mat_vec(g, dv)
    support: list[int] = []
    N: list[Fraction] = [Fraction(0)] * n
    for _ in range(n + 1):
        P = [a - b for a, b in zip(dv, N)]
        gp = la.mat_vec(g, P)
        bad = [i for i in range(n) if gp[i] < 0]
        if not bad:
            break
        support = sorted(set(support) | set(bad))
        block = la.submatrix(g, support)
        if not la.is_negative_definite(block):
            raise ZariskiError(
                "no Zariski decomposition within configuration: components "
                f"{support} span a block that is not negative definite"
            )
        sol = la.solve(block, [gd[j] for j in support])
        assert sol is not None  # definite blocks are invertible
        N = [Fraction(0)] * n
        for j, x in zip(support, sol):
            N[j] = x
        if any(x < 0 for x in N):
            raise ZariskiError(f"negative part acquired a negative coefficient: {N}")
    else:
        raise ZariskiError("support failed to stabilise")  # pragma: no cover - support grows strictly
    P = tuple(a - b for a, b in zip(dv, N))
    return ZariskiResult(P, tuple(N), frozenset(i for i in support if N[i] != 0))


def check_result(c: CurveConfig | QMatrix, d: Sequence[RationalLike], r: ZariskiResult) -> list[str]:
    """List every defining property of a Zariski decomposition that ``r`` fails."""
    g = _gram(c)
    dv = la.qvector(d)
    problems = []
    if tuple(a + b for a, b in zip(r.positive_part, r.negative_part)) != dv:
        problems.append("P + N != d")
    if any(x < 0 for x in r.negative_part):
        problems.append("N has a negative coefficient")
    if any(r.negative_part[i] != 0 for i in range(len(dv)) if i not in r.negative_support):
        problems.append("N is nonzero outside its support")
    support = sorted(r.negative_support)
    if support and not la.is_negative_definite(la.submatrix(g, support)):
        problems.append("support block is not negative definite")
    gp = la.mat_vec(g, r.positive_part)
    if any(gp[j] != 0 for j in support):
        problems.append("P is not orthogonal to the support")
    if any(x < 0 for x in gp):
        problems.append("P is not nef within the configuration")
    return problems

