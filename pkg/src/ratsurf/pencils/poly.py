"""Plane curves over Q and the local polynomial algebra used in blow-up charts.

Local equations are dictionaries ``{(i, j): coeff}`` standing for
``sum coeff * u**i * v**j``; they are treated as immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Mapping

import sympy as sp

from ..exact_linalg import RationalLike, format_rational, rational

Local = Mapping[tuple[int, int], Fraction]

X, Y, Z = sp.symbols("x y z")
T = sp.Symbol("t")
_S = sp.Symbol("s")


class CurveError(ValueError):
    pass


def _to_sympy_rational(q: Fraction) -> sp.Rational:
    return sp.Rational(q.numerator, q.denominator)


def _from_sympy(c: Any) -> Fraction:
    c = sp.Rational(c)
    return Fraction(int(c.p), int(c.q))


@dataclass(frozen=True)
class PlaneCurve:
    """A homogeneous ternary form with rational coefficients."""

    degree: int
    coefficients: tuple[tuple[tuple[int, int, int], Fraction], ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise CurveError("zero polynomial does not define a curve")
        for exp, c in self.coefficients:
            if sum(exp) != self.degree or min(exp) < 0:
                raise CurveError(f"monomial {exp} does not have degree {self.degree}")
            if c == 0:
                raise CurveError("stored coefficients must be nonzero")

    @classmethod
    def from_terms(cls, degree: int, terms: Mapping[tuple[int, int, int], RationalLike]) -> PlaneCurve:
        clean = {tuple(e): rational(c) for e, c in terms.items()}
        return cls(degree, tuple(sorted((e, c) for e, c in clean.items() if c != 0)))  # type: ignore[misc]

    @classmethod
    def from_sympy(cls, expr: Any) -> PlaneCurve:
        poly = sp.Poly(sp.expand(expr), X, Y, Z, domain=sp.QQ)
        if poly.is_zero:
            raise CurveError("zero polynomial does not define a curve")
        if not poly.is_homogeneous:
            raise CurveError(f"{expr} is not homogeneous in x, y, z")
        return cls.from_terms(poly.total_degree(), {m: _from_sympy(c) for m, c in poly.terms()})

    @classmethod
    def parse(cls, text: str) -> PlaneCurve:
        """Parse e.g. ``"y^2*z - x^3 - z^3"``."""
        try:
            expr = sp.sympify(text.replace("^", "**"), locals={"x": X, "y": Y, "z": Z})
        except (sp.SympifyError, SyntaxError, TypeError) as exc:
            raise CurveError(f"cannot parse curve {text!r}") from exc
        if expr.free_symbols - {X, Y, Z}:
            raise CurveError(f"unexpected symbols in {text!r}")
        return cls.from_sympy(expr)

    @property
    def terms(self) -> dict[tuple[int, int, int], Fraction]:
        return dict(self.coefficients)

    def as_sympy(self) -> sp.Expr:
        return sp.Add(*[_to_sympy_rational(c) * X**i * Y**j * Z**k for (i, j, k), c in self.coefficients])

    def __str__(self) -> str:
        return str(self.as_sympy())

    def __mul__(self, other: PlaneCurve) -> PlaneCurve:
        return PlaneCurve.from_sympy(self.as_sympy() * other.as_sympy())

    def __pow__(self, k: int) -> PlaneCurve:
        return PlaneCurve.from_sympy(self.as_sympy() ** k)

    def __add__(self, other: PlaneCurve) -> PlaneCurve:
        return PlaneCurve.from_sympy(self.as_sympy() + other.as_sympy())

    def scaled(self, k: RationalLike) -> PlaneCurve:
        k = rational(k)
        return PlaneCurve.from_terms(self.degree, {e: c * k for e, c in self.coefficients})

    def evaluate(self, point: Iterable[RationalLike]) -> Fraction:
        x, y, z = (rational(p) for p in point)
        return sum((c * x**i * y**j * z**k for (i, j, k), c in self.coefficients), Fraction(0))

    def dehomogenize(self, chart: str) -> dict[tuple[int, int], Fraction]:
        """Equation in the affine chart ``x=1``, ``y=1`` or ``z=1``.

        Local coordinates are the remaining two variables in ``x, y, z`` order.
        """
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j, k), c in self.coefficients:
            key = {"z": (i, j), "y": (i, k), "x": (j, k)}[chart]
            out[key] = out.get(key, Fraction(0)) + c
        return {e: c for e, c in out.items() if c}

    def partial(self, var: str) -> PlaneCurve | None:
        d = sp.diff(self.as_sympy(), {"x": X, "y": Y, "z": Z}[var])
        return None if d == 0 else PlaneCurve.from_sympy(d)

    def to_json(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "terms": [{"exp": list(e), "coef": format_rational(c)} for e, c in self.coefficients],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> PlaneCurve:
        try:
            degree = int(data["degree"])
            terms = {tuple(int(x) for x in t["exp"]): rational(t["coef"]) for t in data["terms"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise CurveError(f"malformed curve: {exc}") from exc
        if any(len(e) != 3 for e in terms):
            raise CurveError("exponents must be triples")
        return cls.from_terms(degree, terms)  # type: ignore[arg-type]


def linear_form(a: RationalLike, b: RationalLike, c: RationalLike) -> PlaneCurve:
    return PlaneCurve.from_terms(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})


def monomials(degree: int) -> list[tuple[int, int, int]]:
    """All exponent triples of the given degree, in a fixed order."""
    return [(i, j, degree - i - j) for i in range(degree, -1, -1) for j in range(degree - i, -1, -1)]


# --- local equations -------------------------------------------------------


def order(p: Local) -> int | None:
    """Lowest total degree present, or ``None`` for the zero polynomial."""
    return min((i + j for (i, j), c in p.items() if c), default=None)


def translate(p: Local, a: Fraction, b: Fraction) -> dict[tuple[int, int], Fraction]:
    """``p(u + a, v + b)``."""
    if a == 0 and b == 0:
        return dict(p)
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j), c in p.items():
        for k in range(i + 1):
            ck = c * comb(i, k) * a ** (i - k)
            if not ck:
                continue
            for l in range(j + 1):
                cl = ck * comb(j, l) * b ** (j - l)
                if cl:
                    out[(k, l)] = out.get((k, l), Fraction(0)) + cl
    return {e: c for e, c in out.items() if c}


def low_order_coefficients(p: Local, m: int) -> dict[tuple[int, int], Fraction]:
    return {e: c for e, c in p.items() if e[0] + e[1] < m}


def truncate_above(p: Local, bound: int) -> dict[tuple[int, int], Fraction]:
    return {e: c for e, c in p.items() if e[0] + e[1] < bound}


def chart_one(p: Local, m: int, *, drop_low: bool = False) -> dict[tuple[int, int], Fraction]:
    """Substitute ``u = u1, v = u1*v1`` and divide by ``u1**m``.

    With ``drop_low`` terms that are not divisible are discarded instead of
    raising; callers use this once they have imposed the vanishing of
    those terms as linear conditions.
    """
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j), c in p.items():
        e = i + j - m
        if e < 0:
            if drop_low:
                continue
            raise CurveError(f"term u^{i} v^{j} is not divisible by the exceptional equation to order {m}")
        out[(e, j)] = c
    return out


def chart_two(p: Local, m: int, *, drop_low: bool = False) -> dict[tuple[int, int], Fraction]:
    """Substitute ``u = u2*v2, v = v2`` and divide by ``v2**m``."""
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j), c in p.items():
        e = i + j - m
        if e < 0:
            if drop_low:
                continue
            raise CurveError(f"term u^{i} v^{j} is not divisible by the exceptional equation to order {m}")
        out[(i, e)] = c
    return out


def along_axis(p: Local, axis: int = 0) -> list[Fraction]:
    """Restriction to ``u = 0`` (axis 0) or ``v = 0`` (axis 1) as an ascending coefficient list."""
    coeffs: dict[int, Fraction] = {}
    for (i, j), c in p.items():
        if axis == 0 and i == 0:
            coeffs[j] = coeffs.get(j, Fraction(0)) + c
        elif axis == 1 and j == 0:
            coeffs[i] = coeffs.get(i, Fraction(0)) + c
    if not coeffs:
        return []
    return [coeffs.get(k, Fraction(0)) for k in range(max(coeffs) + 1)]


def evaluate(p: Local, a: Fraction, b: Fraction) -> Fraction:
    return sum((c * a**i * b**j for (i, j), c in p.items()), Fraction(0))


def univariate(coeffs: list[Fraction]) -> sp.Poly:
    """Ascending coefficient list to a sympy polynomial in ``t`` over QQ."""
    return sp.Poly([_to_sympy_rational(c) for c in reversed(coeffs)] or [0], T, domain=sp.QQ)


def rational_roots(p: sp.Poly) -> tuple[list[Fraction], list[sp.Poly]]:
    """Rational roots of ``p`` (sorted) and its irreducible factors of degree > 1."""
    if p.is_zero:
        raise CurveError("zero polynomial has no finite root set")
    roots: list[Fraction] = []
    others: list[sp.Poly] = []
    for f, _ in p.factor_list()[1]:
        if f.degree() == 1:
            a, b = f.all_coeffs()
            roots.append(_from_sympy(-b / a))
        elif f.degree() > 1:
            others.append(f)
    return sorted(set(roots)), others


# --- exact arithmetic in simple number fields --------------------------------


def _reduce(c: sp.Poly, modulus: sp.Poly) -> sp.Poly:
    return c.rem(modulus)


def _gcd_degree_mod(polys: list[list[sp.Poly]], modulus: sp.Poly) -> int:
    """Degree of the gcd of univariate polynomials whose coefficients live in ``Q[s]/(modulus)``.

    Polynomials are descending coefficient lists.  Returns -1 if every
    input is zero.
    """

    def strip(a: list[sp.Poly]) -> list[sp.Poly]:
        a = [_reduce(c, modulus) for c in a]
        while a and a[0].is_zero:
            a = a[1:]
        return a

    def rem(a: list[sp.Poly], b: list[sp.Poly]) -> list[sp.Poly]:
        inv = sp.Poly(sp.invert(b[0].as_expr(), modulus.as_expr(), _S), _S, domain=sp.QQ)
        a = list(a)
        while len(a) >= len(b):
            f = _reduce(a[0] * inv, modulus)
            for k in range(len(b)):
                a[k] = _reduce(a[k] - f * b[k], modulus)
            a = strip(a[1:]) if a[0].is_zero else strip(a)
        return a

    nonzero = [strip(p) for p in polys]
    nonzero = [p for p in nonzero if p]
    if not nonzero:
        return -1
    g = nonzero[0]
    for h in nonzero[1:]:
        a, b = g, h
        while b:
            a, b = b, rem(a, b)
        g = a
    return len(g) - 1


def _coeff_lists(exprs: list[sp.Expr], var: sp.Symbol, x_value: sp.Expr) -> list[list[sp.Poly]]:
    out = []
    for e in exprs:
        p = sp.Poly(sp.expand(e.subs(X, x_value)), var, domain=sp.QQ[_S])
        out.append([sp.Poly(c.as_expr(), _S, domain=sp.QQ) for c in p.all_coeffs()] if not p.is_zero else [])
    return out


def gcd_degree_over_field(exprs: list[sp.Expr], factor: sp.Poly) -> int:
    """Degree in ``y`` of ``gcd(e(alpha, y))`` where ``alpha`` is a root of ``factor``.

    ``exprs`` are polynomials in ``x, y``; the computation happens exactly in
    ``Q[s]/(factor)``.  A positive result means the polynomials share a
    common zero with that x-coordinate; -1 means they all vanish there.
    """
    modulus = sp.Poly(factor.as_expr().subs(X, _S), _S, domain=sp.QQ)
    return _gcd_degree_mod(_coeff_lists(exprs, Y, _S), modulus)
