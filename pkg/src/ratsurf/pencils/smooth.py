"""Exact smoothness test for plane curves over Q.

Singular points are common zeros of the partial derivatives.  Their
x-coordinates are cut out by resultants; each irreducible factor of the
eliminant is then tested exactly in the number field it defines.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

from .poly import X, Y, Z, PlaneCurve, gcd_degree_over_field


@dataclass(frozen=True)
class SmoothnessReport:
    smooth: bool
    reason: str = ""
    witness: str = ""

    def __bool__(self) -> bool:
        return self.smooth


def check_smooth(f: PlaneCurve) -> SmoothnessReport:
    if f.degree == 1:
        return SmoothnessReport(True, "line")
    expr = f.as_sympy()
    _, factors = sp.factor_list(expr, X, Y, Z)
    if any(k > 1 for _, k in factors):
        return SmoothnessReport(False, "non-reduced", str(sp.factor(expr)))
    nonconst = [g for g, _ in factors if sp.Poly(g, X, Y, Z).total_degree() > 0]
    if len(nonconst) > 1:
        return SmoothnessReport(False, "reducible: components meet", str(sp.factor(expr)))
    grads = [sp.diff(expr, v) for v in (X, Y, Z)]

    # the point (1:0:0)
    if all(g.subs({X: 1, Y: 0, Z: 0}) == 0 for g in grads):
        return SmoothnessReport(False, "singular point", "(1:0:0)")
    # the rest of the line z = 0
    line = [sp.Poly(g.subs({Y: 1, Z: 0}), X, domain=sp.QQ) for g in grads]
    nonzero = [p for p in line if not p.is_zero]
    if not nonzero:
        return SmoothnessReport(False, "singular along z=0", "z=0")
    common = nonzero[0]
    for p in nonzero[1:]:
        common = common.gcd(p)
    if common.degree() > 0:
        return SmoothnessReport(False, "singular point on z=0", f"x-coordinate root of {common.as_expr()} with y=1, z=0")

    # the affine chart z = 1: common zeros of f, f_x, f_y
    affine = [sp.expand(e.subs(Z, 1)) for e in (expr, grads[0], grads[1])]
    affine_nonzero = [e for e in affine if e != 0]
    eliminants = []
    for i in range(len(affine_nonzero)):
        for j in range(i + 1, len(affine_nonzero)):
            r = sp.resultant(affine_nonzero[i], affine_nonzero[j], Y)
            if sp.expand(r) != 0:
                eliminants.append(sp.Poly(r, X, domain=sp.QQ))
    if not eliminants:
        return SmoothnessReport(False, "degenerate elimination", "all resultants vanish identically")
    R = eliminants[0]
    for p in eliminants[1:]:
        R = R.gcd(p)
    if R.degree() <= 0:
        return SmoothnessReport(True, "no candidate singular points")
    for factor, _ in R.factor_list()[1]:
        deg = gcd_degree_over_field(affine, factor)
        if deg != 0:
            return SmoothnessReport(
                False, "singular point in z=1", f"x-coordinate a root of {factor.as_expr()}"
            )
    return SmoothnessReport(True, "candidate points eliminated")


def is_smooth(f: PlaneCurve) -> bool:
    return check_smooth(f).smooth
