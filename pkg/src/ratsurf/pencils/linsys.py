"""Dimensions of linear systems of plane curves with assigned base clusters.

A form of degree ``d`` lies in the system when, at every cluster point of
assigned multiplicity ``m``, its current (virtual) transform has order at
least ``m``; the transform is then divided by the exceptional equation to
the power ``m``.  Every step is linear in the coefficients of the form, so
each monomial is pushed through the charts separately and the vanishing
conditions are collected into one matrix.
"""

from __future__ import annotations

from fractions import Fraction

from ..exact_linalg import rank
from . import poly as P
from .poly import PlaneCurve
from .tower import ROOT_CHARTS, Cluster, ClusterError


def _depth_bounds(cluster: Cluster) -> dict[str, int]:
    """Largest sum of multiplicities along a chain starting at each point."""
    children: dict[str, list[str]] = {p.label: [] for p in cluster}
    mult = {p.label: p.multiplicity for p in cluster}
    for p in cluster:
        if p.parent is not None:
            children[p.parent].append(p.label)
    bound: dict[str, int] = {}
    for p in reversed(cluster.points):
        bound[p.label] = mult[p.label] + max((bound[c] for c in children[p.label]), default=0)
    return bound


def condition_matrix(degree: int, cluster: Cluster) -> tuple[list[tuple[Fraction, ...]], int]:
    """Linear conditions on the coefficients of degree-``degree`` forms.

    Columns follow :func:`poly.monomials`.  Returns the rows and the number
    of columns.
    """
    if degree < 0:
        raise ClusterError("degree must be non-negative")
    mons = P.monomials(degree)
    n = len(mons)
    basis = [PlaneCurve.from_terms(degree, {m: 1}) for m in mons]
    charts: dict[str, list[dict[tuple[int, int], Fraction]]] = {
        key: [c.dehomogenize(key) for c in basis] for key in ROOT_CHARTS
    }
    bounds = _depth_bounds(cluster)
    rows: list[tuple[Fraction, ...]] = []
    for point in cluster:
        key, (a, b) = point.locate()
        if key not in charts:
            raise ClusterError(f"{point.label}: chart {key} is unknown; parent missing")
        m = point.multiplicity
        local = [P.truncate_above(P.translate(eq, a, b), bounds[point.label]) for eq in charts[key]]
        low: dict[tuple[int, int], list[Fraction]] = {}
        for col, eq in enumerate(local):
            for e, c in eq.items():
                if e[0] + e[1] < m:
                    low.setdefault(e, [Fraction(0)] * n)[col] += c
        rows.extend(tuple(r) for _, r in sorted(low.items()))
        charts[f"{point.label}.1"] = [P.chart_one(eq, m, drop_low=True) for eq in local]
        charts[f"{point.label}.2"] = [P.chart_two(eq, m, drop_low=True) for eq in local]
    return rows, n


def linear_system_dim(degree: int, cluster: Cluster) -> int:
    """Vector-space dimension of degree-``degree`` forms through ``cluster``."""
    rows, n = condition_matrix(degree, cluster)
    if not rows:
        return n
    return n - rank(tuple(rows))
