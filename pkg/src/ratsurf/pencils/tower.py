"""Blow-up towers over the plane, pencil resolution and fibre configurations.

Charts
------
A point of P^2 is handled in the first affine chart, in the order ``z=1``,
``y=1``, ``x=1``, whose coordinate is nonzero there.  Blowing up the point
``(a, b)`` of a chart with local coordinates ``(u, v)`` creates two charts
for the exceptional curve ``Ek``::

    Ek.1 : u - a = u1,       v - b = u1*v1     (Ek is u1 = 0)
    Ek.2 : u - a = u2*v2,    v - b = v2        (Ek is v2 = 0)

Chart ``Ek.1`` sees every point of ``Ek`` except one, which is the origin of
``Ek.2``.  A point of ``Ek`` is stored as its tangent direction: ``(1, c)``
for ``v1 = c`` and ``(0, 1)`` for the origin of ``Ek.2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import sympy as sp

from ..config import CurveConfig
from ..exact_linalg import RationalLike, format_rational, rank, rational
from ..lattice import DivisorClass, SurfaceLattice, blow_up, plane
from . import poly as P
from .poly import X, Y, Z, CurveError, Local, PlaneCurve

ROOT_CHARTS = ("z", "y", "x")


class PencilError(ValueError):
    pass


class IrrationalBasePoint(PencilError):
    pass


class ClusterError(ValueError):
    pass


# --- cluster points -------------------------------------------------------


def normalize_projective(p: Sequence[RationalLike]) -> tuple[Fraction, Fraction, Fraction]:
    x, y, z = (rational(c) for c in p)
    for c in (z, y, x):
        if c != 0:
            return (x / c, y / c, z / c)
    raise ClusterError("(0:0:0) is not a projective point")


def normalize_direction(d: Sequence[RationalLike]) -> tuple[Fraction, Fraction]:
    a, b = (rational(c) for c in d)
    if a != 0:
        return (Fraction(1), b / a)
    if b != 0:
        return (Fraction(0), Fraction(1))
    raise ClusterError("(0:0) is not a direction")


@dataclass(frozen=True)
class ClusterPoint:
    """A point to blow up: a projective point, or a direction on ``parent``'s exceptional curve."""

    label: str
    parent: str | None
    position: tuple[Fraction, ...]
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ClusterError(f"{self.label}: multiplicity must be positive")
        pos = normalize_projective(self.position) if self.parent is None else normalize_direction(self.position)
        object.__setattr__(self, "position", pos)

    def locate(self) -> tuple[str, tuple[Fraction, Fraction]]:
        """Chart key and chart-local coordinates of the point."""
        if self.parent is None:
            x, y, z = self.position
            if z != 0:
                return "z", (x, y)
            if y != 0:
                return "y", (x, Fraction(0))
            return "x", (Fraction(0), Fraction(0))
        a, b = self.position
        if a == 1:
            return f"{self.parent}.1", (Fraction(0), b)
        return f"{self.parent}.2", (Fraction(0), Fraction(0))

    def with_multiplicity(self, m: int) -> ClusterPoint:
        return replace(self, multiplicity=m)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"label": self.label, "multiplicity": self.multiplicity}
        if self.parent is None:
            out["point"] = [format_rational(c) for c in self.position]
        else:
            out["parent"] = self.parent
            out["direction"] = [format_rational(c) for c in self.position]
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> ClusterPoint:
        try:
            label = str(data["label"])
            mult = int(data.get("multiplicity", 1))
            if "parent" in data and data["parent"] is not None:
                return cls(label, str(data["parent"]), tuple(rational(c) for c in data["direction"]), mult)
            return cls(label, None, tuple(rational(c) for c in data["point"]), mult)
        except (KeyError, TypeError, ValueError) as exc:
            raise ClusterError(f"malformed cluster point {data!r}: {exc}") from exc


@dataclass(frozen=True)
class Cluster:
    """Points listed parents-first; labels name the exceptional curves they create."""

    points: tuple[ClusterPoint, ...] = ()

    def __post_init__(self) -> None:
        seen: dict[str, ClusterPoint] = {}
        places: set[tuple[Any, ...]] = set()
        for p in self.points:
            if p.label in seen:
                raise ClusterError(f"duplicate cluster label {p.label}")
            if p.parent is not None and p.parent not in seen:
                raise ClusterError(f"{p.label}: parent {p.parent} must be listed earlier")
            place = (p.parent, p.position)
            if place in places:
                raise ClusterError(f"{p.label}: two cluster points at the same place")
            places.add(place)
            seen[p.label] = p

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def scaled(self, k: int) -> Cluster:
        return Cluster(tuple(p.with_multiplicity(p.multiplicity * k) for p in self.points))

    def without(self, label: str) -> Cluster:
        if any(p.parent == label for p in self.points):
            raise ClusterError(f"{label} has children in the cluster")
        return Cluster(tuple(p for p in self.points if p.label != label))

    def plus(self, point: ClusterPoint) -> Cluster:
        return Cluster(self.points + (point,))

    def to_json(self) -> list[dict[str, Any]]:
        return [p.to_json() for p in self.points]

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, Any]]) -> Cluster:
        return cls(tuple(ClusterPoint.from_json(d) for d in data))


# --- the tower ------------------------------------------------------------


@dataclass(frozen=True)
class StepRecord:
    """Audit record of one blow-up."""

    point: ClusterPoint
    chart: str
    local: tuple[Fraction, Fraction]
    orders: Mapping[str, int]
    pencil_multiplicity: int | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "label": self.point.label,
            "cluster_point": self.point.to_json(),
            "chart": self.chart,
            "local_point": [format_rational(c) for c in self.local],
            "new_charts": [f"{self.point.label}.1", f"{self.point.label}.2"],
            "orders": dict(self.orders),
            "pencil_multiplicity": self.pencil_multiplicity,
        }


@dataclass(frozen=True)
class Tower:
    """Iterated blow-up of P^2 tracking local equations of named curves.

    ``pencil`` names two tracked equations that are divided by their common
    order (the moving part of a pencil); every other entry is replaced by its
    proper transform.
    """

    curves: Mapping[str, PlaneCurve]
    pencil: tuple[str, str] | None = None
    lattice: SurfaceLattice = field(default_factory=plane)
    charts: Mapping[str, Mapping[str, Local]] = field(default_factory=dict)
    steps: tuple[StepRecord, ...] = ()

    @classmethod
    def start(cls, curves: Mapping[str, PlaneCurve], pencil: tuple[str, str] | None = None) -> Tower:
        charts = {key: {name: c.dehomogenize(key) for name, c in curves.items()} for key in ROOT_CHARTS}
        return cls(dict(curves), pencil, plane(), charts, ())

    def chart(self, key: str) -> Mapping[str, Local]:
        try:
            return self.charts[key]
        except KeyError:
            raise ClusterError(f"chart {key} does not exist yet (parent not blown up)") from None

    def local_at(self, point: ClusterPoint) -> dict[str, Local]:
        """All tracked equations translated so that ``point`` is the origin."""
        key, (a, b) = point.locate()
        return {name: P.translate(eq, a, b) for name, eq in self.chart(key).items()}

    def orders_at(self, point: ClusterPoint) -> dict[str, int]:
        out = {}
        for name, eq in self.local_at(point).items():
            o = P.order(eq)
            if o is None:
                raise CurveError(f"equation of {name} vanishes identically in its chart")
            out[name] = o
        return out

    def pencil_multiplicity(self, orders: Mapping[str, int]) -> int | None:
        if self.pencil is None:
            return None
        return min(orders[self.pencil[0]], orders[self.pencil[1]])

    def blow_up(self, point: ClusterPoint) -> Tower:
        if point.label in self.lattice.labels:
            raise ClusterError(f"{point.label} already blown up")
        if point.label != self.lattice.next_label():
            raise ClusterError(f"expected the next exceptional label {self.lattice.next_label()}, got {point.label}")
        key, (a, b) = point.locate()
        local = self.local_at(point)
        orders = self.orders_at(point)
        m = self.pencil_multiplicity(orders)
        one: dict[str, Local] = {}
        two: dict[str, Local] = {}
        for name, eq in local.items():
            in_pencil = self.pencil is not None and name in self.pencil
            k = m if in_pencil else orders[name]
            if k == 0 and not in_pencil:
                continue
            one[name] = P.chart_one(eq, k)  # type: ignore[arg-type]
            two[name] = P.chart_two(eq, k)  # type: ignore[arg-type]
        label = point.label
        one[label] = {(1, 0): Fraction(1)}
        two[label] = {(0, 1): Fraction(1)}
        charts = dict(self.charts)
        charts[f"{label}.1"] = one
        charts[f"{label}.2"] = two
        center = {"chart": key, "local_point": [format_rational(a), format_rational(b)], **point.to_json()}
        record = StepRecord(point, key, (a, b), orders, m)
        return replace(self, lattice=blow_up(self.lattice, center), charts=charts, steps=self.steps + (record,))

    def multiplicity_of(self, name: str, step: StepRecord) -> int:
        return step.orders.get(name, 0)

    def curve_class(self, name: str) -> DivisorClass:
        """Class of the proper transform of a tracked curve or exceptional curve."""
        lat = self.lattice
        if name in self.curves:
            coords = {"H": self.curves[name].degree}
        elif name in lat.labels:
            coords = {name: 1}
        else:
            raise PencilError(f"unknown curve {name}")
        start = -1 if name in self.curves else lat.labels.index(name)
        for step in self.steps:
            label = step.point.label
            if lat.labels.index(label) <= start:
                continue
            k = self.multiplicity_of(name, step)
            if k:
                coords[label] = coords.get(label, 0) - k
        return lat.divisor(coords)

    def cluster(self) -> Cluster:
        return Cluster(tuple(s.point for s in self.steps))

    def replay(self, curves: Mapping[str, PlaneCurve]) -> Tower:
        """Same blow-ups, with extra plane curves tracked."""
        merged = dict(self.curves)
        for name, c in curves.items():
            if name in merged or name in self.lattice.labels:
                raise PencilError(f"curve name {name} already in use")
            merged[name] = c
        t = Tower.start(merged, self.pencil)
        for s in self.steps:
            t = t.blow_up(s.point)
        return t


# --- pencils ----------------------------------------------------------------


@dataclass(frozen=True)
class BasePoint:
    """A base point of the moving part of a pencil, not yet blown up."""

    parent: str | None
    position: tuple[Fraction, ...]
    multiplicity: int
    orders: tuple[int, int]

    def cluster_point(self, label: str) -> ClusterPoint:
        return ClusterPoint(label, self.parent, self.position, self.multiplicity)

    def describe(self) -> str:
        pos = ":".join(format_rational(c) for c in self.position)
        where = "P2" if self.parent is None else f"on {self.parent}"
        return f"({pos}) {where}, multiplicity {self.multiplicity}"


def _common_zeros_on_line(f: Local, g: Local, axis: int = 0) -> list[Fraction]:
    """Rational common zeros of ``f, g`` along ``u = 0`` (axis 0) or ``v = 0`` (axis 1)."""
    pf = P.univariate(P.along_axis(f, axis))
    pg = P.univariate(P.along_axis(g, axis))
    if pf.is_zero and pg.is_zero:
        raise PencilError("both generators vanish along an exceptional curve; the pencil has a fixed component")
    common = pg if pf.is_zero else pf if pg.is_zero else pf.gcd(pg)
    if common.degree() <= 0:
        return []
    roots, others = P.rational_roots(common)
    if others:
        raise IrrationalBasePoint(
            "irrational base point: common factor " + ", ".join(str(o.as_expr()) for o in others)
        )
    return roots


def _root_base_points(F: PlaneCurve, G: PlaneCurve) -> list[tuple[Fraction, Fraction, Fraction]]:
    fe, ge = F.as_sympy(), G.as_sympy()
    points: set[tuple[Fraction, Fraction, Fraction]] = set()
    # affine chart z = 1
    fa, ga = sp.expand(fe.subs(Z, 1)), sp.expand(ge.subs(Z, 1))
    if fa != 0 and ga != 0 and sp.Poly(fa, X, Y).total_degree() > 0 and sp.Poly(ga, X, Y).total_degree() > 0:
        res = sp.Poly(sp.resultant(fa, ga, Y), X, domain=sp.QQ)
        if res.is_zero:
            raise PencilError("generators share a common component")
        if res.degree() > 0:
            for factor, _ in res.factor_list()[1]:
                if factor.degree() == 1:
                    a, b = factor.all_coeffs()
                    x0 = -b / a
                    hf = sp.Poly(fa.subs(X, x0), Y, domain=sp.QQ)
                    hg = sp.Poly(ga.subs(X, x0), Y, domain=sp.QQ)
                    common = hg if hf.is_zero else hf if hg.is_zero else hf.gcd(hg)
                    if common.degree() <= 0:
                        continue
                    ys, others = P.rational_roots(common)
                    if others:
                        raise IrrationalBasePoint(f"irrational base point with x = {x0}")
                    for y0 in ys:
                        points.add(normalize_projective((P._from_sympy(x0), y0, 1)))
                elif P.gcd_degree_over_field([fa, ga], factor) != 0:
                    raise IrrationalBasePoint(f"irrational base point with x a root of {factor.as_expr()}")
    # line z = 0 away from (1:0:0)
    fl = sp.Poly(fe.subs({Y: 1, Z: 0}), X, domain=sp.QQ)
    gl = sp.Poly(ge.subs({Y: 1, Z: 0}), X, domain=sp.QQ)
    if fl.is_zero and gl.is_zero:
        raise PencilError("generators share the component z = 0")
    common = gl if fl.is_zero else fl if gl.is_zero else fl.gcd(gl)
    if common.degree() > 0:
        xs, others = P.rational_roots(common)
        if others:
            raise IrrationalBasePoint("irrational base point on z = 0")
        for x0 in xs:
            points.add(normalize_projective((x0, 1, 0)))
    if F.evaluate((1, 0, 0)) == 0 and G.evaluate((1, 0, 0)) == 0:
        points.add((Fraction(1), Fraction(0), Fraction(0)))

    def key(p: tuple[Fraction, Fraction, Fraction]) -> tuple[Any, ...]:
        chart = ClusterPoint("_", None, p).locate()
        return (ROOT_CHARTS.index(chart[0]), chart[1])

    return sorted(points, key=key)


@dataclass(frozen=True)
class PencilState:
    F: PlaneCurve
    G: PlaneCurve
    tower: Tower
    pending: tuple[BasePoint, ...]

    @property
    def lattice(self) -> SurfaceLattice:
        return self.tower.lattice

    @property
    def degree(self) -> int:
        return self.F.degree

    @property
    def fiber_class(self) -> DivisorClass:
        coords: dict[str, int] = {"H": self.degree}
        for s in self.tower.steps:
            coords[s.point.label] = -int(s.pencil_multiplicity or 0)
        return self.lattice.divisor(coords)

    @property
    def resolved(self) -> bool:
        return not self.pending and self.fiber_class.square == 0

    def cluster(self) -> Cluster:
        return self.tower.cluster()

    def to_json(self) -> dict[str, Any]:
        return {
            "F": self.F.to_json(),
            "G": self.G.to_json(),
            "surface": self.lattice.to_json(),
            "fiber_class": [format_rational(c) for c in self.fiber_class.coords],
            "tower": [s.to_json() for s in self.tower.steps],
            "cluster": self.cluster().to_json(),
            "pending": [p.describe() for p in self.pending],
        }


def _base_point_at(tower: Tower, parent: str | None, position: Sequence[RationalLike]) -> BasePoint | None:
    probe = ClusterPoint("_", parent, tuple(position))
    orders = tower.orders_at(probe)
    assert tower.pencil is not None
    of, og = orders[tower.pencil[0]], orders[tower.pencil[1]]
    m = min(of, og)
    if m == 0:
        return None
    return BasePoint(parent, probe.position, m, (of, og))


def start_pencil(F: PlaneCurve, G: PlaneCurve) -> PencilState:
    if F.degree != G.degree:
        raise PencilError(f"generators have degrees {F.degree} and {G.degree}")
    g = sp.gcd(F.as_sympy(), G.as_sympy())
    if sp.Poly(g, X, Y, Z).total_degree() > 0:
        raise PencilError(f"generators share the component {g}")
    tower = Tower.start({"F": F, "G": G}, pencil=("F", "G"))
    pending = []
    for p in _root_base_points(F, G):
        bp = _base_point_at(tower, None, p)
        assert bp is not None
        pending.append(bp)
    return PencilState(F, G, tower, tuple(pending))


def pencil_base_points(state: PencilState) -> list[BasePoint]:
    return list(state.pending)


def _new_base_points(tower: Tower, label: str) -> list[BasePoint]:
    one = tower.chart(f"{label}.1")
    two = tower.chart(f"{label}.2")
    f1, g1 = one["F"], one["G"]
    out = []
    for c in _common_zeros_on_line(f1, g1, axis=0):
        bp = _base_point_at(tower, label, (1, c))
        assert bp is not None
        out.append(bp)
    if P.evaluate(two["F"], Fraction(0), Fraction(0)) == 0 and P.evaluate(two["G"], Fraction(0), Fraction(0)) == 0:
        bp = _base_point_at(tower, label, (0, 1))
        assert bp is not None
        out.append(bp)
    return out


def blow_up_base_point(state: PencilState, point: BasePoint | ClusterPoint) -> PencilState:
    """Blow up one current base point; base points on the new curve go to the front of the queue."""
    parent, position = point.parent, point.position
    match = next((p for p in state.pending if p.parent == parent and p.position == position), None)
    if match is None:
        bp = _base_point_at(state.tower, parent, position)
        if bp is None:
            raise PencilError("point is not on both current transforms of the pencil")
        match = bp
    label = state.lattice.next_label()
    tower = state.tower.blow_up(match.cluster_point(label))
    fresh = _new_base_points(tower, label)
    rest = tuple(p for p in state.pending if p is not match and p != match)
    return PencilState(state.F, state.G, tower, tuple(fresh) + rest)


def resolve_pencil(state: PencilState, max_steps: int = 200) -> PencilState:
    for _ in range(max_steps):
        if not state.pending:
            break
        state = blow_up_base_point(state, state.pending[0])
    else:
        raise PencilError(f"pencil not resolved after {max_steps} blow-ups")
    sq = state.fiber_class.square
    if sq != 0:
        raise IrrationalBasePoint(f"{sq} intersections unaccounted for by rational base points")
    return state


def _expand(factors: Sequence[tuple[PlaneCurve, int]]) -> sp.Expr:
    return sp.expand(sp.Mul(*[f.as_sympy() ** k for f, k in factors]))


def member_coordinates(state: PencilState, factors: Sequence[tuple[PlaneCurve, int]]) -> tuple[Fraction, Fraction]:
    """``(lam, mu)`` with ``product = lam*F + mu*G``."""
    prod = PlaneCurve.from_sympy(_expand(factors))
    if prod.degree != state.degree:
        raise PencilError(f"member has degree {prod.degree}, pencil has degree {state.degree}")
    mons = P.monomials(state.degree)
    fv, gv, pv = (tuple(c.terms.get(m, Fraction(0)) for m in mons) for c in (state.F, state.G, prod))
    if rank((fv, gv, pv)) != 2:
        raise PencilError(f"{prod} is not a member of the pencil")
    # solve lam*F + mu*G = prod on two independent coordinates
    for i in range(len(mons)):
        for j in range(i + 1, len(mons)):
            det = fv[i] * gv[j] - fv[j] * gv[i]
            if det:
                lam = (pv[i] * gv[j] - pv[j] * gv[i]) / det
                mu = (fv[i] * pv[j] - fv[j] * pv[i]) / det
                return lam, mu
    raise PencilError("degenerate pencil")  # pragma: no cover - rank 2 guarantees a nonzero minor


@dataclass(frozen=True)
class FiberComponent:
    name: str
    cls: DivisorClass
    multiplicity: int
    curve: PlaneCurve | None = None


def member_fiber(
    state: PencilState, factors: Sequence[tuple[PlaneCurve, int]], names: Sequence[str] | None = None
) -> tuple[Tower, list[FiberComponent]]:
    """Components of the full fibre over a member, with multiplicities.

    Factor curves are tracked from the start by replaying the tower.
    """
    member_coordinates(state, factors)
    for f, k in factors:
        if k < 1:
            raise PencilError("factor multiplicities must be positive")
        _, fl = sp.factor_list(f.as_sympy(), X, Y, Z)
        if len(fl) != 1 or fl[0][1] != 1:
            raise PencilError(f"factor {f} is not irreducible over Q")
    names = list(names) if names is not None else [f"C{i + 1}" for i in range(len(factors))]
    tower = state.tower.replay({n: f for n, (f, _) in zip(names, factors)})
    coeff: dict[str, int] = {n: k for n, (_, k) in zip(names, factors)}
    for step in tower.steps:
        total = sum(c * step.orders.get(name, 0) for name, c in coeff.items())
        coeff[step.point.label] = total - int(step.pencil_multiplicity or 0)
    comps = []
    for name, c in coeff.items():
        if c < 0:
            raise PencilError(f"negative coefficient {c} for {name}: member is not a pencil member")
        if c:
            curve = dict(zip(names, (f for f, _ in factors))).get(name)
            comps.append(FiberComponent(name, tower.curve_class(name), c, curve))
    return tower, comps


def degenerate_member_config(
    state: PencilState, factors: Sequence[tuple[PlaneCurve, int]], names: Sequence[str] | None = None
) -> CurveConfig:
    if state.pending:
        raise PencilError("resolve the pencil before extracting fibres")
    tower, comps = member_fiber(state, factors, names)
    cfg = CurveConfig.from_classes(
        [c.name for c in comps], [c.cls for c in comps], tower.lattice, [c.multiplicity for c in comps]
    )
    if cfg.class_sum(cfg.multiplicities) != state.fiber_class:  # type: ignore[arg-type]
        raise PencilError("fibre components do not add up to the fibre class")
    return cfg


def cluster_fiber(
    factors: Sequence[tuple[PlaneCurve, int]], cluster: Cluster, names: Sequence[str] | None = None
) -> tuple[Tower, list[FiberComponent]]:
    """Virtual transform of ``prod f^k`` through an assigned cluster.

    Blowing up a point of assigned multiplicity ``m`` gives the new
    exceptional curve the coefficient ``sum k * ord(f) - m``.  Used where no
    pencil is present, e.g. after the cluster has been edited.
    """
    names = list(names) if names is not None else [f"C{i + 1}" for i in range(len(factors))]
    tower = Tower.start({n: f for n, (f, _) in zip(names, factors)})
    coeff: dict[str, int] = {n: k for n, (_, k) in zip(names, factors)}
    for point in cluster:
        tower = tower.blow_up(point)
        step = tower.steps[-1]
        total = sum(c * step.orders.get(name, 0) for name, c in coeff.items())
        coeff[point.label] = total - point.multiplicity
    curves = dict(zip(names, (f for f, _ in factors)))
    comps = []
    for name, c in coeff.items():
        if c < 0:
            raise PencilError(f"{name} gets coefficient {c}: the divisor does not pass through the cluster")
        if c:
            comps.append(FiberComponent(name, tower.curve_class(name), c, curves.get(name)))
    return tower, comps
