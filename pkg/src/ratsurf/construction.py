"""Anticanonical surfaces with an Ẽ8 or D̃8 boundary, and the twist that
makes the normal bundle of the boundary non-torsion.

A surface is stored as a cluster of points in P^2 (all of multiplicity
one) together with a plane cubic, given by its factors, whose virtual
transform through the cluster is the boundary divisor.  Everything else
(lattice, boundary configuration, h^0 values) is recomputed from these two
pieces, so a surface JSON file is small and auditable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .config import (
    ConfigError,
    CurveConfig,
    classify_affine_dynkin,
    first_kind_exceptionals,
    is_connected,
    semidefiniteness_report,
)
from .exact_linalg import RationalLike, format_rational, rational
from .lattice import DivisorClass, LatticeError, SurfaceLattice, blow_down, blow_up, euler_char, noether_check
from .pencils import (
    Cluster,
    ClusterError,
    ClusterPoint,
    PencilError,
    PlaneCurve,
    check_smooth,
    cluster_fiber,
    degenerate_member_config,
    linear_system_dim,
    resolve_pencil,
    start_pencil,
)
from .pencils.poly import evaluate
from .pencils.tower import Tower
from .zariski import ZariskiError, zariski_decompose

DEFAULT_N = 5
TARGET_KINDS = ("E_affine(8)", "D_affine(8)")

# quadric and tangent line of the D̃8 model; Q touches L at (1:0:0)
D8_QUADRIC = PlaneCurve.parse("x*z - y^2")
D8_LINE = PlaneCurve.parse("z")
D8_DEFAULT_M = (1, 0, 1)
# tried in order by construct_d8(None); a form through (1:0:0) makes C singular there
D8_FALLBACK_M = ((1, 0, 1), (1, 0, 0), (1, 1, 1), (2, 1, 3))


class ConstructionError(ValueError):
    pass


class ForbiddenTwistPoint(ConstructionError):
    pass


@dataclass(frozen=True)
class MemberFactor:
    name: str
    curve: PlaneCurve
    multiplicity: int

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "curve": self.curve.to_json(), "multiplicity": self.multiplicity}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> MemberFactor:
        return cls(str(data["name"]), PlaneCurve.from_json(data["curve"]), int(data["multiplicity"]))


@dataclass(frozen=True)
class ConstructedSurface:
    kind: str
    lattice: SurfaceLattice
    boundary: CurveConfig
    boundary_class: DivisorClass
    cluster: Cluster | None
    member: tuple[MemberFactor, ...]
    h0_antiK: int | None
    provenance: Mapping[str, Any] = field(default_factory=dict, compare=False)
    tower: Tower | None = field(default=None, compare=False, repr=False)

    @property
    def marks(self) -> tuple[int, ...]:
        return tuple(self.boundary.multiplicities or ())

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "kind": self.kind,
            "surface": self.lattice.to_json(),
            "cluster": self.cluster.to_json() if self.cluster is not None else None,
            "member": [m.to_json() for m in self.member],
            "boundary": self.boundary.to_json(),
            "boundary_class": [format_rational(c) for c in self.boundary_class.coords],
            "h0_antiK": self.h0_antiK,
            "provenance": dict(self.provenance),
        }
        if self.tower is not None:
            out["tower"] = [s.to_json() for s in self.tower.steps]
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> ConstructedSurface:
        """Rebuild a surface; geometric data is recomputed and must match what is stored."""
        try:
            provenance = dict(data.get("provenance") or {})
            member = tuple(MemberFactor.from_json(m) for m in data.get("member") or [])
            cluster = Cluster.from_json(data["cluster"]) if data.get("cluster") is not None else None
            if member and cluster is not None:
                s = build_surface(member, cluster, provenance, compute_h0=False)
                stored = data.get("boundary")
                if stored is not None and CurveConfig.from_json(stored, s.lattice) != s.boundary:
                    raise ConstructionError("stored boundary disagrees with the cluster and member")
                h0 = data.get("h0_antiK")
                return replace(s, h0_antiK=int(h0) if h0 is not None else None, kind=str(data.get("kind", s.kind)))
            lattice = SurfaceLattice.from_json(data["surface"])
            boundary = CurveConfig.from_json(data["boundary"], lattice)
            bclass = lattice.divisor(data["boundary_class"])
            h0 = data.get("h0_antiK")
            return cls(
                str(data.get("kind", classify_affine_dynkin(boundary).name)),
                lattice,
                boundary,
                bclass,
                cluster,
                member,
                int(h0) if h0 is not None else None,
                provenance,
            )
        except (KeyError, TypeError) as exc:
            raise ConstructionError(f"malformed surface: {exc}") from exc


def anticanonical_cluster(cluster: Cluster) -> Cluster:
    """The cluster with every multiplicity set to one, i.e. the base locus of ``-K``."""
    return Cluster(tuple(p.with_multiplicity(1) for p in cluster))


def h0_antimultiple(cluster: Cluster, n: int) -> int:
    """``h^0(-nK)`` on the blow-up of ``cluster``: forms of degree 3n through n times the cluster."""
    if n == 0:
        return 1
    return linear_system_dim(3 * n, anticanonical_cluster(cluster).scaled(n))


def build_surface(
    member: Sequence[MemberFactor],
    cluster: Cluster,
    provenance: Mapping[str, Any] | None = None,
    *,
    compute_h0: bool = True,
) -> ConstructedSurface:
    """Blow up ``cluster`` and take the virtual transform of the member as boundary."""
    factors = [(m.curve, m.multiplicity) for m in member]
    tower, comps = cluster_fiber(factors, cluster, [m.name for m in member])
    boundary = CurveConfig.from_classes(
        [c.name for c in comps], [c.cls for c in comps], tower.lattice, [c.multiplicity for c in comps]
    )
    bclass = boundary.class_sum(boundary.multiplicities)  # type: ignore[arg-type]
    h0 = h0_antimultiple(cluster, 1) if compute_h0 else None
    return ConstructedSurface(
        classify_affine_dynkin(boundary).name,
        tower.lattice,
        boundary,
        bclass,
        cluster,
        tuple(member),
        h0,
        dict(provenance or {}),
        tower,
    )


def _finish_pencil(F: PlaneCurve, G: PlaneCurve, member: Sequence[MemberFactor], expected: str, provenance: dict) -> ConstructedSurface:
    state = resolve_pencil(start_pencil(F, G))
    n = len(state.tower.steps)
    if n != 9:
        raise ConstructionError(f"pencil resolved in {n} blow-ups, expected 9")
    from_pencil = degenerate_member_config(
        state, [(m.curve, m.multiplicity) for m in member], [m.name for m in member]
    )
    s = build_surface(member, state.cluster(), provenance)
    if from_pencil != s.boundary:
        raise ConstructionError("fibre of the pencil and virtual transform through its cluster disagree")
    if s.boundary_class != state.fiber_class:
        raise ConstructionError("boundary is not the fibre class")
    if s.kind != expected:
        raise ConstructionError(f"boundary classified as {s.kind}, expected {expected}")
    return s


def construct_e8(a: RationalLike = 0, b: RationalLike = 1) -> ConstructedSurface:
    """Pencil spanned by ``y^2 z = x^3 + a x z^2 + b z^3`` and three times its flex tangent ``z = 0``."""
    a, b = rational(a), rational(b)
    disc = 4 * a**3 + 27 * b**2
    if disc == 0:
        raise ConstructionError(f"singular cubic: 4a^3 + 27b^2 = 0 for a = {a}, b = {b}")
    C = PlaneCurve.from_terms(3, {(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): -a, (0, 0, 3): -b})
    rep = check_smooth(C)
    if not rep:
        raise ConstructionError(f"C = {C} is not smooth: {rep.reason} {rep.witness}")  # pragma: no cover
    L = PlaneCurve.parse("z")
    prov = {
        "recipe": "e8",
        "a": format_rational(a),
        "b": format_rational(b),
        "discriminant": format_rational(disc),
        "C": str(C),
        "pencil": [str(C), "z^3"],
    }
    return _finish_pencil(C, L**3, [MemberFactor("L", L, 3)], "E_affine(8)", prov)


def _linear(m: PlaneCurve | Sequence[RationalLike]) -> PlaneCurve | None:
    if isinstance(m, PlaneCurve):
        if m.degree != 1:
            raise ConstructionError("M must be a linear form")
        return m
    coeffs = [rational(c) for c in m]
    if len(coeffs) != 3:
        raise ConstructionError("M needs three coefficients (x, y, z)")
    if not any(coeffs):
        return None
    return PlaneCurve.from_terms(1, {(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})


def construct_d8(m_coeffs: PlaneCurve | Sequence[RationalLike] | None = D8_DEFAULT_M) -> ConstructedSurface:
    """Pencil spanned by ``C = L^3 + M Q`` and ``L Q`` with ``Q: xz = y^2``, ``L: z = 0``.

    ``None`` tries :data:`D8_FALLBACK_M` in order and keeps the first form
    that gives a smooth ``C``.
    """
    if m_coeffs is None:
        errors = []
        for m in D8_FALLBACK_M:
            try:
                return construct_d8(m)
            except ConstructionError as exc:
                errors.append(f"{m}: {exc}")
        raise ConstructionError("no fallback M works: " + "; ".join(errors))  # pragma: no cover
    M = _linear(m_coeffs)
    if M is None:
        raise ConstructionError("M = 0 gives C = L^3, which is non-reduced; choose a nonzero M")
    C = D8_LINE**3 + M * D8_QUADRIC
    rep = check_smooth(C)
    if not rep:
        raise ConstructionError(f"C = {C} is not smooth ({rep.reason}: {rep.witness}); try a different M")
    prov = {"recipe": "d8", "M": str(M), "C": str(C), "pencil": [str(C), str(D8_LINE * D8_QUADRIC)]}
    member = [MemberFactor("L", D8_LINE, 1), MemberFactor("Q", D8_QUADRIC, 1)]
    try:
        return _finish_pencil(C, D8_LINE * D8_QUADRIC, member, "D_affine(8)", prov)
    except PencilError as exc:
        raise ConstructionError(f"M = {M}: {exc}") from exc


# --- the twist --------------------------------------------------------------


@dataclass(frozen=True)
class TwistData:
    contracted: str
    base_point: ClusterPoint
    component: str
    h0_after_blow_down: int
    blown_down_square: Fraction


def _require_tower(s: ConstructedSurface) -> tuple[Tower, Cluster]:
    if s.cluster is None or not s.member:
        raise ConstructionError("the surface carries no cluster and member; cannot edit its blow-ups")
    tower = s.tower
    if tower is None:
        tower = build_surface(s.member, s.cluster, compute_h0=False).tower
    assert tower is not None
    return tower, s.cluster


def contractible_section(s: ConstructedSurface) -> TwistData:
    """Find the (-1)-curve meeting the boundary once, contract it and record the data."""
    tower, cluster = _require_tower(s)
    D = s.boundary_class
    in_boundary = set(s.boundary.labels)
    candidates = []
    for step in tower.steps:
        label = step.point.label
        if label in in_boundary:
            continue
        e = tower.curve_class(label)
        if e.square == -1 and e.dot(D) == 1:
            candidates.append(label)
    if not candidates:
        raise ConstructionError("no exceptional class with e^2 = -1 and e.D = 1 in the tower")
    label = candidates[-1]
    if label != tower.steps[-1].point.label:
        raise ConstructionError(f"{label} is not the last blow-up; contracting it needs a relabelled cluster")
    e = tower.curve_class(label)
    try:
        small, push = blow_down(s.lattice, e)
    except LatticeError as exc:
        raise ConstructionError(str(exc)) from exc
    D1 = push(D)
    if D1.square != 1:
        raise ConstructionError(f"blown-down boundary has square {D1.square}, expected 1")
    h0 = h0_antimultiple(cluster.without(label), 1)
    if h0 != 2:
        raise ConstructionError(f"h0 of the blown-down boundary is {h0}, expected 2")
    step = tower.steps[-1]
    through = [c.label for c in s.boundary.components if step.orders.get(c.label, 0) > 0]
    if len(through) != 1:
        raise ConstructionError(f"base point lies on {len(through)} boundary components: {through}")
    comp = through[0]
    mult = s.boundary.multiplicities[s.boundary.labels.index(comp)]  # type: ignore[index]
    if mult != 1:
        raise ConstructionError(f"component {comp} through the base point has multiplicity {mult}")
    if comp != step.point.parent:
        raise ConstructionError(f"base point is not on the exceptional curve {comp} of its parent")
    return TwistData(label, step.point, comp, h0, D1.square)


def twist_point(s: ConstructedSurface, q_param: RationalLike) -> ClusterPoint:
    """The point ``v1 = q`` of the distinguished component, after checking it is allowed."""
    data = contractible_section(s)
    tower, _ = _require_tower(s)
    P = data.base_point
    q = rational(q_param)
    Q = ClusterPoint(P.label, P.parent, (1, q))
    if Q.position == P.position:
        raise ForbiddenTwistPoint(f"q = {format_rational(q)} selects the base point P on {data.component}")
    chart = tower.chart(f"{P.parent}.1")
    for c in s.boundary.labels:
        if c == data.component or c not in chart:
            continue
        if evaluate(chart[c], Fraction(0), q) == 0:
            raise ForbiddenTwistPoint(
                f"q = {format_rational(q)} is the point where {data.component} meets {c}"
            )
    return Q


def _twisted(s: ConstructedSurface, Q: ClusterPoint, data: TwistData, mode: str) -> ConstructedSurface:
    if s.h0_antiK is not None and s.h0_antiK != 2:
        raise ConstructionError(f"the input surface has h0(-K) = {s.h0_antiK}; the twist starts from h0(-K) = 2")
    assert s.cluster is not None
    cluster = s.cluster.without(data.contracted).plus(Q)
    twist = {
        "mode": mode,
        "contracted": data.contracted,
        "P": data.base_point.to_json(),
        "Q": Q.to_json(),
        "component": data.component,
        "blown_down_boundary_square": format_rational(data.blown_down_square),
        "h0_after_blow_down": data.h0_after_blow_down,
    }
    out = build_surface(s.member, cluster)
    # the same lattice is reached by contracting and blowing up again
    small, _ = blow_down(s.lattice, s.lattice.basis(data.contracted))
    again = blow_up(small)
    if again.labels != out.lattice.labels or again.canonical != out.lattice.canonical:
        raise ConstructionError("tower surgery and lattice blow-down/blow-up disagree")  # pragma: no cover
    if out.kind != s.kind or out.marks != s.marks:
        raise ConstructionError(f"twist changed the boundary: {s.kind} {s.marks} -> {out.kind} {out.marks}")
    twist["h0_antiK"] = out.h0_antiK
    twist["certificate"] = torsion_certificate(out.h0_antiK)
    return replace(out, provenance={**s.provenance, "twist": twist})


def twist_nontorsion(s: ConstructedSurface, q_param: RationalLike) -> ConstructedSurface:
    """Contract the section through ``P`` and blow up ``Q = (1, q)`` on the same component instead."""
    data = contractible_section(s)
    Q = twist_point(s, q_param)
    return _twisted(s, Q, data, "twist")


def reblow_base_point(s: ConstructedSurface) -> ConstructedSurface:
    """Contract the section and blow up ``P`` again; gives back the starting surface."""
    data = contractible_section(s)
    return _twisted(s, data.base_point, data, "reblow_base_point")


def torsion_certificate(h0: int | None) -> dict[str, Any]:
    """How ``h^0(-K)`` decides whether the normal bundle of the boundary is torsion.

    The boundary ``D`` is a non-reduced curve of arithmetic genus one whose
    ``Pic^0`` is the additive group, which has no non-trivial torsion.  With
    ``h^1(O) = 0`` the restriction sequence gives ``h^0(D) = 2`` exactly
    when ``O_D(D)`` is trivial.
    """
    status = "undetermined" if h0 is None else "torsion (trivial)" if h0 == 2 else "non-torsion" if h0 == 1 else "unexpected"
    return {
        "pic0_of_boundary": "G_a",
        "torsion_iff_trivial": True,
        "trivial_iff_h0_antiK_equals_2": True,
        "h0_antiK": h0,
        "normal_bundle": status,
    }


# --- verification -------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Any = None

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict[str, Any]:
        return {"overall": self.overall, "failed": self.failed, "checks": [c.to_json() for c in self.checks]}

    def render_text(self) -> str:
        width = max((len(c.name) for c in self.checks), default=0)
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}  {_short(c.witness)}" for c in self.checks]
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)


def _short(w: Any, limit: int = 100) -> str:
    text = str(w) if not isinstance(w, dict) else ", ".join(f"{k}={v}" for k, v in w.items())
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _config_checks(c: CurveConfig) -> list[Check]:
    """Checks that only need the intersection numbers of the boundary."""
    checks = []
    try:
        checks.append(Check("connected", is_connected(c)))
    except ConfigError as exc:
        checks.append(Check("connected", False, str(exc)))
    fk = first_kind_exceptionals(c)
    checks.append(Check("no_first_kind_exceptional", not fk, [c.labels[i] for i in fk]))
    rep = semidefiniteness_report(c)
    gen = rep.generator
    ok = not rep.hypothesis_violation and gen is not None and all(x > 0 for x in gen)
    checks.append(Check("semidefinite_kernel_one", ok, rep.to_json()))
    if gen is not None and all(x > 0 for x in gen):
        try:
            z = zariski_decompose(c, gen)
            ok = not any(z.negative_part)
            checks.append(Check("zariski_trivial", ok, z.to_json(c.labels)))
        except ZariskiError as exc:
            checks.append(Check("zariski_trivial", False, str(exc)))
    else:
        checks.append(Check("zariski_trivial", False, "no positive kernel generator to decompose"))
    return checks


def config_hypotheses(c: CurveConfig) -> VerificationReport:
    """Hypotheses on a boundary configuration alone: connected, no (-1)-curves,
    corank-one semidefinite form with a positive generator, and a generator
    that is its own positive part."""
    return VerificationReport(tuple(_config_checks(c)))


def verify_hypotheses(s: ConstructedSurface, n_max: int = DEFAULT_N) -> VerificationReport:
    c = s.boundary
    lat = s.lattice
    K = lat.K
    checks = _config_checks(c)
    rep = semidefiniteness_report(c)
    mults = tuple(c.multiplicities or ())
    ok = rep.generator is not None and mults == rep.generator
    if ok and all(comp.cls is not None for comp in c.components):
        ok = c.class_sum(mults) == s.boundary_class
    checks.append(Check("marks_weighted_sum", ok, {"marks": list(mults), "kernel_generator": rep.to_json()["generator"]}))
    kdeg = {comp.label: format_rational(comp.k_degree) for comp in c.components}
    checks.append(Check("k_degree_zero", all(comp.k_degree == 0 for comp in c.components), kdeg))
    checks.append(
        Check(
            "boundary_is_anticanonical",
            s.boundary_class == -K,
            {"D": str(s.boundary_class), "-K": str(-K)},
        )
    )
    k2 = K.square
    checks.append(Check("K_squared_zero", k2 == 0, format_rational(k2)))
    checks.append(Check("rank_ten", lat.rank == 10, lat.rank))
    ok, data = noether_check(lat)
    checks.append(Check("noether", ok, data))
    verdict = classify_affine_dynkin(c)
    checks.append(Check("affine_dynkin", verdict.name in TARGET_KINDS, verdict.to_json()))
    checks.append(Check("nine_components", len(c) == 9, len(c)))
    if s.cluster is None:
        checks.append(Check("h0_antiK_one", False, "no cluster: h0 cannot be computed"))
    else:
        dims = {n: h0_antimultiple(s.cluster, n) for n in range(1, n_max + 1)}
        checks.append(
            Check(
                "h0_antiK_one",
                all(v == 1 for v in dims.values()),
                {"h0(-nK)": dims, "certificate": torsion_certificate(dims[1])},
            )
        )
    D = s.boundary_class
    chis = {n: euler_char(lat, D * n) for n in range(0, n_max + 1)}
    checks.append(Check("euler_char_one", all(v == 1 for v in chis.values()), {n: format_rational(v) for n, v in chis.items()}))
    return VerificationReport(tuple(checks))


# --- the family -------------------------------------------------------------------


def fingerprint(s: ConstructedSurface) -> dict[str, Any]:
    """Lattice-level data of a surface; equal fingerprints do not decide isomorphism."""
    c = s.boundary
    return {
        "kind": s.kind,
        "marks": list(s.marks),
        "labels": list(c.labels),
        "gram": [[format_rational(x) for x in row] for row in c.gram],
        "classes": [[format_rational(x) for x in comp.cls.coords] if comp.cls else None for comp in c.components],
        "boundary_class": [format_rational(x) for x in s.boundary_class.coords],
        "rank": s.lattice.rank,
        "h0_antiK": s.h0_antiK,
    }


@dataclass(frozen=True)
class SweepEntry:
    q_param: Fraction
    surface: ConstructedSurface | None
    report: VerificationReport | None
    fingerprint: dict[str, Any] | None
    error: str | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "q": format_rational(self.q_param),
            "report": self.report.to_json() if self.report else None,
            "fingerprint": self.fingerprint,
            "error": self.error,
        }


def sweep_q(s: ConstructedSurface, q_params: Sequence[RationalLike], n_max: int = DEFAULT_N) -> list[SweepEntry]:
    out = []
    for q in q_params:
        qv = rational(q)
        try:
            t = twist_nontorsion(s, qv)
        except (ConstructionError, ClusterError) as exc:
            out.append(SweepEntry(qv, None, None, None, str(exc)))
            continue
        out.append(SweepEntry(qv, t, verify_hypotheses(t, n_max), fingerprint(t)))
    return out


def sweep_summary(entries: Sequence[SweepEntry]) -> dict[str, Any]:
    good = [e for e in entries if e.fingerprint is not None]
    prints = [e.fingerprint for e in good]
    return {
        "parameters": [format_rational(e.q_param) for e in entries],
        "valid": len(good),
        "errors": {format_rational(e.q_param): e.error for e in entries if e.error},
        "fingerprints_identical": bool(prints) and all(p == prints[0] for p in prints),
        "all_verified": bool(good) and all(e.report is not None and e.report.overall for e in good),
        "isomorphism": "undecided",
    }
