"""Configurations of irreducible curves on a surface and their dual graphs.

A :class:`CurveConfig` carries, for each component, its self-intersection
and canonical degree, plus the symmetric matrix of pairwise intersection
numbers.  Classes in an ambient lattice are optional; when present the
numbers are cross-checked against the lattice pairing.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import networkx as nx

from . import exact_linalg as la
from .exact_linalg import Definiteness, QMatrix, format_rational, rational
from .lattice import DivisorClass, SurfaceLattice, intersect


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    label: str
    self_int: Fraction
    k_degree: Fraction
    cls: DivisorClass | None = None


@dataclass(frozen=True)
class CurveConfig:
    components: tuple[Component, ...]
    gram: QMatrix
    ambient: SurfaceLattice | None = field(default=None, compare=False)
    multiplicities: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.components)
        if la.shape(self.gram) != (n, n):
            raise ConfigError(f"gram is {la.shape(self.gram)}, expected {n}x{n}")
        if not la.is_symmetric(self.gram):
            raise ConfigError("gram is not symmetric")
        for i, c in enumerate(self.components):
            if self.gram[i][i] != c.self_int:
                raise ConfigError(f"{c.label}: gram diagonal {self.gram[i][i]} != self_int {c.self_int}")
            for j in range(i):
                x = self.gram[i][j]
                if x < 0 or x.denominator != 1:
                    raise ConfigError(
                        f"{c.label}.{self.components[j].label} = {x}; distinct curves meet in a non-negative integer"
                    )
        if self.multiplicities is not None and len(self.multiplicities) != n:
            raise ConfigError("multiplicities do not match the components")
        if self.ambient is not None:
            K = self.ambient.K
            for i, c in enumerate(self.components):
                if c.cls is None:
                    continue
                if c.cls.square != c.self_int or c.cls.dot(K) != c.k_degree:
                    raise ConfigError(f"{c.label}: numbers disagree with its class {c.cls}")
                for j, o in enumerate(self.components[:i]):
                    if o.cls is not None and c.cls.dot(o.cls) != self.gram[i][j]:
                        raise ConfigError(f"{c.label}.{o.label} disagrees with the lattice pairing")

    def __len__(self) -> int:
        return len(self.components)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.components)

    @classmethod
    def from_classes(
        cls,
        labels: Sequence[str],
        classes: Sequence[DivisorClass],
        ambient: SurfaceLattice,
        multiplicities: Sequence[int] | None = None,
    ) -> CurveConfig:
        K = ambient.K
        comps = tuple(
            Component(l, intersect(ambient, c, c), intersect(ambient, c, K), c) for l, c in zip(labels, classes)
        )
        gram = tuple(tuple(intersect(ambient, a, b) for b in classes) for a in classes)
        return cls(comps, gram, ambient, tuple(multiplicities) if multiplicities is not None else None)

    @classmethod
    def from_gram(
        cls,
        gram: Sequence[Sequence[Any]],
        k_degrees: Sequence[Any] | None = None,
        labels: Sequence[str] | None = None,
    ) -> CurveConfig:
        """Configuration without classes.

        K-degrees default to ``-2 - self_int``, which makes every component
        a smooth rational curve by adjunction.
        """
        g = la.qmatrix(gram)
        n = len(g)
        labels = list(labels) if labels is not None else [f"C{i + 1}" for i in range(n)]
        if k_degrees is None:
            k = [-2 - g[i][i] for i in range(n)]
        else:
            k = [rational(x) for x in k_degrees]
        comps = tuple(Component(labels[i], g[i][i], Fraction(k[i])) for i in range(n))
        return cls(comps, g)

    def class_sum(self, coeffs: Sequence[Any]) -> DivisorClass:
        if self.ambient is None or any(c.cls is None for c in self.components):
            raise ConfigError("configuration has no classes")
        total = self.ambient.zero()
        for c, a in zip(self.components, coeffs):
            total = total + c.cls * a  # type: ignore[operator]
        return total

    def permuted(self, perm: Sequence[int]) -> CurveConfig:
        """Reorder components so that new position ``i`` holds old component ``perm[i]``."""
        comps = tuple(self.components[p] for p in perm)
        gram = tuple(tuple(self.gram[p][q] for q in perm) for p in perm)
        mult = tuple(self.multiplicities[p] for p in perm) if self.multiplicities else None
        return CurveConfig(comps, gram, self.ambient, mult)

    def to_json(self) -> dict[str, Any]:
        comps = []
        for c in self.components:
            item: dict[str, Any] = {
                "label": c.label,
                "self_int": format_rational(c.self_int),
                "k_degree": format_rational(c.k_degree),
            }
            if c.cls is not None:
                item["class"] = [format_rational(x) for x in c.cls.coords]
            comps.append(item)
        out: dict[str, Any] = {
            "components": comps,
            "gram": [[format_rational(x) for x in row] for row in self.gram],
        }
        if self.multiplicities is not None:
            out["multiplicities"] = list(self.multiplicities)
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any], ambient: SurfaceLattice | None = None) -> CurveConfig:
        """Missing ``self_int`` is read off the Gram diagonal; missing ``k_degree`` defaults as in :meth:`from_gram`."""
        try:
            raw = list(data["components"])
            gram = la.qmatrix(data["gram"])
            comps = []
            for i, c in enumerate(raw):
                klass = None
                if "class" in c:
                    if ambient is None:
                        raise ConfigError(f"{c['label']}: class given without an ambient lattice")
                    klass = ambient.divisor(c["class"])
                sq = rational(c["self_int"]) if "self_int" in c else gram[i][i]
                kd = rational(c["k_degree"]) if "k_degree" in c else -2 - sq
                comps.append(Component(str(c["label"]), sq, kd, klass))
            mult = data.get("multiplicities")
        except (KeyError, TypeError, IndexError, la.LinalgError) as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc
        return cls(tuple(comps), gram, ambient, tuple(int(m) for m in mult) if mult is not None else None)


def _require_nonempty(c: CurveConfig) -> None:
    if len(c) == 0:
        raise ConfigError("empty configuration")


def is_connected(c: CurveConfig) -> bool:
    _require_nonempty(c)
    n = len(c)
    seen = {0}
    todo = deque([0])
    while todo:
        i = todo.popleft()
        for j in range(n):
            if j not in seen and c.gram[i][j] > 0:
                seen.add(j)
                todo.append(j)
    return len(seen) == n


class ReportKind(str, enum.Enum):
    NEGATIVE_DEFINITE = "negative_definite"
    SEMIDEFINITE = "semidefinite"
    VIOLATES = "violates"


@dataclass(frozen=True)
class SemidefinitenessReport:
    kind: ReportKind
    kernel_dim: int = 0
    generator: tuple[int, ...] | None = None

    @property
    def hypothesis_violation(self) -> bool:
        """True unless the form is semidefinite with a one-dimensional kernel."""
        return not (self.kind is ReportKind.SEMIDEFINITE and self.kernel_dim == 1)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "kernel_dim": self.kernel_dim,
            "generator": list(self.generator) if self.generator is not None else None,
        }


def semidefiniteness_report(c: CurveConfig) -> SemidefinitenessReport:
    d = la.definiteness(c.gram)
    if d is Definiteness.NEGATIVE_DEFINITE:
        return SemidefinitenessReport(ReportKind.NEGATIVE_DEFINITE)
    if d is Definiteness.INDEFINITE_OR_POSITIVE:
        return SemidefinitenessReport(ReportKind.VIOLATES)
    ker = la.kernel_basis(c.gram)
    if len(ker) != 1:
        return SemidefinitenessReport(ReportKind.SEMIDEFINITE, kernel_dim=len(ker))
    gen = la.primitive_integer_generator(ker[0])
    return SemidefinitenessReport(ReportKind.SEMIDEFINITE, kernel_dim=1, generator=gen)


def arithmetic_genus(c: CurveConfig, i: int) -> Fraction:
    comp = c.components[i]
    return 1 + (comp.self_int + comp.k_degree) / 2


def first_kind_exceptionals(c: CurveConfig) -> list[int]:
    return [
        i
        for i, comp in enumerate(c.components)
        if comp.self_int == -1 and comp.k_degree == -1 and arithmetic_genus(c, i) == 0
    ]


def dual_graph(c: CurveConfig) -> nx.Graph:
    g = nx.Graph()
    for i, comp in enumerate(c.components):
        g.add_node(i, label=comp.label, self_int=comp.self_int)
    for i in range(len(c)):
        for j in range(i + 1, len(c)):
            w = c.gram[i][j]
            if w > 0:
                g.add_edge(i, j, weight=int(w))
    return g


class DynkinKind(str, enum.Enum):
    A = "A"
    D = "D"
    E = "E"
    NONE = "none"


@dataclass(frozen=True)
class DynkinVerdict:
    kind: DynkinKind
    n: int | None = None
    marks: tuple[int, ...] | None = None
    reason: str = ""

    @property
    def name(self) -> str:
        if self.kind is DynkinKind.NONE:
            return "none"
        return f"{self.kind.value}_affine({self.n})"

    def __str__(self) -> str:
        return self.name

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.name,
            "marks": list(self.marks) if self.marks is not None else None,
            "reason": self.reason,
        }


def _shape(g: nx.Graph) -> tuple[DynkinKind, int] | None:
    """Recognise the affine Dynkin shape of a simple connected graph on ``n+1`` vertices."""
    v = g.number_of_nodes()
    e = g.number_of_edges()
    deg = sorted((d for _, d in g.degree()), reverse=True)
    if v >= 3 and e == v and deg == [2] * v:
        return DynkinKind.A, v - 1
    if e != v - 1:
        return None
    # trees from here on
    if v == 5 and deg == [4, 1, 1, 1, 1]:
        return DynkinKind.D, 4
    branch = [x for x, d in g.degree() if d >= 3]
    if any(g.degree(x) > 3 for x in branch):
        return None
    if len(branch) == 2 and v >= 6:
        a, b = branch
        path = nx.shortest_path(g, a, b)
        leaves_ok = all(
            sum(1 for y in g.neighbors(x) if g.degree(y) == 1 and y not in path) == 2 for x in (a, b)
        )
        if leaves_ok and len(path) + 4 == v:
            return DynkinKind.D, v - 1
        return None
    if len(branch) != 1:
        return None
    center = branch[0]
    arms = []
    for start in g.neighbors(center):
        length, prev, cur = 1, center, start
        while True:
            nxt = [y for y in g.neighbors(cur) if y != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return DynkinKind.D, v - 1
    if arms == [2, 2, 2]:
        return DynkinKind.E, 6
    if arms == [1, 3, 3]:
        return DynkinKind.E, 7
    if arms == [1, 2, 5]:
        return DynkinKind.E, 8
    return None


def classify_affine_dynkin(c: CurveConfig) -> DynkinVerdict:
    none = DynkinKind.NONE
    if len(c) == 0:
        return DynkinVerdict(none, reason="empty configuration")
    for i, comp in enumerate(c.components):
        if comp.self_int != -2:
            return DynkinVerdict(none, reason=f"{comp.label} has self-intersection {comp.self_int}, not -2")
        if arithmetic_genus(c, i) != 0:
            return DynkinVerdict(none, reason=f"{comp.label} has arithmetic genus {arithmetic_genus(c, i)}")
    if not is_connected(c):
        return DynkinVerdict(none, reason="dual graph is disconnected")
    g = dual_graph(c)
    weights = sorted(d["weight"] for _, _, d in g.edges(data=True))
    if len(c) == 2 and weights == [2]:
        shape: tuple[DynkinKind, int] | None = (DynkinKind.A, 1)
    elif any(w != 1 for w in weights):
        return DynkinVerdict(none, reason="edge of weight > 1")
    else:
        shape = _shape(g)
    if shape is None:
        return DynkinVerdict(none, reason="graph is not an affine Dynkin diagram")
    rep = semidefiniteness_report(c)
    if rep.kind is not ReportKind.SEMIDEFINITE or rep.kernel_dim != 1 or rep.generator is None:
        return DynkinVerdict(none, reason=f"intersection form is {rep.kind.value} with kernel dimension {rep.kernel_dim}")
    if any(x <= 0 for x in rep.generator):
        return DynkinVerdict(none, reason="kernel generator is not positive")
    return DynkinVerdict(shape[0], shape[1], rep.generator)


def affine_gram(kind: str, n: int) -> QMatrix:
    """Intersection matrix of the affine Dynkin configuration of (-2)-curves."""
    edges: list[tuple[int, int]]
    if kind == "A":
        if n < 2:
            raise ConfigError("cycle configurations need at least three nodes here")
        size = n + 1
        edges = [(i, (i + 1) % size) for i in range(size)]
    elif kind == "D":
        if n < 4:
            raise ConfigError("D_affine needs n >= 4")
        size = n + 1
        # path 2..n-2 of length n-3, two leaves at each end
        spine = list(range(2, n - 1))
        edges = [(spine[i], spine[i + 1]) for i in range(len(spine) - 1)]
        edges += [(0, spine[0]), (1, spine[0]), (n - 1, spine[-1]), (n, spine[-1])]
    elif kind == "E":
        arms = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}
        if n not in arms:
            raise ConfigError("E_affine needs n in 6, 7, 8")
        size = n + 1
        edges = []
        nxt = 1
        for length in arms[n]:
            prev = 0
            for _ in range(length):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
    else:
        raise ConfigError(f"unknown Dynkin type {kind!r}")
    m = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        m[i][i] = Fraction(-2)
    for a, b in edges:
        m[a][b] = m[b][a] = Fraction(1)
    return tuple(tuple(r) for r in m)


def to_dot(c: CurveConfig, marks: Sequence[int] | None = None, name: str = "dual_graph") -> str:
    """Graphviz rendering; node labels carry self-intersection and multiplicity."""
    if marks is None:
        marks = c.multiplicities
    lines = [f"graph {name} {{"]
    for i, comp in enumerate(c.components):
        mult = f", mult={marks[i]}" if marks is not None else ""
        lines.append(f'  n{i} [label="{comp.label} (s²={format_rational(comp.self_int)}{mult})"];')
    for i, j, d in sorted(dual_graph(c).edges(data=True)):
        w = d["weight"]
        attr = ' [label="1"]' if w == 1 else f' [label="{w}", penwidth={w}]'
        lines.append(f"  n{i} -- n{j}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
