"""Picard lattices of iterated blow-ups of the projective plane.

The basis is ``H, E1, ..., En`` where ``H`` is the pullback of a line and
``Ei`` is the total transform of the i-th exceptional curve.  The pairing
is ``diag(1, -1, ..., -1)`` and the canonical class is ``-3H + sum(Ei)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from .exact_linalg import QMatrix, RationalLike, format_rational, rational


class LatticeError(ValueError):
    pass


_EXC_LABEL = re.compile(r"^E(\d+)$")


@dataclass(frozen=True)
class BlowUpRecord:
    """One entry of a lattice's blow-up history."""

    label: str
    center: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict[str, Any]:
        return {"label": self.label, "center": dict(self.center)}


@dataclass(frozen=True)
class SurfaceLattice:
    labels: tuple[str, ...]
    canonical: tuple[Fraction, ...]
    history: tuple[BlowUpRecord, ...] = ()

    def __post_init__(self) -> None:
        if not self.labels or self.labels[0] != "H":
            raise LatticeError("basis must start with H")
        if len(set(self.labels)) != len(self.labels):
            raise LatticeError(f"duplicate basis labels {self.labels}")
        if any(_EXC_LABEL.match(l) is None for l in self.labels[1:]):
            raise LatticeError(f"exceptional labels must look like E<n>: {self.labels}")
        if len(self.canonical) != len(self.labels):
            raise LatticeError("canonical class has the wrong length")

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def gram(self) -> QMatrix:
        n = self.rank
        return tuple(
            tuple(Fraction(0 if i != j else (1 if i == 0 else -1)) for j in range(n)) for i in range(n)
        )

    @property
    def K(self) -> DivisorClass:
        return DivisorClass(self, self.canonical)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LatticeError(f"no basis class {label!r} in {self.labels}") from None

    def basis(self, label: str) -> DivisorClass:
        coords = [Fraction(0)] * self.rank
        coords[self.index(label)] = Fraction(1)
        return DivisorClass(self, tuple(coords))

    @property
    def H(self) -> DivisorClass:
        return self.basis("H")

    def exceptional(self) -> list[DivisorClass]:
        return [self.basis(l) for l in self.labels[1:]]

    def divisor(self, coords: Sequence[RationalLike] | Mapping[str, RationalLike]) -> DivisorClass:
        """Build a class from a coordinate list or a ``{label: coeff}`` mapping."""
        if isinstance(coords, Mapping):
            v = [Fraction(0)] * self.rank
            for label, c in coords.items():
                v[self.index(label)] += rational(c)
            return DivisorClass(self, tuple(v))
        return DivisorClass(self, tuple(rational(c) for c in coords))

    def zero(self) -> DivisorClass:
        return DivisorClass(self, (Fraction(0),) * self.rank)

    def next_label(self) -> str:
        used = [int(_EXC_LABEL.match(l).group(1)) for l in self.labels[1:]]  # type: ignore[union-attr]
        return f"E{max(used, default=0) + 1}"

    def standard_canonical(self) -> tuple[Fraction, ...]:
        return (Fraction(-3),) + (Fraction(1),) * (self.rank - 1)

    def is_standard(self) -> bool:
        return self.canonical == self.standard_canonical()

    def to_json(self) -> dict[str, Any]:
        return {
            "basis": list(self.labels),
            "canonical": [format_rational(c) for c in self.canonical],
            "history": [r.to_json() for r in self.history],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> SurfaceLattice:
        try:
            labels = tuple(str(l) for l in data["basis"])
            canonical = tuple(rational(c) for c in data["canonical"])
            history = tuple(
                BlowUpRecord(str(r["label"]), dict(r.get("center", {}))) for r in data.get("history", [])
            )
        except (KeyError, TypeError) as exc:
            raise LatticeError(f"malformed surface lattice: {exc}") from exc
        return cls(labels, canonical, history)


@dataclass(frozen=True)
class DivisorClass:
    lattice: SurfaceLattice = field(repr=False)
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.lattice.rank:
            raise LatticeError(f"class of length {len(self.coords)} in a rank {self.lattice.rank} lattice")

    def _check(self, other: DivisorClass) -> None:
        if other.lattice.labels != self.lattice.labels:
            raise LatticeError("classes live in different lattices")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, k: RationalLike) -> DivisorClass:
        k = rational(k)
        return DivisorClass(self.lattice, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def dot(self, other: DivisorClass) -> Fraction:
        return intersect(self.lattice, self, other)

    @property
    def square(self) -> Fraction:
        return self.dot(self)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def as_dict(self) -> dict[str, Fraction]:
        return {l: c for l, c in zip(self.lattice.labels, self.coords) if c}

    def __str__(self) -> str:
        terms = []
        for label, c in zip(self.lattice.labels, self.coords):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            terms.append(f"{sign} {'' if mag == 1 else format_rational(mag)}{label}")
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def plane() -> SurfaceLattice:
    return SurfaceLattice(("H",), (Fraction(-3),))


def blow_up(l: SurfaceLattice, center: Mapping[str, Any] | None = None) -> SurfaceLattice:
    label = l.next_label()
    return SurfaceLattice(
        l.labels + (label,),
        l.canonical + (Fraction(1),),
        l.history + (BlowUpRecord(label, dict(center or {})),),
    )


def intersect(l: SurfaceLattice, a: DivisorClass, b: DivisorClass) -> Fraction:
    if len(a.coords) != l.rank or len(b.coords) != l.rank:
        raise LatticeError(f"rank mismatch: {len(a.coords)}, {len(b.coords)} vs lattice rank {l.rank}")
    return a.coords[0] * b.coords[0] - sum((x * y for x, y in zip(a.coords[1:], b.coords[1:])), Fraction(0))


def blow_down(l: SurfaceLattice, e: DivisorClass) -> tuple[SurfaceLattice, Callable[[DivisorClass], DivisorClass]]:
    """Contract the exceptional basis class ``e``.

    Only classes equal to one of the basis vectors ``Ei`` are accepted; the
    surviving basis keeps its labels.  Returns the smaller lattice and the
    pushforward, which forgets the ``Ei`` coordinate, so that
    ``D = pullback(pushforward(D)) - (D.e) e``.
    """
    if len(e.coords) != l.rank:
        raise LatticeError("class does not belong to this lattice")
    sq = intersect(l, e, e)
    kd = intersect(l, l.K, e)
    if sq != -1 or kd != -1:
        raise LatticeError(f"not a (-1)-class: e^2 = {sq}, K.e = {kd}")
    nonzero = [i for i, c in enumerate(e.coords) if c != 0]
    if len(nonzero) != 1 or nonzero[0] == 0 or e.coords[nonzero[0]] != 1:
        raise LatticeError(
            f"unsupported change of basis: {e} is not a basis exceptional class; "
            "only contractions of some Ei are modelled"
        )
    k = nonzero[0]
    label = l.labels[k]
    keep = [i for i in range(l.rank) if i != k]
    history = tuple(r for r in l.history if r.label != label) + (
        BlowUpRecord(f"contract:{label}", {"kind": "blow_down", "contracted": label}),
    )
    smaller = SurfaceLattice(
        tuple(l.labels[i] for i in keep),
        tuple(l.canonical[i] for i in keep),
        history,
    )

    def pushforward(d: DivisorClass) -> DivisorClass:
        if d.lattice.labels != l.labels:
            raise LatticeError("pushforward applied to a class from another lattice")
        return DivisorClass(smaller, tuple(d.coords[i] for i in keep))

    return smaller, pushforward


def pullback(big: SurfaceLattice, d: DivisorClass) -> DivisorClass:
    """Total transform of ``d`` into a lattice that contains its basis."""
    coords = [Fraction(0)] * big.rank
    for label, c in zip(d.lattice.labels, d.coords):
        coords[big.index(label)] = c
    return DivisorClass(big, tuple(coords))


def euler_char(l: SurfaceLattice, d: DivisorClass) -> Fraction:
    """Riemann-Roch on a rational surface: ``1 + (D^2 - D.K) / 2``."""
    return 1 + (intersect(l, d, d) - intersect(l, d, l.K)) / 2


def noether_check(l: SurfaceLattice) -> tuple[bool, dict[str, Any]]:
    k2 = intersect(l, l.K, l.K)
    euler_number = 2 + l.rank
    ok = k2 + euler_number == 12
    return ok, {
        "K^2": format_rational(k2),
        "topological_euler_number": euler_number,
        "sum": format_rational(k2 + euler_number),
        "holds": ok,
    }


def arithmetic_genus(l: SurfaceLattice, d: DivisorClass) -> Fraction:
    return 1 + (intersect(l, d, d) + intersect(l, d, l.K)) / 2


def chain(n: int, centers: Iterable[Mapping[str, Any]] | None = None) -> SurfaceLattice:
    """The plane blown up ``n`` times."""
    l = plane()
    centers = list(centers or [])
    for i in range(n):
        l = blow_up(l, centers[i] if i < len(centers) else None)
    return l
