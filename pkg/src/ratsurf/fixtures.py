"""Builders for the JSON fixtures shipped in ``ratsurf/data``.

The committed files are regenerated by ``python3 -m ratsurf.fixtures`` and a
test checks that they still match these builders.
"""

from __future__ import annotations

import json
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from .config import CurveConfig
from .construction import ConstructedSurface, construct_e8, twist_nontorsion

E8_SEED = {
    "recipe": "e8",
    "a": "0",
    "b": "1",
    "F": "y^2*z - x^3 - z^3",
    "G": "z^3",
    "member": "z:3",
}

D8_SEED = {
    "recipe": "d8",
    "M": ["1", "0", "1"],
    "F": "z^3 + (x + z)*(x*z - y^2)",
    "G": "z*(x*z - y^2)",
    "member": "z:1; x*z - y^2:1",
}


def cycle9_surface() -> ConstructedSurface:
    """Twisted Ẽ8 surface data with the boundary replaced by a 9-cycle of (-2)-classes.

    The cycle ``E1-E2, ..., E8-E9, 3H-2E1-E2-...-E8`` sums to ``-K`` with all
    marks 1, so only the Dynkin type differs from a valid surface.
    """
    base = twist_nontorsion(construct_e8(0, 1), 1)
    lat = base.lattice
    labels = [f"C{i}" for i in range(1, 10)]
    classes = [lat.divisor({f"E{i}": 1, f"E{i + 1}": -1}) for i in range(1, 9)]
    last = {"H": 3, "E1": -2}
    last.update({f"E{i}": -1 for i in range(2, 9)})
    classes.append(lat.divisor(last))
    boundary = CurveConfig.from_classes(labels, classes, lat, [1] * 9)
    return ConstructedSurface(
        "A_affine(8)",
        lat,
        boundary,
        boundary.class_sum([1] * 9),
        base.cluster,
        (),
        base.h0_antiK,
        {"recipe": "hand-built", "note": "cycle of nine (-2)-classes on the twisted E8 surface"},
    )


def first_kind_config() -> CurveConfig:
    """A (-1)-curve meeting a (-4)-curve twice: semidefinite, corank one, marks (2, 1)."""
    c = CurveConfig.from_gram([[-1, 2], [2, -4]], k_degrees=[-1, 2], labels=["E", "C"])
    return replace(c, multiplicities=(2, 1))


FIXTURES: dict[str, Callable[[], Any]] = {
    "e8_seed.json": lambda: E8_SEED,
    "d8_seed.json": lambda: D8_SEED,
    "untwisted_e8.json": lambda: construct_e8(0, 1).to_json(),
    "twisted_e8.json": lambda: twist_nontorsion(construct_e8(0, 1), 1).to_json(),
    "cycle9.json": lambda: cycle9_surface().to_json(),
    "first_kind.json": lambda: first_kind_config().to_json(),
}


def data_dir() -> Path:
    return Path(str(resources.files("ratsurf") / "data"))


def fixture_path(name: str) -> Path:
    return data_dir() / name


def load(name: str) -> Any:
    return json.loads(fixture_path(name).read_text())


def dump(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_all(directory: Path | None = None) -> list[Path]:
    directory = directory or data_dir()
    out = []
    for name, build in FIXTURES.items():
        p = Path(directory) / name
        p.write_text(dump(build()))
        out.append(p)
    return out


if __name__ == "__main__":
    for p in write_all():
        print(p)
