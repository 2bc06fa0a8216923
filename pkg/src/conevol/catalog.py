"""Bundled library of cones and arrangements used by tests and the suite.

Everything is rational, desk scale (cones up to dimension 6, arrangements
up to 16 hyperplanes), and deliberately covers the degenerate corners:
subspaces, the zero cone, cones with lineality, low-dimensional cones
embedded in higher ambient space, and non-generic arrangements.
"""

from __future__ import annotations

from .arrangement import Arrangement, arrangement, named_family
from .cone import Cone, cone_from_generators, cone_from_inequalities, polar


def _orthant(d: int) -> Cone:
    rows = [[-1 if j == i else 0 for j in range(d)] for i in range(d)]
    return cone_from_inequalities(rows, d)


def _chain_cone(d: int, lower_zero: bool) -> Cone:
    # x1 <= x2 <= ... <= xd, optionally 0 <= x1
    rows = []
    if lower_zero:
        rows.append([-1] + [0] * (d - 1))
    for i in range(d - 1):
        row = [0] * d
        row[i], row[i + 1] = 1, -1
        rows.append(row)
    return cone_from_inequalities(rows, d)


def build_cones() -> list[tuple[str, Cone]]:
    square = cone_from_generators(
        [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]], [], 3
    )
    cross4 = cone_from_generators(
        [
            [1, 1, 0, 0], [1, -1, 0, 0],
            [1, 0, 1, 0], [1, 0, -1, 0],
            [1, 0, 0, 1], [1, 0, 0, -1],
        ],
        [],
        4,
    )
    return [
        ("ray-1d", cone_from_generators([[1]], [], 1)),
        ("neg-ray-1d", cone_from_generators([[-1]], [], 1)),
        ("line-1d", cone_from_generators([], [[1]], 1)),
        ("zero-2d", cone_from_inequalities([[-1, 0], [0, -1], [1, 1]], 2)),
        ("full-2d", cone_from_inequalities([], 2)),
        ("full-3d", cone_from_inequalities([], 3)),
        ("orthant-2d", _orthant(2)),
        ("orthant-3d", _orthant(3)),
        ("orthant-4d", _orthant(4)),
        ("orthant-6d", _orthant(6)),
        ("neg-orthant-3d", polar(_orthant(3))),
        ("halfplane-2d", cone_from_inequalities([[0, -1]], 2)),
        ("halfspace-3d", cone_from_inequalities([[0, 0, -1]], 3)),
        ("wedge-45", cone_from_generators([[1, 0], [1, 1]], [], 2)),
        ("wedge-135", cone_from_generators([[1, 0], [-1, 1]], [], 2)),
        ("rot-orthant-2d", cone_from_generators([[1, 1], [1, -1]], [], 2)),
        ("diag-ray-2d", cone_from_generators([[1, 1]], [], 2)),
        ("line-2d", cone_from_generators([], [[1, 0]], 2)),
        ("plane-3d", cone_from_generators([], [[1, 0, 0], [0, 1, 0]], 3)),
        ("diag-line-3d", cone_from_generators([], [[1, 1, 1]], 3)),
        ("square-cone-3d", square),
        ("square-cone-polar-3d", polar(square)),
        ("wedge-embedded-3d", cone_from_generators([[1, 0, 0], [1, 1, 0]], [], 3)),
        ("quadrant-x-line-3d", cone_from_generators([[1, 0, 0], [0, 1, 0]], [[0, 0, 1]], 3)),
        ("braid-chamber-3d", _chain_cone(3, lower_zero=False)),
        ("bc-chamber-3d", _chain_cone(3, lower_zero=True)),
        ("cross-cone-4d", cross4),
        ("halfline-prod-4d", cone_from_generators([[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0]], 4)),
    ]


def build_arrangements() -> list[tuple[str, Arrangement]]:
    return [
        ("single-2d", arrangement([[1, 0]], 2)),
        ("three-concurrent-2d", arrangement([[1, 0], [0, 1], [1, 1]], 2)),
        ("coordinate-3d", arrangement([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)),
        ("braid-2d", named_family("braid", 2)),
        ("braid-3d", named_family("braid", 3)),
        ("braid-4d", named_family("braid", 4)),
        ("bc-2d", named_family("bc", 2)),
        ("bc-3d", named_family("bc", 3)),
        ("d-2d", named_family("d", 2)),
        ("d-3d", named_family("d", 3)),
        ("generic-2d-n4", named_family("generic", 2, n=4, seed=11)),
        ("generic-3d-n5", named_family("generic", 3, n=5, seed=12)),
        ("pencil-plus-3d", arrangement([[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]], 3)),
    ]


def pointed_cones(cones=None, max_dim: int | None = None):
    out = []
    for name, c in cones or build_cones():
        if c.is_pointed and (max_dim is None or c.d <= max_dim):
            out.append((name, c))
    return out
