"""Substitution tilings with exact cyclotomic coordinates.

Five families are built in: ``BoatStar``, ``Triangle``, ``Rhombus``,
``KiteDart`` and ``AmmannBeenker``.  Patches are produced by iterating the
family's substitution from its seed, trimming back to the inflated seed
outline for the families that grow past it.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..exactnum import QSQRT5, CycloPoint, QuadScalar, field_of_ring
from .core import (
    Family,
    OverlapError,
    Patch,
    PlacedTile,
    Prototile,
    SubstitutionRule,
    check_edges,
    point_in_polygon,
    substitute_tiles,
    tile_census as _census,
)

FAMILY_NAMES = ("BoatStar", "Triangle", "Rhombus", "KiteDart", "AmmannBeenker")

# default cap on the number of tiles generate() may produce
DEFAULT_MAX_TILES = 5_000_000


class ResourceLimitError(RuntimeError):
    """A patch would exceed the configured tile budget."""


@lru_cache(maxsize=None)
def get_family(name: str) -> Family:
    if name == "BoatStar":
        from . import boatstar

        return boatstar.family()
    if name == "Triangle":
        from . import robinson

        return robinson.family()
    if name == "Rhombus":
        from . import penrose

        return penrose.rhombus_family()
    if name == "KiteDart":
        from . import penrose

        return penrose.kitedart_family()
    if name == "AmmannBeenker":
        from . import ammann

        return ammann.family()
    raise KeyError(f"unknown tiling family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")


def seed(family: str) -> Patch:
    fam = get_family(family)
    return Patch(family, 0, list(fam.seed_tiles))


def substitute(patch: Patch) -> Patch:
    """One substitution step without trimming."""
    fam = get_family(patch.family)
    return Patch(patch.family, patch.level + 1, substitute_tiles(fam, patch.tiles))


def _vertex_sum(fam: Family, tile: PlacedTile) -> tuple[CycloPoint, int]:
    vs = tile.world_vertices(fam.protos[tile.proto])
    s = vs[0]
    for v in vs[1:]:
        s = s + v
    return s, len(vs)


def _float_side(points: np.ndarray, region: list[CycloPoint]) -> np.ndarray | None:
    """Float pre-classification against a convex counterclockwise region.

    Returns 1 (inside), -1 (outside) or 0 (too close to call) per point, or
    None if the region is not convex and counterclockwise.
    """
    r = np.array([v.embed() for v in region])
    edge = np.roll(r, -1, axis=0) - r
    turn = edge[:, 0] * np.roll(edge[:, 1], -1) - edge[:, 1] * np.roll(edge[:, 0], -1)
    if np.any(turn <= 0):
        return None
    dx = points[:, 0][:, None] - r[:, 0][None, :]
    dy = points[:, 1][:, None] - r[:, 1][None, :]
    dist = (edge[:, 0] * dy - edge[:, 1] * dx) / np.hypot(edge[:, 0], edge[:, 1])
    tol = 1e-9 * (1.0 + np.abs(r).max())
    side = np.zeros(len(points), dtype=int)
    side[(dist > tol).all(axis=1)] = 1
    side[(dist < -tol).any(axis=1)] = -1
    return side


def _sides(points: list[CycloPoint], region: list[CycloPoint]) -> list[int]:
    """Exact point_in_polygon for each point, settled by floats where safe."""
    fast = _float_side(np.array([p.embed() for p in points]).reshape(-1, 2), region) if points else None
    if fast is None:
        return [point_in_polygon(p, region) for p in points]
    return [int(f) if f else point_in_polygon(p, region) for p, f in zip(points, fast)]


def trim(patch: Patch) -> Patch:
    """Cut a patch back to its family's inflated seed region.

    Most families keep the tiles whose centroid lies in the closed region;
    the test is exact, comparing the vertex sum against the region scaled by
    the vertex count.  Ammann-Beenker keeps every tile with a vertex strictly
    inside its octagon.  Families without a trim region are returned
    unchanged.
    """
    fam = get_family(patch.family)
    if fam.trim_region is None:
        return patch
    region = fam.trim_region(patch.level)
    if fam.trim_keep == "vertex_interior":
        verts = [t.world_vertices(fam.protos[t.proto]) for t in patch.tiles]
        sides = iter(_sides([v for vs in verts for v in vs], region))
        keep = [any([next(sides) > 0 for _ in vs]) for vs in verts]
        return Patch(patch.family, patch.level, [t for t, k in zip(patch.tiles, keep) if k])
    by_count: dict[int, list[tuple[int, CycloPoint]]] = {}
    for i, t in enumerate(patch.tiles):
        s, n = _vertex_sum(fam, t)
        by_count.setdefault(n, []).append((i, s))
    keep = [False] * len(patch.tiles)
    for n, items in by_count.items():
        scaled = [p * n for p in region]
        for (i, _), side in zip(items, _sides([s for _, s in items], scaled)):
            keep[i] = side >= 0
    return Patch(patch.family, patch.level, [t for t, k in zip(patch.tiles, keep) if k])


def generate(family: str, n: int, max_tiles: int = DEFAULT_MAX_TILES) -> Patch:
    """Level-n patch: n rounds of substitution (and trimming where used)."""
    if n < 0:
        raise ValueError("level must be non-negative")
    fam = get_family(family)
    patch = seed(family)
    growth = float(np.max(np.abs(np.linalg.eigvals(substitution_matrix(family).astype(float)))))
    for _ in range(n):
        if len(patch.tiles) * growth > 2 * max_tiles:
            raise ResourceLimitError(f"level {patch.level + 1} of {family} would exceed {max_tiles} tiles")
        patch = substitute(patch)
        if fam.trim_region is not None:
            patch = trim(patch)
        if len(patch.tiles) > max_tiles:
            raise ResourceLimitError(f"{family} level {patch.level} has {len(patch.tiles)} tiles (> {max_tiles})")
    return patch


def tile_census(patch: Patch) -> list[int]:
    return _census(get_family(patch.family), patch.tiles)


def census_labels(family: str) -> list[str]:
    return list(get_family(family).census_labels)


def substitution_matrix(family: str) -> np.ndarray:
    """Integer matrix M with M[i, j] = copies of tile i in the supertile of tile j.

    For families whose children straddle supertile borders a straddling
    child counts as one copy in every supertile that emits it.
    """
    fam = get_family(family)
    k = len(fam.census_labels)
    m = np.zeros((k, k), dtype=np.int64)
    for pid, children in fam.rule.children.items():
        j = fam.census_index(pid)
        for c in children:
            m[fam.census_index(c.proto), j] += 1
    return m


def characteristic_polynomial(m: np.ndarray) -> list[int]:
    """Integer coefficients of det(xI - m), highest degree first.

    Faddeev-LeVerrier recursion; every division is exact for integer input.
    """
    a = [[int(x) for x in row] for row in np.asarray(m)]
    k = len(a)
    coeffs = [1]
    mk = [[0] * k for _ in range(k)]
    c = 1
    for step in range(1, k + 1):
        # M_k = A (M_{k-1} + c_{k-1} I)
        prev = [[mk[i][j] + (c if i == j else 0) for j in range(k)] for i in range(k)]
        mk = [[sum(a[i][t] * prev[t][j] for t in range(k)) for j in range(k)] for i in range(k)]
        tr = sum(mk[i][i] for i in range(k))
        if tr % step:
            raise ArithmeticError("non-integer characteristic polynomial")
        c = -tr // step
        coeffs.append(c)
    return coeffs


def eval_polynomial(coeffs: list[int], x: QuadScalar) -> QuadScalar:
    acc = QuadScalar(x.field, 0)
    for c in coeffs:
        acc = acc * x + QuadScalar(x.field, c)
    return acc


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def predicted_counts(family: str, n: int) -> dict | None:
    """Closed-form tile totals, or None where no closed form is known.

    BoatStar returns the total and the pentagon count; Triangle returns the
    total and the obtuse/acute split.
    """
    if n < 0:
        raise ValueError("level must be non-negative")
    if family == "BoatStar":
        phi4 = QuadScalar.phi() ** 4
        up, down = phi4 ** n, phi4 ** (-n)
        total = (
            QuadScalar(QSQRT5, 25, 9, 22) * up
            - QuadScalar(QSQRT5, 5 * 4 ** (n + 1), 0, 33)
            - QuadScalar(QSQRT5, 2, 0, 3)
            + QuadScalar(QSQRT5, 25, -9, 22) * down
        )
        pent = (
            QuadScalar(QSQRT5, 17, 7, 22) * up
            - QuadScalar(QSQRT5, 40 * 4**n, 0, 33)
            - QuadScalar(QSQRT5, 1, 0, 3)
            + QuadScalar(QSQRT5, 17, -7, 22) * down
        )
        return {"total": _as_int(total), "pentagons": _as_int(pent)}
    if family == "Triangle":
        return {"total": 10 * _fib(2 * n + 2), "obtuse": 10 * _fib(2 * n + 1), "acute": 10 * _fib(2 * n)}
    if family in FAMILY_NAMES:
        return None
    raise KeyError(f"unknown tiling family {family!r}")


def _as_int(q: QuadScalar) -> int:
    if q.b != 0 or q.c != 1:
        raise ArithmeticError(f"closed form did not evaluate to an integer: {q}")
    return q.a


def patch_area2(patch: Patch) -> QuadScalar:
    """Twice the total tile area, exact.

    Decagonal families are measured in units of sin(pi/5).
    """
    fam = get_family(patch.family)
    total = QuadScalar(field_of_ring(fam.ring), 0)
    for t in patch.tiles:
        vs = t.world_vertices(fam.protos[t.proto])
        for a, b in zip(vs, vs[1:] + vs[:1]):
            # cross product a x b = Im(conj(a) * b)
            total = total + (a.conj() * b).im_scaled()
    return total


__all__ = [
    "FAMILY_NAMES",
    "Family",
    "OverlapError",
    "Patch",
    "PlacedTile",
    "Prototile",
    "ResourceLimitError",
    "SubstitutionRule",
    "census_labels",
    "characteristic_polynomial",
    "eval_polynomial",
    "check_edges",
    "generate",
    "patch_area2",
    "get_family",
    "predicted_counts",
    "seed",
    "substitute",
    "substitution_matrix",
    "tile_census",
    "trim",
]
