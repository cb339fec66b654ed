"""Prototiles, placed tiles, patches and the generic substitution engine."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..exactnum import CycloPoint, _conj_raw, _mul_raw, _POWERS, _ORDER, orient


class OverlapError(RuntimeError):
    """Two tiles claim the same region with different decorations."""


def _turns_polygon(ring: str, turns: Sequence[int], lengths=None) -> list[CycloPoint]:
    """Build a polygon from exterior turns (in units of the ring's base angle).

    Vertex 0 sits at the origin and edge 0 points along direction 0.
    ``turns[i]`` is the turn taken at vertex ``i``; ``turns[0]`` only closes
    the polygon.  ``lengths`` are optional ring multipliers per edge.
    """
    n = len(turns)
    pts = [CycloPoint.zero(ring)]
    k = 0
    for i in range(n - 1):
        if i > 0:
            k += turns[i]
        step = CycloPoint.zeta(ring, k)
        if lengths is not None:
            step = step * lengths[i]
        pts.append(pts[-1] + step)
    return pts


@dataclass(frozen=True)
class Prototile:
    """A tile shape in local coordinates.

    ``anchors`` lists local vertex indices whose world images, together with
    the vertex set, identify a placed copy including its decoration.
    """

    family: str
    id: int
    name: str
    vertices: tuple[CycloPoint, ...]
    color: str = ""
    anchors: tuple[int, ...] = ()

    @property
    def ring(self) -> str:
        return self.vertices[0].ring

    def area2(self) -> float:
        """Twice the signed area (float, for sanity checks)."""
        pts = [v.embed() for v in self.vertices]
        s = 0.0
        for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
            s += x0 * y1 - x1 * y0
        return s


def _rot_coeffs(ring, c, k):
    k %= _ORDER[ring]
    if k == 0:
        return c
    return _mul_raw(ring, c, _POWERS[ring][k])


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


@dataclass(frozen=True)
class PlacedTile:
    """Copy of a prototile: world = zeta**rot * conj**reflected(local) + translation."""

    proto: int
    rot: int
    reflected: bool
    translation: CycloPoint

    def transform_coeffs(self, c):
        ring = self.translation.ring
        if self.reflected:
            c = _conj_raw(ring, c)
        return _add(_rot_coeffs(ring, c, self.rot), self.translation.coeffs)

    def world_coeffs(self, proto: Prototile) -> list[tuple]:
        """World vertex coefficient tuples in counterclockwise order."""
        out = [self.transform_coeffs(v.coeffs) for v in proto.vertices]
        if self.reflected:
            # reflection reverses orientation; restore counterclockwise order
            out = [out[0]] + out[:0:-1]
        return out

    def world_vertices(self, proto: Prototile) -> list[CycloPoint]:
        ring = self.translation.ring
        return [CycloPoint(ring, c) for c in self.world_coeffs(proto)]

    def key(self, proto: Prototile):
        ring = self.translation.ring
        verts = frozenset(self.transform_coeffs(v.coeffs) for v in proto.vertices)
        anchors = frozenset(self.transform_coeffs(proto.vertices[i].coeffs) for i in proto.anchors)
        return self.proto, verts, anchors

    def to_json(self):
        return {
            "proto": self.proto,
            "rot": self.rot,
            "reflected": bool(self.reflected),
            "translation": self.translation.to_json(),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj["proto"], obj["rot"], bool(obj["reflected"]), CycloPoint.from_json(obj["translation"]))


@dataclass(frozen=True)
class ChildPlacement:
    proto: int
    rot: int
    reflected: bool
    translation: CycloPoint


@dataclass
class SubstitutionRule:
    family: str
    inflation: CycloPoint
    children: dict[int, list[ChildPlacement]]


@dataclass
class Family:
    """Everything needed to build patches of one tiling family."""

    name: str
    ring: str
    protos: list[Prototile]
    rule: SubstitutionRule
    seed_tiles: list[PlacedTile]
    census_labels: list[str]
    census_index: Callable[[int], int]
    trim_region: Callable[[int], list[CycloPoint]] | None = None
    # "centroid": centroid in the closed region; "vertex_interior": some vertex strictly inside
    trim_keep: str = "centroid"
    notes: dict = field(default_factory=dict)

    def proto(self, pid: int) -> Prototile:
        return self.protos[pid]


@dataclass
class Patch:
    family: str
    level: int
    tiles: list[PlacedTile]

    def __len__(self):
        return len(self.tiles)

    def to_json(self) -> str:
        obj = {
            "family": self.family,
            "level": self.level,
            "tiles": [t.to_json() for t in self.tiles],
        }
        return json.dumps(obj, indent=None, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Patch":
        obj = json.loads(text)
        return cls(obj["family"], obj["level"], [PlacedTile.from_json(t) for t in obj["tiles"]])


def place(proto: Prototile, vertex: int, at: CycloPoint, direction: int, reflected: bool = False) -> ChildPlacement:
    """Child placement putting local ``vertex`` at ``at``.

    The local edge leaving ``vertex`` (edge ``vertex`` in the stored order) is
    aligned with world direction ``zeta**direction``.  For a reflected copy
    the aligned edge is the one arriving at ``vertex``, traversed backwards,
    which is the edge that leaves ``vertex`` in the world counterclockwise
    order.
    """
    ring = proto.ring
    n = _ORDER[ring]
    vs = proto.vertices
    if not reflected:
        e = vs[(vertex + 1) % len(vs)] - vs[vertex]
    else:
        e = (vs[(vertex - 1) % len(vs)] - vs[vertex]).conj()
    k = _direction_of(e)
    rot = (direction - k) % n
    local = vs[vertex].conj() if reflected else vs[vertex]
    t = at - local.rotate(rot)
    return ChildPlacement(proto.id, rot, reflected, t)


def _direction_of(e: CycloPoint) -> int:
    """Index k such that e is a positive real multiple of zeta**k."""
    n = e.order
    for k in range(n):
        r = e.rotate(-k)
        if r.im_sign() == 0 and r.re_sign() > 0:
            return k
    raise ValueError(f"{e!r} is not along a root-of-unity direction")


def apply_child(parent: PlacedTile, child: ChildPlacement, inflation: CycloPoint) -> PlacedTile:
    ring = parent.translation.ring
    n = _ORDER[ring]
    st = _mul_raw(ring, inflation.coeffs, parent.translation.coeffs)
    tc = child.translation.coeffs
    if not parent.reflected:
        rot = (parent.rot + child.rot) % n
        refl = child.reflected
    else:
        rot = (parent.rot - child.rot) % n
        refl = not child.reflected
        tc = _conj_raw(ring, tc)
    t = _add(_rot_coeffs(ring, tc, parent.rot), st)
    return PlacedTile(child.proto, rot, refl, CycloPoint(ring, t))


def dedup(family: Family, tiles: list[PlacedTile]) -> list[PlacedTile]:
    """Drop repeated tiles; raise if two tiles share a footprint but not a decoration."""
    seen: dict = {}
    out = []
    for t in tiles:
        k = t.key(family.protos[t.proto])
        prev = seen.get(k[1])
        if prev is None:
            seen[k[1]] = k
            out.append(t)
        elif prev != k:
            raise OverlapError(f"conflicting tiles on the same footprint: {prev[0]} vs {k[0]}")
    return out


def substitute_tiles(family: Family, tiles: list[PlacedTile]) -> list[PlacedTile]:
    rule = family.rule
    out = []
    for p in tiles:
        for c in rule.children[p.proto]:
            out.append(apply_child(p, c, rule.inflation))
    return dedup(family, out)


def check_edges(family: Family, tiles: list[PlacedTile]) -> None:
    """Cheap overlap test: every directed edge belongs to at most one tile."""
    owner = {}
    for i, t in enumerate(tiles):
        vs = t.world_coeffs(family.protos[t.proto])
        for a, b in zip(vs, vs[1:] + vs[:1]):
            if (a, b) in owner:
                raise OverlapError(f"tiles {owner[(a, b)]} and {i} share a directed edge")
            owner[(a, b)] = i


def point_in_polygon(p: CycloPoint, poly: Sequence[CycloPoint]) -> int:
    """1 strictly inside, 0 on the boundary, -1 outside (exact)."""
    inside = False
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        o = orient(a, b, p)
        if o == 0 and _on_segment(a, b, p):
            return 0
        ya = (a - p).im_sign()
        yb = (b - p).im_sign()
        if (ya > 0) != (yb > 0):
            # edge crosses the horizontal through p; is the crossing to the right?
            if (o > 0) == (yb > 0):
                inside = not inside
    return 1 if inside else -1


def _on_segment(a, b, p) -> bool:
    from ..exactnum import dot_sign
    return dot_sign(a - p, b - p) <= 0


def tile_census(family: Family, tiles: list[PlacedTile]) -> list[int]:
    counts = [0] * len(family.census_labels)
    for t in tiles:
        counts[family.census_index(t.proto)] += 1
    return counts


def census_by_proto(tiles: list[PlacedTile]) -> Counter:
    return Counter(t.proto for t in tiles)
