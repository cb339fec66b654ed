"""Rhombus and kite-dart families assembled from mirrored Robinson halves.

Both families are driven by a half-tile subdivision.  A whole tile is a
half together with its mirror image across the gluing edge: the base for
rhombi, the symmetry axis for kites and darts.  Substituting a whole tile
subdivides both halves and completes every child half to a whole tile, so
children on the parent's border straddle it and are emitted by both
neighbors; the generic deduplication merges them.  Patches are trimmed back
to the inflated seed outline after every step.
"""

from __future__ import annotations

from ..exactnum import Z10, CycloPoint, golden
from . import robinson
from .core import (
    ChildPlacement,
    Family,
    PlacedTile,
    Prototile,
    SubstitutionRule,
    _direction_of,
)

PHI = golden()
INV_PHI = PHI - CycloPoint.one(Z10)
ACUTE, OBTUSE = robinson.ACUTE, robinson.OBTUSE


def _z(k):
    return CycloPoint.zeta(Z10, k)


def reflect(x: CycloPoint, p: CycloPoint, q: CycloPoint) -> CycloPoint:
    """Mirror image of x across the line through p and q."""
    k = _direction_of(q - p)
    return p + (x - p).conj().rotate(2 * k)


def _signed_area(poly) -> float:
    pts = [v.embed() for v in poly]
    return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))


class HalfSystem:
    """A Robinson-style half-tile rule plus the gluing convention."""

    def __init__(self, name, triples, subdivide, glue, whole_names, anchor_role):
        self.name = name
        self.triples = triples  # kind -> unit local (apex, b, c) of chirality +1
        self.subdivide = subdivide
        self.glue = glue  # kind -> pair of roles (0 apex, 1 b, 2 c) forming the glued edge
        self.whole_names = whole_names
        self.anchor_role = anchor_role  # kind -> role marked as anchor, or None

    def partner(self, kind, tri):
        i, j = self.glue[kind]
        free = 3 - i - j
        out = list(tri)
        out[free] = reflect(tri[free], tri[i], tri[j])
        return tuple(out)

    def quad(self, kind, tri):
        """Counterclockwise outline of the whole tile containing half ``tri``."""
        i, j = self.glue[kind]
        free = 3 - i - j
        mate = self.partner(kind, tri)
        p, q, x, y = tri[i], tri[j], tri[free], mate[free]
        poly = [x, p, y, q]
        if _signed_area(poly) < 0:
            poly = [x, q, y, p]
        return poly


def _penrose_protos(system: HalfSystem, family_name: str):
    protos = []
    for pid, kind in enumerate((OBTUSE, ACUTE)):
        tri = system.triples[kind]
        verts = system.quad(kind, tri)
        role = system.anchor_role[kind]
        anchors = ()
        if role is not None:
            anchors = (verts.index(tri[role]),)
        protos.append(Prototile(family_name, pid, system.whole_names[kind], tuple(verts), anchors=anchors))
    return protos


def _match_whole(protos, kind_index, quad, anchor_pt):
    """Placement of a whole prototile onto a world outline."""
    proto = protos[kind_index]
    target = set(quad)
    for refl in (False, True):
        for rot in range(10):
            pts = [(v.conj() if refl else v).rotate(rot) for v in proto.vertices]
            t = quad[0] - pts[0]
            for s in range(len(pts)):
                t = quad[0] - pts[s]
                moved = [p + t for p in pts]
                if set(moved) != target:
                    continue
                if proto.anchors and moved[proto.anchors[0]] != anchor_pt:
                    continue
                return ChildPlacement(kind_index, rot, refl, t)
    raise ValueError("outline does not match the prototile")


def _halves_of(system, protos, pid):
    """The two halves of whole prototile ``pid`` in its local coordinates."""
    kind = (OBTUSE, ACUTE)[pid]
    tri = system.triples[kind]
    return kind, [tri, system.partner(kind, tri)]


def _whole_from_half(system, protos, kind, tri):
    quad = system.quad(kind, tri)
    role = system.anchor_role[kind]
    anchor = tri[role] if role is not None else None
    return _match_whole(protos, 0 if kind == OBTUSE else 1, quad, anchor)


def _build_rule(system, protos, family_name):
    children = {}
    for pid in range(2):
        kind, halves = _halves_of(system, protos, pid)
        seen, keys = [], set()
        for tri in halves:
            big = tuple(v * PHI for v in tri)
            for ck, *ctri in system.subdivide(kind, *big):
                c = _whole_from_half(system, protos, ck, tuple(ctri))
                k = PlacedTile(c.proto, c.rot, c.reflected, c.translation).key(protos[c.proto])
                if k not in keys:
                    keys.add(k)
                    seen.append(c)
        children[pid] = seen
    return SubstitutionRule(family_name, PHI, children)


# --- rhombus (thick and thin rhombi, halves glued along the base) -----------


def _rhombus_system():
    return HalfSystem(
        "Rhombus",
        triples={k: robinson.local_triple(k, 1) for k in (ACUTE, OBTUSE)},
        subdivide=robinson.subdivide,
        glue={ACUTE: (1, 2), OBTUSE: (1, 2)},
        whole_names={OBTUSE: "thick", ACUTE: "thin"},
        anchor_role={ACUTE: 1, OBTUSE: 1},
    )


# --- kite and dart (halves glued along the symmetry axis) -------------------


def _kd_triples():
    o = CycloPoint.zero(Z10)
    # half kite: apex at the head (36 degrees), legs phi, base 1
    kite = (o, PHI * _z(0), PHI * _z(1))
    # half dart: apex at the reflex corner (108 degrees), legs 1, base phi
    dart = (o, _z(0), _z(3))
    return {ACUTE: kite, OBTUSE: dart}


def kd_subdivide(kind, a, b, c):
    """Half kite / half dart subdivision; triples are (apex, marked, other)."""
    if kind == ACUTE:
        q = b + (a - b) * INV_PHI
        r = a + (c - a) * INV_PHI
        return [(OBTUSE, q, r, a), (ACUTE, b, q, r), (ACUTE, b, c, r)]
    p = c + (b - c) * INV_PHI
    return [(OBTUSE, p, a, b), (ACUTE, c, p, a)]


KD_GLUE = {ACUTE: (0, 2), OBTUSE: (0, 2)}


def _kd_system():
    return HalfSystem(
        "KiteDart",
        triples=_kd_triples(),
        subdivide=kd_subdivide,
        glue=KD_GLUE,
        whole_names={OBTUSE: "dart", ACUTE: "kite"},
        anchor_role={ACUTE: None, OBTUSE: None},
    )


def star_outline(tip_parity: int, level: int) -> list[CycloPoint]:
    """Ten-pointed star outline: tips at distance phi on rays of one parity,
    notches at distance 1 on the others, inflated by phi**level."""
    s = PHI ** level if level > 0 else CycloPoint.one(Z10)
    out = []
    for k in range(10):
        r = PHI if k % 2 == tip_parity else CycloPoint.one(Z10)
        out.append(_z(k) * r * s)
    return out


def _whole_seed(system, protos, halves):
    tiles, seen = [], set()
    for kind, *tri in halves:
        c = _whole_from_half(system, protos, kind, tuple(tri))
        t = PlacedTile(c.proto, c.rot, c.reflected, c.translation)
        k = t.key(protos[t.proto])
        if k not in seen:
            seen.add(k)
            tiles.append(t)
    return tiles


def rhombus_family() -> Family:
    system = _rhombus_system()
    protos = _penrose_protos(system, "Rhombus")
    halves = robinson.seed_triples(marked_center=True)
    return Family(
        name="Rhombus",
        ring=Z10,
        protos=protos,
        rule=_build_rule(system, protos, "Rhombus"),
        seed_tiles=_whole_seed(system, protos, halves),
        census_labels=["thick", "thin"],
        census_index=lambda pid: pid,
        trim_region=lambda level: star_outline(0, level),
    )


def kitedart_family() -> Family:
    system = _kd_system()
    protos = _penrose_protos(system, "KiteDart")
    o = CycloPoint.zero(Z10)
    halves = []
    for i in range(5):
        for s in (1, -1):
            # apex at the reflex corner, marked wing, axis to the center
            halves.append((OBTUSE, _z(2 * i), PHI * _z(2 * i + s), o))
    return Family(
        name="KiteDart",
        ring=Z10,
        protos=protos,
        rule=_build_rule(system, protos, "KiteDart"),
        seed_tiles=_whole_seed(system, protos, halves),
        census_labels=["dart", "kite"],
        census_index=lambda pid: pid,
        trim_region=lambda level: star_outline(1, level),
    )
