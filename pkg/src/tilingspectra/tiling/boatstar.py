"""Boat-star (pentagon, star, boat, diamond) substitution with inflation phi**2.

Every boundary edge of an inflated tile is split as [1, 1/phi, 1].  Star,
boat and diamond supertiles push a tip out through the middle piece;
pentagon supertiles leave a triangular notch there.  Two notches facing
each other form a diamond, which is emitted by exactly one of the two
pentagon supertiles.  Pentagons carry that ownership as decoration: type A
owns edges 0 and 2, type B owns edge 0, type C owns nothing.

The star, boat and diamond supertiles are sub-configurations of the star
supertile: a central star rotated by 36 degrees plus, for each kept point,
a boat sitting on the point and a pentagon in the notch below it.
"""

from __future__ import annotations

from ..exactnum import Z10, CycloPoint, golden
from .core import Family, PlacedTile, Prototile, SubstitutionRule, _turns_polygon, place

STAR, BOAT, DIAMOND, PENT_A, PENT_B, PENT_C = range(6)
LABELS = ["star", "boat", "diamond", "pentagon_A", "pentagon_B", "pentagon_C"]

PHI = golden()
INFLATION = PHI + CycloPoint.one(Z10)  # phi**2


def _z(k):
    return CycloPoint.zeta(Z10, k)


def _protos():
    star = _turns_polygon(Z10, [4, -2] * 5)
    boat = _turns_polygon(Z10, [4, -2, 4, -2, 4, 1, 1])
    diamond = _turns_polygon(Z10, [4, 1, 4, 1])
    pent = _turns_polygon(Z10, [2] * 5)
    return [
        Prototile("BoatStar", STAR, "star", tuple(star)),
        Prototile("BoatStar", BOAT, "boat", tuple(boat)),
        # vertex 0 is the acute corner that receives a boat on substitution
        Prototile("BoatStar", DIAMOND, "diamond", tuple(diamond), anchors=(0,)),
        # the vertex touching no owned edge identifies the decoration
        Prototile("BoatStar", PENT_A, "pentagon_A", tuple(pent), color="A", anchors=(4,)),
        Prototile("BoatStar", PENT_B, "pentagon_B", tuple(pent), color="B", anchors=(3,)),
        Prototile("BoatStar", PENT_C, "pentagon_C", tuple(pent), color="C"),
    ]


PROTOS = _protos()


def _star_supertile_parts():
    """Central star plus the five (boat, pentagon) point groups of an inflated star."""
    s = INFLATION
    big = [v * s for v in PROTOS[STAR].vertices]
    central = place(PROTOS[STAR], 0, big[1], 1)
    groups = []
    for j in range(5):
        tip = big[2 * j]
        d = 2 * j  # direction of the big edge leaving this tip, see _turns_polygon
        # boat vertex 2 (middle point) on the big tip, its edge 2 along the big edge
        boat = place(PROTOS[BOAT], 2, tip, d)
        # pentagon: edge 2 runs along the big edge from distance phi to phi**2
        pent = place(PROTOS[PENT_A], 2, tip + _z(d) * PHI, d)
        groups.append((boat, pent))
    return central, groups


def _pentagon_children(kind):
    s = INFLATION
    pv = PROTOS[PENT_A].vertices
    owned = {PENT_A: (0, 2), PENT_B: (0,), PENT_C: ()}[kind]
    kids = []
    for i in range(5):
        corner = pv[i] * s
        # corner pentagon in natural labelling: vertex 0 at the corner, edge 0 along big edge i
        natural = place(PROTOS[PENT_A], 0, corner, 2 * i)
        nat_vs = [_z(natural.rot) * v + natural.translation for v in pv]
        touches = [e for e in owned if e in (i, (i - 1) % 5)]
        if touches:
            e = touches[0]
            start = 0 if e == i else 2
            kids.append(place(PROTOS[PENT_A], 0, nat_vs[start], 2 * i + 2 * start))
        else:
            kids.append(place(PROTOS[PENT_B], 0, nat_vs[2], 2 * i + 4))
    # central pentagon: vertices are the notch apexes, it points the other way
    apex0 = pv[0] * s + _z(0) + _z(2)
    kids.append(place(PROTOS[PENT_C], 0, apex0, 1))
    for e in owned:
        p = pv[e] * s + _z(2 * e)
        inner = p + _z(2 * e + 2)
        outer = p + _z(2 * e - 2)
        if DIAMOND_BOAT_END_INSIDE:
            kids.append(place(PROTOS[DIAMOND], 0, inner, 2 * e + 7))
        else:
            kids.append(place(PROTOS[DIAMOND], 0, outer, 2 * e + 2))
    return kids


DIAMOND_BOAT_END_INSIDE = True


def build_rule():
    central, groups = _star_supertile_parts()
    children = {
        STAR: [central] + [c for g in groups for c in g],
        BOAT: [central] + [c for g in groups[:3] for c in g],
        DIAMOND: [central] + list(groups[0]),
    }
    for kind in (PENT_A, PENT_B, PENT_C):
        children[kind] = _pentagon_children(kind)
    return SubstitutionRule("BoatStar", INFLATION, children)


def family() -> Family:
    seed = [PlacedTile(STAR, 0, False, CycloPoint.zero(Z10))]
    return Family(
        name="BoatStar",
        ring=Z10,
        protos=PROTOS,
        rule=build_rule(),
        seed_tiles=seed,
        census_labels=LABELS,
        census_index=lambda pid: pid,
    )
