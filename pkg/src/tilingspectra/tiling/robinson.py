"""Robinson half-tiles and the golden-triangle substitution with inflation phi.

Acute halves have legs 1 and base 1/phi, obtuse halves legs 1 and base phi.
Each half is recorded as a triple ``(apex, b, c)``: ``b`` is the marked base
vertex that drives the subdivision, and the orientation of the triple is the
chirality (the tile color).  The four prototiles are ordered as
acute+, obtuse-, acute-, obtuse+ so that child counts reproduce the usual
4x4 substitution matrix.
"""

from __future__ import annotations

from ..exactnum import Z10, CycloPoint, golden, orient
from .core import ChildPlacement, Family, PlacedTile, Prototile, SubstitutionRule

ACUTE, OBTUSE = "A", "O"
PHI = golden()
INV_PHI = PHI - CycloPoint.one(Z10)

# (kind, chirality) -> prototile id
TRI_IDS = {(ACUTE, 1): 0, (OBTUSE, -1): 1, (ACUTE, -1): 2, (OBTUSE, 1): 3}
TRI_KIND = {v: k for k, v in TRI_IDS.items()}
LABELS = ["acute+", "obtuse-", "acute-", "obtuse+"]


def _z(k):
    return CycloPoint.zeta(Z10, k)


def local_triple(kind, chirality):
    """Unit half in local coordinates, as (apex, b, c)."""
    o = CycloPoint.zero(Z10)
    spread = 1 if kind == ACUTE else 3
    return o, _z(0), _z(spread * chirality)


def _triangle_proto(pid):
    kind, ch = TRI_KIND[pid]
    a, b, c = local_triple(kind, ch)
    verts = (a, b, c) if ch > 0 else (a, c, b)
    return Prototile("Triangle", pid, f"{'acute' if kind == ACUTE else 'obtuse'}{'+' if ch > 0 else '-'}",
                     verts, color="+" if ch > 0 else "-", anchors=(1 if ch > 0 else 2,))


PROTOS = [_triangle_proto(i) for i in range(4)]


def subdivide(kind, a, b, c):
    """Children (kind, apex, b, c) of an inflated half given by its world triple."""
    if kind == ACUTE:
        p = a + (b - a) * INV_PHI
        return [(ACUTE, c, p, b), (OBTUSE, p, c, a)]
    q = b + (a - b) * INV_PHI
    r = b + (c - b) * INV_PHI
    return [(OBTUSE, r, c, a), (OBTUSE, q, r, b), (ACUTE, r, q, a)]


def chirality(a, b, c) -> int:
    return orient(a, b, c)


def triple_placement(kind, a, b, c) -> ChildPlacement:
    """Placement of the unit prototile matching the world triple (a, b, c)."""
    ch = chirality(a, b, c)
    pid = TRI_IDS[(kind, ch)]
    la, lb, _ = local_triple(kind, ch)
    e = b - a
    for k in range(10):
        if (lb - la).rotate(k) == e:
            return ChildPlacement(pid, k, False, a - la.rotate(k))
    raise ValueError("triple is not a unit Robinson half")


def placed_triple(tile: PlacedTile):
    kind, ch = TRI_KIND[tile.proto]
    la, lb, lc = local_triple(kind, ch)
    ring = Z10
    f = tile.transform_coeffs
    return kind, CycloPoint(ring, f(la.coeffs)), CycloPoint(ring, f(lb.coeffs)), CycloPoint(ring, f(lc.coeffs))


def build_rule() -> SubstitutionRule:
    children = {}
    for pid in range(4):
        kind, ch = TRI_KIND[pid]
        a, b, c = (v * PHI for v in local_triple(kind, ch))
        children[pid] = [triple_placement(*t) for t in subdivide(kind, a, b, c)]
    return SubstitutionRule("Triangle", PHI, children)


def seed_triples(marked_center: bool = True):
    """Ten obtuse halves around the origin, alternately sharing bases and legs.

    The base ends sit on rays at multiples of 72 degrees (distance phi) and
    the apexes at odd multiples of 36 degrees (distance 1).
    """
    o = CycloPoint.zero(Z10)
    out = []
    for i in range(10):
        j = (i + 1) // 2 * 2  # ray carrying the base end
        x = _z(j) * PHI
        y = _z(2 * (i // 2) + 1)
        # marked vertex alternates so that neighbors are mirror images
        if marked_center:
            out.append((OBTUSE, y, o, x))
        else:
            out.append((OBTUSE, y, x, o))
    return out


SEED_MARKED_CENTER = True


def family() -> Family:
    seed = []
    for t in seed_triples(SEED_MARKED_CENTER):
        c = triple_placement(*t)
        seed.append(PlacedTile(c.proto, c.rot, c.reflected, c.translation))
    return Family(
        name="Triangle",
        ring=Z10,
        protos=PROTOS,
        rule=build_rule(),
        seed_tiles=seed,
        census_labels=LABELS,
        census_index=lambda pid: pid,
    )
