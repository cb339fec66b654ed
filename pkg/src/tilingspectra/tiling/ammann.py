"""Ammann-Beenker rhombs and squares, inflation 1 + sqrt2.

The inflated rhomb holds three rhombs and four squares cut in half by its
edges; the inflated square holds four rhombs, one inner square and four
halved squares.  Halved squares are emitted whole by both neighbors and
merged by deduplication.

The rhomb needs no decoration.  The square's supertile is symmetric only
under the reflection through its 0-2 diagonal, so corner 0 is its anchor.
The child lists were read off the eightfold-symmetric cut-and-project
tiling, which is the fixed point of this rule grown from the eight-rhomb
star.
"""

from __future__ import annotations

from ..exactnum import Z8, CycloPoint, silver
from .core import ChildPlacement, Family, PlacedTile, Prototile, SubstitutionRule

RHOMB, SQUARE = 0, 1
LAMBDA = silver()


def _z(k):
    return CycloPoint.zeta(Z8, k)


def _pt(*c):
    return CycloPoint(Z8, c)


def _protos():
    o = CycloPoint.zero(Z8)
    return [
        Prototile("AmmannBeenker", RHOMB, "rhomb", (o, _z(0), _z(0) + _z(1), _z(1))),
        Prototile("AmmannBeenker", SQUARE, "square", (o, _z(0), _z(0) + _z(2), _z(2)), anchors=(0,)),
    ]


PROTOS = _protos()

# (proto, rot, reflected, translation coefficients in the basis 1, z, z^2, z^3)
_RHOMB_KIDS = [
    (RHOMB, 0, False, (0, 0, 0, 0)),
    (RHOMB, 0, False, (1, 1, 1, -1)),
    (RHOMB, 2, False, (1, 1, 0, -1)),
    (SQUARE, 0, False, (1, 1, 0, -1)),
    (SQUARE, 1, True, (1, 1, 1, 0)),
    (SQUARE, 3, False, (1, 1, 0, -1)),
    (SQUARE, 4, False, (1, 1, 1, 0)),
]
_SQUARE_KIDS = [
    (RHOMB, 0, False, (0, 0, 0, 0)),
    (RHOMB, 0, True, (0, 1, 1, 1)),
    (RHOMB, 1, False, (0, 0, 0, 0)),
    (RHOMB, 2, False, (1, 1, 0, -1)),
    (SQUARE, 3, False, (1, 1, 0, -1)),
    (SQUARE, 3, False, (1, 2, 1, 0)),
    (SQUARE, 4, False, (1, 1, 1, 0)),
    (SQUARE, 5, False, (0, 1, 1, 1)),
    (SQUARE, 5, False, (1, 2, 1, 0)),
]


def build_rule() -> SubstitutionRule:
    def kids(rows):
        return [ChildPlacement(p, r, f, _pt(*t)) for p, r, f, t in rows]

    return SubstitutionRule("AmmannBeenker", LAMBDA, {RHOMB: kids(_RHOMB_KIDS), SQUARE: kids(_SQUARE_KIDS)})


def octagon(level: int) -> list[CycloPoint]:
    """Regular octagon with corners sqrt2 * LAMBDA**level * z**k."""
    s = (_z(1) - _z(3)) * (LAMBDA**level if level > 0 else CycloPoint.one(Z8))
    return [s.rotate(k) for k in range(8)]


def family() -> Family:
    seed = [PlacedTile(RHOMB, k, False, CycloPoint.zero(Z8)) for k in range(8)]
    return Family(
        name="AmmannBeenker",
        ring=Z8,
        protos=PROTOS,
        rule=build_rule(),
        seed_tiles=seed,
        census_labels=["rhomb", "square"],
        census_index=lambda pid: pid,
        trim_region=octagon,
        trim_keep="vertex_interior",
    )
