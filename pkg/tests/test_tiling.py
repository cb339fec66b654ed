import cmath
import collections
import itertools
import math

import numpy as np
import pytest

import tilingspectra.tiling as tiling
from tilingspectra.exactnum import QSQRT5, QuadScalar
from tilingspectra.tiling import (
    FAMILY_NAMES,
    ResourceLimitError,
    census_labels,
    characteristic_polynomial,
    eval_polynomial,
    generate,
    get_family,
    predicted_counts,
    substitution_matrix,
    tile_census,
)
from tilingspectra.tiling.core import Patch, check_edges

SMALL_COUNTS = {
    "BoatStar": [1, 11, 86],
    "Triangle": [10, 30, 80, 210],
    "Rhombus": [None, 20, 45, 115],
    "KiteDart": [None, 10, 30, 75],
    "AmmannBeenker": [8, 48, 256],
}


@pytest.mark.parametrize("family", FAMILY_NAMES)
def test_small_levels(family):
    for level, want in enumerate(SMALL_COUNTS[family]):
        if want is not None:
            assert len(generate(family, level)) == want


@pytest.mark.parametrize("family", FAMILY_NAMES)
def test_no_overlapping_edges(family):
    fam = get_family(family)
    check_edges(fam, generate(family, 3).tiles)


@pytest.mark.parametrize("family", FAMILY_NAMES)
def test_generation_is_deterministic(family):
    a = generate(family, 2).to_json()
    b = generate(family, 2).to_json()
    assert a == b
    assert Patch.from_json(a).to_json() == a


def test_triangle_seed_is_ten_triangle_star():
    patch = generate("Triangle", 0)
    assert len(patch) == 10
    assert tile_census(patch) == [0, 5, 0, 5]


def test_boatstar_level_one_enumerates_eleven():
    # the rule gives 11 tiles, matching the closed form rather than the reference count of 16
    assert len(generate("BoatStar", 1)) == 11
    assert predicted_counts("BoatStar", 1)["total"] == 11


@pytest.mark.parametrize("n", range(0, 5))
def test_closed_forms_match_census(n):
    census = dict(zip(census_labels("Triangle"), tile_census(generate("Triangle", n))))
    pred = predicted_counts("Triangle", n)
    assert pred["obtuse"] == census["obtuse+"] + census["obtuse-"]
    assert pred["acute"] == census["acute+"] + census["acute-"]
    if n <= 3:
        boat = dict(zip(census_labels("BoatStar"), tile_census(generate("BoatStar", n))))
        bp = predicted_counts("BoatStar", n)
        assert bp["total"] == sum(boat.values())
        assert bp["pentagons"] == sum(v for k, v in boat.items() if k.startswith("pentagon"))


def test_predicted_counts_unknown():
    assert predicted_counts("KiteDart", 3) is None
    with pytest.raises(KeyError):
        predicted_counts("Hexagon", 1)
    with pytest.raises(ValueError):
        predicted_counts("Triangle", -1)


def test_reference_matrices():
    assert substitution_matrix("Triangle").tolist() == [[1, 1, 0, 0], [0, 1, 1, 1], [0, 0, 1, 1], [1, 1, 0, 1]]
    assert substitution_matrix("BoatStar").tolist()[3] == [5, 3, 1, 4, 2, 0]


INFLATION = {
    "BoatStar": ((1 + math.sqrt(5)) / 2) ** 2,
    "Triangle": (1 + math.sqrt(5)) / 2,
    "Rhombus": (1 + math.sqrt(5)) / 2,
    "KiteDart": (1 + math.sqrt(5)) / 2,
    "AmmannBeenker": 1 + math.sqrt(2),
}


@pytest.mark.parametrize("family", ["BoatStar", "Triangle"])
def test_perron_root_is_area_scaling(family):
    rho = max(abs(np.linalg.eigvals(substitution_matrix(family).astype(float))))
    assert rho == pytest.approx(INFLATION[family] ** 2)


@pytest.mark.parametrize("family, level", [("BoatStar", 3), ("Triangle", 5), ("Rhombus", 5), ("KiteDart", 5), ("AmmannBeenker", 3)])
def test_tile_growth_tracks_area_scaling(family, level):
    ratio = len(generate(family, level + 1)) / len(generate(family, level))
    assert ratio == pytest.approx(INFLATION[family] ** 2, rel=0.1)


def test_characteristic_polynomial_roots_exact():
    cp = characteristic_polynomial(substitution_matrix("BoatStar"))
    assert cp == [1, -12, 40, -33, 4, 0, 0]
    phi4 = QuadScalar.phi() ** 4
    for r in (phi4, phi4.inverse(), QuadScalar(QSQRT5, 4), QuadScalar(QSQRT5, 1), QuadScalar(QSQRT5, 0)):
        assert eval_polynomial(cp, r) == 0
    assert eval_polynomial(cp, QuadScalar(QSQRT5, 2)) != 0


def test_characteristic_polynomial_small():
    assert characteristic_polynomial(np.array([[2, 1], [1, 1]])) == [1, -3, 1]


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        generate("Triangle", 6, max_tiles=1000)
    with pytest.raises(ValueError):
        generate("Triangle", -1)


def test_unknown_family():
    with pytest.raises(KeyError):
        get_family("Hexagon")


@pytest.mark.parametrize("family", ["Triangle", "AmmannBeenker", "BoatStar"])
def test_trim_float_prefilter_matches_exact(family, monkeypatch):
    fast = generate(family, 3).to_json()
    monkeypatch.setattr(tiling, "_float_side", lambda points, region: None)
    assert generate(family, 3).to_json() == fast


# Independent route for Ammann-Beenker: the eightfold cut-and-project tiling
# with the octagonal window centred at the origin.  Vertex n in Z^4 sits at
# sum n_i z^i, which is exactly the coefficient vector of a CycloPoint.


def _cp_tiles(radius):
    z = [cmath.exp(1j * math.pi / 4 * k) for k in range(8)]
    star = [z[(3 * i) % 8] for i in range(4)]
    normals = [z[k] * 1j for k in range(4)]
    half = [0.5 * sum(abs((e.conjugate() * u).real) for e in star) for u in normals]

    def phys(n):
        return sum(n[i] * z[i] for i in range(4))

    def inside(n):
        p = sum(n[i] * star[i] for i in range(4))
        return all(abs((u.conjugate() * p).real) <= h + 1e-9 for u, h in zip(normals, half))

    start = (0, 0, 0, 0)
    seen, queue = {start}, collections.deque([start])
    while queue:
        x = queue.popleft()
        for i, s in itertools.product(range(4), (1, -1)):
            y = list(x)
            y[i] += s
            y = tuple(y)
            if y not in seen and abs(phys(y)) <= radius and inside(y):
                seen.add(y)
                queue.append(y)
    tiles = set()
    for x in seen:
        for i, j in itertools.combinations(range(4), 2):
            a = tuple(x[k] + (k == i) for k in range(4))
            b = tuple(x[k] + (k == j) for k in range(4))
            c = tuple(a[k] + (k == j) for k in range(4))
            if {a, b, c} <= seen:
                tiles.add(frozenset((x, a, b, c)))
    return tiles, phys


@pytest.mark.parametrize("level, radius", [(2, 6.0), (3, 14.0)])
def test_ammann_beenker_matches_cut_and_project(level, radius):
    fam = get_family("AmmannBeenker")
    ours = {frozenset(t.world_coeffs(fam.protos[t.proto])) for t in generate("AmmannBeenker", level).tiles}
    theirs, phys = _cp_tiles(radius + 3)

    def central(tile):
        return all(abs(phys(v)) < radius for v in tile)

    a = {t for t in ours if central(t)}
    b = {t for t in theirs if central(t)}
    assert len(a) > 100
    assert a == b
