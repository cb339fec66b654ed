import numpy as np

from tilingspectra.analysis import ids_curve, patch_laplacian
from tilingspectra.render import SCALE, ids_svg, mode_svg, patch_svg, value_color
from tilingspectra.tiling import generate


def test_patch_svg_one_polygon_per_tile():
    patch = generate("Triangle", 1)
    svg = patch_svg(patch)
    assert svg.count("<polygon") == 30
    assert svg == patch_svg(patch)
    assert SCALE == 100.0


def test_patch_svg_custom_colors():
    svg = patch_svg(generate("AmmannBeenker", 0), {"rhomb": "#000001"})
    assert svg.count('fill="#000001"') == 8


def test_value_colors():
    assert value_color(0.0) == "#ffffff"
    assert value_color(1.0) != value_color(0.5)
    assert value_color(-1.0) != value_color(1.0)


def test_mode_svg_shades_support():
    patch, _, _ = patch_laplacian("Triangle", 1)
    svg = mode_svg(patch, [{0: 1.0, 1: -1.0}])
    assert svg.count("<polygon") == 30
    assert svg.count(f'fill="{value_color(1.0)}"') == 1


def test_ids_svg():
    _, _, lap = patch_laplacian("Triangle", 2)
    c = ids_curve(lap, np.linspace(0, 8, 50), "Triangle", 2)
    svg = ids_svg([c], marks=[2.0])
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert ids_svg([]).startswith("<svg")
