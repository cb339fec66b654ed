"""Deterministic SVG output for patches, mode supports and IDS plots."""

from __future__ import annotations

from .tiling import get_family
from .tiling.core import Patch

SCALE = 100.0  # SVG units per unit edge length

PROTO_COLORS = {
    "star": "#f2c14e",
    "boat": "#f78154",
    "diamond": "#4d9078",
    "pentagon_A": "#5fad56",
    "pentagon_B": "#b4436c",
    "pentagon_C": "#9bc1bc",
    "acute+": "#e9c46a",
    "acute-": "#f4a261",
    "obtuse+": "#2a9d8f",
    "obtuse-": "#8ab17d",
    "thick": "#e76f51",
    "thin": "#264653",
    "kite": "#e9c46a",
    "dart": "#2a9d8f",
    "rhomb": "#e76f51",
    "square": "#457b9d",
}

# dark for |value| = 1, light for smaller magnitudes
POSITIVE = ("#1d4e89", "#8fb8de")
NEGATIVE = ("#b3001b", "#f4a7a3")
ZERO = "#ffffff"


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _polygons(patch: Patch):
    fam = get_family(patch.family)
    for t in patch.tiles:
        proto = fam.protos[t.proto]
        yield proto, [v.embed() for v in t.world_vertices(proto)]


def _frame(polys, pad: float = 10.0):
    xs = [x * SCALE for _, pts in polys for x, _ in pts]
    ys = [-y * SCALE for _, pts in polys for _, y in pts]
    if not xs:
        return 0.0, 0.0, 1.0, 1.0
    return min(xs) - pad, min(ys) - pad, max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad


def _svg(body: list[str], frame) -> str:
    x, y, w, h = frame
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x)} {_fmt(y)} {_fmt(w)} {_fmt(h)}" '
        f'width="{_fmt(w)}" height="{_fmt(h)}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _path(pts, fill: str, stroke: str = "#222222") -> str:
    d = " ".join(f"{_fmt(px * SCALE)},{_fmt(-py * SCALE)}" for px, py in pts)
    return f'<polygon points="{d}" fill="{fill}" stroke="{stroke}" stroke-width="1"/>'


def patch_svg(patch: Patch, colors: dict[str, str] | None = None) -> str:
    """Tiles as filled polygons colored by prototile."""
    palette = dict(PROTO_COLORS)
    if colors:
        palette.update(colors)
    polys = list(_polygons(patch))
    body = [_path(pts, palette.get(proto.name, "#cccccc")) for proto, pts in polys]
    return _svg(body, _frame(polys))


def value_color(x: float) -> str:
    if abs(x) < 1e-12:
        return ZERO
    dark, light = POSITIVE if x > 0 else NEGATIVE
    return dark if abs(abs(x) - 1.0) < 1e-9 or abs(x) > 1.0 else light


def mode_svg(patch: Patch, vectors: list[dict]) -> str:
    """Shade each tile by the value of the mode that covers it."""
    polys = list(_polygons(patch))
    values: dict[int, float] = {}
    for v in vectors:
        for k, x in v.items():
            values.setdefault(int(k), float(x))
    body = [_path(pts, value_color(values.get(i, 0.0)), "#999999") for i, (_, pts) in enumerate(polys)]
    return _svg(body, _frame(polys))


def ids_svg(curves, marks=(), width: float = 600.0, height: float = 400.0) -> str:
    """Overlaid step plots of IDS curves with vertical markers at ``marks``."""
    if not curves:
        return _svg([], (0.0, 0.0, width, height))
    lo = min(float(c.grid[0]) for c in curves)
    hi = max(float(c.grid[-1]) for c in curves)
    span = hi - lo or 1.0

    def sx(e):
        return (e - lo) / span * width

    def sy(k):
        return height - k * height

    palette = ["#264653", "#2a9d8f", "#e9c46a", "#f4a261", "#e76f51", "#8ab17d", "#b4436c", "#457b9d"]
    body = [f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff" stroke="#000000"/>']
    for i, c in enumerate(curves):
        pts = []
        for e, k in zip(c.grid, c.k):
            pts.append(f"{_fmt(sx(float(e)))},{_fmt(sy(float(k)))}")
        color = palette[i % len(palette)]
        body.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        body.append(
            f'<text x="8" y="{_fmt(16 + 14 * i)}" font-size="12" fill="{color}">level {c.level} ({c.tile_count} tiles)</text>'
        )
    for e in marks:
        x = _fmt(sx(float(e)))
        body.append(f'<line x1="{x}" y1="0" x2="{x}" y2="{_fmt(height)}" stroke="#888888" stroke-dasharray="4 3"/>')
    return _svg(body, (0.0, 0.0, width, height))
