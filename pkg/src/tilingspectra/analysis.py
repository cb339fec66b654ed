"""IDS curves, jump bounds, locally supported modes, occurrences and gaps."""

from __future__ import annotations

import csv
import io
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .adjacency import TileGraph, build_graph, laplacian
from .exactnum import QSQRT2, QSQRT5, QuadScalar, _conj_raw
from .spectral import (
    DEFAULT_DENSE_THRESHOLD,
    ExactNullBasis,
    _eliminate,
    count_below,
    count_in_sorted,
    eig_all,
    grid_point,
    make_solver,
    multiplicity,
    verify_eigenfunction,
)
from .tiling import generate, get_family, predicted_counts
from .tiling.core import Patch, PlacedTile, _add, _rot_coeffs

log = logging.getLogger(__name__)

Vector = dict[int, QuadScalar]


class UnstableMultiplicityError(ArithmeticError):
    """The multiplicity bracket disagrees across slice widths."""


class PatternNotFoundError(LookupError):
    """A mode pattern does not occur at the requested anchor."""


# ---------------------------------------------------------------------------
# IDS curves and jumps
# ---------------------------------------------------------------------------


@dataclass
class IDSCurve:
    family: str
    level: int
    tile_count: int
    grid: np.ndarray
    counts: np.ndarray
    jumps: list[tuple[float, float]] = field(default_factory=list)
    plateaus: list[tuple[float, float]] = field(default_factory=list)

    @property
    def k(self) -> np.ndarray:
        return self.counts / self.tile_count if self.tile_count else np.zeros_like(self.grid)

    def to_csv(self, meta: str = "") -> str:
        buf = io.StringIO()
        if meta:
            buf.write(f"# {meta}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["E", "k"])
        for e, k in zip(self.grid, self.k):
            w.writerow([f"{e:.12g}", f"{k:.12g}"])
        return buf.getvalue()


def _plateaus(grid: np.ndarray, counts: np.ndarray) -> list[tuple[float, float]]:
    """Maximal grid runs with a constant count (no eigenvalue inside)."""
    out = []
    i = 0
    while i < len(grid) - 1:
        j = i
        while j + 1 < len(grid) and counts[j + 1] == counts[i]:
            j += 1
        if j > i:
            out.append((float(grid[i]), float(grid[j])))
        i = j + 1 if j > i else i + 1
    return out


def _cluster_jumps(eigs: np.ndarray, lo: float, hi: float, min_count: int, n: int):
    sel = eigs[(eigs >= lo) & (eigs < hi)]
    out = []
    start = 0
    for i in range(1, len(sel) + 1):
        if i == len(sel) or sel[i] - sel[i - 1] > 1e-8 * (1 + abs(sel[i])):
            if i - start >= min_count:
                out.append((float(np.mean(sel[start:i])), (i - start) / n))
            start = i
    return out


def _bisect_jumps(lap, solver, lo, hi, clo, chi, min_count, n, width=1e-7):
    if chi - clo < min_count:
        return []
    if hi - lo <= width:
        return [(0.5 * (lo + hi), (chi - clo) / n)]
    mid = 0.5 * (lo + hi)
    cm = count_below(lap, mid, solver=solver)
    return _bisect_jumps(lap, solver, lo, mid, clo, cm, min_count, n, width) + _bisect_jumps(
        lap, solver, mid, hi, cm, chi, min_count, n, width
    )


def ids_curve(
    lap: sp.spmatrix,
    grid,
    family: str = "",
    level: int = -1,
    marks=(),
    jump_threshold: float | None = None,
    dense_threshold: int = DEFAULT_DENSE_THRESHOLD,
) -> IDSCurve:
    """Normalized eigenvalue counting function sampled on ``grid``.

    Jumps are clusters of at least ``jump_threshold * n`` eigenvalues
    (default ten) packed within 1e-7.  Energies in ``marks`` are always
    reported through a stable multiplicity bracket.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly ascending")
    n = lap.shape[0]
    min_count = max(1, int(round((jump_threshold if jump_threshold is not None else 10 / max(n, 1)) * n)))
    jumps: list[tuple[float, float]] = []
    pts = [grid_point(float(e)) for e in grid]
    if n <= dense_threshold:
        eigs = eig_all(lap, dense_threshold)
        counts = np.array([count_in_sorted(eigs, e) for e in pts], dtype=np.int64)
        for j in range(len(grid) - 1):
            if counts[j + 1] - counts[j] >= min_count:
                jumps += _cluster_jumps(eigs, pts[j], pts[j + 1], min_count, n)
    else:
        solver = make_solver(lap)
        counts = np.array([count_below(lap, e, solver=solver) for e in pts], dtype=np.int64)
        for j in range(len(grid) - 1):
            if counts[j + 1] - counts[j] >= min_count:
                jumps += _bisect_jumps(lap, solver, pts[j], pts[j + 1], counts[j], counts[j + 1], min_count, n)
    for e in marks:
        m = multiplicity(lap, float(e))
        jumps = [(x, s) for x, s in jumps if abs(x - float(e)) > 1e-6]
        if m.count:
            jumps.append((float(e), m.count / n))
    jumps.sort()
    return IDSCurve(family, level, n, grid, counts, jumps, _plateaus(grid, counts))


@dataclass
class BoundarySplit:
    energy: float
    total: int
    interior: int
    stable: bool

    @property
    def boundary(self) -> int:
        return self.total - self.interior


# bracket for the singular values of the interior block; they sit at 0 or
# above 1e-2 on every patch tested, and the augmented system is less well
# conditioned than the Laplacian itself
INTERIOR_DELTA = 1e-6


def boundary_split(
    lap: sp.spmatrix, g: TileGraph, e: float, delta: float | None = None, interior_delta: float = INTERIOR_DELTA
) -> BoundarySplit:
    """Split the multiplicity at ``e`` into interior and boundary parts.

    The interior part is the dimension of the eigenvectors vanishing on every
    boundary tile, i.e. the nullity of ``B = (L - e)[:, interior]``.  It is
    read off the symmetric matrix ``[[0, B], [B^T, 0]]``, whose nullity is
    ``nullity(B) + nullity(B^T)``, with the same stable bracketing as the
    plain multiplicity.
    """
    n = lap.shape[0]
    inner = np.flatnonzero(~np.asarray(g.boundary, dtype=bool))
    m = inner.size
    shifted = (sp.csr_matrix(lap, dtype=np.float64) - e * sp.identity(n, format="csr"))[:, inner]
    aug = sp.bmat([[None, shifted], [shifted.T, None]], format="csr")
    if aug.shape[0] != n + m:
        aug.resize((n + m, n + m))
    total = multiplicity(lap, e, delta)
    null_aug = multiplicity(aug, 0.0, interior_delta)
    twice = null_aug.count - n + m
    if twice % 2:
        raise UnstableMultiplicityError(f"inconsistent nullity {null_aug.count} for the interior block at E = {e}")
    return BoundarySplit(e, total.count, twice // 2, total.stable and null_aug.stable)


@lru_cache(maxsize=8)
def patch_laplacian(family: str, level: int):
    """Generated patch, its graph and Laplacian; recent levels are cached."""
    patch = generate(family, level)
    g = build_graph(get_family(family), patch)
    return patch, g, laplacian(g)


def _as_quad(energy, fld: str) -> QuadScalar:
    if isinstance(energy, QuadScalar):
        return energy
    return QuadScalar.rational(fld, Fraction(energy))


def ids_jump(family: str, level: int, energy, delta: float | None = None) -> float:
    """Multiplicity of ``energy`` divided by the tile count."""
    _, _, lap = patch_laplacian(family, level)
    m = multiplicity(lap, float(energy), delta)
    if not m.stable:
        raise UnstableMultiplicityError(f"counts {m.counts} at widths {m.widths}")
    return m.count / lap.shape[0]


def theoretical_jump_bound(family: str, energy) -> QuadScalar:
    """Proven lower bound on the IDS jump at a special energy."""
    e = float(energy)
    if family == "BoatStar" and e == 4:
        return QuadScalar(QSQRT5, 65, -29, 10)
    if family == "Triangle" and e in (2, 4):
        return QuadScalar(QSQRT5, 65, -29, 20)
    if family == "AmmannBeenker" and e in (4, 6):
        lam = QuadScalar(QSQRT2, -1, 1)
        bound = lam**4 + lam**6
        return bound + 2 * lam**8 if e == 4 else bound
    raise KeyError(f"no jump bound for {family} at E = {energy}")


@dataclass
class ConvergenceRow:
    level: int
    tiles: int
    multiplicity: int
    jump: float
    bound: float | None
    stable: bool


def jump_convergence(family: str, energy, max_level: int, min_level: int = 1) -> list[ConvergenceRow]:
    try:
        bound = float(theoretical_jump_bound(family, energy))
    except KeyError:
        bound = None
    rows = []
    for level in range(min_level, max_level + 1):
        _, _, lap = patch_laplacian(family, level)
        m = multiplicity(lap, float(energy))
        n = lap.shape[0]
        rows.append(ConvergenceRow(level, n, m.count, m.count / n, bound, m.stable))
    return rows


def convergence_csv(rows: list[ConvergenceRow], meta: str = "") -> str:
    buf = io.StringIO()
    if meta:
        buf.write(f"# {meta}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "tiles", "mult", "jump", "bound"])
    for r in rows:
        w.writerow([r.level, r.tiles, r.multiplicity, f"{r.jump:.10g}", "" if r.bound is None else f"{r.bound:.10g}"])
    return buf.getvalue()


def boatstar_multiplicity_conjecture(n: int) -> int:
    """Conjectured multiplicity of E = 4 on the level-n boat-star patch."""
    if n < 0:
        raise ValueError("level must be non-negative")
    if n <= 1:
        return 0
    if n == 2:
        return 1
    return predicted_counts("BoatStar", n - 2)["pentagons"]


# ---------------------------------------------------------------------------
# gaps
# ---------------------------------------------------------------------------


@dataclass
class Gap:
    lo: float
    hi: float
    per_level: dict[int, tuple[float, float]]

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _spectral_top(curve: IDSCurve) -> float:
    """Smallest grid energy at which every eigenvalue has been counted."""
    full = np.flatnonzero(curve.counts >= curve.tile_count)
    return float(curve.grid[full[0]]) if full.size else float("inf")


def _spectral_bottom(curve: IDSCurve) -> float:
    """First grid energy past the lowest eigenvalue above the zero mode."""
    above = np.flatnonzero(curve.counts > 1)
    return float(curve.grid[above[0]]) if above.size else float("inf")


def detect_gaps(curves: list[IDSCurve], min_width: float = 1e-3) -> list[Gap]:
    """Energy intervals that are eigenvalue-free on every curve.

    Each curve contributes its constant-count runs; the runs are intersected
    across curves and pieces narrower than ``min_width`` are dropped, as are
    pieces touching the bottom of the spectrum or lying above it.
    """
    if not curves:
        return []
    pieces = [(-np.inf, np.inf)]
    for c in curves:
        top, bottom = _spectral_top(c), _spectral_bottom(c)
        runs = [(lo, min(hi, top)) for lo, hi in c.plateaus if bottom <= lo < top]
        nxt = []
        for a, b in pieces:
            for lo, hi in runs:
                x, y = max(a, lo), min(b, hi)
                if y > x:
                    nxt.append((x, y))
        pieces = nxt
    gaps = []
    for lo, hi in sorted(pieces):
        if hi - lo < min_width:
            continue
        per = {}
        for c in curves:
            for a, b in c.plateaus:
                if a <= lo and hi <= b:
                    per[c.level] = (a, b)
                    break
        gaps.append(Gap(lo, hi, per))
    return gaps


def _confirm_gap(lap, solver, gap: Gap, probes: int) -> tuple[float, float] | None:
    """Largest probed sub-interval of ``gap`` that is eigenvalue-free for ``lap``."""
    lo_c = count_below(lap, grid_point(gap.lo), solver=solver)
    hi_c = count_below(lap, grid_point(gap.hi), solver=solver)
    if lo_c == hi_c:
        return gap.lo, gap.hi
    pts = np.linspace(gap.lo, gap.hi, probes)
    counts = [lo_c] + [count_below(lap, grid_point(float(e)), solver=solver) for e in pts[1:-1]] + [hi_c]
    best, start = None, 0
    for j in range(1, len(pts) + 1):
        if j == len(pts) or counts[j] != counts[start]:
            if j - 1 > start and (best is None or pts[j - 1] - pts[start] > best[1] - best[0]):
                best = (float(pts[start]), float(pts[j - 1]))
            start = j
    return best


def persistent_gaps(
    family: str,
    levels,
    grid,
    min_width: float = 0.01,
    probes: int = 9,
    dense_threshold: int = DEFAULT_DENSE_THRESHOLD,
) -> list[Gap]:
    """Eigenvalue-free intervals common to every level in ``levels``.

    Levels small enough for a dense solve give full IDS curves on ``grid``;
    their plateaus are intersected by :func:`detect_gaps`.  Each surviving
    interval is then sliced on the larger levels, endpoints first and
    ``probes`` evenly spaced energies if the endpoint counts differ, and
    shrunk to the longest eigenvalue-free stretch found.
    """
    small, large = [], []
    for level in sorted(levels):
        _, _, lap = patch_laplacian(family, level)
        (small if lap.shape[0] <= dense_threshold else large).append((level, lap))
    if not small:
        raise ValueError("at least one level must fit the dense threshold")
    curves = [ids_curve(lap, grid, family, level, dense_threshold=dense_threshold) for level, lap in small]
    gaps = detect_gaps(curves, min_width)
    for level, lap in large:
        solver = make_solver(lap)
        kept = []
        for gp in gaps:
            span = _confirm_gap(lap, solver, gp, probes)
            if span is None or span[1] - span[0] < min_width:
                continue
            per = dict(gp.per_level)
            per[level] = span
            kept.append(Gap(span[0], span[1], per))
        gaps = kept
    return gaps


def gap_probe_grid(gaps: list[Gap], points: int = 9, pad: float = 0.02) -> np.ndarray:
    """Energies bracketing candidate gaps, for slicing larger patches."""
    out = []
    for gp in gaps:
        out.extend(np.linspace(gp.lo - pad, gp.hi + pad, points))
    return np.unique(np.round(out, 12))


# ---------------------------------------------------------------------------
# locally supported modes
# ---------------------------------------------------------------------------


class ExactSpan:
    """Incrementally maintained echelon basis of exact sparse vectors."""

    def __init__(self):
        self._rows: list[tuple[int, Vector]] = []  # (pivot column, row with unit pivot)

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Vector) -> Vector:
        v = dict(v)
        for col, row in self._rows:
            c = v.get(col)
            if c:
                for k, x in row.items():
                    t = v.get(k)
                    t = -(c * x) if t is None else t - c * x
                    if t:
                        v[k] = t
                    else:
                        v.pop(k, None)
        return v

    def add(self, v: Vector) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        col = min(r)
        inv = r[col].inverse()
        r = {k: x * inv for k, x in r.items()}
        # keep earlier rows reduced at the new pivot
        for i, (c0, row) in enumerate(self._rows):
            f = row.get(col)
            if f:
                new = dict(row)
                for k, x in r.items():
                    t = new.get(k)
                    t = -(f * x) if t is None else t - f * x
                    if t:
                        new[k] = t
                    else:
                        new.pop(k, None)
                self._rows[i] = (c0, new)
        self._rows.append((col, r))
        return True


def _neighbors(g: TileGraph) -> list[list[int]]:
    return g.neighbors()


def _ball(nbrs, center: int, radius: int) -> list[int]:
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for v in nbrs[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return sorted(seen)


def local_kernel(lap: sp.csr_matrix, nbrs, ball: list[int], energy: QuadScalar) -> list[Vector]:
    """Exact eigenvectors of the whole patch supported inside ``ball``."""
    cols = {v: i for i, v in enumerate(ball)}
    rows_idx = set(ball)
    for u in ball:
        rows_idx.update(nbrs[u])
    fld = energy.field
    rows = []
    for r in sorted(rows_idx):
        lo, hi = lap.indptr[r], lap.indptr[r + 1]
        row = {}
        for j, x in zip(lap.indices[lo:hi], lap.data[lo:hi]):
            j = int(j)
            if j in cols and x:
                row[cols[j]] = QuadScalar(fld, int(x))
        if r in cols:
            c = cols[r]
            row[c] = row.get(c, QuadScalar(fld, 0)) - energy
            if not row[c]:
                del row[c]
        if row:
            rows.append(row)
    pivots, free = _eliminate(rows, len(ball))
    out = []
    for f in free:
        val = {f: QuadScalar(fld, 1)}
        for prow, j in reversed(pivots):
            acc = None
            for jj, coef in prow.items():
                if jj != j and jj in val:
                    t = coef * val[jj]
                    acc = t if acc is None else acc + t
            if acc:
                val[j] = -acc
        out.append({ball[k]: x for k, x in val.items()})
    return out


def _combine(v: Vector, w: Vector, c: QuadScalar) -> Vector:
    out = dict(v)
    for k, x in w.items():
        t = out.get(k)
        t = -(c * x) if t is None else t - c * x
        if t:
            out[k] = t
        else:
            out.pop(k, None)
    return out


def support_reduce(vectors: list[Vector]) -> list[Vector]:
    """Greedy support reduction of a set of vectors spanning the same space.

    Repeatedly replaces a vector by a combination with another one whenever
    that cancels enough entries to shrink its support.  The result is
    heuristic-minimal.
    """
    vecs = [dict(v) for v in vectors if v]
    improved = True
    while improved:
        improved = False
        vecs.sort(key=len)
        for i in range(len(vecs)):
            for j in range(len(vecs)):
                if i == j:
                    continue
                vi, vj = vecs[i], vecs[j]
                if len(vj) > len(vi) + len(vi):
                    continue
                best = None
                for k in vi.keys() & vj.keys():
                    w = _combine(vi, vj, vi[k] / vj[k])
                    if w and len(w) < len(vi) and (best is None or len(w) < len(best)):
                        best = w
                if best is not None:
                    vecs[i] = best
                    improved = True
                    break
            if improved:
                break
    return sorted(vecs, key=len)


def normalize_mode(v: Vector) -> Vector:
    """Scale so that the entry of largest magnitude is +1 at its first occurrence."""
    top = max(abs(float(x)) for x in v.values())
    k = min(i for i, x in v.items() if abs(abs(float(x)) - top) < 1e-9 * top)
    s = v[k].inverse()
    return {i: x * s for i, x in sorted(v.items())}


@dataclass
class LocalMode:
    vector: Vector
    radius: int
    center: int

    @property
    def support(self) -> list[int]:
        return sorted(self.vector)


def _float_nullity(lap_f: sp.csr_matrix, ball: list[int], nbrs, e: float) -> int:
    rows = set(ball)
    for u in ball:
        rows.update(nbrs[u])
    sub = lap_f[sorted(rows)][:, ball].toarray()
    pos = {v: i for i, v in enumerate(sorted(rows))}
    for v in ball:
        sub[pos[v], ball.index(v)] -= e
    s = np.linalg.svd(sub, compute_uv=False)
    return int(np.count_nonzero(s < 1e-9 * max(1.0, s[0] if s.size else 1.0)))


def iter_local_modes(lap: sp.spmatrix, g: TileGraph, energy: QuadScalar, max_radius: int = 6, centers=None):
    """Yield linearly independent eigenvectors with small supports.

    Kernels of ``L - E`` restricted to BFS balls of growing radius are
    computed around every center, deepest tiles first.  Vectors that enlarge
    the span are yielded after support reduction inside their ball.
    """
    csr = sp.csr_matrix(lap)
    lap_f = csr.astype(np.float64)
    nbrs = _neighbors(g)
    ef = float(energy)
    if centers is None:
        centers = sorted(range(g.n), key=lambda i: (-int(g.dist_to_boundary[i]), i))
    span = ExactSpan()
    found: list[LocalMode] = []
    for r in range(0, max_radius + 1):
        for c in centers:
            ball = _ball(nbrs, c, r)
            ball_set = set(ball)
            inside = sum(1 for m in found if ball_set.issuperset(m.vector))
            if _float_nullity(lap_f, ball, nbrs, ef) <= inside:
                continue
            for v in support_reduce(local_kernel(csr, nbrs, ball, energy)):
                if span.add(v):
                    m = LocalMode(normalize_mode(v), r, c)
                    found.append(m)
                    yield m


def find_local_modes(
    lap: sp.spmatrix,
    g: TileGraph,
    energy: QuadScalar,
    max_radius: int = 6,
    target_dim: int | None = None,
    centers=None,
) -> list[LocalMode]:
    """Collect iter_local_modes, stopping once ``target_dim`` vectors are found."""
    found = []
    if target_dim == 0:
        return found
    for m in iter_local_modes(lap, g, energy, max_radius, centers):
        found.append(m)
        if target_dim is not None and len(found) >= target_dim:
            break
    return found


@dataclass
class ModeReport:
    energy: QuadScalar
    total_dim: int
    interior_count: int
    boundary_count: int
    representatives: list[Vector]
    boundary_flags: list[bool]
    complete: bool = True

    @property
    def support_sizes(self) -> list[int]:
        return [len(v) for v in self.representatives]

    def to_json(self) -> dict:
        return {
            "energy": self.energy.to_json(),
            "totalDim": self.total_dim,
            "interiorCount": self.interior_count,
            "boundaryCount": self.boundary_count,
            "supportMinimality": "heuristic-minimal",
            "representatives": [
                {
                    "boundary": b,
                    "supportSize": len(v),
                    "values": {str(k): x.to_json() for k, x in sorted(v.items())},
                }
                for v, b in zip(self.representatives, self.boundary_flags)
            ],
        }


def classify_modes(
    basis: ExactNullBasis,
    g: TileGraph,
    lap: sp.spmatrix,
    max_radius: int = 6,
) -> ModeReport:
    """Support-reduced representatives of ker(L - E), split by boundary contact.

    Representatives come from local kernels first; whatever part of the
    eigenspace they miss is completed from ``basis``.
    """
    local = find_local_modes(lap, g, basis.energy, max_radius, target_dim=basis.dim)
    reps = [m.vector for m in local]
    span = ExactSpan()
    for v in reps:
        span.add(v)
    if len(reps) < basis.dim:
        rest = [v for v in support_reduce(basis.basis)]
        for v in rest:
            if span.add(v):
                reps.append(normalize_mode(v))
    flags = [bool(any(g.boundary[i] for i in v)) for v in reps]
    nb = sum(flags)
    return ModeReport(basis.energy, basis.dim, len(reps) - nb, nb, reps, flags)


# ---------------------------------------------------------------------------
# pattern occurrences
# ---------------------------------------------------------------------------


def _shape_class(name: str) -> str:
    return name.rstrip("+-")


def _tile_key(fam, t: PlacedTile, k: int = 0, refl: bool = False, shift=None):
    """Match key of a tile after x -> zeta**k * conj**refl(x) + shift."""
    proto = fam.protos[t.proto]
    ring = fam.ring

    def tr(c):
        c = t.transform_coeffs(c)
        if refl:
            c = _conj_raw(ring, c)
        c = _rot_coeffs(ring, c, k)
        return c if shift is None else _add(c, shift)

    verts = frozenset(tr(v.coeffs) for v in proto.vertices)
    anchors = frozenset(tr(proto.vertices[i].coeffs) for i in proto.anchors)
    return _shape_class(proto.name), verts, anchors


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def _shifted(key, shift):
    name, verts, anchors = key
    return name, frozenset(_add(v, shift) for v in verts), frozenset(_add(a, shift) for a in anchors)


def _placements(patch: Patch, pattern: list[PlacedTile], reflections: bool = True, anchor_index: int | None = None):
    """Yield (image tile indices, transform) for every placement of ``pattern``."""
    fam = get_family(patch.family)
    order = 10 if fam.ring == "Z10" else 8
    index = {}
    for i, t in enumerate(patch.tiles):
        index[_tile_key(fam, t)] = i
    # pattern keys under each rotation/reflection, translated later
    moved = {}
    for refl in (False, True) if reflections else (False,):
        for k in range(order):
            keys = [_tile_key(fam, t, k, refl) for t in pattern]
            moved[(k, refl)] = (keys, min(keys[0][1]))
    base = moved[(0, False)][0][0]
    candidates = range(len(patch.tiles)) if anchor_index is None else [anchor_index]
    for ci in candidates:
        target = _tile_key(fam, patch.tiles[ci])
        if target[0] != base[0] or len(target[1]) != len(base[1]):
            continue
        tv = sorted(target[1])
        for (k, refl), (keys, first) in moved.items():
            for p in tv:
                shift = _sub(p, first)
                if _shifted(keys[0], shift) != target:
                    continue
                hits = [ci]
                for key in keys[1:]:
                    j = index.get(_shifted(key, shift))
                    if j is None:
                        break
                    hits.append(j)
                else:
                    yield hits, (k, refl, shift)


def count_occurrences(patch: Patch, pattern, reflections: bool = True) -> int:
    """Number of distinct congruent copies of ``pattern`` inside ``patch``."""
    tiles = pattern.tiles if isinstance(pattern, Patch) else list(pattern)
    if not tiles:
        raise ValueError("empty pattern")
    seen = set()
    for hits, _ in _placements(patch, tiles, reflections):
        seen.add(frozenset(hits))
    return len(seen)


def eightfold_star() -> Patch:
    """The eight-rhomb vertex star of the Ammann-Beenker tiling."""
    from .tiling import seed

    return seed("AmmannBeenker")


# ---------------------------------------------------------------------------
# mode catalog
# ---------------------------------------------------------------------------


def _q5(a, b=0, c=1):
    return QuadScalar(QSQRT5, a, b, c)


def _q2(a, b=0, c=1):
    return QuadScalar(QSQRT2, a, b, c)


@dataclass(frozen=True)
class ModeSpec:
    family: str
    name: str
    energy: QuadScalar
    support_size: int
    value_alphabet: tuple[QuadScalar, ...]
    reference_level: int
    boundary: bool = False


_PM1 = (_q5(1), _q5(-1))
_INV_PHI = _q5(-1, 1, 2)  # 1/phi

MODE_CATALOG: tuple[ModeSpec, ...] = (
    ModeSpec("BoatStar", "ring", _q5(4), 10, _PM1, 3),
    ModeSpec("BoatStar", "boundary-inv-phi2", _q5(3, -1, 2), 4, _PM1 + (_INV_PHI, -_INV_PHI), 3, boundary=True),
    ModeSpec("BoatStar", "boundary-phi2", _q5(3, 1, 2), 4, _PM1 + (_INV_PHI, -_INV_PHI), 3, boundary=True),
    ModeSpec("Triangle", "ring", _q5(2), 20, _PM1, 5),
    ModeSpec("Triangle", "ring", _q5(4), 20, _PM1, 5),
    ModeSpec("KiteDart", "ring", _q5(11, -1, 2), 40, _PM1 + (_INV_PHI, -_INV_PHI), 5),
    ModeSpec("KiteDart", "ring", _q5(11, 1, 2), 40, _PM1 + (_INV_PHI, -_INV_PHI), 5),
    ModeSpec("Rhombus", "filled circle", _q5(6), 25, (), 5),
    ModeSpec("Rhombus", "big star", _q5(6), 50, (), 5),
    ModeSpec("Rhombus", "two star", _q5(6), 15, (), 5),
    ModeSpec("Rhombus", "diamond ring", _q5(6), 18, (), 5),
    ModeSpec("AmmannBeenker", "8-tile", _q2(4), 8, (), 2),
    ModeSpec("AmmannBeenker", "8-tile", _q2(6), 8, (), 2),
    ModeSpec("AmmannBeenker", "64-tile", _q2(4), 64, (), 2),
    ModeSpec("AmmannBeenker", "64-tile", _q2(6), 64, (), 2),
    ModeSpec("AmmannBeenker", "104-tile", _q2(4), 104, (_q2(1), _q2(-1)), 3),
    ModeSpec("AmmannBeenker", "328-tile", _q2(4), 328, (_q2(1), _q2(-1), _q2(1, 0, 2), _q2(-1, 0, 2)), 3),
)


def catalog(family: str | None = None) -> list[ModeSpec]:
    return [s for s in MODE_CATALOG if family is None or s.family == family]


def find_spec(family: str, name: str, energy=None) -> ModeSpec:
    for s in MODE_CATALOG:
        if s.family == family and s.name == name and (energy is None or float(s.energy) == float(energy)):
            return s
    raise KeyError(f"no catalog mode {name!r} for {family}")


@dataclass
class ModeTemplate:
    """A catalog mode realized on its reference patch.

    ``tiles`` is the support only.  Neighborhoods of congruent supports can
    differ, so a placed copy still has to be checked against the Laplacian.
    """

    spec: ModeSpec
    tiles: list[PlacedTile]
    values: list[QuadScalar]  # aligned with the support part of ``tiles``

    @property
    def support_size(self) -> int:
        return len(self.values)


def _pick_mode(spec: ModeSpec, lap, g, radius: int) -> Vector | None:
    def fits(v):
        return len(v) == spec.support_size and bool(any(g.boundary[i] for i in v)) == spec.boundary

    local = []
    for m in iter_local_modes(lap, g, spec.energy, max_radius=radius):
        if fits(m.vector):
            return m.vector
        local.append(m.vector)
    # a combination of the modes found may have the target support
    for v in support_reduce(local):
        if fits(v):
            return normalize_mode(v)
    return None


@lru_cache(maxsize=None)
def resolve_template(spec: ModeSpec, max_radius: int = 12) -> ModeTemplate:
    """Discover the catalog mode on its reference patch."""
    patch, g, lap = patch_laplacian(spec.family, spec.reference_level)
    vec = _pick_mode(spec, lap, g, max_radius)
    if vec is None:
        raise PatternNotFoundError(f"{spec.family} {spec.name} mode not found at level {spec.reference_level}")
    support = sorted(vec)
    return ModeTemplate(spec, [patch.tiles[i] for i in support], [vec[i] for i in support])


def mode_pattern(spec: ModeSpec) -> Patch:
    t = resolve_template(spec)
    return Patch(spec.family, spec.reference_level, list(t.tiles))


def place_ring_mode(patch: Patch, spec: ModeSpec, anchor: int) -> Vector:
    """Place the catalog mode so that its first support tile lands on ``anchor``."""
    if patch.family != spec.family:
        raise ValueError("mode and patch belong to different families")
    t = resolve_template(spec)
    for hits, _ in _placements(patch, t.tiles, True, anchor_index=anchor):
        return {hits[i]: t.values[i] for i in range(t.support_size)}
    raise PatternNotFoundError(f"{spec.name} pattern does not occur at tile {anchor}")


def placed_modes(patch: Patch, spec: ModeSpec, lap: sp.spmatrix | None = None) -> list[Vector]:
    """Every distinct copy of the catalog mode that is an eigenvector of ``patch``."""
    if lap is None:
        lap = laplacian(build_graph(get_family(patch.family), patch))
    t = resolve_template(spec)
    out: dict[frozenset, Vector] = {}
    for hits, _ in _placements(patch, t.tiles, True):
        key = frozenset(hits)
        if key in out:
            continue
        v = {hits[i]: t.values[i] for i in range(t.support_size)}
        if verify_eigenfunction(lap, v, spec.energy):
            out[key] = v
    return [out[k] for k in sorted(out, key=min)]


def mode_anchors(patch: Patch, spec: ModeSpec, lap: sp.spmatrix | None = None) -> list[int]:
    """Tiles at which a valid copy of the catalog mode can be anchored."""
    if lap is None:
        lap = laplacian(build_graph(get_family(patch.family), patch))
    t = resolve_template(spec)
    out = set()
    for hits, _ in _placements(patch, t.tiles, True):
        v = {hits[i]: t.values[i] for i in range(t.support_size)}
        if verify_eigenfunction(lap, v, spec.energy):
            out.add(hits[0])
    return sorted(out)


def value_alphabet(v: Vector) -> set[QuadScalar]:
    return set(v.values())


__all__ = [
    "persistent_gaps",
    "BoundarySplit",
    "boundary_split",
    "ConvergenceRow",
    "ExactSpan",
    "Gap",
    "IDSCurve",
    "LocalMode",
    "MODE_CATALOG",
    "ModeReport",
    "ModeSpec",
    "ModeTemplate",
    "PatternNotFoundError",
    "UnstableMultiplicityError",
    "boatstar_multiplicity_conjecture",
    "catalog",
    "classify_modes",
    "convergence_csv",
    "count_occurrences",
    "detect_gaps",
    "eightfold_star",
    "find_local_modes",
    "find_spec",
    "iter_local_modes",
    "gap_probe_grid",
    "ids_curve",
    "placed_modes",
    "ids_jump",
    "jump_convergence",
    "local_kernel",
    "mode_anchors",
    "mode_pattern",
    "normalize_mode",
    "patch_laplacian",
    "place_ring_mode",
    "resolve_template",
    "support_reduce",
    "theoretical_jump_bound",
    "value_alphabet",
    "verify_eigenfunction",
]
