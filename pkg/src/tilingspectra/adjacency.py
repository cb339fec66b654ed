"""Tile adjacency graphs and their Laplacians.

Tiles are graph vertices; two tiles are adjacent when they share a full
polygon edge.  Edges are matched exactly on their endpoint coordinates.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exactnum import CycloPoint
from .tiling.core import Family, Patch, _direction_of

log = logging.getLogger(__name__)


class EdgeConflictError(RuntimeError):
    """An edge is claimed by three or more tiles."""


@dataclass
class TileGraph:
    n: int
    edges: np.ndarray  # (m, 2) int, u < v, lexicographically sorted
    degree: np.ndarray
    boundary: np.ndarray  # bool per tile
    dist_to_boundary: np.ndarray
    partial_overlaps: int = 0

    def neighbors(self) -> list[list[int]]:
        nb = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(int(v))
            nb[v].append(int(u))
        return nb

    def adjacency(self) -> sp.csr_matrix:
        m = len(self.edges)
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]]) if m else np.zeros(0, int)
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]]) if m else np.zeros(0, int)
        data = np.ones(2 * m, dtype=np.int64)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


def _tile_edges(family: Family, patch: Patch):
    for i, t in enumerate(patch.tiles):
        vs = t.world_coeffs(family.protos[t.proto])
        for a, b in zip(vs, vs[1:] + vs[:1]):
            yield i, a, b


def build_graph(family: Family, patch: Patch) -> TileGraph:
    owners: dict = defaultdict(list)
    for i, a, b in _tile_edges(family, patch):
        key = (a, b) if a <= b else (b, a)
        if not owners[key] or owners[key][-1] != i:
            owners[key].append(i)

    pairs = set()
    unmatched = []
    for key, ts in owners.items():
        if len(ts) > 2:
            raise EdgeConflictError(f"edge shared by {len(ts)} tiles: {ts}")
        if len(ts) == 2:
            u, v = sorted(ts)
            pairs.add((u, v))
        else:
            unmatched.append((ts[0], key))

    partial, partial_tiles = _partial_overlaps(family.ring, unmatched)
    if partial:
        log.warning("patch is not edge-to-edge: %d partially shared segments", len(partial))
        pairs.update(partial)

    n = len(patch.tiles)
    boundary = np.zeros(n, dtype=bool)
    for i, key in unmatched:
        if (i, key) not in partial_tiles:
            boundary[i] = True
    edges = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
    degree = np.bincount(edges.ravel(), minlength=n).astype(np.int64) if n else np.zeros(0, np.int64)
    g = TileGraph(n, edges, degree, boundary, np.zeros(n, dtype=np.int64), len(partial))
    g.dist_to_boundary = _bfs_distance(g)
    return g


def _bfs_distance(g: TileGraph) -> np.ndarray:
    dist = np.full(g.n, -1, dtype=np.int64)
    nb = g.neighbors()
    q = deque()
    for i in np.flatnonzero(g.boundary):
        dist[i] = 0
        q.append(int(i))
    while q:
        u = q.popleft()
        for v in nb[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def _partial_overlaps(ring, unmatched):
    """Pairs of tiles whose unmatched edges overlap along a common line."""
    if not unmatched:
        return set(), set()
    n = CycloPoint.zeta(ring, 0).order
    half = n // 2
    lines = defaultdict(list)
    for i, key in unmatched:
        a = CycloPoint(ring, key[0])
        b = CycloPoint(ring, key[1])
        d = b - a
        k = _direction_of(d) % half
        # rotate the line to horizontal: imaginary part identifies the line
        ra = a.rotate(-k)
        rb = b.rotate(-k)
        line_id = (k, (ra - ra.conj()).coeffs)
        lo, hi = sorted([ra.re(), rb.re()], key=_qkey)
        lines[line_id].append((lo, hi, i, key))
    pairs = set()
    touched = set()
    for segs in lines.values():
        if len(segs) < 2:
            continue
        segs.sort(key=lambda s: _qkey(s[0]))
        for x in range(len(segs)):
            lo1, hi1, i1, k1 = segs[x]
            for y in range(x + 1, len(segs)):
                lo2, hi2, i2, k2 = segs[y]
                if lo2 >= hi1:
                    break
                if i1 != i2 and hi2 > lo1:
                    pairs.add((min(i1, i2), max(i1, i2)))
                    touched.add((i1, k1))
                    touched.add((i2, k2))
    return pairs, touched


def _qkey(q):
    return float(q)


def laplacian(g: TileGraph) -> sp.csr_matrix:
    """Integer graph Laplacian D - A in compressed-row storage."""
    a = g.adjacency()
    return (sp.diags(g.degree.astype(np.int64)) - a).tocsr()


def export_edgelist(g: TileGraph) -> str:
    lines = [f"# n {g.n}", f"# m {len(g.edges)}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def export_matrix_market(g: TileGraph) -> str:
    lap = sp.tril(laplacian(g)).tocoo()
    order = np.lexsort((lap.row, lap.col))
    out = [
        "%%MatrixMarket matrix coordinate integer symmetric",
        f"{g.n} {g.n} {lap.nnz}",
    ]
    # lower triangle in column-major order, 1-based
    for idx in order:
        out.append(f"{lap.row[idx] + 1} {lap.col[idx] + 1} {int(lap.data[idx])}")
    return "\n".join(out) + "\n"
