"""Eigenvalues, eigenvalue counts and exact eigenspaces of tile Laplacians.

Small patches are diagonalized densely.  Large ones are handled by spectrum
slicing: the number of eigenvalues below ``E`` equals the number of
negative pivots in a symmetric factorization of ``L - E*I`` (Sylvester's
law of inertia).  Eigenspaces at the special energies, which lie in
Q(sqrt5) or Q(sqrt2), are computed exactly by sparse fraction-free
elimination over Z[sqrt5] or Z[sqrt2].
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from math import gcd

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse import csgraph

from .exactnum import QSQRT2, QSQRT5, QuadScalar

log = logging.getLogger(__name__)

DEFAULT_DENSE_THRESHOLD = 8000
DEFAULT_EXACT_THRESHOLD = 5000
# above this size inertia counts use the sparse factorization
SPARSE_INERTIA_MIN = 600
RETRY_OFFSETS = (1e-9, -1e-9, 3e-9, -3e-9, 1e-8, -1e-8)


class SizeLimitError(RuntimeError):
    """Matrix too large for the requested method."""


class FactorizationBreakdown(ArithmeticError):
    """The symmetric factorization hit a (numerically) zero pivot."""


# ---------------------------------------------------------------------------
# dense eigenvalues
# ---------------------------------------------------------------------------


def eig_all(lap: sp.spmatrix, dense_threshold: int = DEFAULT_DENSE_THRESHOLD) -> np.ndarray:
    """All eigenvalues in ascending order."""
    n = lap.shape[0]
    if n > dense_threshold:
        raise SizeLimitError(f"n = {n} exceeds the dense threshold {dense_threshold}")
    if n == 0:
        return np.zeros(0)
    a = lap.toarray().astype(np.float64) if sp.issparse(lap) else np.asarray(lap, dtype=np.float64)
    return sla.eigh(a, eigvals_only=True, driver="evr")


# Tabulated counts are taken just below each grid energy, so that
# eigenvalues numerically equal to a grid point never count as below it.
GRID_TOL = 1e-9


def grid_point(e: float) -> float:
    return e - GRID_TOL * (1.0 + abs(e))


def count_in_sorted(eigs: np.ndarray, e: float) -> int:
    """Number of entries of a sorted eigenvalue array strictly below e."""
    return int(np.searchsorted(eigs, e, side="left"))


# ---------------------------------------------------------------------------
# inertia
# ---------------------------------------------------------------------------


def _negatives_dense(a: np.ndarray, scale: float | None = None) -> int:
    """Negative eigenvalue count via Bunch-Kaufman LDL^T (1x1 and 2x2 pivots)."""
    _, d, _ = sla.ldl(a, lower=True, hermitian=True)
    n = d.shape[0]
    neg = 0
    i = 0
    if scale is None:
        scale = max(1.0, float(np.max(np.abs(a)))) if n else 1.0
    while i < n:
        if i + 1 < n and d[i + 1, i] != 0.0:
            block = d[i : i + 2, i : i + 2]
            w = np.linalg.eigvalsh(block)
            if np.min(np.abs(w)) < 1e-13 * scale:
                raise FactorizationBreakdown("singular 2x2 pivot")
            neg += int(np.sum(w < 0))
            i += 2
        else:
            if abs(d[i, i]) < 1e-13 * scale:
                raise FactorizationBreakdown("zero pivot")
            neg += d[i, i] < 0
            i += 1
    return int(neg)


@dataclass
class _Front:
    sep: np.ndarray
    children: list["_Front"]
    boundary: np.ndarray | None = None


def _bisect(adj: sp.csr_matrix, verts: np.ndarray, leaf_size: int) -> _Front:
    """Nested dissection by BFS level sets from a pseudo-peripheral vertex."""
    if verts.size <= leaf_size:
        return _Front(verts, [])
    sub = adj[verts][:, verts]
    start = 0
    for _ in range(2):
        dist = csgraph.breadth_first_order(sub, start, directed=False, return_predecessors=False)
        start = int(dist[-1])
    levels = csgraph.shortest_path(sub, unweighted=True, directed=False, indices=start)
    unreached = ~np.isfinite(levels)
    if unreached.any():
        # disconnected: split off the component of ``start`` with an empty separator
        return _Front(
            verts[:0],
            [
                _bisect(adj, verts[~unreached], leaf_size),
                _bisect(adj, verts[unreached], leaf_size),
            ],
        )
    levels = levels.astype(np.int64)
    top = int(levels.max())
    if top < 2:
        return _Front(verts, [])
    # level closest to splitting the vertices in half
    cum = np.cumsum(np.bincount(levels, minlength=top + 1))
    mid = int(np.clip(np.searchsorted(cum, verts.size // 2), 1, top - 1))
    left, right = verts[levels < mid], verts[levels > mid]
    return _Front(
        verts[levels == mid],
        [_bisect(adj, left, leaf_size), _bisect(adj, right, leaf_size)],
    )


class InertiaSolver:
    """Sparse symmetric inertia by a multifrontal eigen-elimination.

    The variables are ordered by nested dissection.  At every front the fully
    summed block is diagonalized with a dense symmetric eigensolver, an
    orthogonal congruence, so Sylvester's law applies to each step.  Only
    eigen-directions with ``|lambda| >= delay_tol`` (relative) are eliminated.
    The remaining near-singular directions are handed to the parent front as
    extra variables and reach the root, where every sign is read off at once.
    Element growth is therefore bounded by ``1/delay_tol``.
    """

    def __init__(self, lap: sp.spmatrix, leaf_size: int = 64, delay_tol: float = 1e-3):
        self.a = sp.csr_matrix(lap, dtype=np.float64)
        self.a.sum_duplicates()
        n = self.n = self.a.shape[0]
        self.delay_tol = delay_tol
        pattern = self.a.copy()
        pattern.setdiag(0)
        pattern.eliminate_zeros()
        pattern.data[:] = 1.0
        self.root = _bisect(pattern.tocsr(), np.arange(n), leaf_size)
        self._postorder = []
        owner = np.empty(n, dtype=np.int64)
        self._number(self.root, owner)
        self._owner = owner
        self._boundaries(self.root)
        self._offdiag = pattern

    def _number(self, node: _Front, owner: np.ndarray) -> tuple[int, int]:
        lo = len(self._postorder)
        for c in node.children:
            self._number(c, owner)
        node.index = len(self._postorder)
        node.lo = lo
        self._postorder.append(node)
        owner[node.sep] = node.index
        return lo, node.index

    def _boundaries(self, node: _Front) -> None:
        for c in node.children:
            self._boundaries(c)
        cand = [c.boundary for c in node.children]
        if node.sep.size:
            cand.append(self.a[node.sep].indices)
        cand = np.unique(np.concatenate(cand)) if cand else np.zeros(0, dtype=np.int64)
        node.boundary = cand[self._owner[cand] > node.index]

    def negatives(self, shift: float) -> int:
        """Number of eigenvalues of ``L - shift*I`` that are negative."""
        scale = max(1.0, float(np.abs(self.a.data).max(initial=0.0)), abs(shift))
        pos = np.full(self.n, -1, dtype=np.int64)
        neg = 0
        updates: dict[int, tuple[int, np.ndarray, np.ndarray]] = {}
        for node in self._postorder:
            kids = [updates.pop(c.index) for c in node.children]
            nvirt = sum(k for k, _, _ in kids)
            sep, bnd = node.sep, node.boundary
            m1 = nvirt + sep.size
            m = m1 + bnd.size
            front = np.zeros((m, m))
            cols = np.concatenate([sep, bnd])
            pos[cols] = np.arange(nvirt, m)
            if sep.size:
                rows = self.a[sep][:, cols].toarray()
                rows[:, : sep.size][np.diag_indices(sep.size)] -= shift
                front[nvirt:m1, nvirt:] = rows
                front[m1:, nvirt:m1] = rows[:, sep.size :].T
            off = 0
            for k, bvars, upd in kids:
                idx = np.concatenate([np.arange(off, off + k), pos[bvars]])
                front[np.ix_(idx, idx)] += upd
                off += k
            pos[cols] = -1
            lam, q = np.linalg.eigh(front[:m1, :m1])
            if bnd.size == 0 and node is self.root:
                if m1 and np.min(np.abs(lam)) < 1e-12 * scale:
                    raise FactorizationBreakdown("eigenvalue at the shift")
                neg += int(np.count_nonzero(lam < 0))
                continue
            good = np.abs(lam) >= self.delay_tol * scale
            neg += int(np.count_nonzero(lam[good] < 0))
            f12 = front[:m1, m1:]
            qg, qs = q[:, good], q[:, ~good]
            g12 = qg.T @ f12
            s12 = qs.T @ f12
            k = qs.shape[1]
            upd = np.empty((k + bnd.size, k + bnd.size))
            upd[:k, :k] = np.diag(lam[~good])
            upd[:k, k:] = s12
            upd[k:, :k] = s12.T
            upd[k:, k:] = front[m1:, m1:] - g12.T @ (g12 / lam[good][:, None])
            updates[node.index] = (k, bnd, upd)
        if updates:
            raise AssertionError("unconsumed update matrices")
        return neg


def _resolve_method(n: int, method: str) -> str:
    if method == "auto":
        return "dense" if n < SPARSE_INERTIA_MIN else "sparse"
    if method not in ("dense", "sparse"):
        raise ValueError(f"unknown method {method!r}")
    return method


def inertia_below(lap: sp.spmatrix, e: float, method: str = "auto", solver: InertiaSolver | None = None) -> int:
    """Number of eigenvalues strictly below ``e`` (raises on breakdown)."""
    n = lap.shape[0]
    if n == 0:
        return 0
    method = _resolve_method(n, method)
    if method == "dense":
        a = lap.toarray().astype(np.float64) if sp.issparse(lap) else np.array(lap, dtype=np.float64)
        a[np.diag_indices(n)] -= e
        return _negatives_dense(a)
    if solver is None:
        solver = InertiaSolver(lap)
    return solver.negatives(e)


def count_below(lap: sp.spmatrix, e: float, method: str = "auto", solver: InertiaSolver | None = None) -> int:
    """inertia_below with the deterministic retry sequence on breakdown."""
    try:
        return inertia_below(lap, e, method, solver)
    except FactorizationBreakdown:
        pass
    scale = 1.0 + abs(e)
    for off in RETRY_OFFSETS:
        try:
            return inertia_below(lap, e + off * scale, method, solver)
        except FactorizationBreakdown:
            continue
    raise FactorizationBreakdown(f"factorization failed at E = {e} after {len(RETRY_OFFSETS)} retries")


def make_solver(lap: sp.spmatrix, method: str = "auto") -> InertiaSolver | None:
    """Reusable sparse solver when ``method`` resolves to the sparse path."""
    if lap.shape[0] and _resolve_method(lap.shape[0], method) == "sparse":
        return InertiaSolver(lap)
    return None


@dataclass
class Multiplicity:
    energy: float
    count: int
    stable: bool
    widths: tuple[float, ...]
    counts: tuple[int, ...]


def default_delta(e: float) -> float:
    return 1e-8 * (1.0 + abs(e))


def multiplicity(lap: sp.spmatrix, e: float, delta: float | None = None, method: str = "auto") -> Multiplicity:
    """Eigenvalue count in (e - delta, e + delta), checked at delta/10 and 10*delta."""
    if delta is None:
        delta = default_delta(e)
    if delta <= 0:
        raise ValueError("delta must be positive")
    widths = (delta, delta / 10, delta * 10)
    solver = make_solver(lap, method)
    counts = tuple(count_below(lap, e + w, method, solver) - count_below(lap, e - w, method, solver) for w in widths)
    return Multiplicity(e, counts[0], len(set(counts)) == 1, widths, counts)


@dataclass
class SpectralSummary:
    n: int
    method: str
    eigenvalues: np.ndarray | None = None
    inertia_table: list[tuple[float, int]] = field(default_factory=list)
    multiplicities: dict[float, Multiplicity] = field(default_factory=dict)

    def eigenvalues_csv(self, meta: str = "") -> str:
        buf = io.StringIO()
        if meta:
            buf.write(f"# {meta}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "eigenvalue"])
        for i, x in enumerate(self.eigenvalues if self.eigenvalues is not None else []):
            w.writerow([i, f"{x:.12g}"])
        return buf.getvalue()

    def inertia_csv(self, meta: str = "") -> str:
        buf = io.StringIO()
        if meta:
            buf.write(f"# {meta}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["E", "countBelow"])
        for e, c in self.inertia_table:
            w.writerow([f"{e:.12g}", c])
        return buf.getvalue()


def summarize(
    lap: sp.spmatrix,
    grid=None,
    energies=(),
    dense_threshold: int = DEFAULT_DENSE_THRESHOLD,
) -> SpectralSummary:
    """Dense spectrum when small enough, otherwise an inertia table on ``grid``."""
    n = lap.shape[0]
    if n <= dense_threshold:
        eigs = eig_all(lap, dense_threshold)
        s = SpectralSummary(n, "dense", eigenvalues=eigs)
        if grid is not None:
            s.inertia_table = [(float(e), count_in_sorted(eigs, grid_point(e))) for e in grid]
    else:
        s = SpectralSummary(n, "inertia")
        if grid is not None:
            solver = make_solver(lap)
            s.inertia_table = [(float(e), count_below(lap, grid_point(float(e)), solver=solver)) for e in grid]
    for e in energies:
        s.multiplicities[float(e)] = multiplicity(lap, float(e))
    return s


# ---------------------------------------------------------------------------
# exact eigenspaces
# ---------------------------------------------------------------------------
#
# Sparse rows are dicts mapping a column to a nonzero QuadScalar.


@dataclass
class ExactNullBasis:
    energy: QuadScalar
    basis: list[dict[int, QuadScalar]]  # sparse vectors: index -> value
    n: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dense(self, i: int) -> list[QuadScalar]:
        zero = QuadScalar(self.energy.field, 0)
        v = [zero] * self.n
        for k, x in self.basis[i].items():
            v[k] = x
        return v

    def to_json(self) -> dict:
        return {
            "energy": self.energy.to_json(),
            "n": self.n,
            "basis": [{str(k): x.to_json() for k, x in sorted(v.items())} for v in self.basis],
        }




def _shifted_rows(lap: sp.spmatrix, energy: QuadScalar) -> list[dict[int, QuadScalar]]:
    """Rows of L - E as sparse dicts."""
    csr = sp.csr_matrix(lap)
    fld = energy.field
    rows = []
    for i in range(csr.shape[0]):
        lo, hi = csr.indptr[i], csr.indptr[i + 1]
        r = {int(j): QuadScalar(fld, int(v)) for j, v in zip(csr.indices[lo:hi], csr.data[lo:hi]) if v}
        r[i] = r.get(i, QuadScalar(fld, 0)) - energy
        rows.append({k: v for k, v in r.items() if v})
    return rows


def _eliminate(rows: list[dict[int, QuadScalar]], ncols: int):
    """Sparse Gaussian elimination over the field with Markowitz pivoting.

    Pivot rows are scaled to a unit pivot.  Returns the pivot sequence
    [(row dict, pivot column)] and the free columns.
    """
    active = {i: r for i, r in enumerate(rows) if r}
    cols: dict[int, set[int]] = {}
    for i, r in active.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    pivots = []
    while active:
        j = min((jj for jj in cols if cols[jj]), key=lambda jj: (len(cols[jj]), jj), default=None)
        if j is None:
            break
        i = min(cols[j], key=lambda ii: (len(active[ii]), ii))
        prow = active.pop(i)
        for jj in prow:
            cols[jj].discard(i)
        inv = prow[j].inverse()
        prow = {jj: v * inv for jj, v in prow.items()}
        for k in sorted(cols[j]):
            row = active[k]
            f = row.pop(j)
            for jj, v in prow.items():
                if jj == j:
                    continue
                t = row.get(jj)
                t = -(f * v) if t is None else t - f * v
                if t:
                    if jj not in row:
                        cols[jj].add(k)
                    row[jj] = t
                elif jj in row:
                    del row[jj]
                    cols[jj].discard(k)
            if not row:
                del active[k]
        cols[j] = set()
        pivots.append((prow, j))
    pivot_cols = {j for _, j in pivots}
    free = [j for j in range(ncols) if j not in pivot_cols]
    return pivots, free


def exact_nullspace(
    lap: sp.spmatrix,
    energy: QuadScalar | int,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
    field: str | None = None,
) -> ExactNullBasis:
    """Basis of ker(L - E) over the quadratic field containing E."""
    n = lap.shape[0]
    if n > exact_threshold:
        raise SizeLimitError(f"n = {n} exceeds the exact threshold {exact_threshold}")
    if not isinstance(energy, QuadScalar):
        energy = QuadScalar.rational(field or QSQRT5, energy)
    pivots, free = _eliminate(_shifted_rows(lap, energy), n)
    basis = [_back_substitute(pivots, f, energy.field) for f in free]
    return ExactNullBasis(energy, basis, n)


def _back_substitute(pivots, free_col: int, fld: str) -> dict[int, QuadScalar]:
    """Kernel vector with 1 at ``free_col`` and 0 at the other free columns."""
    val = {free_col: QuadScalar(fld, 1)}
    for prow, j in reversed(pivots):
        acc = None
        for jj, coef in prow.items():
            if jj != j and jj in val:
                term = coef * val[jj]
                acc = term if acc is None else acc + term
        if acc:
            val[j] = -acc
    return dict(sorted(val.items()))


def apply_shifted(lap: sp.spmatrix, vec: dict[int, QuadScalar], energy: QuadScalar) -> dict[int, QuadScalar]:
    """(L - E) v for a sparse exact vector, returned sparsely."""
    csr = sp.csr_matrix(lap)
    csc = csr.tocsc()
    out: dict[int, QuadScalar] = {}
    for j, x in vec.items():
        lo, hi = csc.indptr[j], csc.indptr[j + 1]
        for i, a in zip(csc.indices[lo:hi], csc.data[lo:hi]):
            i = int(i)
            out[i] = out[i] + x * int(a) if i in out else x * int(a)
        out[j] = out[j] - energy * x if j in out else -(energy * x)
    return {k: v for k, v in out.items() if v}


def verify_eigenfunction(lap: sp.spmatrix, psi, energy: QuadScalar | int) -> bool:
    """True iff psi is nonzero and (L - E) psi = 0 exactly."""
    if isinstance(psi, dict):
        vec = {int(k): v for k, v in psi.items()}
    else:
        if len(psi) != lap.shape[0]:
            raise ValueError("vector length does not match the matrix")
        vec = {i: v for i, v in enumerate(psi) if v}
    fld = _field_of(vec, energy)
    vec = {k: (v if isinstance(v, QuadScalar) else QuadScalar.rational(fld, v)) for k, v in vec.items() if v}
    if not vec:
        return False
    if not isinstance(energy, QuadScalar):
        energy = QuadScalar.rational(fld, energy)
    return not apply_shifted(lap, vec, energy)


def _field_of(vec, energy):
    if isinstance(energy, QuadScalar):
        return energy.field
    for v in vec.values():
        if isinstance(v, QuadScalar):
            return v.field
    return QSQRT5


def exact_rank(vectors: list[dict[int, QuadScalar]]) -> int:
    """Rank of sparse exact vectors over their quadratic field."""
    rows = [{k: x for k, x in v.items() if x} for v in vectors]
    ncols = 1 + max((k for v in rows for k in v), default=-1)
    pivots, _ = _eliminate(rows, ncols)
    return len(pivots)


def field_for_family(family: str) -> str:
    return QSQRT2 if family == "AmmannBeenker" else QSQRT5


__all__ = [
    "DEFAULT_DENSE_THRESHOLD",
    "DEFAULT_EXACT_THRESHOLD",
    "ExactNullBasis",
    "FactorizationBreakdown",
    "Multiplicity",
    "SizeLimitError",
    "SpectralSummary",
    "apply_shifted",
    "count_below",
    "count_in_sorted",
    "eig_all",
    "exact_nullspace",
    "exact_rank",
    "field_for_family",
    "grid_point",
    "InertiaSolver",
    "inertia_below",
    "make_solver",
    "multiplicity",
    "summarize",
    "verify_eigenfunction",
]
