import numpy as np
import pytest
import scipy.sparse as sp

from tilingspectra.adjacency import build_graph, laplacian
from tilingspectra.exactnum import QSQRT2, QSQRT5, QuadScalar
from tilingspectra.spectral import (
    FactorizationBreakdown,
    InertiaSolver,
    SizeLimitError,
    count_below,
    count_in_sorted,
    eig_all,
    exact_nullspace,
    exact_rank,
    inertia_below,
    multiplicity,
    summarize,
    verify_eigenfunction,
)
from tilingspectra.tiling import FAMILY_NAMES, generate, get_family


def _lap(family, level):
    return laplacian(build_graph(get_family(family), generate(family, level)))


def _path(n):
    return sp.diags([[-1] * (n - 1), [1] + [2] * (n - 2) + [1], [-1] * (n - 1)], [-1, 0, 1]).tocsr()


def test_path_graph_spectrum():
    n = 12
    want = np.sort(2 - 2 * np.cos(np.pi * np.arange(n) / n))
    assert np.allclose(eig_all(_path(n)), want)


@pytest.mark.parametrize("family, level", [("Triangle", 4), ("Rhombus", 4), ("AmmannBeenker", 2), ("KiteDart", 5)])
def test_sparse_and_dense_inertia_agree_with_eigenvalues(family, level):
    lap = _lap(family, level)
    eigs = eig_all(lap)
    solver = InertiaSolver(lap)
    rng = np.random.default_rng(5)
    for e in rng.uniform(-0.5, eigs[-1] + 0.5, 30):
        want = count_in_sorted(eigs, e)
        assert solver.negatives(e) == want
        assert inertia_below(lap, e, method="dense") == want


def test_inertia_raises_on_exact_eigenvalue():
    with pytest.raises(FactorizationBreakdown):
        inertia_below(_path(5), 0.0, method="dense")
    # the retry sequence steps off the eigenvalue
    assert count_below(_path(5), 0.0) in (0, 1)


def test_multiplicity_of_kernel_and_stability():
    lap = _lap("Triangle", 3)
    m = multiplicity(lap, 0.0)
    assert m.count == 1 and m.stable
    assert len(m.widths) == 3


def test_multiplicity_validates_delta():
    with pytest.raises(ValueError):
        multiplicity(_path(4), 1.0, delta=0.0)


def test_exact_nullspace_matches_dense_count():
    lap = _lap("Triangle", 4)
    for e in (2, 4):
        basis = exact_nullspace(lap, QuadScalar(QSQRT5, e))
        dense = multiplicity(lap, float(e), method="dense").count
        assert basis.dim == dense
        assert all(verify_eigenfunction(lap, v, basis.energy) for v in basis.basis)
        assert exact_rank(basis.basis) == basis.dim


def test_exact_nullspace_irrational_energy():
    lap = _lap("KiteDart", 5)
    e = QuadScalar(QSQRT5, 11, -1, 2)
    basis = exact_nullspace(lap, e)
    assert basis.dim == 5
    assert all(verify_eigenfunction(lap, v, e) for v in basis.basis)


def test_exact_nullspace_sqrt2_field():
    lap = _lap("AmmannBeenker", 1)
    basis = exact_nullspace(lap, QuadScalar(QSQRT2, 4))
    assert basis.dim == 3
    assert basis.dense(0)[0].field == QSQRT2


def test_size_limits():
    lap = _lap("Triangle", 3)
    with pytest.raises(SizeLimitError):
        exact_nullspace(lap, 2, exact_threshold=100)
    with pytest.raises(SizeLimitError):
        eig_all(lap, dense_threshold=100)


def test_verify_eigenfunction_rejects():
    lap = _path(4)
    assert not verify_eigenfunction(lap, {0: QuadScalar(QSQRT5, 1)}, 1)
    assert not verify_eigenfunction(lap, {}, 1)
    assert verify_eigenfunction(lap, [1, 1, 1, 1], 0)
    with pytest.raises(ValueError):
        verify_eigenfunction(lap, [1, 1], 0)


def test_summarize_switches_to_inertia():
    lap = _lap("Triangle", 3)
    grid = np.linspace(0, 8, 9)
    dense = summarize(lap, grid)
    sliced = summarize(lap, grid, dense_threshold=10)
    assert dense.method == "dense" and sliced.method == "inertia"
    assert dense.inertia_table == sliced.inertia_table
    assert dense.inertia_table[-1][1] == lap.shape[0]
    assert dense.eigenvalues_csv("meta").startswith("# meta\nindex,eigenvalue\n")


@pytest.mark.parametrize("family", FAMILY_NAMES)
def test_spectrum_bounds(family):
    lap = _lap(family, 2)
    eigs = eig_all(lap)
    assert abs(eigs[0]) < 1e-9
    assert eigs[-1] <= 2 * lap.diagonal().max() + 1e-9


def test_kite_dart_top_eigenvalue():
    eigs = eig_all(_lap("KiteDart", 5))
    assert abs(eigs[-1] - float(QuadScalar(QSQRT5, 11, 1, 2))) < 1e-6
