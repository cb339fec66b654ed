import numpy as np
import pytest

from tilingspectra.analysis import (
    ExactSpan,
    IDSCurve,
    boatstar_multiplicity_conjecture,
    boundary_split,
    catalog,
    classify_modes,
    convergence_csv,
    count_occurrences,
    detect_gaps,
    eightfold_star,
    find_spec,
    ids_curve,
    ids_jump,
    jump_convergence,
    mode_anchors,
    mode_pattern,
    patch_laplacian,
    persistent_gaps,
    place_ring_mode,
    placed_modes,
    resolve_template,
    support_reduce,
    theoretical_jump_bound,
    value_alphabet,
)
from tilingspectra.analysis import _plateaus
from tilingspectra.exactnum import QSQRT2, QSQRT5, QuadScalar
from tilingspectra.spectral import eig_all, exact_nullspace, verify_eigenfunction


def test_jump_bounds_exact():
    assert theoretical_jump_bound("BoatStar", 4) == QuadScalar(QSQRT5, 65, -29, 10)
    assert theoretical_jump_bound("Triangle", 2) == QuadScalar(QSQRT5, 65, -29, 20)
    assert theoretical_jump_bound("AmmannBeenker", 4) == QuadScalar(QSQRT2, 1270, -898)
    assert theoretical_jump_bound("AmmannBeenker", 6) == QuadScalar(QSQRT2, 116, -82)
    assert float(theoretical_jump_bound("BoatStar", 4)) == pytest.approx(0.01540286, abs=1e-8)
    with pytest.raises(KeyError):
        theoretical_jump_bound("Rhombus", 6)


def test_ids_curve_shape():
    _, _, lap = patch_laplacian("Triangle", 5)
    grid = np.linspace(-1, 8, 901)
    c = ids_curve(lap, grid, "Triangle", 5, marks=[2.0])
    assert np.all(np.diff(c.counts) >= 0)
    assert np.all(c.counts[grid < 0] == 0)
    assert c.k[-1] == 1.0
    assert (2.0, 15 / 1440) in c.jumps
    text = c.to_csv("family=Triangle level=5")
    assert text.splitlines()[:2] == ["# family=Triangle level=5", "E,k"]


def test_ids_curve_dense_and_sliced_agree():
    _, _, lap = patch_laplacian("Triangle", 4)
    grid = np.linspace(0, 8, 161)
    a = ids_curve(lap, grid)
    b = ids_curve(lap, grid, dense_threshold=10)
    assert np.array_equal(a.counts, b.counts)
    assert [round(x, 5) for x, _ in a.jumps] == [round(x, 5) for x, _ in b.jumps]


def test_ids_curve_rejects_unsorted_grid():
    _, _, lap = patch_laplacian("Triangle", 1)
    with pytest.raises(ValueError):
        ids_curve(lap, [1.0, 0.5])


def test_ids_jump_values():
    assert ids_jump("Triangle", 5, 4) == pytest.approx(10 / 1440)
    rows = jump_convergence("BoatStar", 4, 3, 2)
    assert [(r.level, r.multiplicity) for r in rows] == [(2, 1), (3, 5)]
    text = convergence_csv(rows, "meta")
    assert text.splitlines()[1] == "level,tiles,mult,jump,bound"


def test_detect_gaps_on_synthetic_curves():
    grid = np.linspace(0, 4, 41)

    def curve(level, edges):
        counts = np.searchsorted(np.array(edges), grid, side="left")
        return IDSCurve("X", level, len(edges), grid, counts, [], _plateaus(grid, counts))

    a = curve(1, [0.0, 0.5, 0.55, 0.6, 2.45, 2.5, 3.0])
    b = curve(2, [0.0, 0.3, 0.62, 0.65, 2.35, 2.9, 3.0])
    gaps = detect_gaps([a, b], min_width=0.5)
    assert [(round(g.lo, 3), round(g.hi, 3)) for g in gaps] == [(0.7, 2.3)]
    assert set(gaps[0].per_level) == {1, 2}


def test_persistent_gaps_are_eigenvalue_free():
    grid = np.linspace(0, 8, 801)
    gaps = persistent_gaps("Triangle", range(3, 6), grid, min_width=0.02, dense_threshold=600)
    assert len(gaps) >= 3
    for level in range(3, 6):
        eigs = eig_all(patch_laplacian("Triangle", level)[2])
        for gp in gaps:
            assert not np.any((eigs > gp.lo + 1e-9) & (eigs < gp.hi - 1e-9))


@pytest.mark.parametrize("level, total, interior", [(4, 6, 1), (5, 15, 10)])
def test_boundary_split(level, total, interior):
    _, g, lap = patch_laplacian("Triangle", level)
    s = boundary_split(lap, g, 2.0)
    assert (s.total, s.interior, s.stable) == (total, interior, True)
    assert s.boundary == total - interior


def test_boundary_split_counts_exact_interior_kernel():
    _, g, lap = patch_laplacian("Triangle", 5)
    basis = exact_nullspace(lap, QuadScalar(QSQRT5, 2))
    inner = [i for i in range(g.n) if not g.boundary[i]]
    # interior eigenvectors: kernel of (L - 2) restricted to interior columns
    sub = lap[:, inner].toarray().astype(float) - 2.0 * np.eye(g.n)[:, inner]
    assert len(inner) - np.linalg.matrix_rank(sub) == boundary_split(lap, g, 2.0).interior
    assert basis.dim == 15


def test_classify_modes_triangle():
    _, g, lap = patch_laplacian("Triangle", 5)
    r = classify_modes(exact_nullspace(lap, QuadScalar(QSQRT5, 2)), g, lap)
    assert (r.total_dim, r.interior_count, r.boundary_count) == (15, 10, 5)
    assert all(verify_eigenfunction(lap, v, 2) for v in r.representatives)
    interior = {len(v) for v, b in zip(r.representatives, r.boundary_flags) if not b}
    assert interior == {20}
    doc = r.to_json()
    assert doc["totalDim"] == 15 and len(doc["representatives"]) == 15


def test_ring_occurrences_boatstar():
    patch, _, lap = patch_laplacian("BoatStar", 3)
    spec = find_spec("BoatStar", "ring")
    copies = placed_modes(patch, spec, lap)
    assert len(copies) == 5
    assert count_occurrences(patch, mode_pattern(spec)) == 5
    anchors = mode_anchors(patch, spec, lap)
    v = place_ring_mode(patch, spec, anchors[0])
    assert verify_eigenfunction(lap, v, 4)
    assert value_alphabet(v) == {QuadScalar(QSQRT5, 1), QuadScalar(QSQRT5, -1)}


def test_eightfold_star_occurrences():
    patch, _, _ = patch_laplacian("AmmannBeenker", 2)
    star = eightfold_star()
    assert len(star) == 8
    n = count_occurrences(patch, star)
    assert n >= 1
    assert count_occurrences(star, star) == 1


def test_rhombus_filled_circle_template():
    t = resolve_template(find_spec("Rhombus", "filled circle"))
    assert t.support_size == 25
    assert set(t.values) <= {QuadScalar(QSQRT5, a, 0, c) for a in (1, -1) for c in (1, 2)}


def test_catalog_is_consistent():
    assert {s.family for s in catalog()} == {"BoatStar", "Triangle", "KiteDart", "Rhombus", "AmmannBeenker"}
    assert all(s.energy.field == (QSQRT2 if s.family == "AmmannBeenker" else QSQRT5) for s in catalog())
    with pytest.raises(KeyError):
        find_spec("Triangle", "spiral")


def test_multiplicity_conjecture():
    assert [boatstar_multiplicity_conjecture(n) for n in range(6)] == [0, 0, 1, 5, 50, 400]
    assert boatstar_multiplicity_conjecture(6) == 2965


def test_exact_span_and_support_reduce():
    q = lambda a: QuadScalar(QSQRT5, a)  # noqa: E731
    span = ExactSpan()
    assert span.add({0: q(1), 1: q(1)})
    assert span.add({1: q(1), 2: q(1)})
    assert not span.add({0: q(1), 2: q(-1)})
    assert len(span) == 2
    reduced = support_reduce([{0: q(1), 1: q(1), 2: q(1)}, {0: q(1), 1: q(1)}])
    assert sorted(len(v) for v in reduced) == [1, 2]
