import networkx as nx
import numpy as np
import pytest

from tilingspectra.adjacency import build_graph, export_edgelist, export_matrix_market, laplacian
from tilingspectra.tiling import FAMILY_NAMES, generate, get_family


def _graph(family, level):
    return build_graph(get_family(family), generate(family, level))


def test_triangle_star_is_a_ten_cycle():
    g = _graph("Triangle", 0)
    assert g.n == 10
    assert len(g.edges) == 10
    assert g.degree.tolist() == [2] * 10
    assert g.boundary.all()


def test_ammann_beenker_star_is_an_eight_cycle():
    g = _graph("AmmannBeenker", 0)
    assert sorted(g.degree.tolist()) == [2] * 8
    assert nx.is_isomorphic(nx.Graph(g.edges.tolist()), nx.cycle_graph(8))


@pytest.mark.parametrize("family", FAMILY_NAMES)
def test_laplacian_properties(family):
    g = _graph(family, 3)
    lap = laplacian(g)
    assert (lap != lap.T).nnz == 0
    assert np.all(np.asarray(lap.sum(axis=1)).ravel() == 0)
    assert np.array_equal(lap.diagonal(), g.degree)
    assert g.partial_overlaps == 0
    # polygons with at most six sides have at most six neighbors
    assert g.degree.max() <= max(len(p.vertices) for p in get_family(family).protos)


@pytest.mark.parametrize("family", FAMILY_NAMES)
def test_patch_graph_is_connected(family):
    g = _graph(family, 2)
    assert nx.is_connected(nx.Graph(g.edges.tolist()))


def test_boundary_distance():
    g = _graph("Triangle", 4)
    assert np.all((g.dist_to_boundary == 0) == g.boundary)
    assert g.dist_to_boundary.max() >= 3
    nb = g.neighbors()
    for u in range(g.n):
        assert min(g.dist_to_boundary[v] for v in nb[u]) <= g.dist_to_boundary[u] + 1


def test_edges_are_sorted_pairs():
    g = _graph("KiteDart", 3)
    assert np.all(g.edges[:, 0] < g.edges[:, 1])
    assert g.edges.tolist() == sorted(g.edges.tolist())


def test_exports():
    g = _graph("Triangle", 1)
    lines = export_edgelist(g).splitlines()
    assert lines[0] == f"# n {g.n}" and len(lines) == 2 + len(g.edges)
    mm = export_matrix_market(g).splitlines()
    assert mm[0].startswith("%%MatrixMarket matrix coordinate integer symmetric")
    assert int(mm[1].split()[2]) == g.n + len(g.edges)
