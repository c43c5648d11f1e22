import numpy as np
import pytest

from extscalefree.graph import Graph


def test_from_edges_cleans():
    g = Graph.from_edges(4, [[0, 1], [1, 0], [2, 2], [3, 1], [0, 1]])
    assert g.m == 2
    np.testing.assert_array_equal(g.edges(), [[0, 1], [1, 3]])
    np.testing.assert_array_equal(g.degree(), [1, 2, 0, 1])
    np.testing.assert_array_equal(g.neighbors(1), [0, 3])


def test_symmetry_and_sorted_neighbours(rng):
    e = rng.integers(0, 30, size=(200, 2))
    g = Graph.from_edges(30, e)
    a = g.adjacency().toarray()
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 0)
    for i in range(30):
        nb = g.neighbors(i)
        assert np.all(np.diff(nb) > 0)


def test_out_of_range():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [[0, 2]])


def test_subgraph_relabels():
    g = Graph.from_edges(5, [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]])
    s = g.subgraph([4, 0, 2, 3])
    # nodes 0,2,3,4 -> 0,1,2,3
    np.testing.assert_array_equal(s.edges(), [[0, 3], [1, 2], [2, 3]])


def test_equality_and_edge_list():
    a = Graph.from_edges(3, [[0, 1], [1, 2]])
    b = Graph.from_edges(3, [[2, 1], [1, 0]])
    assert a == b and hash(a) == hash(b)
    assert a != Graph.from_edges(3, [[0, 1]])
    assert a.to_edge_list() == "0 1\n1 2\n"
