from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import coords_and_edges, floyd_warshall
from villarceau.generators import grid, vg1, vg2
from villarceau.graph import (
    DiagGraph,
    DisconnectedGraphError,
    all_pairs,
    average_distance,
    bfs_distances,
    degree_multiset,
    diameter,
    distance_sum,
    sphere,
)


def test_bfs_c4_antipodal():
    g = vg1(1, 1)
    dist = bfs_distances(g, g.id_of((1, 0)))
    assert dist[g.id_of((1, 2))] == 2
    assert dist[g.id_of((1, 0))] == 0


def test_bfs_vg1_1_2_end_to_end():
    g = vg1(1, 2)
    assert bfs_distances(g, g.id_of((0, 1)))[g.id_of((4, 1))] == 4


def test_bfs_reports_unreachable_coordinate():
    g = DiagGraph.from_edges([(0, 0), (1, 1), (5, 5)], [((0, 0), (1, 1))])
    with pytest.raises(DisconnectedGraphError, match=r"\(5, 5\)"):
        bfs_distances(g, 0)


def test_all_pairs_c4_rows():
    d = all_pairs(vg1(1, 1))
    for row in d:
        assert sorted(row.tolist()) == [0, 1, 1, 2]


def test_all_pairs_small_sums():
    assert distance_sum(all_pairs(vg1(1, 2))) == 40
    d = all_pairs(grid(2, 2))
    off = d[np.triu_indices(4, 1)]
    assert set(off.tolist()) <= {1, 2} and off.sum() == 8


def test_sphere_examples():
    g = vg1(4, 5)
    v = g.id_of((1, 0))
    assert [g.coords[w] for w in sphere(g, v, 1)] == [(0, 1), (2, 1)]
    assert sphere(g, v, 0) == [v]
    g = vg1(2, 3)
    got = [g.coords[w] for w in sphere(g, g.id_of((1, 0)), 3)]
    assert got == [(0, 3), (2, 3), (4, 1), (4, 3)]


def test_sphere_beyond_eccentricity_is_empty():
    g = vg1(1, 1)
    assert sphere(g, 0, 7) == []


def test_diameter_examples():
    assert diameter(vg1(1, 2)) == 4
    assert diameter(vg1(1, 1)) == 2
    assert diameter(vg2(1, 3)) == 4
    assert diameter(grid(1, 5)) == 4


def test_degree_multiset_examples():
    assert set(degree_multiset(vg1(4, 5))) <= {2, 4}
    assert set(degree_multiset(vg2(4, 6))) <= {1, 2, 4}
    assert degree_multiset(vg2(1, 2)) == {1: 4, 4: 1}


def test_average_distance_examples():
    assert average_distance(grid(2, 2)) == Fraction(4, 3)
    assert average_distance(vg1(1, 1)) == Fraction(4, 3)
    assert average_distance(vg1(1, 2)) == Fraction(40, 21)


def test_average_distance_needs_two_vertices():
    with pytest.raises(ValueError, match="undefined average distance"):
        average_distance(grid(1, 1))


@pytest.mark.parametrize("family,m,n", [("vg1", 2, 3), ("vg2", 2, 4), ("grid", 3, 4), ("vg1", 3, 3)])
def test_all_pairs_matches_floyd_warshall(family, m, n):
    verts, edges = coords_and_edges(family, m, n)
    ref = floyd_warshall(verts, edges)
    g = {"vg1": vg1, "vg2": vg2, "grid": grid}[family](m, n)
    d = all_pairs(g)
    for (a, b), want in ref.items():
        assert d[g.id_of(a), g.id_of(b)] == want


small_instances = st.one_of(
    st.tuples(st.just("vg1"), st.integers(1, 3), st.integers(1, 6)).filter(lambda t: t[1] <= t[2]),
    st.tuples(st.just("vg2"), st.integers(1, 3), st.integers(2, 6)).filter(lambda t: t[1] < t[2]),
)


@settings(max_examples=25, deadline=None)
@given(small_instances)
def test_metric_axioms_and_parity(inst):
    family, m, n = inst
    g = (vg1 if family == "vg1" else vg2)(m, n)
    d = all_pairs(g).astype(int)
    assert (np.diag(d) == 0).all()
    assert (d == d.T).all()
    # triangle inequality over all triples
    assert (d[:, None, :] <= d[:, :, None] + d[None, :, :]).all()
    xs = np.array([c[0] for c in g.coords])
    ys = np.array([c[1] for c in g.coords])
    dx = np.abs(xs[:, None] - xs[None, :])
    dy = np.abs(ys[:, None] - ys[None, :])
    assert (d >= np.maximum(dx, dy)).all()
    assert ((d - dx) % 2 == 0).all() and ((d - dy) % 2 == 0).all()
    adjacent = d == 1
    for u, v in g.edges():
        assert adjacent[u, v]
        assert dx[u, v] == 1 and dy[u, v] == 1
    assert adjacent.sum() == 2 * g.edge_count


@settings(max_examples=15, deadline=None)
@given(small_instances, st.data())
def test_sphere_agrees_with_matrix(inst, data):
    family, m, n = inst
    g = (vg1 if family == "vg1" else vg2)(m, n)
    d = all_pairs(g)
    v = data.draw(st.integers(0, g.vertex_count - 1))
    for r in range(diameter(g, d) + 1):
        assert sphere(g, v, r) == [w for w in range(g.vertex_count) if d[v, w] == r]
        assert sphere(g, v, r, d) == sphere(g, v, r)


def test_average_distance_two_routes():
    for g in (vg1(2, 3), vg2(2, 5), grid(3, 4)):
        n = g.vertex_count
        via_rows = sum(sum(bfs_distances(g, v)) for v in range(n))
        assert via_rows % 2 == 0
        assert average_distance(g) == Fraction(via_rows, n * (n - 1))


def test_ids_are_lexicographic():
    g = vg1(2, 3)
    assert list(g.coords) == sorted(g.coords)
    assert all(g.coord_index[c] == i for i, c in enumerate(g.coords))
    for u, nb in enumerate(g.adjacency):
        assert list(nb) == sorted(nb) and u not in nb
        for v in nb:
            assert u in g.adjacency[v]


def test_matrix_is_read_only():
    d = all_pairs(vg1(1, 1))
    with pytest.raises(ValueError):
        d[0, 0] = 3
    assert d.dtype.itemsize >= 2
