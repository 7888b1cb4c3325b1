import pytest

from oracles import coords_and_edges
from villarceau.generators import (
    Family,
    GridSpec,
    InvalidGridSpec,
    build,
    classify_lines,
    grid,
    is_vertex,
    vertex_coords,
    vg1,
    vg2,
)
from villarceau.graph import all_pairs, degree_multiset, diameter


def test_vg1_counts_and_c4():
    g = vg1(4, 5)
    assert (g.vertex_count, g.edge_count) == (49, 80)
    c4 = vg1(1, 1)
    assert c4.vertex_count == 4 and all(c4.degree(v) == 2 for v in range(4))


def test_vg1_1_2_vertex_set():
    g = vg1(1, 2)
    assert set(g.coords) == {(0, 1), (2, 1), (4, 1), (1, 0), (3, 0), (1, 2), (3, 2)}
    assert g.edge_count == 8


def test_vg2_examples():
    g = vg2(4, 6)
    assert (g.vertex_count, g.edge_count) == (50, 80)
    star = vg2(1, 2)
    assert (star.vertex_count, star.edge_count) == (5, 4)
    assert degree_multiset(star) == {1: 4, 4: 1}
    g = vg2(1, 3)
    assert (g.vertex_count, g.edge_count) == (8, 8)


def test_grid_examples():
    c4 = grid(2, 2)
    assert c4.vertex_count == 4 and c4.edge_count == 4
    g = grid(3, 4)
    assert (g.vertex_count, g.edge_count) == (12, 17)
    p5 = grid(1, 5)
    assert p5.edge_count == 4 and diameter(p5) == 4


@pytest.mark.parametrize(
    "family,m,n,message",
    [("vg1", 2, 1, "m <= n"), ("vg2", 3, 3, "m < n"), ("grid", 0, 3, "m >= 1"), ("vg1", 1, 0, "n >= 1")],
)
def test_invalid_specs(family, m, n, message):
    with pytest.raises(InvalidGridSpec, match=message):
        GridSpec(Family(family), m, n)
    with pytest.raises(InvalidGridSpec):
        {"vg1": vg1, "vg2": vg2, "grid": grid}[family](m, n)


def test_vg1_square_allowed():
    assert vg1(3, 3).vertex_count == 2 * 9 + 6


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("n", range(1, 8))
def test_count_formulas_sweep(m, n):
    if m <= n:
        g = vg1(m, n)
        assert (g.vertex_count, g.edge_count) == (2 * m * n + m + n, 4 * m * n)
        assert set(degree_multiset(g)) <= {2, 4}
        assert diameter(g) == 2 * n
    if m < n:
        g = vg2(m, n)
        assert (g.vertex_count, g.edge_count) == (2 * m * n - m + n, 4 * m * (n - 1))
        assert set(degree_multiset(g)) <= {1, 2, 4}
    g = grid(m, n)
    assert (g.vertex_count, g.edge_count) == (m * n, 2 * m * n - m - n)
    if m >= 2 and n >= 2:
        assert set(degree_multiset(g)) <= {2, 3, 4}
    all_pairs(g)  # connected, or BFS raises


@pytest.mark.parametrize("family,m,n", [("vg1", 2, 4), ("vg2", 3, 5), ("grid", 3, 3)])
def test_matches_direct_expansion(family, m, n):
    verts, edges = coords_and_edges(family, m, n)
    g = build(GridSpec(Family(family), m, n))
    assert set(g.coords) == verts
    assert {frozenset((g.coords[u], g.coords[v])) for u, v in g.edges()} == edges


def test_generation_is_deterministic():
    a, b = vg2(3, 5), vg2(3, 5)
    assert a.coords == b.coords and a.adjacency == b.adjacency


def test_is_vertex_examples():
    spec = GridSpec(Family.VG1, 4, 5)
    assert is_vertex(spec, (1, 0))
    assert not is_vertex(spec, (0, 0))
    assert is_vertex(GridSpec(Family.VG1, 4, 20), (40, 7))


@pytest.mark.parametrize("spec", [GridSpec(Family.VG1, 2, 3), GridSpec(Family.VG2, 2, 4), GridSpec(Family.GRID, 3, 2)])
def test_is_vertex_agrees_with_generator(spec):
    verts = set(vertex_coords(spec))
    for x in range(-2, 2 * spec.n + 3):
        for y in range(-2, 2 * spec.m + 3):
            assert is_vertex(spec, (x, y)) == ((x, y) in verts)


def test_classify_lines():
    spec = GridSpec(Family.VG1, 4, 5)
    g = build(spec)
    lines = classify_lines(g, spec)
    assert lines[(1, 0)].boundary
    assert not lines[(3, 2)].boundary
    assert len({lc.obtuse for lc in lines.values()}) == spec.m + spec.n
    assert lines[(1, 0)].obtuse == lines[(0, 1)].obtuse
    assert lines[(1, 0)].acute != lines[(0, 1)].acute
    # two vertices on one acute line differ by (k, k)
    for (x, y), lc in lines.items():
        assert lc.acute == x - y and lc.obtuse == x + y


def test_classify_lines_rejects_grid():
    spec = GridSpec(Family.GRID, 2, 2)
    with pytest.raises(ValueError):
        classify_lines(build(spec), spec)
