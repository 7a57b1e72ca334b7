from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cantorlab import (
    UNREACHABLE,
    GraphError,
    PreconditionError,
    VertexSet,
    ball,
    boundary,
    build_graph,
    diameter,
    distance,
    doubling_constant,
    iso_constant,
)
from cantorlab.generators import cycle, grid, path, torus, tree_ball
from cantorlab.graph import growth_profile


def test_single_edge_degree_bound():
    assert build_graph(2, [(0, 1)]).degree_bound == 1


def test_path_degree_bound():
    assert build_graph(4, [(0, 1), (1, 2), (2, 3)]).degree_bound == 2


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(-1, 1)]])
def test_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        build_graph(3, edges)


def test_duplicate_edges_merge_and_lists_sorted():
    g = build_graph(3, [(2, 0), (0, 2), (1, 0)])
    assert g.num_edges == 2
    assert g.adjacency == ((1, 2), (0,), (0,))


def test_degree_overflow():
    with pytest.raises(GraphError, match="degree"):
        build_graph(4, [(0, 1), (0, 2), (0, 3)], max_degree=2)


def test_ball_on_c5():
    b = ball(cycle(5), 0, 1)
    assert sorted(b.members.tolist()) == [0, 1, 4]
    assert b.members[0] == 0 and b.subgraph.num_edges == 2
    assert b.subgraph.degrees.tolist() == [2, 1, 1]


def test_zero_radius_ball():
    b = ball(grid(3), 4, 0)
    assert b.members.tolist() == [4] and b.subgraph.num_edges == 0


def test_ball_keeps_all_induced_edges():
    b = ball(cycle(7), 0, 3)
    assert b.subgraph.n == 7 and b.subgraph.num_edges == 7


def test_distances():
    assert distance(path(3), 0, 2) == 2
    assert distance(grid(4), 0, 15) == 6
    g = build_graph(3, [(0, 1)])
    assert distance(g, 0, 2) is UNREACHABLE
    assert diameter(g) is UNREACHABLE


def test_unreachable_refuses_arithmetic():
    assert UNREACHABLE > 10 ** 9
    with pytest.raises(TypeError):
        UNREACHABLE + 1


def test_boundary_examples():
    p4 = path(4)
    assert boundary(p4, VertexSet.full(4)) == set()
    assert boundary(p4, [0, 1]) == {1}
    assert boundary(cycle(6), [2, 3, 4]) == {2, 4}


def test_iso_constant_examples():
    assert iso_constant(path(4), VertexSet.full(4)) == 0
    assert iso_constant(path(4), [0, 1]) == Fraction(1, 2)
    assert iso_constant(cycle(8), [0, 1, 2, 3]) == Fraction(1, 2)
    assert iso_constant(cycle(8), [5]) == 1
    with pytest.raises(PreconditionError):
        iso_constant(path(4), [])


def test_doubling_constant_examples():
    assert doubling_constant(cycle(8), 2) == 2
    assert doubling_constant(build_graph(1, [])) == 1
    assert doubling_constant(tree_ball(3, 6), 3) >= 4


@pytest.mark.parametrize("n", [8, 12, 16, 20])
def test_cycle_doubling_is_two(n):
    assert doubling_constant(cycle(n), n // 4) == 2


@pytest.mark.parametrize("n", [8, 12, 16])
def test_torus_doubling_at_most_four(n):
    assert doubling_constant(torus(n), n // 4) <= 4


@st.composite
def small_graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=2 * n)) if pairs else []
    return build_graph(n, edges)


@given(small_graphs(), st.data())
@settings(max_examples=60, deadline=None)
def test_boundary_and_growth_properties(g, data):
    mask = np.array(data.draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n)))
    h = VertexSet(mask)
    bd = boundary(g, h)
    assert bd <= h
    for v in bd:
        assert any(not mask[u] for u in g.neighbors(v))
    for v in set(h) - set(bd):
        assert all(mask[u] for u in g.neighbors(v))
    prof = growth_profile(g, 4)
    assert (prof[:, 0] == 1).all()
    assert (np.diff(prof, axis=1) >= 0).all()
    assert (prof[:, 1:] <= prof[:, :-1] * (1 + g.degree_bound)).all()
    x = data.draw(st.integers(0, g.n - 1))
    for s in range(3):
        assert ball(g, x, s).vertices <= ball(g, x, s + 1).vertices


def test_relabel_preserves_edges():
    g = grid(3)
    perm = np.array([8, 7, 6, 5, 4, 3, 2, 1, 0])
    h = g.relabel(perm)
    assert {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges()} == set(h.edges())
