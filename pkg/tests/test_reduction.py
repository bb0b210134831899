import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import two_squares
from daqubo.generators import GenSpec, gen_selcol
from daqubo.problems import SelColInstance, check_feasible
from daqubo.reduction import greedy_color, reduce, select_min_external


def test_select_ties_go_to_lowest_index():
    tri = SelColInstance(3, frozenset({(0, 1), (1, 2), (0, 2)}), ((0,), (1, 2)))
    assert select_min_external(tri) == (0, 1)


def test_select_on_edgeless_graph():
    inst = SelColInstance(5, frozenset(), ((3, 1), (4, 0, 2)))
    assert select_min_external(inst) == (1, 0)


def test_select_prefers_fewer_external_edges():
    # vertex 1 touches the other cluster twice, vertex 2 not at all
    inst = SelColInstance(4, frozenset({(1, 0), (1, 3), (0, 3)}), ((1, 2), (0, 3)))
    assert select_min_external(inst)[0] == 2


def test_select_on_two_squares():
    # every vertex has two external edges, so each cluster keeps its outer-square vertex
    assert select_min_external(two_squares()) == (0, 1, 2, 3)


@pytest.mark.parametrize(
    "vertices, edges, count",
    [
        ([0, 1, 2, 3], [], 1),
        ([0, 1, 2], [(0, 1), (1, 2)], 2),
        ([0, 1, 2, 3], [(i, j) for i in range(4) for j in range(i + 1, 4)], 4),
    ],
)
def test_greedy_color_counts(vertices, edges, count):
    coloring, c = greedy_color(vertices, edges)
    assert c == count
    assert all(coloring[i] != coloring[j] for i, j in edges)


def test_greedy_color_trace_on_path():
    # the middle vertex has the highest degree so it is colored first
    coloring, _ = greedy_color([0, 1, 2], [(0, 1), (1, 2)])
    assert coloring == {1: 0, 0: 1, 2: 1}


def test_greedy_ignores_edges_outside_selection():
    coloring, c = greedy_color([0, 2], [(0, 1), (1, 2), (0, 2)])
    assert c == 2 and set(coloring) == {0, 2}


def test_reduce_two_squares():
    reduced, rep = reduce(two_squares())
    assert rep.greedy_colors == 2 == reduced.color_budget
    assert rep.vars_before == 36 and rep.vars_after == 18
    assert rep.pct_reduction == 50.0
    assert check_feasible(reduced, rep.warm_solution) == (True, [])
    assert reduced.edges == two_squares().edges and reduced.clusters == two_squares().clusters


def test_reduce_singleton():
    reduced, rep = reduce(SelColInstance(1, frozenset(), ((0,),)))
    assert reduced.color_budget == 1 and rep.vars_after == 2


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.0, 1.0), st.integers(4, 30))
def test_reduction_invariants(seed, density, n):
    inst = gen_selcol(GenSpec("selcol", n, density=density, cluster_size_low=1, cluster_size_high=4, seed=seed))
    reduced, rep = reduce(inst)
    assert 1 <= rep.greedy_colors <= inst.n_clusters
    assert rep.vars_after <= rep.vars_before
    assert len(rep.selection) == inst.n_clusters
    assert all(v in cl for v, cl in zip(rep.selection, inst.clusters))
    ok, violations = check_feasible(reduced, rep.warm_solution)
    assert ok, violations
    assert rep.warm_solution.colors_used == rep.greedy_colors
