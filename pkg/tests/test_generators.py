import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daqubo.generators import GenSpec, gen_pure_qubo, gen_qap, gen_qcpp, gen_selcol, generate
from daqubo.formats import dumps_native


@pytest.mark.parametrize("family", ["pure_qubo", "qcpp", "selcol", "qap"])
def test_same_spec_same_instance(family):
    spec = GenSpec(family, 12, density=0.3, seed=42)
    assert dumps_native(generate(spec)) == dumps_native(generate(spec))
    other = GenSpec(family, 12, density=0.3, seed=43)
    assert dumps_native(generate(spec)) != dumps_native(generate(other))


@pytest.mark.parametrize(
    "kw",
    [
        dict(family="tsp", n=3),
        dict(family="qcpp", n=0),
        dict(family="qcpp", n=3, density=1.5),
        dict(family="pure_qubo", n=3, coeff_low=5, coeff_high=1),
        dict(family="selcol", n=3, cluster_size_low=0),
        dict(family="selcol", n=3, cluster_size_low=4, cluster_size_high=2),
    ],
)
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        GenSpec(**kw)


def test_family_mismatch():
    with pytest.raises(ValueError):
        gen_qcpp(GenSpec("selcol", 4))


def test_pure_qubo_without_density_has_no_terms():
    m = gen_pure_qubo(GenSpec("pure_qubo", 50, density=0.0))
    assert m.nnz == 0 and not m.linear.any()


def test_pure_qubo_coefficients_in_range():
    m = gen_pure_qubo(GenSpec("pure_qubo", 80, density=0.5, coeff_low=-3, coeff_high=4, seed=1))
    vals = np.concatenate([m.vals, m.linear[m.linear != 0]])
    assert vals.min() >= -3 and vals.max() <= 4
    assert m.is_integral()


def test_pure_qubo_large_sizes_supported():
    m = gen_pure_qubo(GenSpec("pure_qubo", 3000, density=0.01, seed=3))
    assert m.n == 3000 and m.nnz > 0


def test_qcpp_complete_digraph():
    inst = gen_qcpp(GenSpec("qcpp", 3, density=1.0))
    assert len(inst.arcs) == 6


def test_qcpp_requires_two_vertices():
    with pytest.raises(ValueError):
        gen_qcpp(GenSpec("qcpp", 1))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**63), st.integers(2, 25), st.floats(0.0, 1.0))
def test_qcpp_repair_and_costs(seed, n, density):
    inst = gen_qcpp(GenSpec("qcpp", n, density=density, seed=seed))
    assert inst.degree_deficits() == []
    assert all(v in range(101) for v in inst.cost.values())
    consecutive = {(a, b) for a, (_, h) in enumerate(inst.arcs) for b, (t, _) in enumerate(inst.arcs) if h == t}
    assert set(inst.cost) == consecutive


def test_selcol_exact_cluster_sizes():
    inst = gen_selcol(GenSpec("selcol", 8, cluster_size_low=2, cluster_size_high=2, seed=5))
    assert [len(c) for c in inst.clusters] == [2, 2, 2, 2]
    assert inst.color_budget == 4


def test_selcol_edgeless_at_zero_density():
    inst = gen_selcol(GenSpec("selcol", 10, density=0.0))
    assert inst.edges == frozenset()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**63), st.integers(1, 40), st.integers(1, 4), st.integers(0, 4))
def test_selcol_clusters_partition(seed, n, low, extra):
    spec = GenSpec("selcol", n, density=0.3, cluster_size_low=low, cluster_size_high=low + extra, seed=seed)
    inst = gen_selcol(spec)
    flat = sorted(v for c in inst.clusters for v in c)
    assert flat == list(range(n))
    sizes = [len(c) for c in inst.clusters]
    if len(sizes) > 1:
        assert min(sizes) >= low


def test_qap_matrices_are_symmetric_with_zero_diagonal():
    inst = gen_qap(GenSpec("qap", 6, density=0.5, coeff_low=0, coeff_high=9, seed=2))
    for m in (inst.flow, inst.dist):
        assert np.array_equal(m, m.T) and not np.diag(m).any()
        assert m.min() >= 0 and m.max() <= 9


def within_three_sigma(hits, trials, p):
    sigma = math.sqrt(trials * p * (1 - p))
    return abs(hits - trials * p) <= 3 * sigma


@pytest.mark.parametrize("density", [0.1, 0.25, 0.5, 0.75])
def test_empirical_densities(density):
    n = 200
    qubo = gen_pure_qubo(GenSpec("pure_qubo", n, density=density, seed=11))
    pairs = n * (n - 1) // 2
    # coefficients can land on zero, which drops the pair; account for that 1/201 chance
    p_nonzero = density * 200 / 201
    assert within_three_sigma(qubo.nnz, pairs, p_nonzero)
    sel = gen_selcol(GenSpec("selcol", n, density=density, seed=12))
    assert within_three_sigma(len(sel.edges), pairs, density)
    m = 60
    dig = gen_qcpp(GenSpec("qcpp", m, density=density, seed=13))
    # at these densities no vertex needs a repair arc
    assert within_three_sigma(len(dig.arcs), m * (m - 1), density)
