import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import two_squares, qap2, qcpp3
from daqubo.generators import GenSpec, gen_qap, gen_qcpp, gen_selcol
from daqubo.problems import (
    Infeasible,
    QapAssignment,
    QapInstance,
    QcppInstance,
    QcppSolution,
    SelColInstance,
    check_feasible,
    decode,
    decode_qap,
    decode_qcpp,
    decode_selcol,
    default_lambda,
    encode,
    encode_qap,
    encode_qcpp,
    encode_selcol,
    encode_solution,
    objective,
    qap_objective,
    qcpp_objective,
)
from daqubo.problems import qap as qap_mod
from daqubo.problems import qcpp as qcpp_mod
from daqubo.problems import selcol as selcol_mod
from daqubo.qubo import energy

# arc indices of the two 3-cycles in the fixture
CYCLE_012 = frozenset({0, 3, 4})  # 0->1, 1->2, 2->0
CYCLE_021 = frozenset({1, 5, 2})  # 0->2, 2->1, 1->0


# -- QAP ---------------------------------------------------------------------


def test_qap_objective_examples():
    inst = qap2()
    assert qap_objective(inst, QapAssignment((0, 1))) == 6.0
    assert qap_objective(inst, QapAssignment((1, 0))) == 6.0
    zero = QapInstance(np.zeros((2, 2)), inst.dist)
    assert qap_objective(zero, (1, 0)) == 0.0
    with pytest.raises(ValueError):
        qap_objective(inst, (0, 1, 2))


def test_qap_instance_validation():
    with pytest.raises(ValueError):
        QapInstance(np.zeros((2, 2)), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        QapInstance(np.array([[0, np.inf], [0, 0]]), np.zeros((2, 2)))


def test_qap_encoding_examples():
    inst = qap2()
    model = encode_qap(inst, 100)
    assert energy(model, qap_mod.encode_state(inst, (0, 1))) == 6.0
    assert energy(model, np.zeros(4)) == 2 * 2 * 100
    assert qap_mod.DEFAULT_LAMBDA == 16000
    with pytest.raises(ValueError):
        encode_qap(inst, 0)


def test_qap_decoding():
    inst = qap2()
    assert decode_qap(inst, [1, 0, 0, 1]) == QapAssignment((0, 1))
    bad = decode_qap(inst, np.zeros(4))
    assert isinstance(bad, Infeasible) and len(bad) == 4
    # both facilities on location 0: location 0 is over-full, location 1 empty
    dup = decode_qap(inst, [1, 0, 1, 0])
    assert isinstance(dup, Infeasible) and dup.kinds() == {"location"}
    assert {v.index for v in dup.violations} == {0, 1}


# -- QCPP --------------------------------------------------------------------


def test_qcpp_objective_examples():
    inst = qcpp3()
    assert qcpp_objective(inst, QcppSolution(CYCLE_012)) == 3.0
    assert qcpp_objective(inst, CYCLE_021) == 3.0
    assert qcpp_objective(QcppInstance(3, inst.arcs), CYCLE_012) == 0.0
    with pytest.raises(ValueError):
        qcpp_objective(inst, {9})


def test_qcpp_instance_validation():
    with pytest.raises(ValueError):
        QcppInstance(2, ((0, 0),))
    with pytest.raises(ValueError):
        QcppInstance(2, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        QcppInstance(3, ((0, 1), (2, 0)), {(0, 1): 1.0})
    with pytest.raises(ValueError):
        QcppInstance(2, ((0, 1), (1, 0)), {(0, 1): -1.0})


def test_qcpp_encoding_examples():
    inst = qcpp3()
    model = encode_qcpp(inst, 1000)
    assert energy(model, qcpp_mod.encode_state(inst, CYCLE_012)) == 3.0
    assert energy(model, np.zeros(6)) == 2 * 3 * 1000
    assert qcpp_mod.DEFAULT_LAMBDA == 1000


def test_qcpp_decoding():
    inst = qcpp3()
    sol = decode_qcpp(inst, qcpp_mod.encode_state(inst, CYCLE_012))
    assert sol.selected == CYCLE_012 and sol.cycles == ((0, 1, 2),)
    everything = decode_qcpp(inst, np.ones(6))
    assert isinstance(everything, Infeasible)
    assert {(v.kind, v.value) for v in everything.violations} == {("out_degree", 2.0), ("in_degree", 2.0)}
    assert len(decode_qcpp(inst, np.zeros(6))) == 6


def test_two_disjoint_two_cycles_are_feasible():
    arcs = ((0, 1), (1, 0), (2, 3), (3, 2), (1, 2))
    inst = QcppInstance(4, arcs)
    ok, violations = check_feasible(inst, QcppSolution(frozenset({0, 1, 2, 3})))
    assert ok and violations == []
    sol = decode_qcpp(inst, [1, 1, 1, 1, 0])
    assert sol.cycles == ((0, 1), (2, 3))


# -- Sel-Col -----------------------------------------------------------------


def test_selcol_instance_validation():
    with pytest.raises(ValueError):
        SelColInstance(3, frozenset(), ((0, 1),))
    with pytest.raises(ValueError):
        SelColInstance(3, frozenset(), ((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        SelColInstance(2, frozenset({(0, 0)}), ((0,), (1,)))
    assert SelColInstance(2, frozenset(), ((0,), (1,))).color_budget == 2


def test_selcol_variable_layout():
    inst = two_squares().with_budget(2)
    s = selcol_mod.make_solution((0, 5, 2, 7), {0: 0, 5: 0, 2: 0, 7: 1})
    x = selcol_mod.encode_state(inst, s)
    assert x.size == 8 * 2 + 2
    # x_{v,k} at 2v+k, then y_0, y_1
    assert np.flatnonzero(x).tolist() == [0, 4, 10, 15, 16, 17]


def test_selcol_two_squares_optimum_energy():
    inst = two_squares().with_budget(2)
    lam = inst.n_clusters + 1
    s = selcol_mod.make_solution((0, 5, 2, 7), dict.fromkeys((0, 5, 2, 7), 0))
    x = selcol_mod.encode_state(inst, s)
    assert x[16:].tolist() == [1, 0]
    model = encode_selcol(inst, lam)
    assert energy(model, x) == 1.0
    assert energy(model, np.zeros(inst.n_variables)) == lam * inst.n_clusters
    back = decode_selcol(inst, x)
    assert set(back.selection) == {0, 5, 2, 7} and back.colors_used == 1 and not back.objective_mismatch


def test_selcol_alternating_coloring_of_outer_square():
    inst = two_squares().with_budget(2)
    s = selcol_mod.make_solution((0, 1, 2, 3), {0: 0, 1: 1, 2: 0, 3: 1})
    ok, _ = check_feasible(inst, s)
    assert ok and s.colors_used == 2
    back = decode_selcol(inst, selcol_mod.encode_state(inst, s))
    assert back.colors_used == 2 and back.y_sum == 2


def test_selcol_two_picks_in_one_cluster():
    inst = two_squares().with_budget(2)
    x = np.zeros(inst.n_variables, np.int8)
    for v in (0, 4, 1, 2, 3):
        x[v * 2] = 1
    bad = decode_selcol(inst, x)
    assert isinstance(bad, Infeasible)
    assert ("cluster", 0) in {(v.kind, v.index) for v in bad.violations}


def test_selcol_spurious_y_bit_is_flagged():
    inst = two_squares().with_budget(2)
    s = selcol_mod.make_solution((0, 5, 2, 7), dict.fromkeys((0, 5, 2, 7), 0))
    back = decode_selcol(inst, selcol_mod.encode_state(inst, s, y=(1, 1)))
    assert back.colors_used == 1 and back.y_sum == 2 and back.objective_mismatch


def test_selcol_default_lambda_is_five_times_budget():
    inst = two_squares().with_budget(3)
    assert default_lambda(inst) == 15.0
    assert encode_selcol(inst) == encode_selcol(inst, 15.0)


def test_check_feasible_on_raw_states():
    ok, violations = check_feasible(qap2(), np.zeros(4, np.int8))
    assert not ok and len(violations) == 4
    ok, _ = check_feasible(qap2(), [0, 1, 1, 0])
    assert ok


# -- cross-family properties -------------------------------------------------


def small_instances():
    for seed in range(12):
        yield gen_qap(GenSpec("qap", 3, density=0.7, coeff_low=0, coeff_high=9, seed=seed))
        yield gen_qcpp(GenSpec("qcpp", 4, density=0.5, seed=seed))
        yield gen_selcol(GenSpec("selcol", 5, density=0.4, cluster_size_low=2, cluster_size_high=3, seed=seed)).with_budget(2)


def every_state(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8)


@pytest.mark.parametrize("inst", list(small_instances()), ids=lambda i: type(i).__name__)
def test_energy_matches_objective_and_penalises_infeasible(inst):
    lam = 7.0
    model = encode(inst, lam)
    assert model.n <= 12
    for x in every_state(model.n):
        e = energy(model, x)
        sol = decode(inst, x)
        ok, _ = check_feasible(inst, x)
        assert ok == (not isinstance(sol, Infeasible))
        if ok:
            if isinstance(inst, SelColInstance):
                c = inst.color_budget
                y = x[inst.n_vertices * c :]
                if all(y[k] for k in sol.coloring.values()):
                    assert e == sol.y_sum
                else:
                    assert e >= sol.y_sum + lam
            else:
                assert e == objective(inst, sol)
            assert np.array_equal(encode_solution(inst, sol), x) or isinstance(inst, SelColInstance)
        elif not isinstance(inst, SelColInstance):
            # the objective part is evaluated with the penalty switched off
            assert e >= energy(encode(inst, 1e-12), x) + lam - 1e-6


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_decoded_solutions_pass_the_checker(seed):
    inst = gen_qcpp(GenSpec("qcpp", 4, density=0.6, seed=seed))
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, len(inst.arcs))
    sol = decode(inst, x)
    if not isinstance(sol, Infeasible):
        assert check_feasible(inst, sol) == (True, [])
