"""Quadratic cycle partition on a digraph, one binary variable per arc (in arc-list order)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from ..qubo import EqualitySystem, QuboModel, as_state, dualize
from ._report import Infeasible, Violation

DEFAULT_LAMBDA = 1000.0


@dataclass(frozen=True)
class QcppInstance:
    """Digraph with interaction costs between consecutive arcs.

    ``cost`` maps an ordered pair of arc indices ``(a1, a2)`` to a
    non-negative value and may only contain pairs where ``a1`` ends where
    ``a2`` starts.
    """

    n_vertices: int
    arcs: tuple[tuple[int, int], ...]
    cost: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        arcs = tuple((int(t), int(h)) for t, h in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "cost", {(int(a), int(b)): float(v) for (a, b), v in self.cost.items()})
        if len(set(arcs)) != len(arcs):
            raise ValueError("duplicate arcs")
        for t, h in arcs:
            if t == h:
                raise ValueError(f"self-loop at vertex {t}")
            if not (0 <= t < self.n_vertices and 0 <= h < self.n_vertices):
                raise ValueError(f"arc ({t}, {h}) has a vertex out of range")
        m = len(arcs)
        for (a1, a2), v in self.cost.items():
            if not (0 <= a1 < m and 0 <= a2 < m):
                raise ValueError(f"cost key ({a1}, {a2}) refers to a missing arc")
            if arcs[a1][1] != arcs[a2][0]:
                raise ValueError(f"arcs {arcs[a1]} and {arcs[a2]} are not consecutive")
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"cost of ({a1}, {a2}) must be finite and non-negative")

    def __hash__(self):
        return hash((self.n_vertices, self.arcs))

    @cached_property
    def out_arcs(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for a, (t, _) in enumerate(self.arcs):
            out[t].append(a)
        return out

    @cached_property
    def in_arcs(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for a, (_, h) in enumerate(self.arcs):
            inc[h].append(a)
        return inc

    def degree_deficits(self) -> list[int]:
        """Vertices missing an outgoing or an incoming arc."""
        return [v for v in range(self.n_vertices) if not self.out_arcs[v] or not self.in_arcs[v]]


@dataclass(frozen=True)
class QcppSolution:
    selected: frozenset[int]
    cycles: tuple[tuple[int, ...], ...] = ()


def _selected(s) -> frozenset[int]:
    return s.selected if isinstance(s, QcppSolution) else frozenset(int(a) for a in s)


def qcpp_objective(inst: QcppInstance, s: QcppSolution | Iterable[int]) -> float:
    sel = _selected(s)
    if any(not 0 <= a < len(inst.arcs) for a in sel):
        raise ValueError("solution uses an arc that is not in the instance")
    return float(sum(v for (a1, a2), v in inst.cost.items() if a1 in sel and a2 in sel))


def degree_constraints(inst: QcppInstance) -> EqualitySystem:
    """Out-degree rows for every vertex, then in-degree rows."""
    system = EqualitySystem()
    for arcs in inst.out_arcs:
        system.add(arcs, 1.0)
    for arcs in inst.in_arcs:
        system.add(arcs, 1.0)
    return system


def encode_qcpp(inst: QcppInstance, lam: float = DEFAULT_LAMBDA) -> QuboModel:
    if not lam > 0:
        raise ValueError(f"penalty must be positive, got {lam}")
    keys = list(inst.cost)
    objective = QuboModel.from_arrays(
        len(inst.arcs),
        None,
        [a for a, _ in keys],
        [b for _, b in keys],
        [inst.cost[k] for k in keys],
    )
    return dualize(objective, degree_constraints(inst), lam)


def encode_state(inst: QcppInstance, s) -> np.ndarray:
    x = np.zeros(len(inst.arcs), dtype=np.int8)
    x[sorted(_selected(s))] = 1
    return x


def selection_violations(inst: QcppInstance, selected) -> list[Violation]:
    sel = _selected(selected)
    out = [Violation("out_degree", v, float(sum(a in sel for a in arcs))) for v, arcs in enumerate(inst.out_arcs)]
    inc = [Violation("in_degree", v, float(sum(a in sel for a in arcs))) for v, arcs in enumerate(inst.in_arcs)]
    return [viol for viol in out + inc if viol.value != 1]


def cycle_decomposition(inst: QcppInstance, selected) -> tuple[tuple[int, ...], ...]:
    """Vertex sequences of the cycles formed by a feasible arc selection."""
    succ = {inst.arcs[a][0]: inst.arcs[a][1] for a in _selected(selected)}
    seen: set[int] = set()
    cycles = []
    for start in range(inst.n_vertices):
        if start in seen:
            continue
        cyc = []
        v = start
        while v not in seen:
            seen.add(v)
            cyc.append(v)
            v = succ[v]
        cycles.append(tuple(cyc))
    return tuple(cycles)


def decode_qcpp(inst: QcppInstance, x) -> QcppSolution | Infeasible:
    x = as_state(x, len(inst.arcs))
    sel = frozenset(int(a) for a in np.flatnonzero(x))
    violations = selection_violations(inst, sel)
    if violations:
        return Infeasible(tuple(violations))
    return QcppSolution(sel, cycle_decomposition(inst, sel))
