"""Selective graph coloring.

With ``c = color_budget`` the encoded model has ``n * c + c`` variables:
``x[i*c + k]`` (vertex ``i`` selected with color ``k``) followed by
``y[k]`` at ``n*c + k`` (color ``k`` in use).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from ..qubo import EqualitySystem, QuboModel, as_state, dualize
from ._report import Infeasible, Violation


def _norm_edge(i, j):
    i, j = int(i), int(j)
    if i == j:
        raise ValueError(f"self-loop at vertex {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class SelColInstance:
    """Graph, vertex clusters and the number of color indices the model may use.

    A ``color_budget`` of 0 is replaced by the cluster count.
    """

    n_vertices: int
    edges: frozenset[tuple[int, int]]
    clusters: tuple[tuple[int, ...], ...]
    color_budget: int = 0

    def __post_init__(self):
        edges = frozenset(_norm_edge(i, j) for i, j in self.edges)
        clusters = tuple(tuple(int(v) for v in c) for c in self.clusters)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "clusters", clusters)
        if self.color_budget == 0:
            object.__setattr__(self, "color_budget", len(clusters))
        if any(not c for c in clusters):
            raise ValueError("clusters must be non-empty")
        members = sorted(v for c in clusters for v in c)
        if members != list(range(self.n_vertices)):
            raise ValueError("clusters must partition the vertex set")
        if any(j >= self.n_vertices for _, j in edges) or any(i < 0 for i, _ in edges):
            raise ValueError("edge endpoint out of range")
        if self.color_budget < 1:
            raise ValueError("color_budget must be at least 1")

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    @property
    def n_variables(self) -> int:
        return self.n_vertices * self.color_budget + self.color_budget

    @cached_property
    def neighbors(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    @cached_property
    def cluster_of(self) -> list[int]:
        owner = [0] * self.n_vertices
        for p, cluster in enumerate(self.clusters):
            for v in cluster:
                owner[v] = p
        return owner

    def with_budget(self, c: int) -> SelColInstance:
        return SelColInstance(self.n_vertices, self.edges, self.clusters, c)


@dataclass(frozen=True)
class SelColSolution:
    """One vertex per cluster (in cluster order) and a color for each.

    ``y_sum`` is the model objective read from the ``y`` bits when the
    solution was decoded from a state; it can exceed ``colors_used`` when
    some ``y`` bits are set for unused colors.
    """

    selection: tuple[int, ...]
    coloring: Mapping[int, int]
    colors_used: int
    y_sum: int | None = field(default=None, compare=False)

    @property
    def objective_mismatch(self) -> bool:
        return self.y_sum is not None and self.y_sum != self.colors_used


def make_solution(selection: Iterable[int], coloring: Mapping[int, int]) -> SelColSolution:
    selection = tuple(int(v) for v in selection)
    coloring = {int(v): int(coloring[v]) for v in selection}
    return SelColSolution(selection, coloring, len(set(coloring.values())))


def selcol_objective(inst: SelColInstance, s: SelColSolution) -> int:
    return s.colors_used


def default_lambda(inst: SelColInstance) -> float:
    return 5.0 * inst.color_budget


def encode_selcol(inst: SelColInstance, lam: float | None = None) -> QuboModel:
    if lam is None:
        lam = default_lambda(inst)
    if not lam > 0:
        raise ValueError(f"penalty must be positive, got {lam}")
    n, c = inst.n_vertices, inst.color_budget
    nx = n * c
    linear = np.zeros(nx + c)
    linear[nx:] = 1.0
    linear[:nx] = lam  # the x_ik part of lam * (x_ik - y_k) * x_ik
    rows, cols, vals = [], [], []
    for i in range(n):
        for k in range(c):
            rows.append(i * c + k)
            cols.append(nx + k)
            vals.append(-lam)
    for i, j in sorted(inst.edges):
        for k in range(c):
            rows.append(i * c + k)
            cols.append(j * c + k)
            vals.append(lam)
    base = QuboModel.from_arrays(nx + c, linear, rows, cols, vals)
    clusters = EqualitySystem()
    for cluster in inst.clusters:
        clusters.add([i * c + k for i in cluster for k in range(c)], 1.0)
    return dualize(base, clusters, lam)


def encode_state(inst: SelColInstance, s: SelColSolution, y=None) -> np.ndarray:
    """State of a solution; ``y`` defaults to the indicator of the colors in use."""
    n, c = inst.n_vertices, inst.color_budget
    x = np.zeros(n * c + c, dtype=np.int8)
    for v in s.selection:
        x[v * c + s.coloring[v]] = 1
    if y is None:
        x[n * c + np.array(sorted(set(s.coloring.values())), dtype=np.int64)] = 1
    else:
        x[n * c :] = np.asarray(y, dtype=np.int8)
    return x


def _conflicts(inst: SelColInstance, coloring: Mapping[int, int]) -> list[Violation]:
    return [
        Violation("edge", (i, j), float(coloring[i]))
        for i, j in sorted(inst.edges)
        if i in coloring and j in coloring and coloring[i] == coloring[j]
    ]


def decode_selcol(inst: SelColInstance, x) -> SelColSolution | Infeasible:
    n, c = inst.n_vertices, inst.color_budget
    x = as_state(x, n * c + c)
    grid = x[: n * c].reshape(n, c)
    violations = []
    selection, coloring = [], {}
    for p, cluster in enumerate(inst.clusters):
        hits = [(v, int(k)) for v in cluster for k in np.flatnonzero(grid[v])]
        if len(hits) != 1:
            violations.append(Violation("cluster", p, float(len(hits))))
            continue
        v, k = hits[0]
        selection.append(v)
        coloring[v] = k
    violations += _conflicts(inst, coloring)
    if violations:
        return Infeasible(tuple(violations))
    return SelColSolution(tuple(selection), coloring, len(set(coloring.values())), int(x[n * c :].sum()))


def solution_violations(inst: SelColInstance, s: SelColSolution) -> list[Violation]:
    out = []
    if len(s.selection) != inst.n_clusters:
        return [Violation("selection_size", len(s.selection), float(inst.n_clusters))]
    for p, v in enumerate(s.selection):
        if v not in inst.clusters[p]:
            out.append(Violation("cluster", p, float(v)))
        k = s.coloring.get(v)
        if k is None or not 0 <= k < inst.color_budget:
            out.append(Violation("color", v, float(-1 if k is None else k)))
    return out + _conflicts(inst, s.coloring)
