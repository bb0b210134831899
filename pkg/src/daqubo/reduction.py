"""Two-phase color-budget heuristic for selective coloring.

Phase one keeps, per cluster, the vertex with the fewest edges leaving its
cluster. Phase two colors that selection greedily, always picking the
uncolored vertex with the most already-colored neighbours. The number of
colors it needs bounds the optimum, so color indices at or above it can be
dropped from the model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .problems.selcol import SelColInstance, SelColSolution, make_solution


@dataclass(frozen=True)
class ReductionReport:
    selection: tuple[int, ...]
    coloring: dict[int, int]
    greedy_colors: int
    vars_before: int
    vars_after: int

    @property
    def pct_reduction(self) -> float:
        return 100.0 * (1.0 - self.vars_after / self.vars_before)

    @property
    def warm_solution(self) -> SelColSolution:
        return make_solution(self.selection, self.coloring)


def select_min_external(inst: SelColInstance) -> tuple[int, ...]:
    """Per cluster, the vertex with the fewest external edges (ties: lowest index)."""
    owner = inst.cluster_of
    external = [sum(owner[u] != owner[v] for u in inst.neighbors[v]) for v in range(inst.n_vertices)]
    return tuple(min(cluster, key=lambda v: (external[v], v)) for cluster in inst.clusters)


def greedy_color(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> tuple[dict[int, int], int]:
    """Color the subgraph induced by ``vertices``.

    Each step takes the uncolored vertex with the most colored neighbours,
    breaking ties by induced degree (higher first) and then by index, and
    gives it the smallest color not used by its neighbours. Counting colored
    neighbours rather than distinct neighbour colors is deliberate.
    """
    vs = sorted(set(vertices))
    vset = set(vs)
    adj: dict[int, set[int]] = {v: set() for v in vs}
    for i, j in edges:
        if i in vset and j in vset and i != j:
            adj[i].add(j)
            adj[j].add(i)
    coloring: dict[int, int] = {}
    colored_nbrs = dict.fromkeys(vs, 0)
    uncolored = set(vs)
    while uncolored:
        v = min(uncolored, key=lambda u: (-colored_nbrs[u], -len(adj[u]), u))
        taken = {coloring[u] for u in adj[v] if u in coloring}
        k = 0
        while k in taken:
            k += 1
        coloring[v] = k
        uncolored.discard(v)
        for u in adj[v]:
            colored_nbrs[u] += 1
    return coloring, len(set(coloring.values()))


def reduce(inst: SelColInstance) -> tuple[SelColInstance, ReductionReport]:
    """Shrink the color budget to the heuristic's color count."""
    selection = select_min_external(inst)
    coloring, c = greedy_color(selection, inst.edges)
    c = max(c, 1)
    report = ReductionReport(
        selection=selection,
        coloring={v: coloring[v] for v in selection},
        greedy_colors=c,
        vars_before=inst.n_variables,
        vars_after=inst.n_vertices * c + c,
    )
    return inst.with_budget(c), report
