"""Exhaustive exact solvers for small instances.

These are deliberately naive: they enumerate the whole search space and
refuse inputs above a hard size guard instead of truncating.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .problems._report import Infeasible, Violation
from .problems.qap import QapAssignment, QapInstance
from .problems.qcpp import QcppInstance, QcppSolution, cycle_decomposition
from .problems.selcol import SelColInstance, SelColSolution
from .qubo import QuboModel, energy

MAX_QUBO_VARS = 26
MAX_QAP_SIZE = 8
MAX_QCPP_ARCS = 22
MAX_SELCOL_SELECTIONS = 10_000
MAX_SELCOL_CLUSTERS = 12
_LOW_BITS = 16


class GuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


def _bits(count: int, width: int) -> np.ndarray:
    """Row ``r`` holds the binary digits of ``r``, most significant first."""
    r = np.arange(count, dtype=np.int64)[:, None]
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((r >> shifts) & 1).astype(np.float64)


def brute_qubo(model: QuboModel) -> tuple[float, np.ndarray]:
    """Exact minimum over all ``2**n`` states.

    States are visited in lexicographic order (``x[0]`` most significant) and
    the first minimiser wins. The last ``min(n, 16)`` variables are evaluated
    as one vectorised block for each assignment of the leading ones.
    """
    n = model.n
    if n > MAX_QUBO_VARS:
        raise GuardError(f"brute force limited to {MAX_QUBO_VARS} variables, got {n}")
    if n == 0:
        return model.constant, np.zeros(0, dtype=np.int8)
    k = min(n, _LOW_BITS)
    h = n - k
    low = _bits(1 << k, k)
    lin_h, lin_l = model.linear[:h], model.linear[h:]
    r, c, v = model.rows, model.cols, model.vals
    in_h = c < h
    in_l = r >= h
    cross = ~in_h & ~in_l
    ll = np.zeros((k, k))
    ll[r[in_l] - h, c[in_l] - h] = v[in_l]
    block = low @ lin_l + np.einsum("si,ij,sj->s", low, ll, low)
    cross_m = np.zeros((max(h, 1), k))
    cross_m[r[cross], c[cross] - h] = v[cross]
    best_e = math.inf
    best_idx = 0
    high_states = _bits(1 << h, h) if h else np.zeros((1, 0))
    for hv, xh in enumerate(high_states):
        eh = model.constant + xh @ lin_h + np.dot(v[in_h], xh[r[in_h]] * xh[c[in_h]])
        e = eh + block + (low @ (xh @ cross_m[:h]) if h else 0.0)
        j = int(np.argmin(e))
        if e[j] < best_e:
            best_e = float(e[j])
            best_idx = (hv << k) | j
    x = ((best_idx >> np.arange(n - 1, -1, -1)) & 1).astype(np.int8)
    return energy(model, x), x


def brute_qap(inst: QapInstance) -> tuple[float, QapAssignment]:
    """Cheapest permutation; ties go to the lexicographically smallest."""
    n = inst.n
    if n > MAX_QAP_SIZE:
        raise GuardError(f"QAP brute force limited to n <= {MAX_QAP_SIZE}, got {n}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    best_cost, best = math.inf, 0
    for s in range(0, len(perms), 5040):
        p = perms[s : s + 5040]
        costs = np.einsum("ij,pij->p", inst.flow, inst.dist[p[:, :, None], p[:, None, :]])
        j = int(np.argmin(costs))
        if costs[j] < best_cost:
            best_cost, best = float(costs[j]), s + j
    return best_cost, QapAssignment(tuple(int(k) for k in perms[best]))


def brute_qcpp(inst: QcppInstance) -> tuple[float, QcppSolution] | Infeasible:
    """Cheapest cycle partition, or :class:`Infeasible` when none exists.

    Enumerates every way to give each vertex one outgoing arc with all heads
    distinct, which is exactly the set of arc selections meeting both degree
    constraints.
    """
    m = len(inst.arcs)
    if m > MAX_QCPP_ARCS:
        raise GuardError(f"QCPP brute force limited to {MAX_QCPP_ARCS} arcs, got {m}")
    cost = np.zeros((m, m))
    for (a1, a2), val in inst.cost.items():
        cost[a1, a2] = val
    out = inst.out_arcs
    n = inst.n_vertices
    best = [math.inf, None]
    chosen: list[int] = []
    used = [False] * n

    def search(v):
        if v == n:
            c = float(cost[np.ix_(chosen, chosen)].sum())
            if c < best[0]:
                best[0], best[1] = c, list(chosen)
            return
        for a in out[v]:
            head = inst.arcs[a][1]
            if not used[head]:
                used[head] = True
                chosen.append(a)
                search(v + 1)
                chosen.pop()
                used[head] = False

    search(0)
    if best[1] is None:
        return Infeasible(tuple(Violation("no_cycle_partition", v, 0.0) for v in inst.degree_deficits()))
    sel = frozenset(best[1])
    return best[0], QcppSolution(sel, cycle_decomposition(inst, sel))


def _coloring_with(vertices, adj, k):
    """A proper coloring of ``vertices`` using at most ``k`` colors, or None."""
    order = sorted(vertices, key=lambda v: (-len(adj[v]), v))
    colors: dict[int, int] = {}

    def place(idx, used):
        if idx == len(order):
            return True
        v = order[idx]
        taken = {colors[u] for u in adj[v] if u in colors}
        for c in range(min(used + 1, k)):
            if c not in taken:
                colors[v] = c
                if place(idx + 1, max(used, c + 1)):
                    return True
                del colors[v]
        return False

    return dict(colors) if place(0, 0) else None


def chromatic_number(vertices, edges) -> tuple[int, dict[int, int]]:
    """Exact chromatic number of the induced subgraph and an optimal coloring."""
    vs = list(dict.fromkeys(vertices))
    vset = set(vs)
    adj = {v: set() for v in vs}
    for i, j in edges:
        if i in vset and j in vset:
            adj[i].add(j)
            adj[j].add(i)
    for k in range(1, len(vs) + 1):
        col = _coloring_with(vs, adj, k)
        if col is not None:
            return k, col
    return 0, {}


def brute_selcol(inst: SelColInstance) -> tuple[int, SelColSolution] | Infeasible:
    """Minimum selective chromatic number over all selections.

    Selections are visited in cluster-product order and the first optimum is
    kept. Returns :class:`Infeasible` if the optimum needs more colors than
    ``inst.color_budget`` allows.
    """
    count = math.prod(len(c) for c in inst.clusters)
    if count > MAX_SELCOL_SELECTIONS or inst.n_clusters > MAX_SELCOL_CLUSTERS:
        raise GuardError(f"Sel-Col brute force limited to {MAX_SELCOL_SELECTIONS} selections of size <= {MAX_SELCOL_CLUSTERS}")
    best_k, best_sel, best_col = math.inf, None, None
    adj = inst.neighbors
    for sel in itertools.product(*inst.clusters):
        sub = {v: adj[v] & set(sel) for v in sel}
        limit = min(best_k - 1, len(sel))
        for k in range(1, int(limit) + 1):
            col = _coloring_with(sel, sub, k)
            if col is not None:
                best_k, best_sel, best_col = k, sel, col
                break
        if best_k == 1:
            break
    if best_k > inst.color_budget:
        return Infeasible((Violation("color_budget", inst.color_budget, float(best_k)),))
    coloring = {v: best_col[v] for v in best_sel}
    return int(best_k), SelColSolution(tuple(best_sel), coloring, int(best_k))
