"""Seeded random instances.

All generators draw from ``make_rng(spec.seed)`` in a fixed order, so a
:class:`GenSpec` fully determines its instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import make_rng
from .problems.qap import QapInstance
from .problems.qcpp import QcppInstance
from .problems.selcol import SelColInstance
from .qubo import QuboModel

FAMILIES = ("pure_qubo", "qcpp", "selcol", "qap")


@dataclass(frozen=True)
class GenSpec:
    """Generation parameters.

    ``coeff_low``/``coeff_high`` bound the integer QUBO coefficients
    (``pure_qubo``) or the flow and distance entries (``qap``). Cluster size
    bounds only matter for ``selcol``.
    """

    family: str
    n: int
    density: float = 0.1
    coeff_low: int = -100
    coeff_high: int = 100
    cluster_size_low: int = 2
    cluster_size_high: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must lie in [0, 1], got {self.density}")
        if self.coeff_low > self.coeff_high:
            raise ValueError("coeff_low exceeds coeff_high")
        if self.cluster_size_low < 1:
            raise ValueError("cluster_size_low must be at least 1")
        if self.cluster_size_low > self.cluster_size_high:
            raise ValueError("cluster_size_low exceeds cluster_size_high")


def _check(spec, family):
    if spec.family != family:
        raise ValueError(f"expected a {family} spec, got {spec.family}")


def gen_pure_qubo(spec: GenSpec) -> QuboModel:
    """Each linear term and each pair is present with probability ``density``
    and gets an integer coefficient uniform in ``[coeff_low, coeff_high]``."""
    _check(spec, "pure_qubo")
    rng = make_rng(spec.seed)
    n = spec.n
    lin_mask = rng.random(n) < spec.density
    linear = np.where(lin_mask, rng.integers(spec.coeff_low, spec.coeff_high + 1, n), 0)
    rows, cols, vals = [], [], []
    for i in range(n - 1):
        js = i + 1 + np.flatnonzero(rng.random(n - i - 1) < spec.density)
        rows.append(np.full(js.size, i))
        cols.append(js)
        vals.append(rng.integers(spec.coeff_low, spec.coeff_high + 1, js.size))
    if rows:
        return QuboModel.from_arrays(n, linear, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
    return QuboModel.from_arrays(n, linear)


def gen_qcpp(spec: GenSpec) -> QcppInstance:
    """Random digraph with every vertex given at least one in- and one out-arc."""
    _check(spec, "qcpp")
    n = spec.n
    if n < 2:
        raise ValueError("a cycle partition instance needs at least 2 vertices")
    rng = make_rng(spec.seed)
    present = rng.random((n, n)) < spec.density
    np.fill_diagonal(present, False)
    for v in range(n):
        if not present[v].any():
            present[v, _other(rng, n, v)] = True
    for v in range(n):
        if not present[:, v].any():
            present[_other(rng, n, v), v] = True
    arcs = [(int(t), int(h)) for t, h in zip(*np.nonzero(present))]
    by_tail: list[list[int]] = [[] for _ in range(n)]
    for a, (t, _) in enumerate(arcs):
        by_tail[t].append(a)
    pairs = [(a1, a2) for a1, (_, h) in enumerate(arcs) for a2 in by_tail[h]]
    values = rng.integers(0, 101, len(pairs)).astype(np.float64)
    cost = dict(zip(pairs, values.tolist()))
    return QcppInstance(n, tuple(arcs), cost)


def _other(rng, n, v):
    u = int(rng.integers(0, n - 1))
    return u + (u >= v)


def gen_selcol(spec: GenSpec) -> SelColInstance:
    """Undirected random graph with shuffled vertices cut into clusters of random size."""
    _check(spec, "selcol")
    rng = make_rng(spec.seed)
    n = spec.n
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < spec.density
    edges = frozenset(zip(iu[keep].tolist(), ju[keep].tolist()))
    order = rng.permutation(n).tolist()
    clusters: list[list[int]] = []
    pos = 0
    while pos < n:
        size = int(rng.integers(spec.cluster_size_low, spec.cluster_size_high + 1))
        clusters.append(order[pos : pos + size])
        pos += size
    if len(clusters) > 1 and len(clusters[-1]) < spec.cluster_size_low:
        clusters[-2].extend(clusters.pop())
    return SelColInstance(n, edges, tuple(tuple(sorted(c)) for c in clusters))


def gen_qap(spec: GenSpec) -> QapInstance:
    """Symmetric flow and distance matrices with zero diagonal and integer
    entries uniform in ``[max(coeff_low, 0), coeff_high]``; ``density`` thins the flows."""
    _check(spec, "qap")
    rng = make_rng(spec.seed)
    n = spec.n
    low = max(spec.coeff_low, 0)

    def sym(mask_density):
        m = np.triu(rng.integers(low, spec.coeff_high + 1, (n, n)), k=1)
        m = m * np.triu(rng.random((n, n)) < mask_density, k=1)
        return (m + m.T).astype(np.float64)

    flow = sym(spec.density)
    dist = sym(1.0)
    return QapInstance(flow, dist)


def generate(spec: GenSpec):
    return {"pure_qubo": gen_pure_qubo, "qcpp": gen_qcpp, "selcol": gen_selcol, "qap": gen_qap}[spec.family](spec)
