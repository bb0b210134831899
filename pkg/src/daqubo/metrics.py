"""Comparison measures and the experiment harnesses built on them."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from ._rng import make_rng
from .annealer import AnnealConfig, anneal
from .problems import Infeasible, decode, encode, objective
from .qubo import QuboModel, permute

# stream index reserved for permutation draws, clear of annealer streams
_ORDERING_STREAM = 1 << 20


def norm_diff(ub: float, ub_ref: float) -> float:
    """Percentage distance of ``ub`` above a reference upper bound."""
    if ub_ref == 0:
        raise ZeroDivisionError("reference upper bound is zero")
    return 100.0 * (ub - ub_ref) / abs(ub_ref)


def pct_gap(ub: float, lb_best: float | None) -> float | None:
    """Gap against the best available lower bound; ``None`` when there is no bound."""
    if lb_best is None:
        return None
    if ub == 0:
        raise ZeroDivisionError("upper bound is zero")
    return 100.0 * (ub - lb_best) / abs(ub)


def pct_solver_gap(ub: float, lb_own: float | None) -> float | None:
    """Gap against the producing solver's own lower bound."""
    return pct_gap(ub, lb_own)


@dataclass(frozen=True)
class RunRecord:
    instance_id: str
    solver_id: str
    ub: float | None
    lb: float | None = None
    feasible: bool = True
    time: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("time must be non-negative")


@dataclass(frozen=True)
class SolverSummary:
    solver_id: str
    records: int
    avg_ub: float | None
    avg_norm_diff: float | None
    avg_time: float
    pct_feas: float
    excluded: tuple[str, ...] = ()


def summarize(records: Iterable[RunRecord], ref_solver: str) -> dict[str, SolverSummary]:
    """Per-solver averages of UB, normalized difference against ``ref_solver``, time and % feasible.

    Normalized differences are averaged per instance; the reference value of
    an instance is the best (lowest) UB the reference solver recorded for it.
    Instances lacking a UB on either side are left out of that solver's
    normalized-difference average and listed in ``excluded``.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    ref: dict[str, float] = {}
    for r in records:
        if r.solver_id == ref_solver and r.ub is not None:
            ref[r.instance_id] = min(ref.get(r.instance_id, math.inf), r.ub)
    by_solver: dict[str, list[RunRecord]] = defaultdict(list)
    for r in records:
        by_solver[r.solver_id].append(r)
    out = {}
    for solver in sorted(by_solver):
        recs = sorted(by_solver[solver], key=lambda r: (r.instance_id, r.seed, r.time))
        ubs = [r.ub for r in recs if r.ub is not None]
        diffs, excluded = [], set()
        for r in recs:
            if r.ub is None or r.instance_id not in ref:
                excluded.add(r.instance_id)
            else:
                diffs.append(norm_diff(r.ub, ref[r.instance_id]))
        out[solver] = SolverSummary(
            solver_id=solver,
            records=len(recs),
            avg_ub=math.fsum(ubs) / len(ubs) if ubs else None,
            avg_norm_diff=math.fsum(diffs) / len(diffs) if diffs else None,
            avg_time=math.fsum(r.time for r in recs) / len(recs),
            pct_feas=100.0 * sum(r.feasible for r in recs) / len(recs),
            excluded=tuple(sorted(excluded)),
        )
    return out


@dataclass(frozen=True)
class OrderingResult:
    energies: tuple[float, ...]
    avg_pct_diff: float
    permutations: tuple[tuple[int, ...], ...] = field(default=(), repr=False)


def spread_pct(values: Sequence[float]) -> float:
    """``100 * (worst - best) / |worst|`` for a minimisation objective."""
    best, worst = min(values), max(values)
    if best == worst:
        return 0.0
    if worst == 0:
        raise ZeroDivisionError("worst objective is zero")
    return 100.0 * (worst - best) / abs(worst)


def ordering_experiment(
    model: QuboModel,
    k: int,
    config: AnnealConfig,
    permutations: Sequence[Sequence[int]] | None = None,
) -> OrderingResult:
    """Anneal ``k`` relabelings of the same model with one fixed config.

    Permutation ``i`` comes from stream ``(config.seed, 2**20, i)`` unless
    explicit ``permutations`` are given.
    """
    if k < 2:
        raise ValueError("need at least two permutations")
    if permutations is None:
        permutations = [make_rng(config.seed, _ORDERING_STREAM, i).permutation(model.n) for i in range(k)]
    perms = tuple(tuple(int(v) for v in p) for p in permutations[:k])
    energies = tuple(anneal(permute(model, p), config).best_energy for p in perms)
    return OrderingResult(energies, spread_pct(energies), perms)


@dataclass(frozen=True)
class SweepCell:
    mode: str
    lam: float
    avg_objective: float | None
    feasible: int
    infeasible: int
    objectives: tuple[float, ...] = ()


def penalty_sweep(
    instances: Sequence,
    lambdas: Sequence[float],
    config: AnnealConfig,
    modes: Sequence[str] | None = None,
    solver: Callable[[QuboModel], np.ndarray] | None = None,
) -> list[SweepCell]:
    """Average decoded objective per (mode, penalty) over ``instances``.

    ``solver`` maps an encoded model to a state; by default the annealer with
    ``config`` (mode overridden per entry of ``modes``). Runs that decode to
    an infeasible solution are counted, not averaged.
    """
    if not lambdas or any(not lam > 0 for lam in lambdas):
        raise ValueError("penalties must be a non-empty list of positive values")
    modes = list(modes) if modes else [config.mode]
    cells = []
    for mode in modes:
        cfg = replace(config, mode=mode)
        run = solver or (lambda m, c=cfg: anneal(m, c).best_state)
        for lam in lambdas:
            objs, bad = [], 0
            for inst in instances:
                sol = decode(inst, run(encode(inst, lam)))
                if isinstance(sol, Infeasible):
                    bad += 1
                else:
                    objs.append(objective(inst, sol))
            avg = math.fsum(objs) / len(objs) if objs else None
            cells.append(SweepCell(mode, float(lam), avg, len(objs), bad, tuple(objs)))
    return cells
