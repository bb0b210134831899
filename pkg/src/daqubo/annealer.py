"""Flag-and-flip annealing in normal (single trajectory) and parallel (replica exchange) modes.

Each step evaluates the energy change of every single-bit flip, sets one
acceptance flag per variable with probability
``min(1, exp(-beta * (dE_j - e_off)))`` and flips one flagged variable chosen
uniformly. When no flag is set the offset ``e_off`` grows by a fixed
increment; any accepted flip resets it to zero.

Random stream layout (all streams from :func:`daqubo._rng.make_rng`):

* normal mode uses stream ``(0,)``; parallel mode uses ``(r,)`` for replica
  ``r`` and ``(replicas,)`` for swap decisions;
* a trajectory first draws ``n`` uniforms for its initial state
  (``x_j = u_j < 0.5``), then ``n + 1`` uniforms per step, the first ``n``
  for the flags in index order and the last for the selection
  ``flagged[floor(u * count)]``;
* each attempted swap consumes one uniform, in ladder order.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ._kernels import anneal_block
from ._rng import make_rng
from .qubo import QuboModel, as_state, delta_energy_all, energy, local_fields

THREADS_ENV = "DAQUBO_THREADS"
_BLOCK_FLOATS = 1 << 21


@dataclass(frozen=True)
class AnnealConfig:
    """Run parameters.

    ``beta_start``, ``beta_end`` and ``offset_increment`` left as ``None`` are
    filled from the model by :meth:`resolved`: ``0.01 / m``, ``10 / m`` and
    ``0.1 * m`` where ``m`` is the mean absolute nonzero coefficient.

    In parallel mode ``iterations`` counts steps per replica.
    """

    mode: str = "normal"
    iterations: int = 10_000
    beta_start: float | None = None
    beta_end: float | None = None
    offset_increment: float | None = None
    replicas: int = 4
    exchange_interval: int = 100
    seed: int = 0
    threads: int | None = None
    debug: bool = False

    def __post_init__(self):
        if self.mode not in ("normal", "parallel"):
            raise ValueError(f"mode must be 'normal' or 'parallel', got {self.mode!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        for name in ("beta_start", "beta_end"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive")
        if self.beta_start is not None and self.beta_end is not None and self.beta_start > self.beta_end:
            raise ValueError("beta_start must not exceed beta_end")
        if self.offset_increment is not None and self.offset_increment < 0:
            raise ValueError("offset_increment must be non-negative")
        if self.mode == "parallel" and (self.replicas < 2 or self.exchange_interval < 1):
            raise ValueError("parallel mode needs replicas >= 2 and exchange_interval >= 1")

    def resolved(self, model: QuboModel) -> AnnealConfig:
        m = model.mean_abs_coefficient()
        b0 = self.beta_start if self.beta_start is not None else 0.01 / m
        b1 = self.beta_end if self.beta_end is not None else 10.0 / m
        off = self.offset_increment if self.offset_increment is not None else 0.1 * m
        return replace(self, beta_start=b0, beta_end=max(b0, b1), offset_increment=off)


@dataclass(eq=False)
class AnnealResult:
    best_state: np.ndarray
    best_energy: float
    iterations_run: int
    flips_accepted: int
    wall_time: float = field(default=0.0)

    def __eq__(self, other):
        # wall_time is excluded: it is the only nondeterministic field
        if not isinstance(other, AnnealResult):
            return NotImplemented
        return (
            np.array_equal(self.best_state, other.best_state)
            and self.best_energy == other.best_energy
            and self.iterations_run == other.iterations_run
            and self.flips_accepted == other.flips_accepted
        )


def accept_probability(delta: float, beta: float, offset: float = 0.0) -> float:
    d = delta - offset
    return 1.0 if d <= 0.0 else math.exp(-beta * d)


def beta_schedule(config: AnnealConfig, t: int) -> float:
    """Geometric interpolation from ``beta_start`` at ``t = 0`` to ``beta_end`` at the last step."""
    return float(_schedule(config, t, t + 1)[0])


def _schedule(config: AnnealConfig, start: int, stop: int) -> np.ndarray:
    if config.beta_start is None or config.beta_end is None:
        raise ValueError("config has unresolved betas; call config.resolved(model) first")
    t = np.arange(start, stop, dtype=np.float64)
    if config.iterations == 1:
        return np.full(t.size, config.beta_start)
    return config.beta_start * (config.beta_end / config.beta_start) ** (t / (config.iterations - 1))


def step_normal(model: QuboModel, x, beta: float, e_off: float, rng: np.random.Generator, offset_increment: float):
    """One flag-and-flip step, returning ``(x_new, e_off_new, accepted)``.

    Consumes exactly ``n + 1`` uniforms from ``rng``, so a sequence of calls
    reproduces :func:`anneal_normal` when fed the same stream.
    """
    x = as_state(x, model.n)
    deltas = delta_energy_all(model, x)
    u = rng.random(model.n + 1)
    probs = np.array([accept_probability(d, beta, e_off) for d in deltas])
    flagged = np.flatnonzero(u[: model.n] < probs)
    if flagged.size == 0:
        return x, e_off + offset_increment, False
    k = flagged[min(int(u[model.n] * flagged.size), flagged.size - 1)]
    y = x.copy()
    y[k] ^= 1
    return y, 0.0, True


class _Trajectory:
    """Mutable search state of one chain; all kernel buffers live here."""

    def __init__(self, model: QuboModel, rng: np.random.Generator, beta: float = 0.0):
        self.model = model
        self.rng = rng
        self.beta = beta
        self.x = (rng.random(model.n) < 0.5).astype(np.int8)
        self.field = local_fields(model, self.x)
        self.energy = energy(model, self.x)
        self.e_off = 0.0
        self.best_x = self.x.copy()
        self.best_e = self.energy
        self.accepted = 0

    def run(self, betas: np.ndarray, off_inc: float, debug: bool = False):
        n = self.model.n
        indptr, indices, weights = self.model.adjacency
        rows = max(1, _BLOCK_FLOATS // (n + 1))
        for s in range(0, betas.size, rows):
            b = betas[s : s + rows]
            u = self.rng.random((b.size, n + 1))
            self.energy, self.e_off, self.best_e, acc = anneal_block(
                indptr, indices, weights, self.x, self.field, self.energy, self.e_off, off_inc, b, u, self.best_x, self.best_e
            )
            self.accepted += acc
            if debug:
                self.check()

    def check(self):
        exact = energy(self.model, self.x)
        if not math.isclose(self.energy, exact, rel_tol=1e-9, abs_tol=1e-9):
            raise AssertionError(f"energy drift: tracked {self.energy}, recomputed {exact}")


def _result(model, traj_best, iterations, accepted, t0):
    best_x = traj_best.copy()
    return AnnealResult(best_x, energy(model, best_x), iterations, accepted, time.perf_counter() - t0)


def anneal_normal(model: QuboModel, config: AnnealConfig) -> AnnealResult:
    t0 = time.perf_counter()
    cfg = config.resolved(model)
    traj = _Trajectory(model, make_rng(cfg.seed, 0))
    if model.n:
        traj.run(_schedule(cfg, 0, cfg.iterations), cfg.offset_increment, cfg.debug)
    return _result(model, traj.best_x, cfg.iterations, traj.accepted, t0)


@dataclass
class Replica:
    """State held at one rung of the temperature ladder."""

    state: np.ndarray
    energy: float
    beta: float


def swap_probability(beta_a: float, beta_b: float, e_a: float, e_b: float) -> float:
    z = (beta_a - beta_b) * (e_a - e_b)
    return 1.0 if z >= 0.0 else math.exp(z)


def attempt_swap(replica_a, replica_b, rng: np.random.Generator) -> bool:
    """Exchange states (never betas) with the replica-exchange acceptance rule.

    Works on :class:`Replica` or internal trajectories; one uniform is drawn
    per call.
    """
    p = swap_probability(replica_a.beta, replica_b.beta, replica_a.energy, replica_b.energy)
    if not rng.random() < p:
        return False
    if isinstance(replica_a, _Trajectory):
        for name in ("x", "field", "energy"):
            a, b = getattr(replica_a, name), getattr(replica_b, name)
            setattr(replica_a, name, b)
            setattr(replica_b, name, a)
    else:
        replica_a.state, replica_b.state = replica_b.state, replica_a.state
        replica_a.energy, replica_b.energy = replica_b.energy, replica_a.energy
    return True


def ladder(beta_start: float, beta_end: float, replicas: int) -> np.ndarray:
    r = np.arange(replicas)
    return beta_start * (beta_end / beta_start) ** (r / (replicas - 1))


def thread_count(config: AnnealConfig) -> int:
    if config.threads is not None:
        return max(1, config.threads)
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def anneal_parallel(model: QuboModel, config: AnnealConfig) -> AnnealResult:
    """Replica exchange over a geometric ladder of fixed betas.

    Swaps are attempted every ``exchange_interval`` steps between adjacent
    rungs, pairing (0,1),(2,3),... on even events and (1,2),(3,4),... on odd.
    """
    t0 = time.perf_counter()
    cfg = config.resolved(model)
    betas = ladder(cfg.beta_start, cfg.beta_end, cfg.replicas)
    trajs = [_Trajectory(model, make_rng(cfg.seed, r), float(b)) for r, b in enumerate(betas)]
    swap_rng = make_rng(cfg.seed, cfg.replicas)
    workers = min(thread_count(cfg), cfg.replicas)
    pool = ThreadPoolExecutor(workers) if workers > 1 and model.n else None
    try:
        done = 0
        event = 0
        while done < cfg.iterations:
            seg = min(cfg.exchange_interval, cfg.iterations - done)
            if model.n:
                jobs = [(tr, np.full(seg, tr.beta)) for tr in trajs]
                if pool is None:
                    for tr, b in jobs:
                        tr.run(b, cfg.offset_increment, cfg.debug)
                else:
                    list(pool.map(lambda job: job[0].run(job[1], cfg.offset_increment, cfg.debug), jobs))
            done += seg
            for a in range(event % 2, cfg.replicas - 1, 2):
                attempt_swap(trajs[a], trajs[a + 1], swap_rng)
            event += 1
    finally:
        if pool is not None:
            pool.shutdown()
    best = min(range(cfg.replicas), key=lambda r: (trajs[r].best_e, r))
    return _result(model, trajs[best].best_x, cfg.iterations, sum(t.accepted for t in trajs), t0)


def anneal(model: QuboModel, config: AnnealConfig) -> AnnealResult:
    if config.mode == "parallel":
        return anneal_parallel(model, config)
    return anneal_normal(model, config)
