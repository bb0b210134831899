"""Quadratic assignment: facilities ``i`` to locations ``k``, variable ``x[i*n + k]``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qubo import EqualitySystem, QuboModel, as_state, dualize
from ._report import Infeasible, Violation

DEFAULT_LAMBDA = 16000.0


@dataclass(frozen=True, eq=False)
class QapInstance:
    flow: np.ndarray
    dist: np.ndarray

    def __post_init__(self):
        flow = np.array(self.flow, dtype=np.float64)
        dist = np.array(self.dist, dtype=np.float64)
        if flow.ndim != 2 or flow.shape[0] != flow.shape[1] or flow.shape != dist.shape:
            raise ValueError(f"flow {flow.shape} and dist {dist.shape} must be equal square matrices")
        if not (np.all(np.isfinite(flow)) and np.all(np.isfinite(dist))):
            raise ValueError("matrices must be finite")
        flow.setflags(write=False)
        dist.setflags(write=False)
        object.__setattr__(self, "flow", flow)
        object.__setattr__(self, "dist", dist)

    @property
    def n(self) -> int:
        return self.flow.shape[0]

    def __eq__(self, other):
        if not isinstance(other, QapInstance):
            return NotImplemented
        return np.array_equal(self.flow, other.flow) and np.array_equal(self.dist, other.dist)


@dataclass(frozen=True)
class QapAssignment:
    """``perm[i]`` is the location of facility ``i``."""

    perm: tuple[int, ...]


def _as_perm(inst: QapInstance, a) -> np.ndarray:
    perm = np.asarray(a.perm if isinstance(a, QapAssignment) else a, dtype=np.int64)
    if perm.shape != (inst.n,):
        raise ValueError(f"assignment has size {perm.size}, instance has {inst.n}")
    return perm


def qap_objective(inst: QapInstance, a) -> float:
    perm = _as_perm(inst, a)
    return float(np.sum(inst.flow * inst.dist[np.ix_(perm, perm)]))


def assignment_constraints(n: int) -> EqualitySystem:
    """One row per facility, then one row per location."""
    system = EqualitySystem()
    for i in range(n):
        system.add(range(i * n, i * n + n), 1.0)
    for k in range(n):
        system.add(range(k, n * n, n), 1.0)
    return system


def encode_qap(inst: QapInstance, lam: float = DEFAULT_LAMBDA) -> QuboModel:
    """``sum f_ij d_kl x_ik x_jl`` plus ``lam`` times squared row and column violations."""
    if not lam > 0:
        raise ValueError(f"penalty must be positive, got {lam}")
    # kron(F, D)[i*n+k, j*n+l] == F[i, j] * D[k, l]
    objective = QuboModel.from_dense(np.kron(inst.flow, inst.dist))
    return dualize(objective, assignment_constraints(inst.n), lam)


def encode_state(inst: QapInstance, a) -> np.ndarray:
    perm = _as_perm(inst, a)
    x = np.zeros((inst.n, inst.n), dtype=np.int8)
    x[np.arange(inst.n), perm] = 1
    return x.ravel()


def state_violations(inst: QapInstance, x) -> list[Violation]:
    n = inst.n
    m = as_state(x, n * n).reshape(n, n)
    out = [Violation("facility", i, float(s)) for i, s in enumerate(m.sum(axis=1)) if s != 1]
    out += [Violation("location", k, float(s)) for k, s in enumerate(m.sum(axis=0)) if s != 1]
    return out


def decode_qap(inst: QapInstance, x) -> QapAssignment | Infeasible:
    violations = state_violations(inst, x)
    if violations:
        return Infeasible(tuple(violations))
    m = as_state(x).reshape(inst.n, inst.n)
    return QapAssignment(tuple(int(k) for k in m.argmax(axis=1)))


def assignment_violations(inst: QapInstance, a: QapAssignment) -> list[Violation]:
    perm = list(a.perm)
    if len(perm) != inst.n:
        return [Violation("size", len(perm), float(inst.n))]
    counts = np.bincount([k for k in perm if 0 <= k < inst.n], minlength=inst.n)
    out = [Violation("facility", i, float(k)) for i, k in enumerate(perm) if not 0 <= k < inst.n]
    out += [Violation("location", k, float(c)) for k, c in enumerate(counts) if c != 1]
    return out
