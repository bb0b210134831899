"""QUBO model representation, energy evaluation and penalty dualization.

A model is stored in canonical upper-triangular form::

    E(x) = constant + sum_j linear[j] * x[j] + sum_{i<j} q[i, j] * x[i] * x[j]

with the quadratic part kept as three parallel arrays ``rows``, ``cols``,
``vals`` sorted by ``(row, col)``, ``rows < cols``, no duplicates and no
explicit zeros.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

VARIABLE_CAP = 8192


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _fold_pairs(n, rows, cols, vals):
    """Sum duplicate pairs and return canonical sorted (rows, cols, vals)."""
    rows = np.asarray(rows, dtype=np.int64).ravel()
    cols = np.asarray(cols, dtype=np.int64).ravel()
    vals = np.asarray(vals, dtype=np.float64).ravel()
    lo = np.minimum(rows, cols)
    hi = np.maximum(rows, cols)
    keys = lo * n + hi
    uniq, inv = np.unique(keys, return_inverse=True)
    summed = np.bincount(inv, weights=vals, minlength=len(uniq))
    keep = summed != 0.0
    uniq = uniq[keep]
    return uniq // n, uniq % n, summed[keep]


class QuboModel:
    """Quadratic pseudo-Boolean objective over ``n`` binary variables.

    Parameters
    ----------
    n : int
        Number of binary variables.
    linear : mapping or sequence, optional
        Linear coefficients, either a dense length-``n`` sequence or a
        ``{index: value}`` mapping.
    quad : mapping, optional
        ``{(i, j): value}`` pair coefficients. Keys with ``i > j`` are folded
        onto ``(j, i)``; ``(i, i)`` keys are added to the linear part since
        ``x_i**2 == x_i``.
    constant : float
        Energy offset.
    cap : int
        Soft variable cap; exceeding it only warns.
    """

    def __init__(
        self,
        n: int,
        linear: Mapping[int, float] | Sequence[float] | np.ndarray | None = None,
        quad: Mapping[tuple[int, int], float] | None = None,
        constant: float = 0.0,
        *,
        cap: int = VARIABLE_CAP,
    ):
        if n < 0:
            raise ValueError(f"variable count must be non-negative, got {n}")
        lin = np.zeros(n, dtype=np.float64)
        if isinstance(linear, Mapping):
            for j, v in linear.items():
                _check_index(j, n)
                lin[j] += v
        elif linear is not None:
            arr = np.asarray(linear, dtype=np.float64)
            if arr.shape != (n,):
                raise ValueError(f"linear has shape {arr.shape}, expected ({n},)")
            lin += arr
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []
        for (i, j), v in (quad or {}).items():
            _check_index(i, n)
            _check_index(j, n)
            if i == j:
                lin[i] += v
            else:
                rows.append(i)
                cols.append(j)
                vals.append(v)
        self._set(n, lin, *_fold_pairs(max(n, 1), rows, cols, vals), float(constant), cap)

    def _set(self, n, lin, rows, cols, vals, constant, cap):
        if not (np.all(np.isfinite(lin)) and np.all(np.isfinite(vals)) and np.isfinite(constant)):
            raise ValueError("model coefficients must be finite")
        if n > cap:
            warnings.warn(f"model has {n} variables, above the cap of {cap}", stacklevel=3)
        self.n = int(n)
        self.linear = _readonly(np.asarray(lin, dtype=np.float64))
        self.rows = _readonly(np.asarray(rows, dtype=np.int64))
        self.cols = _readonly(np.asarray(cols, dtype=np.int64))
        self.vals = _readonly(np.asarray(vals, dtype=np.float64))
        self.constant = float(constant)

    @classmethod
    def from_arrays(cls, n, linear=None, rows=(), cols=(), vals=(), constant=0.0, *, cap=VARIABLE_CAP):
        """Build from COO pair arrays; duplicates are summed, diagonal goes to linear."""
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=np.float64).ravel()
        if rows.size and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n):
            raise IndexError(f"pair index out of range for n={n}")
        lin = np.zeros(n) if linear is None else np.array(linear, dtype=np.float64)
        if lin.shape != (n,):
            raise ValueError(f"linear has shape {lin.shape}, expected ({n},)")
        diag = rows == cols
        np.add.at(lin, rows[diag], vals[diag])
        off = ~diag
        obj = cls.__new__(cls)
        obj._set(n, lin, *_fold_pairs(max(n, 1), rows[off], cols[off], vals[off]), float(constant), cap)
        return obj

    @classmethod
    def from_dense(cls, Q, linear=None, constant=0.0, **kw):
        """Build from a full matrix read as ``x^T Q x`` (``Q`` need not be symmetric)."""
        Q = np.asarray(Q, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError(f"Q must be square, got shape {Q.shape}")
        r, c = np.nonzero(Q)
        return cls.from_arrays(Q.shape[0], linear, r, c, Q[r, c], constant, **kw)

    @property
    def quad(self) -> dict[tuple[int, int], float]:
        return {(int(i), int(j)): float(v) for i, j, v in zip(self.rows, self.cols, self.vals)}

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def is_integral(self) -> bool:
        return bool(
            float(self.constant).is_integer()
            and np.all(self.linear == np.round(self.linear))
            and np.all(self.vals == np.round(self.vals))
        )

    def mean_abs_coefficient(self) -> float:
        """Mean absolute value over nonzero linear and pair coefficients (1.0 if none)."""
        coeffs = np.concatenate([self.linear[self.linear != 0.0], self.vals])
        return float(np.mean(np.abs(coeffs))) if coeffs.size else 1.0

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric CSR neighbour structure ``(indptr, indices, weights)``."""
        src = np.concatenate([self.rows, self.cols])
        dst = np.concatenate([self.cols, self.rows])
        w = np.concatenate([self.vals, self.vals])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, dst[order].copy(), w[order].copy()

    def __eq__(self, other):
        if not isinstance(other, QuboModel):
            return NotImplemented
        return (
            self.n == other.n
            and self.constant == other.constant
            and np.array_equal(self.linear, other.linear)
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.vals, other.vals)
        )

    __hash__ = None

    def __repr__(self):
        return f"QuboModel(n={self.n}, nnz={self.nnz}, constant={self.constant:g})"


def _check_index(j, n):
    if not 0 <= j < n:
        raise IndexError(f"variable index {j} out of range [0, {n})")


def as_state(x, n: int | None = None) -> np.ndarray:
    """Validate a binary vector and return it as an int8 array."""
    a = np.asarray(x)
    if a.ndim != 1:
        raise ValueError(f"state must be one-dimensional, got shape {a.shape}")
    if n is not None and a.size != n:
        raise ValueError(f"state has length {a.size}, model has {n} variables")
    if a.size and not np.all((a == 0) | (a == 1)):
        raise ValueError("state entries must be 0 or 1")
    return a.astype(np.int8)


@dataclass
class EqualitySystem:
    """Linear equality rows ``sum_j a_j x_j = b``."""

    rows: list[tuple[dict[int, float], float]] = field(default_factory=list)

    def add(self, coeffs: Mapping[int, float] | Iterable[int], rhs: float) -> None:
        """Append a row. An iterable of indices means unit coefficients."""
        if not isinstance(coeffs, Mapping):
            coeffs = {int(j): 1.0 for j in coeffs}
        if not np.isfinite(rhs) or not all(np.isfinite(v) for v in coeffs.values()):
            raise ValueError("constraint coefficients must be finite")
        self.rows.append((dict(coeffs), float(rhs)))

    def __len__(self):
        return len(self.rows)

    def residuals(self, x) -> np.ndarray:
        x = np.asarray(x)
        return np.array([sum(a * x[j] for j, a in coeffs.items()) - b for coeffs, b in self.rows], dtype=np.float64)


def energy(model: QuboModel, x) -> float:
    x = as_state(x, model.n).astype(np.float64)
    quad = np.dot(model.vals, x[model.rows] * x[model.cols]) if model.nnz else 0.0
    return float(model.constant + np.dot(model.linear, x) + quad)


def local_fields(model: QuboModel, x) -> np.ndarray:
    """``h_j = linear_j + sum_{i != j} q_ij x_i`` for every j."""
    x = as_state(x, model.n).astype(np.float64)
    h = model.linear.copy()
    np.add.at(h, model.rows, model.vals * x[model.cols])
    np.add.at(h, model.cols, model.vals * x[model.rows])
    return h


def delta_energy(model: QuboModel, x, j: int) -> float:
    """Energy change caused by flipping bit ``j``."""
    x = as_state(x, model.n)
    _check_index(j, model.n)
    mask_r = model.rows == j
    mask_c = model.cols == j
    h = model.linear[j]
    h += np.dot(model.vals[mask_r], x[model.cols[mask_r]])
    h += np.dot(model.vals[mask_c], x[model.rows[mask_c]])
    return float((1 - 2 * int(x[j])) * h)


def delta_energy_all(model: QuboModel, x) -> np.ndarray:
    x = as_state(x, model.n)
    return (1 - 2 * x.astype(np.float64)) * local_fields(model, x)


def apply_flip(x, j: int) -> np.ndarray:
    x = as_state(x)
    _check_index(j, x.size)
    y = x.copy()
    y[j] ^= 1
    return y


def dualize(objective: QuboModel, constraints: EqualitySystem, lam: float) -> QuboModel:
    """Add ``lam * sum_rows (a.x - b)**2`` to ``objective`` as plain QUBO terms.

    Uses ``x_j**2 == x_j`` so no auxiliary variables appear.
    """
    if not lam > 0:
        raise ValueError(f"penalty must be positive, got {lam}")
    n = objective.n
    lin = objective.linear.copy()
    const = objective.constant
    rows = [objective.rows]
    cols = [objective.cols]
    vals = [objective.vals]
    for coeffs, b in constraints.rows:
        idx = np.fromiter(coeffs.keys(), dtype=np.int64, count=len(coeffs))
        a = np.fromiter(coeffs.values(), dtype=np.float64, count=len(coeffs))
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise IndexError(f"constraint index out of range for n={n}")
        # (a.x - b)^2 = sum a_j^2 x_j + 2 sum_{i<j} a_i a_j x_i x_j - 2b sum a_j x_j + b^2
        np.add.at(lin, idx, lam * (a * a - 2.0 * b * a))
        const += lam * b * b
        iu, ju = np.triu_indices(idx.size, k=1)
        rows.append(idx[iu])
        cols.append(idx[ju])
        vals.append(2.0 * lam * a[iu] * a[ju])
    return QuboModel.from_arrays(n, lin, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals), const)


def permute(model: QuboModel, pi) -> QuboModel:
    """Relabel variable ``j`` as ``pi[j]``."""
    pi = np.asarray(pi, dtype=np.int64)
    if pi.shape != (model.n,) or not np.array_equal(np.sort(pi), np.arange(model.n)):
        raise ValueError("pi must be a permutation of range(n)")
    lin = np.empty(model.n)
    lin[pi] = model.linear
    return QuboModel.from_arrays(model.n, lin, pi[model.rows], pi[model.cols], model.vals, model.constant)


def permute_state(x, pi) -> np.ndarray:
    """Place bit ``j`` of ``x`` at position ``pi[j]``."""
    x = as_state(x)
    y = np.empty_like(x)
    y[np.asarray(pi)] = x
    return y


def scale(model: QuboModel, divisor: float) -> QuboModel:
    if not divisor > 0:
        raise ValueError(f"divisor must be positive, got {divisor}")
    return QuboModel.from_arrays(
        model.n, model.linear / divisor, model.rows, model.cols, model.vals / divisor, model.constant / divisor
    )


def add_models(a: QuboModel, b: QuboModel) -> QuboModel:
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return QuboModel.from_arrays(
        a.n,
        a.linear + b.linear,
        np.concatenate([a.rows, b.rows]),
        np.concatenate([a.cols, b.cols]),
        np.concatenate([a.vals, b.vals]),
        a.constant + b.constant,
    )
