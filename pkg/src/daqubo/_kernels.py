"""Compiled inner loop of the annealer."""

import math

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True)
def anneal_block(indptr, indices, weights, x, field, energy, e_off, off_inc, betas, uniforms, best_x, best_e):
    """Run ``len(betas)`` flag-and-flip steps in place.

    ``uniforms`` has shape ``(len(betas), n + 1)``: column ``j < n`` decides
    the flag of variable ``j``, column ``n`` picks among flagged variables.
    ``field[j]`` must hold ``linear[j] + sum_i q_ij x_i`` on entry and is
    kept current. Returns ``(energy, e_off, best_e, accepted)``.
    """
    n = x.size
    flagged = np.empty(n, np.int64)
    accepted = 0
    for t in range(betas.size):
        beta = betas[t]
        count = 0
        for j in range(n):
            d = (1.0 - 2.0 * x[j]) * field[j] - e_off
            if d <= 0.0 or uniforms[t, j] < math.exp(-beta * d):
                flagged[count] = j
                count += 1
        if count == 0:
            e_off += off_inc
            continue
        k = flagged[min(int(uniforms[t, n] * count), count - 1)]
        sign = 1.0 - 2.0 * x[k]
        energy += sign * field[k]
        x[k] = 1 - x[k]
        for p in range(indptr[k], indptr[k + 1]):
            field[indices[p]] += sign * weights[p]
        e_off = 0.0
        accepted += 1
        if energy < best_e:
            best_e = energy
            best_x[:] = x
    return energy, e_off, best_e, accepted
