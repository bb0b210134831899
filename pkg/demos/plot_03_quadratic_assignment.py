"""
Quadratic assignment as a QUBO
==============================

Facility ``i`` at location ``k`` becomes the binary variable ``x[i*n + k]``.
Row and column sums are forced to one by penalties, so with a large enough
weight every minimiser is a permutation matrix.
"""

import numpy as np

from daqubo import AnnealConfig, anneal, energy
from daqubo.formats import read_qaplib
from daqubo.generators import GenSpec, gen_qap
from daqubo.oracle import brute_qap
from daqubo.problems import decode, encode, qap_objective
from daqubo.qubo import scale

# %%
# The QAPLIB text layout: size, flow matrix, distance matrix.
tiny = read_qaplib("2  0 1 1 0  0 3 3 0")
print("both assignments cost", qap_objective(tiny, (0, 1)), qap_objective(tiny, (1, 0)))

# %%
inst = gen_qap(GenSpec("qap", 5, density=0.6, coeff_low=0, coeff_high=10, seed=4))
exact, perm = brute_qap(inst)
print("exact optimum", exact, perm.perm)

# %%
# A penalty above the largest possible objective is always safe.
lam = 1 + np.kron(inst.flow, inst.dist).sum()
model = encode(inst, lam)
res = anneal(model, AnnealConfig(iterations=100_000, seed=0))
sol = decode(inst, res.best_state)
print(f"annealer: energy {res.best_energy}, decoded {sol}")

# %%
# Scaling the whole model leaves the minimisers alone but changes the
# default temperatures, which is why coefficient magnitude matters in practice.
res_small = anneal(scale(model, 100), AnnealConfig(iterations=100_000, seed=0))
print("scaled model, rescaled energy:", 100 * res_small.best_energy, "state energy:", energy(model, res_small.best_state))
