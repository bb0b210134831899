"""
Cycle partitions and the penalty weight
=======================================

A cycle partition picks one outgoing and one incoming arc per vertex. Costs
are charged for consecutive selected arcs. Too small a penalty makes
violating the degree constraints cheaper than paying those costs, which a
sweep over penalty weights exposes directly.
"""

from daqubo import AnnealConfig
from daqubo.generators import GenSpec, gen_qcpp
from daqubo.metrics import penalty_sweep
from daqubo.oracle import brute_qcpp, brute_qubo
from daqubo.problems import Infeasible

instances = []
seed = 0
while len(instances) < 4:
    inst = gen_qcpp(GenSpec("qcpp", 5, density=0.5, seed=seed))
    seed += 1
    if len(inst.arcs) <= 16 and not isinstance(brute_qcpp(inst), Infeasible):
        instances.append(inst)
print("exact optima:", [brute_qcpp(i)[0] for i in instances])

# %%
# First with the exact QUBO minimiser as the solver, so only the penalty matters.
lambdas = [1, 10, 100, 1000]
for cell in penalty_sweep(instances, lambdas, AnnealConfig(), solver=lambda m: brute_qubo(m)[1]):
    print(f"exact     lambda={cell.lam:6g}  feasible {cell.feasible}/4  avg objective {cell.avg_objective}")

# %%
# Then with both annealer modes.
for cell in penalty_sweep(instances, lambdas, AnnealConfig(iterations=20_000, seed=1), modes=["normal", "parallel"]):
    print(f"{cell.mode:9s} lambda={cell.lam:6g}  feasible {cell.feasible}/4  avg objective {cell.avg_objective}")
