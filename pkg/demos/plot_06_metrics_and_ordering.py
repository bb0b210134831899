"""
Comparing solvers
=================

Upper bounds are compared by their normalised difference from a reference
solver. Optimality gaps need a lower bound, which at this scale the exact
enumerator provides. The last part relabels the variables of one model at
random and shows how far a short annealing run drifts between orderings.
"""

from daqubo import AnnealConfig, anneal
from daqubo.generators import GenSpec, gen_pure_qubo
from daqubo.metrics import RunRecord, norm_diff, ordering_experiment, pct_gap, summarize
from daqubo.oracle import brute_qubo

print(norm_diff(150, 100), norm_diff(50, -100), pct_gap(-100, -200), pct_gap(10, None))

# %%
records = []
for k in range(5):
    model = gen_pure_qubo(GenSpec("pure_qubo", 18, density=0.3, seed=k))
    lb, _ = brute_qubo(model)
    records.append(RunRecord(f"q{k}", "exact", lb, lb))
    for mode in ("normal", "parallel"):
        res = anneal(model, AnnealConfig(mode=mode, iterations=500, seed=k))
        records.append(RunRecord(f"q{k}", mode, res.best_energy, time=res.wall_time, seed=k))
for name, row in summarize(records, "exact").items():
    print(f"{name:9s} avg UB {row.avg_ub:9.1f}  norm diff {row.avg_norm_diff:6.2f}%  feasible {row.pct_feas:.0f}%")

# %%
# With very few steps the ordering of variables changes what the annealer finds.
big = gen_pure_qubo(GenSpec("pure_qubo", 300, density=0.1, seed=1))
result = ordering_experiment(big, 8, AnnealConfig(iterations=1_000, seed=5))
print("energies:", result.energies)
print(f"best vs worst ordering: {result.avg_pct_diff:.2f}%")
