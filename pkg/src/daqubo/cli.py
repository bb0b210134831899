"""Command-line entry point: ``daqubo <subcommand> ...`` or ``python -m daqubo``.

Everything is minimised internally. ``--maximize`` (bqp inputs) negates the
model on read and the reported objective is negated back.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import replace
from pathlib import Path


from . import formats, generators, oracle, problems
from .annealer import AnnealConfig, anneal
from .metrics import norm_diff, ordering_experiment, pct_gap
from .problems import Infeasible, QapAssignment, QcppSolution, SelColSolution
from .qubo import QuboModel, energy
from .reduction import reduce

CSV_COLUMNS = ("instance_id", "solver_id", "mode", "lambda", "seed", "ub", "feasible", "time_sec", "norm_diff", "pct_gap")
EXIT_INFEASIBLE = 2


class CliError(Exception):
    pass


def _floats(text):
    return [float(t) for t in text.split(",") if t]


def _ints(text):
    return [int(t) for t in text.split(",") if t]


def _num(v):
    if v is None:
        return None
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2**53 else v


def _load(path, fmt=None, maximize=False):
    return formats.read_file(path, fmt, maximize=maximize)


def _solution_json(sol):
    if isinstance(sol, QapAssignment):
        return {"perm": list(sol.perm)}
    if isinstance(sol, QcppSolution):
        return {"arcs": sorted(sol.selected), "cycles": [list(c) for c in sol.cycles]}
    if isinstance(sol, SelColSolution):
        out = {
            "selection": list(sol.selection),
            "coloring": {str(v): k for v, k in sorted(sol.coloring.items())},
            "colors_used": sol.colors_used,
        }
        if sol.y_sum is not None:
            out["y_sum"] = sol.y_sum
        return out
    return None


def _config(args) -> AnnealConfig:
    return AnnealConfig(
        mode=args.mode,
        iterations=args.iters,
        beta_start=args.beta_start,
        beta_end=args.beta_end,
        offset_increment=args.offset_increment,
        replicas=args.replicas,
        exchange_interval=args.exchange_interval,
        seed=args.seed,
        threads=args.threads,
    )


def _state_str(x):
    return "".join("1" if b else "0" for b in x)


def _evaluate(obj, x, lam, maximize):
    """Decode a state of the encoded model into report fields."""
    if isinstance(obj, QuboModel):
        e = energy(obj, x)
        return {"objective": _num(-e if maximize else e), "feasible": True, "solution": None, "violations": []}
    sol = problems.decode(obj, x)
    if isinstance(sol, Infeasible):
        return {"objective": None, "feasible": False, "solution": None, "violations": [str(v) for v in sol.violations]}
    return {"objective": _num(problems.objective(obj, sol)), "feasible": True, "solution": _solution_json(sol), "violations": []}


def _model_for(obj, lam):
    if isinstance(obj, QuboModel):
        return obj, None
    lam = problems.default_lambda(obj) if lam is None else lam
    return problems.encode(obj, lam), lam


def _emit(doc):
    sys.stdout.write(json.dumps(doc, indent=1, sort_keys=False) + "\n")


# -- subcommands -------------------------------------------------------------


def cmd_generate(args):
    spec = generators.GenSpec(
        family=args.family,
        n=args.n,
        density=args.density,
        coeff_low=args.coeff_low,
        coeff_high=args.coeff_high,
        cluster_size_low=args.cluster_size[0],
        cluster_size_high=args.cluster_size[1],
        seed=args.seed,
    )
    text = formats.dumps_native(generators.generate(spec))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_encode(args):
    obj = _load(args.input, args.input_format)
    if isinstance(obj, QuboModel):
        raise CliError("input is already a QUBO model")
    fam = problems.family(obj)
    if args.problem and args.problem != fam:
        raise CliError(f"--problem {args.problem} does not match the {fam} instance in {args.input}")
    model, _ = _model_for(obj, args.lam)
    text = formats.write_bqp(model) if args.format == "bqp" else formats.dumps_native(model)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(args):
    obj = _load(args.input, args.input_format, args.maximize)
    model, lam = _model_for(obj, args.lam)
    cfg = _config(args)
    res = anneal(model, cfg)
    doc = {
        "instance_id": Path(args.input).stem,
        "family": "qubo" if isinstance(obj, QuboModel) else problems.family(obj),
        "solver": "annealer",
        "mode": cfg.mode,
        "seed": cfg.seed,
        "iterations": cfg.iterations,
        "lambda": _num(lam),
        "sense": "maximize" if args.maximize else "minimize",
        "best_energy": _num(res.best_energy),
    }
    doc.update(_evaluate(obj, res.best_state, lam, args.maximize))
    doc["flips_accepted"] = res.flips_accepted
    doc["state"] = _state_str(res.best_state)
    if not args.no_timing:
        doc["time_sec"] = round(res.wall_time, 6)
    _emit(doc)
    if args.require_feasible and not doc["feasible"]:
        print("error: best state is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    return 0


def _exact(obj):
    """Exact optimum as ``(objective, solution)``; solution is None for plain QUBOs, Infeasible if none exists."""
    if isinstance(obj, QuboModel):
        e, x = oracle.brute_qubo(obj)
        return e, x
    solver = {"qap": oracle.brute_qap, "qcpp": oracle.brute_qcpp, "selcol": oracle.brute_selcol}[problems.family(obj)]
    out = solver(obj)
    if isinstance(out, Infeasible):
        return None, out
    return out


def cmd_oracle(args):
    obj = _load(args.input, args.input_format, args.maximize)
    t0 = time.perf_counter()
    value, sol = _exact(obj)
    elapsed = time.perf_counter() - t0
    doc = {
        "instance_id": Path(args.input).stem,
        "family": "qubo" if isinstance(obj, QuboModel) else problems.family(obj),
        "solver": "oracle",
        "sense": "maximize" if args.maximize else "minimize",
    }
    if isinstance(obj, QuboModel):
        doc.update(objective=_num(-value if args.maximize else value), best_energy=_num(value), feasible=True, state=_state_str(sol))
    elif isinstance(sol, Infeasible):
        doc.update(objective=None, feasible=False, solution=None, violations=[str(v) for v in sol.violations])
    else:
        doc.update(objective=_num(value), feasible=True, solution=_solution_json(sol))
        if isinstance(sol, SelColSolution):
            doc["colors"] = sol.colors_used
    if not args.no_timing:
        doc["time_sec"] = round(elapsed, 6)
    _emit(doc)
    if args.require_feasible and not doc["feasible"]:
        print("error: instance has no feasible solution", file=sys.stderr)
        return EXIT_INFEASIBLE
    return 0


def cmd_reduce(args):
    obj = _load(args.input, args.input_format)
    if not isinstance(obj, problems.SelColInstance):
        raise CliError("reduce expects a selcol instance")
    reduced, rep = reduce(obj)
    _emit(
        {
            "instance_id": Path(args.input).stem,
            "selection": list(rep.selection),
            "coloring": {str(v): k for v, k in sorted(rep.coloring.items())},
            "greedy_colors": rep.greedy_colors,
            "vars_before": rep.vars_before,
            "vars_after": rep.vars_after,
            "pct_reduction": round(rep.pct_reduction, 6),
        }
    )
    if args.out:
        formats.write_file(args.out, reduced, "native")
    return 0


def _csv_writer(args):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    return buf, w


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        v = _num(v)
        return repr(round(v, 6)) if isinstance(v, float) else str(v)
    return str(v)


def _finish_csv(args, buf):
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _run_solver(solver, model, obj, cfg_base, seed, lam, maximize):
    if solver == "oracle":
        t0 = time.perf_counter()
        value, sol = _exact(obj)
        elapsed = time.perf_counter() - t0
        if isinstance(obj, QuboModel):
            return {"ub": -value if maximize else value, "feasible": True, "time": elapsed}
        if isinstance(sol, Infeasible):
            return {"ub": None, "feasible": False, "time": elapsed}
        return {"ub": value, "feasible": True, "time": elapsed}
    if solver == "qubo_oracle":
        t0 = time.perf_counter()
        _, x = oracle.brute_qubo(model)
        ev = _evaluate(obj, x, lam, maximize)
        return {"ub": ev["objective"], "feasible": ev["feasible"], "time": time.perf_counter() - t0}
    cfg = replace(cfg_base, mode=solver, seed=seed)
    res = anneal(model, cfg)
    ev = _evaluate(obj, res.best_state, lam, maximize)
    return {"ub": ev["objective"], "feasible": ev["feasible"], "time": res.wall_time}


def cmd_bench(args):
    solvers = args.solvers.split(",")
    for s in solvers:
        if s not in ("normal", "parallel", "oracle"):
            raise CliError(f"unknown solver {s!r}")
    ref = args.ref or solvers[0]
    buf, w = _csv_writer(args)
    base = _config(args)
    for path in args.inputs:
        obj = _load(path, args.input_format, args.maximize)
        model, lam = _model_for(obj, args.lam)
        rows = []
        for solver in solvers:
            seeds = [None] if solver == "oracle" else args.seeds
            for seed in seeds:
                out = _run_solver(solver, model, obj, base, seed, lam, args.maximize)
                rows.append((solver, seed, out))
        refs = [o["ub"] for s, _, o in rows if s == ref and o["ub"] is not None]
        ub_ref = min(refs) if refs else None
        lb = None
        if "oracle" in solvers or args.certify:
            exact = [o for s, _, o in rows if s == "oracle"] or [_run_solver("oracle", model, obj, base, None, lam, args.maximize)]
            lb = exact[0]["ub"]
        for solver, seed, out in rows:
            ub = out["ub"]
            nd = norm_diff(ub, ub_ref) if ub is not None and ub_ref not in (None, 0) else None
            gap = pct_gap(ub, lb) if ub is not None and lb is not None and ub != 0 else None
            w.writerow(
                [
                    Path(path).stem,
                    solver,
                    "exact" if solver == "oracle" else solver,
                    _fmt(_num(lam)),
                    "" if seed is None else seed,
                    _fmt(ub),
                    _fmt(out["feasible"]),
                    "" if args.no_timing else _fmt(out["time"]),
                    _fmt(nd),
                    _fmt(gap),
                ]
            )
    _finish_csv(args, buf)
    return 0


def cmd_sweep(args):
    buf, w = _csv_writer(args)
    base = _config(args)
    modes = args.modes.split(",")
    for path in args.inputs:
        obj = _load(path, args.input_format)
        if isinstance(obj, QuboModel):
            raise CliError("sweep needs a constrained problem instance")
        for mode in modes:
            for lam in args.lambdas:
                model = problems.encode(obj, lam)
                for seed in args.seeds:
                    solver = "qubo_oracle" if mode == "oracle" else mode
                    out = _run_solver(solver, model, obj, base, seed, lam, False)
                    w.writerow(
                        [
                            Path(path).stem,
                            mode,
                            "exact" if mode == "oracle" else mode,
                            _fmt(_num(lam)),
                            seed,
                            _fmt(out["ub"]),
                            _fmt(out["feasible"]),
                            "" if args.no_timing else _fmt(out["time"]),
                            "",
                            "",
                        ]
                    )
    _finish_csv(args, buf)
    return 0


def cmd_ordering(args):
    obj = _load(args.input, args.input_format, args.maximize)
    model, lam = _model_for(obj, args.lam)
    cfg = _config(args)
    t0 = time.perf_counter()
    res = ordering_experiment(model, args.k, cfg)
    per_run = (time.perf_counter() - t0) / args.k
    best = min(res.energies)
    buf, w = _csv_writer(args)
    for i, e in enumerate(res.energies):
        nd = norm_diff(e, best) if best != 0 else None
        w.writerow(
            [
                Path(args.input).stem,
                f"perm{i}",
                cfg.mode,
                _fmt(_num(lam)),
                cfg.seed,
                _fmt(-e if args.maximize else e),
                "true",
                "" if args.no_timing else _fmt(per_run),
                _fmt(nd),
                "",
            ]
        )
    _finish_csv(args, buf)
    print(f"avg_pct_diff={res.avg_pct_diff:.6g}", file=sys.stderr)
    return 0


# -- parser ------------------------------------------------------------------


def _add_input(p, multiple=False):
    if multiple:
        p.add_argument("inputs", nargs="+", help="instance or model files")
    else:
        p.add_argument("input", help="instance or model file")
    p.add_argument("--input-format", choices=("native", "bqp", "qaplib"), help="default: from the file suffix")


def _add_anneal(p):
    p.add_argument("--mode", choices=("normal", "parallel"), default="normal")
    p.add_argument("--iters", type=int, default=10_000, help="steps (per replica in parallel mode)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicas", type=int, default=4)
    p.add_argument("--exchange-interval", type=int, default=100)
    p.add_argument("--beta-start", type=float)
    p.add_argument("--beta-end", type=float)
    p.add_argument("--offset-increment", type=float)
    p.add_argument("--threads", type=int, help="worker threads for replicas (env DAQUBO_THREADS)")


def _add_common(p):
    p.add_argument("--lambda", dest="lam", type=float, help="penalty (defaults: qap 16000, qcpp 1000, selcol 5c)")
    p.add_argument("--maximize", action="store_true", help="treat a bqp input as a maximisation problem")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock fields so output is reproducible")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="daqubo", description="Anneal, solve exactly and benchmark QUBO models and the problems encoded into them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random instance as native JSON")
    p.add_argument("--family", choices=generators.FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=0.1)
    p.add_argument("--coeff-low", type=int, default=-100)
    p.add_argument("--coeff-high", type=int, default=100)
    p.add_argument("--cluster-size", type=int, nargs=2, default=(2, 5), metavar=("LOW", "HIGH"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("encode", help="write the QUBO model of a constrained instance")
    _add_input(p)
    p.add_argument("--problem", choices=("qap", "qcpp", "selcol"))
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--format", choices=("native", "bqp"), default="native")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="anneal and report the best state as JSON")
    _add_input(p)
    _add_anneal(p)
    _add_common(p)
    p.add_argument("--require-feasible", action="store_true", help=f"exit {EXIT_INFEASIBLE} if the result is infeasible")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="solve exactly by enumeration")
    _add_input(p)
    p.add_argument("--maximize", action="store_true")
    p.add_argument("--no-timing", action="store_true")
    p.add_argument("--require-feasible", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="shrink a selcol color budget with the two-phase heuristic")
    _add_input(p)
    p.add_argument("--out", help="write the reduced instance here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="compare solvers over instances, CSV output")
    _add_input(p, multiple=True)
    _add_anneal(p)
    _add_common(p)
    p.add_argument("--solvers", default="normal,parallel", help="comma list of normal, parallel, oracle")
    p.add_argument("--seeds", type=_ints, default=[0])
    p.add_argument("--ref", help="reference solver for norm_diff (default: first)")
    p.add_argument("--certify", action="store_true", help="run the oracle for pct_gap even if not listed")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="penalty sweep, CSV output")
    _add_input(p, multiple=True)
    _add_anneal(p)
    p.add_argument("--lambdas", type=_floats, required=True)
    p.add_argument("--modes", default="normal,parallel", help="comma list of normal, parallel, oracle (exact on the encoded model)")
    p.add_argument("--seeds", type=_ints, default=[0])
    p.add_argument("--no-timing", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ordering", help="variable-ordering study, CSV output")
    _add_input(p)
    _add_anneal(p)
    _add_common(p)
    p.add_argument("--k", type=int, default=10, help="number of random permutations")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ordering)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, formats.FormatError, oracle.GuardError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
