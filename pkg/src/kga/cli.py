"""Command-line entry point: ``kga gen | solve | bench``.

Exit codes: 0 success, 2 invalid arguments, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bench import (
    FORMATS,
    cell_rng,
    emit_report,
    paper_budgets,
    run_ga,
    run_paper_suite,
    stats,
)
from .core import Instance, InvalidArgument
from .greedy import greedy_solve
from .instances import GeneratorSpec, analytic_optimum, generate
from .oracle import BudgetError, NotApplicable, solve_dp

EXIT_INVALID = 2
EXIT_BUDGET = 3

KIND_ALIASES = {
    "restrictive": "restrictive",
    "average": "average",
    "special-I": "special_I",
    "special-II": "special_II",
}
DEFAULT_N = {"restrictive": 100, "average": 100, "special_I": 500, "special_II": 200}
SOLVE_ALGS = {"greedy": "greedy", "dp": "dp", "msga": "msga", "greedy-msga": "greedy_msga", "moga": "moga"}


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen(args) -> int:
    kind = KIND_ALIASES[args.kind]
    n = args.n if args.n is not None else DEFAULT_N[kind]
    spec = GeneratorSpec(kind, n, B=args.B, alpha=args.alpha, seed=args.seed)
    _write(generate(spec).dumps() + "\n", args.output)
    return 0


def cmd_solve(args) -> int:
    inst = Instance.load(args.instance)
    alg = SOLVE_ALGS[args.alg]
    out = {"instance": inst.name, "algorithm": alg}
    if alg == "greedy":
        s = greedy_solve(inst)
        out.update(value=s.total_profit, solution=s.bitstring())
    elif alg == "dp":
        try:
            res = solve_dp(inst)
        except NotApplicable:
            if inst.init_rule is None:
                raise
            res = analytic_optimum(inst)
        out.update(value=res.optimum, solution=res.witness.bitstring(), method=res.method)
    else:
        default_pop, default_gens = paper_budgets(inst, inst.init_rule)[alg]
        pop = args.pop or default_pop
        gens = args.gens or default_gens
        values, traces, best = [], [], None
        for j in range(args.runs):
            rng = cell_rng(args.seed, 0, alg, j)
            res = run_ga(inst, inst.init_rule, alg, pop, gens, rng, trace=args.trace is not None)
            values.append(res.best_value)
            traces.append(res.trace)
            if best is None or res.best_value > best.best_value:
                best = res
        hi, mean, sd = stats(values)
        out.update(
            population=pop,
            generations=gens,
            values=values,
            max=hi,
            average=mean,
            stdev=sd,
            solution=best.best_solution.bitstring(),
        )
        if args.trace:
            lines = ["run,generation,best"]
            for j, tr in enumerate(traces):
                lines += [f"{j},{g + 1},{v!r}" for g, v in enumerate(tr)]
            Path(args.trace).write_text("\n".join(lines) + "\n")
    print(json.dumps(out, indent=2))
    return 0


def cmd_bench(args) -> int:
    report = run_paper_suite(
        args.base_seed,
        runs=args.runs,
        scale=args.budget_scale,
        max_seconds=args.max_seconds,
    )
    _write(emit_report(report, args.format, timing=not args.no_timing), args.output)
    if report.partial:
        print("time budget exhausted; report is partial", file=sys.stderr)
        return EXIT_BUDGET
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kga", description="0-1 knapsack GA benchmark harness")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--kind", choices=list(KIND_ALIASES), required=True)
    g.add_argument("--n", type=int, help="item count (default 100; 500/200 for special)")
    g.add_argument("--B", type=int, help="profit/weight bound (default n)")
    g.add_argument("--alpha", type=float, default=0.2, help="special-I shape parameter")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run one algorithm on an instance file")
    s.add_argument("--alg", choices=list(SOLVE_ALGS), required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--pop", type=int, help="population size (default: paper budget)")
    s.add_argument("--gens", type=int, help="generations (default: paper budget)")
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trace", help="write per-generation best values as CSV")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run the benchmark suite")
    b.add_argument("--suite", choices=["paper"], default="paper")
    b.add_argument("--base-seed", type=int, default=0)
    b.add_argument("--runs", type=int, default=10)
    b.add_argument("--format", choices=list(FORMATS), default="markdown")
    b.add_argument("--max-seconds", type=float)
    b.add_argument("--budget-scale", type=float, default=1.0,
                   help="multiply generation budgets, e.g. 0.1 for a smoke run")
    b.add_argument("--no-timing", action="store_true", help="omit wall-clock columns")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (InvalidArgument, NotApplicable, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
