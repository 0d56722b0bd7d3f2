"""Benchmark harness: the paper suite, per-cell seeding, statistics and reports."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor, wait, FIRST_COMPLETED
from dataclasses import asdict, dataclass, field

import numpy as np

from .algorithms import GaConfig, run_moga, run_msga
from .core import Instance, InvalidArgument, evaluate_f
from .greedy import greedy_candidates, greedy_solve
from .instances import (
    GeneratorSpec,
    analytic_optimum,
    build_initial_population,
    build_special_I,
    build_special_II,
    gen_average,
    gen_restrictive,
)
from .operators import make_rng
from .oracle import NotApplicable, solve_dp
from .population import Population

ALGORITHMS = ("greedy", "msga", "greedy_msga", "moga", "dp")
GA_ALGORITHMS = ("msga", "greedy_msga", "moga")
LABELS = {
    "greedy": "Greedy",
    "msga": "MSGA",
    "greedy_msga": "Greedy + MSGA",
    "moga": "MOGA",
    "dp": "Optimum",
}
FORMATS = ("csv", "json", "markdown")


@dataclass
class PlanEntry:
    instance: Instance
    rule: str | None
    budgets: dict[str, tuple[int, int]]  # algorithm -> (population, generations)


@dataclass
class ExperimentPlan:
    entries: list[PlanEntry]
    algorithms: tuple[str, ...] = ("greedy", "msga", "greedy_msga", "moga")
    runs: int = 10
    base_seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise InvalidArgument("runs per cell must be at least 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise InvalidArgument(f"unknown algorithms: {sorted(unknown)}")
        for e in self.entries:
            for alg in GA_ALGORITHMS:
                pop, gens = e.budgets.get(alg, (3, 1))
                if pop < 3 or gens < 1:
                    raise InvalidArgument(f"non-positive GA budget for {alg} on {e.instance.name}")


@dataclass
class CellStats:
    instance: str
    algorithm: str
    max: float
    average: float
    stdev: float
    values: list[float]
    seconds: float = 0.0


@dataclass
class RunReport:
    cells: list[CellStats] = field(default_factory=list)
    base_seed: int = 0
    runs: int = 0
    partial: bool = False

    def to_dict(self, timing: bool = True) -> dict:
        doc = asdict(self)
        if not timing:
            for c in doc["cells"]:
                c.pop("seconds")
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "RunReport":
        cells = [CellStats(**c) for c in doc.get("cells", [])]
        return cls(cells, doc.get("base_seed", 0), doc.get("runs", 0), doc.get("partial", False))


def stats(values) -> tuple[float, float, float]:
    """(max, mean, sample standard deviation); stdev is 0 for a single value."""
    vals = [float(v) for v in values]
    if not vals:
        raise InvalidArgument("stats needs at least one value")
    sd = statistics.stdev(vals) if len(vals) > 1 else 0.0
    return max(vals), statistics.fmean(vals), sd


# -- the paper's suite -----------------------------------------------------


def _round_up3(k: int) -> int:
    return k + (-k) % 3


def paper_budgets(inst: Instance, rule: str | None, scale: float = 1.0) -> dict[str, tuple[int, int]]:
    """Population sizes and generation budgets used in the published experiments.

    Random instances: N = 3n, 30n generations (MSGA) and 10n (MOGA).
    Special instances: N = n, 15n and 5n. MOGA populations are rounded up to a
    multiple of 3. ``scale`` shrinks the generation budgets for smoke runs.
    """
    n = inst.n
    if rule is None:
        pop, g_msga, g_moga = 3 * n, 30 * n, 10 * n
    else:
        pop, g_msga, g_moga = n, 15 * n, 5 * n
    g_msga = max(1, math.ceil(g_msga * scale))
    g_moga = max(1, math.ceil(g_moga * scale))
    return {
        "msga": (pop, g_msga),
        "greedy_msga": (pop, g_msga),
        "moga": (_round_up3(pop), g_moga),
    }


def paper_plan(
    base_seed: int,
    runs: int = 10,
    n: int = 100,
    scale: float = 1.0,
    algorithms: tuple[str, ...] = ALGORITHMS,
) -> ExperimentPlan:
    """10 restrictive + 10 average instances (seed = base + index), then I and II."""
    entries = []
    for i in range(20):
        spec = GeneratorSpec("restrictive" if i < 10 else "average", n, seed=base_seed + i)
        inst = gen_restrictive(spec) if i < 10 else gen_average(spec)
        inst = Instance(str(i + 1), inst.profits, inst.weights, inst.capacity)
        entries.append(PlanEntry(inst, None, paper_budgets(inst, None, scale)))
    for label, (inst, rule) in (("I", build_special_I()), ("II", build_special_II())):
        inst = Instance(label, inst.profits, inst.weights, inst.capacity, init_rule=rule)
        entries.append(PlanEntry(inst, rule, paper_budgets(inst, rule, scale)))
    return ExperimentPlan(entries, tuple(algorithms), runs, base_seed)


# -- cells -----------------------------------------------------------------


def cell_rng(base_seed: int, instance_index: int, algorithm: str, run: int) -> np.random.Generator:
    """Independent stream per (instance, algorithm, run) cell."""
    return make_rng([base_seed, instance_index, ALGORITHMS.index(algorithm), run])


def greedy_seeded_population(inst: Instance, size: int, rng: np.random.Generator) -> Population:
    """Greedy output, both greedy fills, then random feasible individuals."""
    y, z = greedy_candidates(inst)
    best = greedy_solve(inst)
    seeds = Population.from_solutions(inst, [best, y, z][:size])
    if size <= 3:
        return seeds
    rest = build_initial_population(inst, None, size - 3, rng)
    return seeds.concat(rest)


def initial_population(inst: Instance, rule: str | None, algorithm: str, size: int, rng) -> Population:
    if algorithm == "greedy_msga":
        return greedy_seeded_population(inst, size, rng)
    return build_initial_population(inst, rule, size, rng)


def run_ga(inst: Instance, rule: str | None, algorithm: str, pop: int, gens: int, rng, trace: bool = False):
    init = initial_population(inst, rule, algorithm, pop, rng)
    cfg = GaConfig(pop, gens)
    runner = run_moga if algorithm == "moga" else run_msga
    return runner(inst, cfg, init, rng, trace=trace)


def reference_optimum(inst: Instance) -> float:
    try:
        return solve_dp(inst).optimum
    except NotApplicable:
        return analytic_optimum(inst).optimum


def _run_cell(inst: Instance, rule, algorithm: str, budget, base_seed: int, index: int, run: int):
    start = time.perf_counter()
    if algorithm == "greedy":
        value = evaluate_f(inst, greedy_solve(inst))
    elif algorithm == "dp":
        value = reference_optimum(inst)
    else:
        pop, gens = budget
        rng = cell_rng(base_seed, index, algorithm, run)
        value = run_ga(inst, rule, algorithm, pop, gens, rng).best_value
    return float(value), time.perf_counter() - start


def _cells(plan: ExperimentPlan):
    for idx, entry in enumerate(plan.entries):
        for alg in plan.algorithms:
            runs = plan.runs if alg in GA_ALGORITHMS else 1
            for j in range(runs):
                yield idx, alg, j


def worker_count() -> int:
    env = os.environ.get("KGA_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_plan(plan: ExperimentPlan, max_seconds: float | None = None, workers: int | None = None) -> RunReport:
    """Run every cell of ``plan``; stop launching cells after ``max_seconds``."""
    workers = worker_count() if workers is None else max(1, workers)
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    results: dict[tuple[int, str, int], tuple[float, float]] = {}
    cells = list(_cells(plan))
    partial = False

    def args(cell):
        idx, alg, j = cell
        e = plan.entries[idx]
        return (e.instance, e.rule, alg, e.budgets.get(alg), plan.base_seed, idx, j)

    if workers == 1:
        for cell in cells:
            if deadline is not None and time.monotonic() > deadline:
                partial = True
                break
            results[cell] = _run_cell(*args(cell))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_run_cell, *args(c)): c for c in cells}
            pending = set(futures)
            while pending:
                timeout = None if deadline is None else max(0.0, deadline - time.monotonic())
                done, pending = wait(pending, timeout=timeout, return_when=FIRST_COMPLETED)
                for fut in done:
                    results[futures[fut]] = fut.result()
                if deadline is not None and time.monotonic() > deadline and pending:
                    partial = True
                    for fut in pending:
                        fut.cancel()
                    break

    report = RunReport(base_seed=plan.base_seed, runs=plan.runs, partial=partial)
    for idx, entry in enumerate(plan.entries):
        for alg in plan.algorithms:
            runs = plan.runs if alg in GA_ALGORITHMS else 1
            got = [results[(idx, alg, j)] for j in range(runs) if (idx, alg, j) in results]
            if not got:
                continue
            values = [v for v, _ in got]
            hi, mean, sd = stats(values)
            report.cells.append(
                CellStats(entry.instance.name, alg, hi, mean, sd, values, sum(s for _, s in got))
            )
    return report


def run_paper_suite(base_seed: int, runs: int = 10, scale: float = 1.0, **kwargs) -> RunReport:
    return run_plan(paper_plan(base_seed, runs, scale=scale), **kwargs)


# -- output ----------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.6g}" if abs(x) < 1e5 else f"{x:.1f}"


def emit_report(report: RunReport, fmt: str = "csv", timing: bool = True) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(timing), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["instance", "algorithm", "max", "average", "stdev"]
        w.writerow(header + ["seconds"] if timing else header)
        for c in report.cells:
            row = [c.instance, c.algorithm, repr(c.max), repr(c.average), repr(c.stdev)]
            w.writerow(row + [f"{c.seconds:.3f}"] if timing else row)
        return buf.getvalue()
    if fmt == "markdown":
        return _markdown(report)
    raise InvalidArgument(f"unknown report format {fmt!r}; choose from {', '.join(FORMATS)}")


def _markdown(report: RunReport) -> str:
    algs = [a for a in ALGORITHMS if any(c.algorithm == a for c in report.cells)]
    by_key = {(c.instance, c.algorithm): c for c in report.cells}
    instances = list(dict.fromkeys(c.instance for c in report.cells))
    head1, head2 = ["Instance"], [""]
    for a in algs:
        if a in GA_ALGORITHMS:
            head1 += [LABELS[a], "", ""]
            head2 += ["max", "average", "stdev"]
        else:
            head1.append(LABELS[a])
            head2.append("")
    lines = ["| " + " | ".join(head1) + " |", "|" + "---|" * len(head1), "| " + " | ".join(head2) + " |"]
    for name in instances:
        row = [name]
        for a in algs:
            c = by_key.get((name, a))
            width = 3 if a in GA_ALGORITHMS else 1
            if c is None:
                row += ["-"] * width
            elif width == 3:
                row += [_fmt(c.max), _fmt(c.average), f"{c.stdev:.3g}"]
            else:
                row.append(_fmt(c.max))
        lines.append("| " + " | ".join(row) + " |")
    if report.partial:
        lines.append("")
        lines.append("_partial results: the time budget ran out before every cell finished_")
    return "\n".join(lines) + "\n"
