"""Mixed-strategy GA (MSGA) and the helper-objective GA (MOGA).

Both loops share :func:`make_children`: one uniform draw per generation picks
bitwise mutation of every parent (probability ``mutation_branch_prob``) or
one-point crossover of shuffled parent pairs, after which each infeasible
child is repaired by a uniformly chosen repair method.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import Instance, InvalidArgument, Solution, evaluate_f
from .population import Population
from .operators import (
    crossover_population,
    make_rng,
    mutate_population,
    repair_population,
    roulette_indices,
)

log = logging.getLogger(__name__)

# Relative tolerance used when deciding whether two h1/h2 values differ.
HELPER_REL_TOL = 1e-9


@dataclass
class GaConfig:
    pop_size: int
    max_generations: int
    mutation_branch_prob: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.pop_size < 3:
            raise InvalidArgument("population size must be at least 3")
        if self.max_generations < 1:
            raise InvalidArgument("generation budget must be positive")
        if not 0.0 <= self.mutation_branch_prob <= 1.0:
            raise InvalidArgument("mutation_branch_prob must lie in [0, 1]")

    def check_moga(self) -> None:
        if self.pop_size % 3:
            raise InvalidArgument(f"MOGA needs a population size divisible by 3, got {self.pop_size}")


@dataclass
class GaRunResult:
    best_value: float
    best_solution: Solution
    generations_run: int
    final_best: float
    trace: list[float] | None = field(default=None, repr=False)


def make_children(
    pop: Population, cfg: GaConfig, inst: Instance, rng: np.random.Generator
) -> Population:
    if rng.random() < cfg.mutation_branch_prob:
        children = mutate_population(inst, pop, rng)
    else:
        children = crossover_population(inst, pop, rng)
    return repair_population(inst, children, rng, inplace=True)


class _BestTracker:
    def __init__(self, trace: bool):
        self.value = -math.inf
        self.bits = None
        self.trace = [] if trace else None

    def update(self, pop: Population, record: bool = True) -> None:
        i = int(np.argmax(pop.profit))
        if pop.profit[i] > self.value:
            self.value = float(pop.profit[i])
            self.bits = pop.bits[i].copy()
        if record and self.trace is not None:
            self.trace.append(self.value)

    def result(self, inst: Instance, pop: Population, generations: int) -> GaRunResult:
        best = Solution.from_bits(inst, self.bits)
        return GaRunResult(
            best_value=evaluate_f(inst, best),
            best_solution=best,
            generations_run=generations,
            final_best=float(pop.profit.max()),
            trace=self.trace,
        )


def _start(inst: Instance, cfg: GaConfig, init, rng) -> tuple[Population, np.random.Generator]:
    pop = init if isinstance(init, Population) else Population.from_solutions(inst, init)
    if len(pop) != cfg.pop_size:
        raise InvalidArgument(f"initial population has {len(pop)} members, expected {cfg.pop_size}")
    if not pop.feasible(inst).all():
        raise InvalidArgument("initial population must be feasible")
    return pop.copy(), make_rng(cfg.seed) if rng is None else rng


def run_msga(
    inst: Instance,
    cfg: GaConfig,
    init,
    rng: np.random.Generator | None = None,
    trace: bool = False,
) -> GaRunResult:
    """Elitist GA with roulette-wheel survivor selection on profit."""
    pop, rng = _start(inst, cfg, init, rng)
    n_pop = cfg.pop_size
    best = _BestTracker(trace)
    best.update(pop, record=False)
    for _ in range(cfg.max_generations):
        children = make_children(pop, cfg, inst, rng)
        merged = pop.concat(children)
        f = merged.profit
        elite = int(np.argmax(f))
        picks = np.concatenate([[elite], roulette_indices(f, n_pop - 1, rng)])
        pop = merged.take(picks)
        best.update(pop)
    return best.result(inst, pop, cfg.max_generations)


def diversity_scan(order, keys, limit: int, rel_tol: float = 0.0) -> np.ndarray:
    """Walk ``order`` keeping entries whose keys differ from the last kept one.

    ``keys`` is a list of arrays indexed like the population; an entry is kept
    if any key differs (relative tolerance ``rel_tol``) from the most recently
    kept entry. The first entry is always kept; at most ``limit`` are returned.
    """
    order = np.asarray(order, dtype=np.int64)
    table = np.array([np.asarray(k, dtype=np.float64) for k in keys], ndmin=2)
    return _kernels.diversity_scan(order, table, max(int(limit), 0), float(rel_tol))


def tie_key(values: np.ndarray, rel_tol: float = HELPER_REL_TOL) -> np.ndarray:
    """Sort key that treats values within ``rel_tol`` of the largest magnitude as equal.

    Averages such as k*x/k differ from x in the last bits, which would otherwise
    order mathematically tied individuals by roundoff instead of by profit.
    """
    scale = float(np.abs(values).max()) * rel_tol if values.size else 0.0
    if scale == 0.0:
        return values
    return np.round(values / scale)


def multi_criteria_select(
    parents: Population,
    children: Population,
    n_pop: int,
    inst: Instance,
    rng: np.random.Generator,
) -> Population:
    """Three sorted diversity passes of ``n_pop / 3`` each, topped up from the parents.

    Pass 1 sorts the merged population by profit and keeps entries with a new
    (h1, h2) pair; passes 2 and 3 sort by h1 and h2 and keep entries with a new
    item count. Ties sort by profit, then by merged index (parents first).
    """
    if len(parents) != n_pop or len(children) != n_pop:
        raise InvalidArgument("parents and children must both have n_pop members")
    if n_pop % 3:
        raise InvalidArgument("n_pop must be divisible by 3")
    merged = parents.concat(children)
    third = n_pop // 3
    neg_f = -merged.profit
    h1, h2, h3 = merged.h1(), merged.h2(), merged.count

    by_f = np.argsort(neg_f, kind="stable")
    by_h1 = np.lexsort((neg_f, -tie_key(h1)))
    by_h2 = np.lexsort((neg_f, -tie_key(h2)))
    chosen = [
        diversity_scan(by_f, [h1, h2], third, HELPER_REL_TOL),
        diversity_scan(by_h1, [h3], third),
        diversity_scan(by_h2, [h3], third),
    ]
    short = n_pop - sum(c.size for c in chosen)
    chosen.append(rng.integers(0, n_pop, size=short))
    return merged.take(np.concatenate(chosen))


def run_moga(
    inst: Instance,
    cfg: GaConfig,
    init,
    rng: np.random.Generator | None = None,
    trace: bool = False,
) -> GaRunResult:
    cfg.check_moga()
    pop, rng = _start(inst, cfg, init, rng)
    best = _BestTracker(trace)
    best.update(pop, record=False)
    for _ in range(cfg.max_generations):
        children = make_children(pop, cfg, inst, rng)
        pop = multi_criteria_select(pop, children, cfg.pop_size, inst, rng)
        best.update(pop)
    return best.result(inst, pop, cfg.max_generations)
