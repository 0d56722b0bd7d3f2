"""Variation, repair and fitness-proportional selection.

Every operator has a population form (used by the GA loops) and a
single-solution form; the latter wraps the former on a one-row population,
so both share one code path.  Inputs are never modified.

Random streams are :class:`numpy.random.Generator` objects backed by PCG64
(see :func:`make_rng`).
"""

from __future__ import annotations

import enum
import logging

import numpy as np

from .core import Instance, InvalidArgument, Solution
from . import _kernels
from .population import Population, item_table

log = logging.getLogger(__name__)


class RepairMethod(enum.IntEnum):
    RATIO_GREEDY = 0
    PROFIT_GREEDY = 1
    RANDOM = 2


def make_rng(seed) -> np.random.Generator:
    """PCG64 stream; ``seed`` may be an int, a sequence of ints or a SeedSequence."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


# -- mutation / crossover --------------------------------------------------


def mutate_population(inst: Instance, pop: Population, rng: np.random.Generator) -> Population:
    """One child per parent, each bit flipped independently with probability 1/n."""
    child = pop.copy()
    _kernels.mutate(child.bits, child.totals, child.count, item_table(inst), rng)
    return child


def crossover_population(inst: Instance, pop: Population, rng: np.random.Generator) -> Population:
    """Shuffle parents, pair them consecutively and apply one-point crossover.

    Children of pair ``j`` land in rows ``2j`` and ``2j + 1``; with an odd
    population the unpaired parent is copied into the last row.
    """
    child = Population(np.empty_like(pop.bits), np.empty_like(pop.totals), np.empty_like(pop.count))
    _kernels.crossover(pop.bits, child.bits, rng)
    _kernels.recompute_rows(
        child.bits, child.totals, child.count, item_table(inst), np.arange(len(child))
    )
    return child


def bitwise_mutation(inst: Instance, s: Solution, rng: np.random.Generator) -> Solution:
    _check_len(inst, s)
    return mutate_population(inst, _single(inst, s), rng).solution(0)


def one_point_crossover(
    inst: Instance,
    a: Solution,
    b: Solution,
    rng: np.random.Generator,
    k: int | None = None,
) -> tuple[Solution, Solution]:
    """Children ``a[:k] + b[k:]`` and ``b[:k] + a[k:]`` with k uniform in 1..n.

    Passing ``k`` fixes the crossover point instead of drawing it.
    """
    if a.n != b.n:
        raise InvalidArgument(f"parents differ in length ({a.n} vs {b.n})")
    _check_len(inst, a)
    n = a.n
    if k is None:
        k = int(rng.integers(1, n + 1))
    elif not 1 <= k <= n:
        raise InvalidArgument(f"crossover point {k} outside 1..{n}")
    c1 = np.concatenate([a.bits[:k], b.bits[k:]])
    c2 = np.concatenate([b.bits[:k], a.bits[k:]])
    return Solution.from_bits(inst, c1), Solution.from_bits(inst, c2)


# -- repair ----------------------------------------------------------------


def removal_order(inst: Instance, method: RepairMethod) -> np.ndarray:
    """Item order in which a greedy repair removes packed items."""
    cache = getattr(inst, "_removal_orders", None)
    if cache is None:
        # stable sort: equal keys are removed lowest index first
        cache = (np.argsort(inst.ratios, kind="stable"), np.argsort(inst.profits, kind="stable"))
        object.__setattr__(inst, "_removal_orders", cache)
    return cache[0] if method == RepairMethod.RATIO_GREEDY else cache[1]


def repair_population(
    inst: Instance,
    pop: Population,
    rng: np.random.Generator,
    method: RepairMethod | None = None,
    *,
    inplace: bool = False,
) -> Population:
    """Repair every infeasible row of ``pop`` (a copy unless ``inplace``).

    With ``method=None`` each infeasible row draws its own method uniformly
    from the three :class:`RepairMethod` values (the mixed strategy).
    """
    out = pop if inplace else pop.copy()
    _kernels.repair(
        out.bits,
        out.totals,
        out.count,
        item_table(inst),
        inst.limit,
        removal_order(inst, RepairMethod.RATIO_GREEDY),
        removal_order(inst, RepairMethod.PROFIT_GREEDY),
        -1 if method is None else int(method),
        rng,
    )
    return out


def repair(
    inst: Instance, s: Solution, method: RepairMethod, rng: np.random.Generator
) -> Solution:
    """Remove packed items chosen by ``method`` until ``s`` is feasible."""
    _check_len(inst, s)
    return repair_population(inst, _single(inst, s), rng, RepairMethod(method)).solution(0)


def draw_repair_method(rng: np.random.Generator) -> RepairMethod:
    return RepairMethod(int(rng.integers(0, 3)))


def mixed_repair(inst: Instance, s: Solution, rng: np.random.Generator) -> Solution:
    """Repair with a method drawn uniformly from the three repair methods."""
    return repair(inst, s, draw_repair_method(rng), rng)


# -- selection -------------------------------------------------------------


def roulette_indices(f_values, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` indices with replacement, P(i) = f_i / sum(f)."""
    f = np.asarray(f_values, dtype=np.float64)
    if count < 0:
        raise InvalidArgument("count must be non-negative")
    if count == 0:
        return np.empty(0, dtype=np.intp)
    if f.size == 0:
        raise InvalidArgument("cannot select from an empty pool")
    if np.any(f < 0):
        raise InvalidArgument("roulette selection needs non-negative fitness")
    cum = np.cumsum(f)
    if not cum[-1] > 0:
        log.info("all-zero fitness in roulette selection; drawing uniformly")
        return rng.integers(0, f.size, size=count)
    u = rng.random(count) * cum[-1]
    return np.minimum(np.searchsorted(cum, u, side="right"), f.size - 1)


def roulette_select(
    pool: Population, f_values, count: int, rng: np.random.Generator
) -> Population:
    if len(f_values) != len(pool):
        raise InvalidArgument("one fitness value per pool member is required")
    return pool.take(roulette_indices(f_values, count, rng))


# -- helpers ---------------------------------------------------------------


def _check_len(inst: Instance, s: Solution) -> None:
    if s.n != inst.n:
        raise InvalidArgument(f"solution has length {s.n}, instance has n={inst.n}")


def _single(inst: Instance, s: Solution) -> Population:
    return Population.from_bits(inst, s.bits[None, :])
