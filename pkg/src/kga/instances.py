"""Benchmark instances: seeded random instances and the two special instances.

Special instances carry an ``init_rule`` tag that tells
:func:`build_initial_population` how to seed GA populations on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .core import Instance, InvalidArgument, Solution, evaluate_f
from .operators import RepairMethod, make_rng, repair_population
from .oracle import OracleResult
from .population import Population

KINDS = ("restrictive", "average", "special_I", "special_II")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    B: int | None = None
    alpha: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown instance kind {self.kind!r}")
        if self.n < 1:
            raise InvalidArgument("n must be positive")
        if self.B is not None and self.B < 1:
            raise InvalidArgument("B must be positive")
        if self.kind == "special_I" and not 0 < self.alpha < 1:
            raise InvalidArgument("alpha must lie in (0, 1)")

    @property
    def bound(self) -> int:
        return self.n if self.B is None else self.B


def _random_items(spec: GeneratorSpec) -> tuple[np.ndarray, np.ndarray]:
    rng = make_rng(spec.seed)
    profits = rng.integers(1, spec.bound + 1, size=spec.n)
    weights = rng.integers(1, spec.bound + 1, size=spec.n)
    return profits.astype(np.float64), weights.astype(np.float64)


def gen_restrictive(spec: GeneratorSpec) -> Instance:
    """Integer profits/weights uniform on 1..B, capacity B (few items fit)."""
    p, w = _random_items(spec)
    return Instance(f"restrictive-n{spec.n}-s{spec.seed}", p, w, float(spec.bound))


def gen_average(spec: GeneratorSpec) -> Instance:
    """Integer profits/weights uniform on 1..B, capacity 0.25 n B (about half fit)."""
    p, w = _random_items(spec)
    return Instance(f"average-n{spec.n}-s{spec.seed}", p, w, 0.25 * spec.n * spec.bound)


def _special_I_split(n: int, alpha: float) -> int:
    """Number of unit items, ceil(n / (1 + alpha)), computed exactly."""
    return math.ceil(Fraction(n) / (1 + Fraction(str(alpha))))


def build_special_I(n: int = 500, alpha: float = 0.2) -> tuple[Instance, str]:
    """Unit items, one big item that alone nearly fills the knapsack, tiny items."""
    m = _special_I_split(n, alpha)
    if m + 1 > n:
        raise InvalidArgument(f"n={n}, alpha={alpha} leaves no room for the big item")
    cap = n / (1 + alpha)
    small = n - m - 1
    profits = np.concatenate([np.ones(m), [alpha * n / (1 + alpha)], np.full(small, 1 / n)])
    weights = np.concatenate(
        [np.ones(m), [cap - alpha / (4 + 4 * alpha)], np.full(small, 1 / (2 * n))]
    )
    inst = Instance(f"special-I-n{n}", profits, weights, cap, init_rule="special_I")
    return inst, "special_I"


def build_special_II(n: int = 200) -> tuple[Instance, str]:
    """Three item groups; the optimum packs exactly the low-ratio third group."""
    if n % 4:
        raise InvalidArgument(f"special instance II needs n divisible by 4, got {n}")
    q = n // 4
    root = math.sqrt(n)
    profits = np.concatenate(
        [np.full(q, 0.25 * n * root + 2), np.full(q, 0.3 * n * root), np.full(2 * q, root)]
    )
    weights = np.concatenate(
        [np.full(q, 0.25 * n * root + 1), np.full(q, 0.5 * n * root), np.full(2 * q, root)]
    )
    inst = Instance(f"special-II-n{n}", profits, weights, 0.5 * n * root, init_rule="special_II")
    return inst, "special_II"


def generate(spec: GeneratorSpec) -> Instance:
    if spec.kind == "restrictive":
        return gen_restrictive(spec)
    if spec.kind == "average":
        return gen_average(spec)
    if spec.kind == "special_I":
        return build_special_I(spec.n, spec.alpha)[0]
    return build_special_II(spec.n)[0]


def special_groups(inst: Instance, rule: str) -> tuple[np.ndarray, ...]:
    """Index groups the initialisation rule refers to."""
    n = inst.n
    if rule == "special_I":
        big = int(np.argmax(inst.weights))
        return np.arange(big), np.array([big]), np.arange(big + 1, n)
    if rule == "special_II":
        q = n // 4
        return np.arange(q), np.arange(q, 2 * q), np.arange(2 * q, n)
    raise InvalidArgument(f"unknown initial population rule {rule!r}")


def _choose_half(rows: int, group: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """For each row, exactly floor(len/2) members of ``group`` chosen uniformly."""
    half = group.size // 2
    if half == 0:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.intp)
    picks = np.argsort(rng.random((rows, group.size)), axis=1)[:, :half]
    return np.repeat(np.arange(rows), half), group[picks.ravel()]


def build_initial_population(
    inst: Instance, rule: str | None, size: int, rng: np.random.Generator
) -> Population:
    """``size`` feasible individuals.

    Without a rule every bit is a fair coin and infeasible rows get random
    repair; with a special rule the table-prescribed bits are set and any
    infeasible row gets mixed repair.
    """
    if size < 1:
        raise InvalidArgument("population size must be positive")
    if rule is None:
        bits = rng.random((size, inst.n)) < 0.5
        return repair_population(inst, Population.from_bits(inst, bits), rng, RepairMethod.RANDOM)
    bits = np.zeros((size, inst.n), dtype=bool)
    g1, g2, g3 = special_groups(inst, rule)
    if rule == "special_I":
        bits[:, g2] = True
    else:
        bits[np.arange(size), rng.choice(g1, size=size)] = True
    r, c = _choose_half(size, g3, rng)
    bits[r, c] = True
    return repair_population(inst, Population.from_bits(inst, bits), rng)


def analytic_optimum(inst: Instance) -> OracleResult:
    """Exact optimum for instances made of a few groups of identical items.

    Enumerates how many items to take from every group but the last, then
    fills the last group as far as capacity allows. Intended for the special
    instances, whose optima follow from this case analysis.
    """
    keys = list(zip(inst.profits.tolist(), inst.weights.tolist()))
    groups: dict[tuple[float, float], list[int]] = {}
    for i, k in enumerate(keys):
        groups.setdefault(k, []).append(i)
    kinds = list(groups)
    combos = math.prod(len(groups[k]) + 1 for k in kinds[:-1])
    if len(kinds) > 4 or combos > 10**6:
        raise InvalidArgument("instance has too many distinct item types for the analytic oracle")
    (p_last, w_last) = kinds[-1]
    n_last = len(groups[kinds[-1]])
    best = (-1.0, None)
    for counts in product(*(range(len(groups[k]) + 1) for k in kinds[:-1])):
        used = sum(c * k[1] for c, k in zip(counts, kinds))
        if used > inst.limit:
            continue
        extra = min(n_last, int((inst.limit - used) // w_last))
        value = sum(c * k[0] for c, k in zip(counts, kinds)) + extra * p_last
        if value > best[0]:
            best = (value, counts + (extra,))
    bits = np.zeros(inst.n, dtype=bool)
    for k, c in zip(kinds, best[1]):
        # highest indices of the group: lowest bit string within the group
        members = groups[k]
        bits[members[len(members) - c :]] = True
    witness = Solution.from_bits(inst, bits)
    return OracleResult(evaluate_f(inst, witness), witness, "analytic")
