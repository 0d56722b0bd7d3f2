"""Exact optima for verification: brute force and dynamic programming.

Neither GA uses these; they exist for tests and as the reference column of
the benchmark tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Instance, Solution, evaluate_f

EXHAUSTIVE_MAX_N = 24
DP_MAX_CELLS = 10**8


class BudgetError(RuntimeError):
    """The instance is too large for the requested exact method."""


class NotApplicable(ValueError):
    """The exact method cannot handle this instance (e.g. fractional weights)."""


@dataclass
class OracleResult:
    optimum: float
    witness: Solution
    method: str  # "dp", "exhaustive" or "analytic"


def solve_exhaustive(inst: Instance) -> OracleResult:
    """Enumerate all 2^n vectors; ties go to the lowest bit string.

    Subset sums are built by doubling, with item 1 as the most significant bit,
    so array position equals the bit string read as a binary number.
    """
    n = inst.n
    if n > EXHAUSTIVE_MAX_N:
        raise BudgetError(f"exhaustive search limited to n <= {EXHAUSTIVE_MAX_N}, got {n}")
    profit = np.zeros(1)
    weight = np.zeros(1)
    for i in range(n - 1, -1, -1):
        profit = np.concatenate([profit, profit + inst.profits[i]])
        weight = np.concatenate([weight, weight + inst.weights[i]])
    value = np.where(weight <= inst.limit, profit, -np.inf)
    code = int(np.argmax(value))  # first maximum = lowest bit string
    bits = [(code >> (n - 1 - i)) & 1 for i in range(n)]
    witness = Solution.from_bits(inst, bits)
    return OracleResult(evaluate_f(inst, witness), witness, "exhaustive")


def solve_dp(inst: Instance) -> OracleResult:
    """Dynamic programme over integer weights, suffix items first.

    A fractional capacity is rounded down, which is exact for integer weights.
    Reconstruction walks items 1..n and packs an item only when that is
    strictly better, giving the lowest optimal bit string.
    """
    w = inst.weights
    if not np.all(w == np.round(w)):
        raise NotApplicable("dynamic programming needs integer weights")
    n, cap = inst.n, int(math.floor(inst.limit))
    if n * cap > DP_MAX_CELLS:
        raise BudgetError(f"n * capacity = {n * cap} exceeds {DP_MAX_CELLS}")
    wi = w.astype(np.int64)
    best = np.zeros(cap + 1)
    take = np.zeros((n, cap + 1), dtype=bool)
    for i in range(n - 1, -1, -1):
        if wi[i] > cap:
            continue
        cand = best[: cap + 1 - wi[i]] + inst.profits[i]
        better = cand > best[wi[i] :]
        take[i, wi[i] :] = better
        best[wi[i] :] = np.where(better, cand, best[wi[i] :])
    bits = np.zeros(n, dtype=bool)
    room = cap
    for i in range(n):
        if take[i, room]:
            bits[i] = True
            room -= wi[i]
    witness = Solution.from_bits(inst, bits)
    return OracleResult(evaluate_f(inst, witness), witness, "dp")


def solve(inst: Instance) -> OracleResult:
    """Pick the cheapest applicable exact method."""
    if inst.n <= 16:
        return solve_exhaustive(inst)
    return solve_dp(inst)
