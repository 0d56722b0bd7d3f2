"""Greedy 1/2-approximation: best of a ratio-ordered and a profit-ordered fill."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import Instance, InvalidArgument, Solution


def ratio_order(inst: Instance) -> np.ndarray:
    """Items by non-increasing profit/weight, ties by ascending index."""
    return np.argsort(-inst.ratios, kind="stable")


def profit_order(inst: Instance) -> np.ndarray:
    return np.argsort(-inst.profits, kind="stable")


def greedy_fill(inst: Instance, order: Sequence[int]) -> Solution:
    """Scan ``order`` (0-based item indices) adding every item that still fits.

    Items that do not fit are skipped; the scan continues with the next one.
    """
    order = np.asarray(order, dtype=np.intp)
    if order.size != inst.n or not np.array_equal(np.sort(order), np.arange(inst.n)):
        raise InvalidArgument("order must be a permutation of the item indices")
    s = Solution.empty(inst)
    room = inst.limit
    for i in order.tolist():
        w = inst.weights[i]
        if w <= room:
            s.flip(inst, i)
            room -= w
    return s


def greedy_candidates(inst: Instance) -> tuple[Solution, Solution]:
    return greedy_fill(inst, ratio_order(inst)), greedy_fill(inst, profit_order(inst))


def greedy_solve(inst: Instance) -> Solution:
    y, z = greedy_candidates(inst)
    return z if z.total_profit > y.total_profit else y
