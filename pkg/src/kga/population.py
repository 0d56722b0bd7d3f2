"""Row-major population storage used by the GA loops.

A :class:`Population` keeps all bit vectors in one ``(N, n)`` boolean matrix
together with per-row cached totals (profit, weight, ratio sum, item count),
so that variation and selection operate on whole populations at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import Instance, InvalidArgument, Solution


def item_table(inst: Instance) -> np.ndarray:
    """``(n, 3)`` matrix of per-item profit, weight and profit/weight ratio."""
    table = getattr(inst, "_item_table", None)
    if table is None:
        table = np.column_stack([inst.profits, inst.weights, inst.ratios])
        table.setflags(write=False)
        object.__setattr__(inst, "_item_table", table)
    return table


@dataclass(eq=False)
class Population:
    bits: np.ndarray  # (N, n) bool
    totals: np.ndarray  # (N, 3) float: profit, weight, ratio sum
    count: np.ndarray  # (N,) int

    @classmethod
    def from_bits(cls, inst: Instance, bits) -> "Population":
        b = np.array(bits, dtype=bool, ndmin=2)
        if b.shape[1] != inst.n:
            raise InvalidArgument(f"rows have length {b.shape[1]}, instance has n={inst.n}")
        pop = cls(b, np.zeros((b.shape[0], 3)), np.zeros(b.shape[0], dtype=np.int64))
        pop.recompute(inst)
        return pop

    @classmethod
    def from_solutions(cls, inst: Instance, sols: Iterable[Solution]) -> "Population":
        rows = [s.bits for s in sols]
        if not rows:
            return cls.from_bits(inst, np.zeros((0, inst.n), dtype=bool))
        return cls.from_bits(inst, np.vstack(rows))

    def recompute(self, inst: Instance, rows=None) -> None:
        """Refresh cached totals from the bits (all rows, or the given ones)."""
        if rows is None:
            self.totals = self.bits @ item_table(inst) if len(self) else np.zeros((0, 3))
            self.count = self.bits.sum(axis=1)
        elif len(rows):
            sub = self.bits[rows]
            self.totals[rows] = sub @ item_table(inst)
            self.count[rows] = sub.sum(axis=1)

    def settle(self) -> None:
        """Reset totals of empty rows to exact zeros after incremental updates."""
        self.totals[self.count == 0] = 0.0

    def __len__(self) -> int:
        return int(self.bits.shape[0])

    @property
    def profit(self) -> np.ndarray:
        return self.totals[:, 0]

    @property
    def weight(self) -> np.ndarray:
        return self.totals[:, 1]

    def h1(self) -> np.ndarray:
        c = np.maximum(self.count, 1)
        return np.where(self.count > 0, self.totals[:, 0] / c, 0.0)

    def h2(self) -> np.ndarray:
        c = np.maximum(self.count, 1)
        return np.where(self.count > 0, self.totals[:, 2] / c, 0.0)

    def feasible(self, inst: Instance) -> np.ndarray:
        return self.totals[:, 1] <= inst.limit

    def take(self, idx) -> "Population":
        idx = np.asarray(idx, dtype=np.intp)
        return Population(self.bits[idx], self.totals[idx], self.count[idx])

    def concat(self, other: "Population") -> "Population":
        return Population(
            np.concatenate([self.bits, other.bits]),
            np.concatenate([self.totals, other.totals]),
            np.concatenate([self.count, other.count]),
        )

    def copy(self) -> "Population":
        return Population(self.bits.copy(), self.totals.copy(), self.count.copy())

    def solution(self, i: int) -> Solution:
        return Solution(
            self.bits[i].copy(),
            float(self.totals[i, 0]),
            float(self.totals[i, 1]),
            int(self.count[i]),
        )

    def solutions(self) -> list[Solution]:
        return [self.solution(i) for i in range(len(self))]
