"""Problem representation for the 0-1 knapsack problem.

Holds the immutable :class:`Instance`, the mutable :class:`Solution` with
cached totals, the objective / helper-objective evaluators and the JSON
instance format shared by every CLI command.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

# Absolute slack on the capacity constraint; absorbs summation-order roundoff.
WEIGHT_EPS = 1e-6

INIT_RULES = ("special_I", "special_II")


class InvalidArgument(ValueError):
    """Raised when an argument violates an operation's precondition."""


@dataclass(frozen=True, eq=False)
class Instance:
    name: str
    profits: np.ndarray
    weights: np.ndarray
    capacity: float
    init_rule: str | None = None

    def __post_init__(self):
        p = np.array(self.profits, dtype=np.float64)
        w = np.array(self.weights, dtype=np.float64)
        if p.ndim != 1 or w.ndim != 1 or p.shape != w.shape:
            raise InvalidArgument("profits and weights must be 1-d sequences of equal length")
        if p.size < 1:
            raise InvalidArgument("instance needs at least one item")
        if not (np.all(p > 0) and np.all(w > 0)):
            raise InvalidArgument("profits and weights must be strictly positive")
        if not self.capacity > 0:
            raise InvalidArgument("capacity must be positive")
        if self.init_rule is not None and self.init_rule not in INIT_RULES:
            raise InvalidArgument(f"unknown initial population rule {self.init_rule!r}")
        p.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "profits", p)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "capacity", float(self.capacity))
        ratios = p / w
        ratios.setflags(write=False)
        object.__setattr__(self, "ratios", ratios)

    @property
    def n(self) -> int:
        return int(self.profits.size)

    @property
    def limit(self) -> float:
        """Largest total weight still considered feasible."""
        return self.capacity + WEIGHT_EPS

    def __repr__(self):
        return f"Instance(name={self.name!r}, n={self.n}, capacity={self.capacity!r})"

    # -- JSON format -------------------------------------------------------

    def to_dict(self) -> dict:
        doc = {
            "name": self.name,
            "n": self.n,
            "capacity": self.capacity,
            "items": [
                {"profit": float(p), "weight": float(w)}
                for p, w in zip(self.profits, self.weights)
            ],
        }
        if self.init_rule is not None:
            doc["initial_population_rule"] = self.init_rule
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "Instance":
        try:
            items = doc["items"]
            n = int(doc["n"])
            inst = cls(
                name=str(doc.get("name", "")),
                profits=[float(it["profit"]) for it in items],
                weights=[float(it["weight"]) for it in items],
                capacity=float(doc["capacity"]),
                init_rule=doc.get("initial_population_rule"),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed instance document: {exc}") from exc
        if inst.n != n:
            raise InvalidArgument(f"instance declares n={n} but lists {inst.n} items")
        return inst

    def dumps(self) -> str:
        # repr-based float output round-trips exactly
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "Instance":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Instance":
        return cls.loads(Path(path).read_text())


@dataclass(eq=False)
class Solution:
    """Binary item-selection vector with cached profit, weight and item count.

    Use :meth:`from_bits` or :meth:`empty` to construct; :meth:`flip` keeps the
    caches up to date incrementally.
    """

    bits: np.ndarray
    total_profit: float
    total_weight: float
    cardinality: int = field(default=0)

    @classmethod
    def from_bits(cls, inst: Instance, bits) -> "Solution":
        b = _as_bits(bits)
        if b.size != inst.n:
            raise InvalidArgument(f"bit vector has length {b.size}, instance has n={inst.n}")
        return cls(
            bits=b,
            total_profit=float(inst.profits[b].sum()),
            total_weight=float(inst.weights[b].sum()),
            cardinality=int(b.sum()),
        )

    @classmethod
    def empty(cls, inst: Instance) -> "Solution":
        return cls(np.zeros(inst.n, dtype=bool), 0.0, 0.0, 0)

    @property
    def n(self) -> int:
        return int(self.bits.size)

    def copy(self) -> "Solution":
        return Solution(self.bits.copy(), self.total_profit, self.total_weight, self.cardinality)

    def flip(self, inst: Instance, i: int) -> None:
        sign = -1.0 if self.bits[i] else 1.0
        self.bits[i] = not self.bits[i]
        self.total_profit += sign * inst.profits[i]
        self.total_weight += sign * inst.weights[i]
        self.cardinality += int(sign)

    def feasible(self, inst: Instance) -> bool:
        return self.total_weight <= inst.limit

    def bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    def __repr__(self):
        return f"Solution({self.bitstring()}, f={self.total_profit:g}, w={self.total_weight:g})"


class ObjectiveVector(NamedTuple):
    f: float
    h1: float
    h2: float
    h3: int


def _as_bits(bits) -> np.ndarray:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise InvalidArgument(f"bit string may only contain 0 and 1: {bits!r}")
        return np.array([c == "1" for c in bits], dtype=bool)
    return np.array(bits, dtype=bool).ravel()


def _check(inst: Instance, s: Solution) -> np.ndarray:
    if s.bits.size != inst.n:
        raise InvalidArgument(f"solution has length {s.bits.size}, instance has n={inst.n}")
    return s.bits


def evaluate_f(inst: Instance, s: Solution) -> float:
    """Total profit of the packed items, recomputed from the bits."""
    return math.fsum(inst.profits[_check(inst, s)])


def evaluate_weight(inst: Instance, s: Solution) -> float:
    return math.fsum(inst.weights[_check(inst, s)])


def is_feasible(inst: Instance, s: Solution) -> bool:
    return evaluate_weight(inst, s) <= inst.limit


def helper_h1(inst: Instance, s: Solution) -> float:
    """Average profit of the packed items (0 for the empty knapsack)."""
    bits = _check(inst, s)
    k = int(bits.sum())
    return math.fsum(inst.profits[bits]) / k if k else 0.0


def helper_h2(inst: Instance, s: Solution) -> float:
    """Average profit-to-weight ratio of the packed items (0 when empty)."""
    bits = _check(inst, s)
    k = int(bits.sum())
    return math.fsum(inst.ratios[bits]) / k if k else 0.0


def helper_h3(s: Solution) -> int:
    return int(np.count_nonzero(s.bits))


def objective_vector(inst: Instance, s: Solution) -> ObjectiveVector:
    return ObjectiveVector(
        evaluate_f(inst, s), helper_h1(inst, s), helper_h2(inst, s), helper_h3(s)
    )


def make_instance(
    profits: Sequence[float],
    weights: Sequence[float],
    capacity: float,
    name: str = "",
) -> Instance:
    return Instance(name=name, profits=profits, weights=weights, capacity=capacity)
