"""Compiled per-row loops behind the population operators.

All kernels work in place on a population's raw arrays: ``bits`` (N, n) bool,
``totals`` (N, 3) float (profit, weight, ratio sum) and ``count`` (N,) int.
``table`` is the (n, 3) per-item profit/weight/ratio matrix.  Random draws
come from the caller's numpy Generator, whose state numba advances in place.
"""

from __future__ import annotations

import numpy as np
from numba import njit

RATIO_GREEDY = 0
PROFIT_GREEDY = 1
RANDOM = 2


@njit(cache=True)
def _flip(bits, totals, count, table, r, c):
    if bits[r, c]:
        bits[r, c] = False
        for j in range(3):
            totals[r, j] -= table[c, j]
        count[r] -= 1
        if count[r] == 0:
            for j in range(3):
                totals[r, j] = 0.0
    else:
        bits[r, c] = True
        for j in range(3):
            totals[r, j] += table[c, j]
        count[r] += 1


@njit(cache=True)
def mutate(bits, totals, count, table, rng):
    """Flip every bit independently with probability 1/n (geometric skipping)."""
    rows, n = bits.shape
    total = rows * n
    if n == 1:
        for r in range(rows):
            _flip(bits, totals, count, table, r, 0)
        return
    log_q = np.log1p(-1.0 / n)
    pos = -1
    while True:
        skip = int(np.log1p(-rng.random()) / log_q)
        pos += skip + 1
        if pos >= total:
            break
        _flip(bits, totals, count, table, pos // n, pos % n)


@njit(cache=True)
def recompute_rows(bits, totals, count, table, rows):
    n = bits.shape[1]
    for r in rows:
        t0 = 0.0
        t1 = 0.0
        t2 = 0.0
        k = 0
        for c in range(n):
            if bits[r, c]:
                t0 += table[c, 0]
                t1 += table[c, 1]
                t2 += table[c, 2]
                k += 1
        totals[r, 0] = t0
        totals[r, 1] = t1
        totals[r, 2] = t2
        count[r] = k


@njit(cache=True)
def shuffle(a, rng):
    for i in range(a.size - 1, 0, -1):
        j = rng.integers(0, i + 1)
        a[i], a[j] = a[j], a[i]


@njit(cache=True)
def crossover(parents, child, rng):
    """Pair shuffled parents consecutively; one-point crossover per pair.

    Children of pair j go to rows 2j and 2j+1; an unpaired parent is copied
    into the last row.  Totals of ``child`` are left for the caller.
    """
    rows, n = parents.shape
    perm = np.arange(rows)
    shuffle(perm, rng)
    for j in range(rows // 2):
        a = perm[2 * j]
        b = perm[2 * j + 1]
        k = rng.integers(1, n + 1)
        for c in range(n):
            if c < k:
                child[2 * j, c] = parents[a, c]
                child[2 * j + 1, c] = parents[b, c]
            else:
                child[2 * j, c] = parents[b, c]
                child[2 * j + 1, c] = parents[a, c]
    if rows % 2:
        child[rows - 1, :] = parents[perm[rows - 1], :]


@njit(cache=True)
def _remove_in_order(bits, totals, count, table, r, order, limit):
    for c in order:
        if totals[r, 1] <= limit:
            return
        if bits[r, c]:
            _flip(bits, totals, count, table, r, c)


@njit(cache=True)
def _remove_random(bits, totals, count, table, r, limit, rng, buf):
    """Remove uniformly random packed items (partial Fisher-Yates)."""
    m = 0
    for c in range(bits.shape[1]):
        if bits[r, c]:
            buf[m] = c
            m += 1
    t = 0
    while totals[r, 1] > limit and t < m:
        j = t + rng.integers(0, m - t)
        buf[t], buf[j] = buf[j], buf[t]
        _flip(bits, totals, count, table, r, buf[t])
        t += 1


@njit(cache=True)
def repair(bits, totals, count, table, limit, ratio_order, profit_order, method, rng):
    """Repair every row heavier than ``limit``; returns the methods used.

    ``method`` < 0 draws a method per infeasible row uniformly from the three.
    The returned array holds -1 for rows that were already feasible.
    """
    rows, n = bits.shape
    used = np.full(rows, -1, dtype=np.int64)
    buf = np.empty(n, dtype=np.int64)
    for r in range(rows):
        if totals[r, 1] <= limit:
            continue
        m = rng.integers(0, 3) if method < 0 else method
        used[r] = m
        if m == RATIO_GREEDY:
            _remove_in_order(bits, totals, count, table, r, ratio_order, limit)
        elif m == PROFIT_GREEDY:
            _remove_in_order(bits, totals, count, table, r, profit_order, limit)
        else:
            _remove_random(bits, totals, count, table, r, limit, rng, buf)
    return used


@njit(cache=True)
def _differs(a, b, rel_tol):
    if rel_tol == 0.0:
        return a != b
    return abs(a - b) > rel_tol * max(abs(a), abs(b))


@njit(cache=True)
def diversity_scan(order, keys, limit, rel_tol):
    """Population indices kept by the scan, in scan order; keys is (k, population)."""
    kept = np.empty(min(limit, order.size), dtype=np.int64)
    if kept.size == 0:
        return kept
    kept[0] = order[0]
    m = 1
    last = order[0]
    for i in range(1, order.size):
        if m >= limit:
            break
        cur = order[i]
        for j in range(keys.shape[0]):
            if _differs(keys[j, cur], keys[j, last], rel_tol):
                kept[m] = cur
                m += 1
                last = cur
                break
    return kept[:m]
