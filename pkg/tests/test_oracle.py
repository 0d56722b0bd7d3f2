import itertools

import numpy as np
import pytest

from kga import BudgetError, NotApplicable, is_feasible, evaluate_f, make_instance
from kga.oracle import solve, solve_dp, solve_exhaustive

from conftest import small_random


@pytest.mark.parametrize(
    "name, optimum, witness", [("a", 24, "00011"), ("b", 30, "11000"), ("c", 160, "11110")]
)
def test_motivating_optima(request, name, optimum, witness):
    # [PAPER] global optima quoted for the three five-item instances
    inst = request.getfixturevalue(f"inst_{name}")
    for res in (solve_exhaustive(inst), solve_dp(inst)):
        assert res.optimum == optimum
        assert res.witness.bitstring() == witness


def test_nothing_fits():
    inst = make_instance([5], [3], 2)
    res = solve_dp(inst)
    assert res.optimum == 0 and res.witness.bitstring() == "0"
    assert solve_exhaustive(inst).witness.bitstring() == "0"


def test_ties_resolve_to_lowest_bit_string():
    # four equal items, room for two: lowest string is 0011
    inst = make_instance([1, 1, 1, 1], [1, 1, 1, 1], 2)
    assert solve_exhaustive(inst).witness.bitstring() == "0011"
    assert solve_dp(inst).witness.bitstring() == "0011"


def literal_enumeration(inst):
    best = (-1.0, None)
    for bits in itertools.product((0, 1), repeat=inst.n):
        x = np.array(bits, dtype=bool)
        if inst.weights[x].sum() <= inst.capacity:
            v = inst.profits[x].sum()
            if v > best[0]:
                best = (v, "".join(map(str, bits)))
    return best


@pytest.mark.parametrize("seed", range(40))
def test_exhaustive_matches_literal_enumeration(seed):
    inst = small_random(seed, n_max=10)
    res = solve_exhaustive(inst)
    # [DERIVED] straightforward itertools enumeration, first maximum in lexicographic order
    assert (res.optimum, res.witness.bitstring()) == literal_enumeration(inst)


def test_dp_equals_exhaustive_on_random_instances():
    for seed in range(100):
        inst = small_random(1000 + seed)
        a, b = solve_dp(inst), solve_exhaustive(inst)
        assert a.optimum == b.optimum
        assert a.witness == b.witness
        assert is_feasible(inst, a.witness) and evaluate_f(inst, a.witness) == a.optimum


def test_fractional_capacity_rounds_down():
    inst = make_instance([3, 4, 5], [2, 3, 4], 5.75)
    assert solve_dp(inst).optimum == solve_exhaustive(inst).optimum == 7


def test_errors():
    with pytest.raises(NotApplicable):
        solve_dp(make_instance([1, 2], [1.5, 1], 3))
    with pytest.raises(BudgetError):
        solve_dp(make_instance([1] * 100, [1] * 100, 2 * 10**6))
    with pytest.raises(BudgetError):
        solve_exhaustive(make_instance([1] * 25, [1] * 25, 3))


def test_solve_dispatch(inst_c):
    assert solve(inst_c).method == "exhaustive"
    big = small_random(4, n_max=40)
    while big.n <= 16:
        big = make_instance(np.r_[big.profits, 1.0], np.r_[big.weights, 1.0], big.capacity)
    assert solve(big).method == "dp"
