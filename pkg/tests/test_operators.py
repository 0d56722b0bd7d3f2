import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import kga.operators as ops
from kga import (
    InvalidArgument,
    Population,
    RepairMethod,
    Solution,
    bitwise_mutation,
    evaluate_weight,
    is_feasible,
    make_instance,
    make_rng,
    mixed_repair,
    one_point_crossover,
    repair,
    roulette_select,
)
from kga.instances import GeneratorSpec, gen_restrictive
from kga.operators import crossover_population, mutate_population, repair_population, roulette_indices


def ten_item_instance():
    p = [12, 7, 19, 3, 15, 8, 11, 5, 14, 9]
    w = [10, 9, 16, 2, 12, 8, 11, 4, 9, 7]
    return make_instance(p, w, 30, name="ten")


def literal_repair(inst, bits, key):
    """Remove the packed item with the smallest key (lowest index on ties), one at a time."""
    x = list(bits)
    while sum(w for w, b in zip(inst.weights, x) if b) > inst.capacity:
        packed = [i for i in range(len(x)) if x[i]]
        victim = min(packed, key=lambda i: (key[i], i))
        x[victim] = False
    return "".join("1" if b else "0" for b in x)


# -- mutation ------------------------------------------------------------------


def test_mutation_single_bit_always_flips():
    inst = make_instance([1], [1], 1)
    rng = make_rng(1)
    s = Solution.empty(inst)
    flips = sum(bitwise_mutation(inst, s, rng).bits[0] for _ in range(1000))
    assert flips == 1000


def test_mutation_mean_hamming_distance():
    inst = make_instance([1] * 100, [1] * 100, 50)
    rng = make_rng(2)
    pop = Population.from_bits(inst, np.zeros((10000, 100), dtype=bool))
    child = mutate_population(inst, pop, rng)
    # [DERIVED] Binomial(100, 1/100) has mean 1
    assert child.bits.sum(axis=1).mean() == pytest.approx(1.0, abs=0.1)
    assert not pop.bits.any()


def test_mutation_per_position_rate():
    inst = make_instance([1] * 20, [1] * 20, 5)
    pop = Population.from_bits(inst, np.zeros((20000, 20), dtype=bool))
    rate = mutate_population(inst, pop, make_rng(3)).bits.mean(axis=0)
    assert np.all(np.abs(rate - 0.05) < 0.01)


def test_mutation_leaves_input_alone(inst_a):
    s = Solution.from_bits(inst_a, "10101")
    before = s.bits.copy()
    rng = make_rng(4)
    for _ in range(50):
        bitwise_mutation(inst_a, s, rng)
    assert np.array_equal(s.bits, before) and s.total_profit == 32


# -- crossover -------------------------------------------------------------------


def test_crossover_definition(inst_a):
    a, b = Solution.from_bits(inst_a, "11111"), Solution.from_bits(inst_a, "00000")
    c1, c2 = one_point_crossover(inst_a, a, b, make_rng(0), k=2)
    assert (c1.bitstring(), c2.bitstring()) == ("11000", "00111")
    c1, c2 = one_point_crossover(inst_a, a, b, make_rng(0), k=5)
    assert c1 == a and c2 == b
    assert c1.total_profit == 54 and c2.total_weight == 0


def test_crossover_identical_parents(inst_a):
    a = Solution.from_bits(inst_a, "01101")
    rng = make_rng(5)
    for _ in range(20):
        assert all(c == a for c in one_point_crossover(inst_a, a, a, rng))


def test_crossover_errors(inst_a):
    a = Solution.from_bits(inst_a, "01101")
    other = Solution.from_bits(make_instance([1] * 4, [1] * 4, 1), "0110")
    with pytest.raises(InvalidArgument):
        one_point_crossover(inst_a, a, other, make_rng(0))
    with pytest.raises(InvalidArgument):
        one_point_crossover(inst_a, a, a, make_rng(0), k=0)


def test_crossover_preserves_bit_multiset():
    inst = make_instance([1] * 30, [1] * 30, 10)
    rng = make_rng(6)
    points = set()
    for _ in range(1000):
        a = Solution.from_bits(inst, rng.random(30) < 0.5)
        b = Solution.from_bits(inst, rng.random(30) < 0.5)
        c1, c2 = one_point_crossover(inst, a, b, rng)
        assert np.array_equal(c1.bits.astype(int) + c2.bits, a.bits.astype(int) + b.bits)
        k = next((i for i in range(30) if c1.bits[i] != a.bits[i]), 30)
        points.add(k)
    assert max(points) <= 30


def test_population_crossover_pairs_and_copies():
    inst = make_instance([1] * 8, [1] * 8, 8)
    rng = make_rng(7)
    bits = rng.random((5, 8)) < 0.5
    pop = Population.from_bits(inst, bits)
    child = crossover_population(inst, pop, rng)
    assert len(child) == 5
    np.testing.assert_array_equal(child.bits.sum(axis=0), bits.sum(axis=0))
    # the leftover parent is copied verbatim
    assert any(np.array_equal(child.bits[4], row) for row in bits)
    np.testing.assert_allclose(child.totals[:, 0], child.bits.sum(axis=1))


# -- repair ----------------------------------------------------------------------


def test_repair_hand_traces(inst_a):
    full = Solution.from_bits(inst_a, "11111")
    assert repair(inst_a, full, RepairMethod.RATIO_GREEDY, make_rng(0)).bitstring() == "00011"
    assert repair(inst_a, full, RepairMethod.PROFIT_GREEDY, make_rng(0)).bitstring() == "00011"


def test_repair_feasible_input_unchanged(inst_a):
    s = Solution.from_bits(inst_a, "10010")
    for m in RepairMethod:
        assert repair(inst_a, s, m, make_rng(1)) == s
        assert mixed_repair(inst_a, s, make_rng(m)) == s


def test_repair_exhaustive_against_literal_loop():
    inst = ten_item_instance()
    rng = make_rng(8)
    keys = {RepairMethod.RATIO_GREEDY: inst.ratios, RepairMethod.PROFIT_GREEDY: inst.profits}
    for bits in itertools.product((False, True), repeat=10):
        s = Solution.from_bits(inst, bits)
        for m in RepairMethod:
            out = repair(inst, s, m, rng)
            assert is_feasible(inst, out)
            assert not np.any(out.bits & ~s.bits)
            assert evaluate_weight(inst, out) <= evaluate_weight(inst, s)
            assert out.total_weight == pytest.approx(evaluate_weight(inst, out), abs=1e-9)
            if m in keys:
                assert out.bitstring() == literal_repair(inst, bits, keys[m])
            elif is_feasible(inst, s):
                assert out == s


def test_random_repair_stops_once_feasible():
    inst = ten_item_instance()
    rng = make_rng(9)
    s = Solution.from_bits(inst, [True] * 10)
    for _ in range(200):
        out = repair(inst, s, RepairMethod.RANDOM, rng)
        removed = np.flatnonzero(s.bits & ~out.bits)
        # the last removal was needed, so some removed item must not fit back
        assert out.total_weight + inst.weights[removed].max() > inst.capacity


def test_random_repair_is_uniform():
    inst = make_instance([1, 1, 1, 1], [1, 1, 1, 1], 3)
    rng = make_rng(10)
    s = Solution.from_bits(inst, "1111")
    dropped = np.zeros(4)
    for _ in range(4000):
        dropped += ~repair(inst, s, RepairMethod.RANDOM, rng).bits
    assert np.all(np.abs(dropped / 4000 - 0.25) < 0.03)


def test_mixed_repair_draws_methods_uniformly(monkeypatch, inst_a):
    seen = []
    real = ops.repair

    def spy(inst, s, method, rng):
        seen.append(method)
        return real(inst, s, method, rng)

    monkeypatch.setattr(ops, "repair", spy)
    rng = make_rng(11)
    s = Solution.from_bits(inst_a, "11111")
    for _ in range(3000):
        assert is_feasible(inst_a, ops.mixed_repair(inst_a, s, rng))
    counts = np.bincount(np.array(seen, dtype=int), minlength=3)
    assert np.all(np.abs(counts - 1000) <= 100)


def test_population_mixed_repair_uses_all_methods():
    inst = ten_item_instance()
    pop = Population.from_bits(inst, np.ones((3000, 10), dtype=bool))
    used = ops._kernels.repair(
        pop.bits, pop.totals, pop.count, ops.item_table(inst), inst.limit,
        ops.removal_order(inst, RepairMethod.RATIO_GREEDY),
        ops.removal_order(inst, RepairMethod.PROFIT_GREEDY), -1, make_rng(12),
    )
    assert np.all(np.abs(np.bincount(used, minlength=3) - 1000) <= 100)
    assert pop.feasible(inst).all()


def test_repair_population_copy_semantics():
    inst = ten_item_instance()
    pop = Population.from_bits(inst, np.ones((4, 10), dtype=bool))
    out = repair_population(inst, pop, make_rng(13))
    assert pop.bits.all() and out.feasible(inst).all()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 40))
def test_repaired_population_caches_match(seed, n):
    inst = gen_restrictive(GeneratorSpec("restrictive", n, seed=seed))
    rng = make_rng(seed)
    pop = Population.from_bits(inst, rng.random((8, n)) < 0.5)
    out = repair_population(inst, mutate_population(inst, pop, rng), rng)
    fresh = Population.from_bits(inst, out.bits)
    np.testing.assert_allclose(out.totals, fresh.totals, rtol=1e-9, atol=1e-9)
    np.testing.assert_array_equal(out.count, fresh.count)
    assert out.feasible(inst).all()


# -- roulette --------------------------------------------------------------------


def test_roulette_frequencies():
    idx = roulette_indices([10, 30], 10000, make_rng(14))
    assert np.mean(idx == 0) == pytest.approx(0.25, abs=0.02)
    assert np.mean(idx == 1) == pytest.approx(0.75, abs=0.02)


def test_roulette_edge_cases(inst_a):
    pool = Population.from_bits(inst_a, np.array([[1, 0, 0, 0, 0]], dtype=bool))
    assert len(roulette_select(pool, [10.0], 0, make_rng(0))) == 0
    got = roulette_select(pool, [10.0], 7, make_rng(0))
    assert len(got) == 7 and (got.bits == pool.bits[0]).all()
    zero = roulette_indices([0.0, 0.0, 0.0], 3000, make_rng(1))
    assert set(zero.tolist()) == {0, 1, 2}
    assert np.all(roulette_indices([0.0, 5.0, 0.0], 100, make_rng(2)) == 1)


def test_roulette_errors(inst_a):
    with pytest.raises(InvalidArgument):
        roulette_indices([1.0, -1.0], 2, make_rng(0))
    with pytest.raises(InvalidArgument):
        roulette_indices([1.0], -1, make_rng(0))
    pool = Population.from_bits(inst_a, np.zeros((2, 5), dtype=bool))
    with pytest.raises(InvalidArgument):
        roulette_select(pool, [1.0], 1, make_rng(0))


def test_rng_streams_are_reproducible():
    a = make_rng([1, 2, 3]).random(5)
    b = make_rng(np.random.SeedSequence([1, 2, 3])).random(5)
    assert np.array_equal(a, b)
    g = make_rng(0)
    assert make_rng(g) is g
