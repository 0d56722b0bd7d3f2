import numpy as np
import pytest

from kga import make_instance
from kga.instances import GeneratorSpec, gen_average, gen_restrictive


def instance_a():
    return make_instance([10, 10, 10, 12, 12], [10] * 5, 20, name="A")


def instance_b():
    return make_instance([15, 15, 20, 20, 20], [10, 10, 20, 20, 20], 20, name="B")


def instance_c():
    return make_instance([40, 40, 40, 40, 150], [30, 30, 30, 30, 100], 120, name="C")


def small_random(seed: int, n_max: int = 20):
    """Seeded small random instance, alternating restrictive/average capacity."""
    n = int(np.random.default_rng(seed).integers(1, n_max + 1))
    spec = GeneratorSpec("restrictive" if seed % 2 == 0 else "average", n, seed=seed)
    return gen_restrictive(spec) if seed % 2 == 0 else gen_average(spec)


@pytest.fixture
def inst_a():
    return instance_a()


@pytest.fixture
def inst_b():
    return instance_b()


@pytest.fixture
def inst_c():
    return instance_c()
