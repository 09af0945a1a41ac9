import random

import pytest

from tck.census import generate_tree_child
from tck.figures import FIG3_LEFT_SPEC, FIG3_RIGHT_SPEC, fig1_network
from tck.octopus import build_octopus, build_tight_ladder, random_octopus_spec

OCTOPUS_SEED = 20261015


def _census(n_max, forbid):
    return [net for n in range(1, n_max + 1) for k in range(n) for net in generate_tree_child(n, k, forbid)]


@pytest.fixture(scope="session")
def census_free():
    """Every 3-cycle-free tree-child network with at most four leaves."""
    return _census(4, True)


@pytest.fixture(scope="session")
def census_all():
    """Every tree-child network with at most four leaves."""
    return _census(4, False)


@pytest.fixture
def fig1():
    return fig1_network()


@pytest.fixture(scope="session")
def fig3():
    return build_octopus(FIG3_LEFT_SPEC), build_octopus(FIG3_RIGHT_SPEC)


@pytest.fixture(scope="session")
def ladder2():
    return build_tight_ladder(2)


@pytest.fixture(scope="session")
def ladder3():
    return build_tight_ladder(3)


@pytest.fixture(scope="session")
def random_octopuses():
    """100 built octopuses from a fixed seed, n <= 12."""
    rng = random.Random(OCTOPUS_SEED)
    out = []
    while len(out) < 100:
        n = rng.randint(3, 12)
        k = rng.choice([k for k in range(0, min(n, 10)) if k != 1])
        out.append(build_octopus(random_octopus_spec(rng, n, k)))
    return out
