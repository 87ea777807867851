import pytest

from convexcheck.network import build_counterexample, with_weights
from convexcheck.regions import DomainBox, enumerate_regions, extract_frontiers


@pytest.fixture
def counterexample():
    return build_counterexample()


@pytest.fixture
def flipped(counterexample):
    # last layer (1, -1): the second neuron of the second layer enters negatively
    return with_weights(counterexample, {('h2_1', 'out'): -1.0})


@pytest.fixture
def box3():
    return DomainBox.cube(3.0, 2)


@pytest.fixture(scope='session')
def partition():
    """Cells and frontiers of the counterexample on [-3, 3]^2."""
    net = build_counterexample()
    regions = enumerate_regions(net, DomainBox.cube(3.0, 2))
    return net, regions, extract_frontiers(net, regions)
