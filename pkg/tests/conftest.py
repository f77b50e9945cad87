import pytest
from hypothesis import HealthCheck, settings

from exactcomp.finset import FiniteMap, FiniteSet
from exactcomp.excompletion import ExArrow, gamma
from exactcomp.weaklim import MINIMAL, padded

settings.register_profile(
    "exactcomp", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exactcomp")

STRATEGIES = [MINIMAL, padded(2)]


@pytest.fixture(params=STRATEGIES, ids=str)
def strategy(request):
    return request.param


def two_section_maps():
    """I = {i}, X = {x0, x1}, Y = {y00, y01, y10}; g has fibers {y00, y01} and {y10}."""
    I = FiniteSet(["i"])
    X = FiniteSet(["x0", "x1"])
    Y = FiniteSet(["y00", "y01", "y10"])
    f = FiniteMap(X, I, [0, 0])
    g = FiniteMap(Y, X, [0, 0, 1])
    return f, g


@pytest.fixture
def two_sections():
    return two_section_maps()


@pytest.fixture
def two_sections_ex(strategy):
    f, g = two_section_maps()
    I, X, Y = (gamma(S, strategy) for S in (f.cod, f.dom, g.dom))
    return ExArrow(X, I, f), ExArrow(Y, X, g)
