import random

import pytest
from hypothesis import HealthCheck, settings

from skolemlab.ratfunc import Poly, RatFunc, rf_normalize
from skolemlab.scenes import preset
from skolemlab.valued_field import kv_sample

settings.register_profile(
    "skolemlab",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("skolemlab")

_SCENES = {}


def scene(name):
    if name not in _SCENES:
        _SCENES[name] = preset(name)
    return _SCENES[name]


@pytest.fixture(scope="session")
def A():
    return scene("a")


@pytest.fixture(scope="session")
def B():
    return scene("b")


@pytest.fixture(scope="session")
def C():
    return scene("c")


@pytest.fixture(scope="session")
def D():
    return scene("d")


@pytest.fixture(scope="session")
def Q():
    return scene("q")


def rand_elem(rng, K, lo=-2, hi=3, zero_prob=0.0, terms=2):
    if zero_prob and rng.random() < zero_prob:
        return K.zero()
    # small exponent denominators keep Puiseux degrees manageable over Q
    bound = 4 if K.group.is_divisible else 16
    return kv_sample(rng, K, valuation_range=(lo, hi), terms=terms, denominator_bound=bound)


def rand_poly(rng, K, max_deg=3, lo=-2, hi=3, zero_prob=0.3, nonzero=True):
    while True:
        deg = rng.randint(0, max_deg)
        coeffs = [rand_elem(rng, K, lo, hi, zero_prob) for _ in range(deg)] + [rand_elem(rng, K, lo, hi)]
        f = Poly(K, coeffs)
        if f or not nonzero:
            return f


def rand_rf(rng, K, max_deg=2, lo=-2, hi=3):
    return rf_normalize(rand_poly(rng, K, max_deg, lo, hi), rand_poly(rng, K, max_deg, lo, hi))


@pytest.fixture
def rng():
    return random.Random(12345)
