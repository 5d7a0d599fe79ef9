import numpy as np
import pytest
from hypothesis import settings, strategies as st

from pullback_chain import BandParameters, RateBounds

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def chains(draw, max_n=8):
    """(bands, bounds, delta) with rates inside bounds and a valid step."""
    n = draw(st.integers(2, max_n))
    alpha = draw(st.floats(0.1, 2.0))
    beta = alpha * draw(st.floats(1.0, 4.0))
    u = draw(st.lists(st.floats(0.0, 1.0), min_size=2 * n - 2, max_size=2 * n - 2))
    rates = tuple(min(alpha + (beta - alpha) * v, beta) for v in u)
    bounds = RateBounds(alpha, beta)
    delta = draw(st.floats(0.05, 0.95)) * bounds.max_step
    return BandParameters(n, rates), bounds, delta


positive_vectors = st.integers(2, 8).flatmap(
    lambda n: st.lists(st.floats(1e-3, 1e3), min_size=n, max_size=n).map(np.array)
)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def cone_theta(x, y, hi=1e12, iters=200):
    """inf{t : t*x - y >= 0} by bisection on the cone-membership test."""
    lo = 0.0
    if not np.all(hi * x - y >= 0):
        return np.inf
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.all(mid * x - y >= 0):
            hi = mid
        else:
            lo = mid
    return hi
