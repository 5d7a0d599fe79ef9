"""Two-sided environment sequences: constant, periodic and seeded-random drivers.

A driver maps every integer time index to a :class:`BandParameters`.  Random
drivers are counter based: the rates at index ``n`` are a hash of
``(seed, n, slot)``, so any index, negative ones included, is available in
O(1) without storing history.  Shifting only moves an offset.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .chain_model import BandParameters, RateBounds, build_generator, build_transition
from .errors import InvalidParameterError

KINDS = ("constant", "periodic", "random")
DISTRIBUTIONS = ("uniform", "two_point")

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def counter_uniforms(seed: int, index: int, count: int) -> np.ndarray:
    """``count`` uniforms in [0, 1) keyed by ``(seed, index, slot)``."""
    key = _mix64(np.array([seed & _MASK64], dtype=np.uint64))
    ctr = _mix64(key ^ np.array([(index * 0xD1B54A32D192ED03) & _MASK64], dtype=np.uint64))
    slots = np.arange(1, count + 1, dtype=np.uint64) * _GOLDEN
    bits = _mix64(ctr + slots)
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class EnvironmentDriver:
    kind: str
    n_states: int
    bounds: RateBounds
    blocks: tuple[BandParameters, ...] = ()
    seed: int = 0
    distribution: str = "uniform"
    offset: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown driver kind {self.kind!r}")
        if self.kind == "random":
            if self.distribution not in DISTRIBUTIONS:
                raise InvalidParameterError(f"unknown distribution {self.distribution!r}")
        else:
            if not self.blocks:
                raise InvalidParameterError(f"{self.kind} driver needs at least one block")
            if self.kind == "constant" and len(self.blocks) != 1:
                raise InvalidParameterError("constant driver takes exactly one block")
            for b in self.blocks:
                if b.n_states != self.n_states:
                    raise InvalidParameterError(f"block has N={b.n_states}, driver has N={self.n_states}")
                if not b.within(self.bounds):
                    raise InvalidParameterError(
                        f"block rates {b.rates} leave [alpha, beta] = [{self.bounds.alpha}, {self.bounds.beta}]"
                    )

    @property
    def period(self) -> int | None:
        return None if self.kind == "random" else len(self.blocks)

    def env_at(self, n: int) -> BandParameters:
        return env_at(self, n)

    def shift(self, m: int) -> "EnvironmentDriver":
        return shift(self, m)


def constant_driver(bands: BandParameters, bounds: RateBounds | None = None) -> EnvironmentDriver:
    if bounds is None:
        bounds = RateBounds(min(bands.rates), max(bands.rates))
    return EnvironmentDriver("constant", bands.n_states, bounds, blocks=(bands,))


def periodic_driver(blocks, bounds: RateBounds | None = None) -> EnvironmentDriver:
    blocks = tuple(blocks)
    if not blocks:
        raise InvalidParameterError("periodic driver needs at least one block")
    if bounds is None:
        rates = [q for b in blocks for q in b.rates]
        bounds = RateBounds(min(rates), max(rates))
    return EnvironmentDriver("periodic", blocks[0].n_states, bounds, blocks=blocks)


def random_driver(n_states: int, bounds: RateBounds, seed: int, distribution: str = "uniform") -> EnvironmentDriver:
    return EnvironmentDriver("random", int(n_states), bounds, seed=int(seed), distribution=distribution)


def env_at(d: EnvironmentDriver, n: int) -> BandParameters:
    """Rates of the environment at absolute time ``n`` (relative to the driver's offset)."""
    k = int(n) + d.offset
    if d.kind != "random":
        return d.blocks[k % len(d.blocks)]
    return _random_bands(d.n_states, d.bounds, d.seed, d.distribution, k)


@lru_cache(maxsize=4096)
def _random_bands(n_states, bounds, seed, distribution, k) -> BandParameters:
    u = counter_uniforms(seed, k, 2 * n_states - 2)
    a, b = bounds.alpha, bounds.beta
    if distribution == "two_point":
        q = np.where(u < 0.5, a, b)
    else:
        q = np.minimum(a + (b - a) * u, b)
    return BandParameters(n_states, tuple(q.tolist()))


def shift(d: EnvironmentDriver, m: int) -> EnvironmentDriver:
    """The driver seen ``m`` steps later: ``env_at(shift(d, m), n) == env_at(d, n + m)``."""
    return replace(d, offset=d.offset + int(m))


@lru_cache(maxsize=8192)
def _transition(bands: BandParameters, bounds: RateBounds, delta: float) -> np.ndarray:
    return build_transition(build_generator(bands), delta, bounds)


def transition_at(d: EnvironmentDriver, n: int, delta: float) -> np.ndarray:
    """Read-only transition matrix ``I + delta*Q`` of the environment at time ``n``."""
    d.bounds.check_step(delta)
    return _transition(env_at(d, n), d.bounds, float(delta))
