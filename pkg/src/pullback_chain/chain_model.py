"""Tridiagonal generators, Euler transition matrices and their stationary law.

Rates follow the birth-death layout: for a chain with ``N`` states the ``2N-2``
rates ``q_1..q_{2N-2}`` are split so that odd rates (``q_1, q_3, ...``) fill the
subdiagonal and even rates (``q_2, q_4, ...``) fill the superdiagonal of ``Q``.
Every column of ``Q`` sums to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, StepTooLargeError

# above this size the closed-form stationary products are accumulated in logs
_LOG_SPACE_THRESHOLD = 50


@dataclass(frozen=True)
class BandParameters:
    """The ``2N-2`` positive rates of one environment state."""

    n_states: int
    rates: tuple[float, ...]

    def __post_init__(self):
        if int(self.n_states) != self.n_states or self.n_states < 2:
            raise InvalidParameterError(f"n_states must be an integer >= 2, got {self.n_states!r}")
        rates = tuple(float(q) for q in self.rates)
        if len(rates) != 2 * self.n_states - 2:
            raise InvalidParameterError(
                f"expected {2 * self.n_states - 2} rates for N={self.n_states}, got {len(rates)}"
            )
        for i, q in enumerate(rates, start=1):
            if not math.isfinite(q) or q <= 0.0:
                raise InvalidParameterError(f"rate q_{i} must be positive and finite, got {q!r}")
        object.__setattr__(self, "n_states", int(self.n_states))
        object.__setattr__(self, "rates", rates)

    @property
    def lower(self) -> np.ndarray:
        """Subdiagonal rates ``q_1, q_3, ..., q_{2N-3}``."""
        return np.asarray(self.rates[0::2])

    @property
    def upper(self) -> np.ndarray:
        """Superdiagonal rates ``q_2, q_4, ..., q_{2N-2}``."""
        return np.asarray(self.rates[1::2])

    def scaled(self, s: float) -> "BandParameters":
        return BandParameters(self.n_states, tuple(s * q for q in self.rates))

    def within(self, bounds: "RateBounds") -> bool:
        return all(bounds.alpha <= q <= bounds.beta for q in self.rates)


@dataclass(frozen=True)
class RateBounds:
    """Uniform bounds ``alpha <= q_i <= beta`` on every rate."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)) or not 0.0 < a <= b:
            raise InvalidParameterError(f"need 0 < alpha <= beta < inf, got alpha={a!r}, beta={b!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def max_step(self) -> float:
        """Exclusive upper limit ``1 / (2 beta)`` on the time step."""
        return 1.0 / (2.0 * self.beta)

    def check_step(self, delta: float) -> None:
        if not math.isfinite(delta) or delta < 0.0:
            raise InvalidParameterError(f"time step must be finite and nonnegative, got {delta!r}")
        if delta >= self.max_step:
            raise StepTooLargeError(
                f"delta={delta!r} violates the step bound delta < 1/(2*beta) = {self.max_step!r}; "
                "transition matrices would lose entrywise nonnegativity"
            )


@dataclass(frozen=True)
class SimplexSlice:
    """Sub-simplex of probability vectors whose components all exceed ``gamma**(N-1)``."""

    gamma: float
    n_states: int

    @property
    def log_floor(self) -> float:
        return (self.n_states - 1) * math.log(self.gamma)

    @property
    def gamma_floor(self) -> float:
        return self.gamma ** (self.n_states - 1)

    def contains(self, p, slack: float = 0.0) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= self.gamma_floor - slack))


def build_generator(bands: BandParameters) -> np.ndarray:
    """Tridiagonal generator ``Q`` with zero column sums."""
    n = bands.n_states
    lo, up = bands.lower, bands.upper
    Q = np.zeros((n, n))
    idx = np.arange(n - 1)
    Q[idx + 1, idx] = lo
    Q[idx, idx + 1] = up
    # column j loses what flows to j-1 and j+1
    diag = np.zeros(n)
    diag[:-1] -= lo
    diag[1:] -= up
    Q[np.arange(n), np.arange(n)] = diag
    return Q


def build_transition(Q: np.ndarray, delta: float, bounds: RateBounds | None = None) -> np.ndarray:
    """Euler step ``L = I + delta * Q``.

    When ``bounds`` is given the step is checked against ``1/(2 beta)``;
    otherwise ``beta`` is taken as the largest rate present in ``Q``.
    """
    Q = np.asarray(Q, dtype=float)
    if bounds is None:
        off = np.concatenate([np.diag(Q, -1), np.diag(Q, 1)])
        bounds = RateBounds(float(off.min()), float(off.max()))
    bounds.check_step(delta)
    L = np.eye(Q.shape[0]) + delta * Q
    L.setflags(write=False)
    return L


def stationary_distribution(bands: BandParameters) -> np.ndarray:
    """Closed-form null vector of ``Q`` normalised to a probability vector.

    Uses ``x_{j+1} = x_j * q_{2j-1} / q_{2j}`` with ``x_1 = 1``.
    """
    log_ratio = np.log(bands.lower) - np.log(bands.upper)
    if bands.n_states > _LOG_SPACE_THRESHOLD:
        log_x = np.concatenate([[0.0], np.cumsum(log_ratio)])
        x = np.exp(log_x - log_x.max())
    else:
        x = np.concatenate([[1.0], np.cumprod(bands.lower / bands.upper)])
    return x / x.sum()


def positivity_floor(delta: float, bounds: RateBounds, n_states: int = 2) -> SimplexSlice:
    """``gamma = min(delta*alpha, 1 - 2*delta*beta)`` paired with a chain size."""
    bounds.check_step(delta)
    gamma = min(delta * bounds.alpha, 1.0 - 2.0 * delta * bounds.beta)
    if gamma <= 0.0:
        raise StepTooLargeError(f"delta={delta!r} gives a non-positive floor gamma={gamma!r}")
    return SimplexSlice(gamma=gamma, n_states=int(n_states))
