"""Ordered products of transition matrices along a driver orbit.

``cocycle_matrix(d, start, n, delta)`` is ``L_{start+n-1} @ ... @ L_{start}``,
the map carrying a distribution at time ``start`` to time ``start + n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain_model import SimplexSlice, positivity_floor
from .driving import EnvironmentDriver, transition_at
from .errors import InvalidParameterError
from .hilbert import ContractionCertificate, birkhoff_ratio, log_birkhoff_ratio

BAND_SLACK = 1e-14


@dataclass(frozen=True)
class CocycleProduct:
    matrix: np.ndarray
    start_index: int
    length: int

    @property
    def n_states(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BandReport:
    is_banded: bool
    band_min: float
    floor: float
    bandwidth: int

    @property
    def ok(self) -> bool:
        return self.is_banded and self.band_min >= self.floor - BAND_SLACK


def cocycle_matrix(d: EnvironmentDriver, start: int, n: int, delta: float) -> CocycleProduct:
    if int(n) != n or n < 0:
        raise InvalidParameterError(f"product length must be a nonnegative integer, got {n!r}")
    P = np.eye(d.n_states)
    for k in range(start, start + n):
        P = transition_at(d, k, delta) @ P
    return CocycleProduct(P, int(start), int(n))


def band_mask(n_states: int, bandwidth: int) -> np.ndarray:
    i, j = np.indices((n_states, n_states))
    return np.abs(i - j) <= bandwidth


def verify_band_structure(P: CocycleProduct, gamma: float) -> BandReport:
    """Check that a length-``n`` product is ``(2n+1)``-diagonal with band entries ``>= gamma**n``."""
    N = P.n_states
    w = min(P.length, N - 1)
    mask = band_mask(N, w)
    outside = P.matrix[~mask]
    # structural zeros are exact, no tolerance
    is_banded = bool(np.all(outside == 0.0))
    band_min = float(P.matrix[mask].min())
    return BandReport(is_banded, band_min, gamma**w, w)


def verify_dissipativity(P: CocycleProduct, gamma: float) -> bool:
    """True iff a length ``N-1`` product maps the simplex into the ``gamma`` sub-simplex."""
    N = P.n_states
    if P.length != N - 1:
        raise InvalidParameterError(f"dissipativity block has length N-1={N - 1}, got {P.length}")
    return bool(np.all(P.matrix >= gamma ** (N - 1) - BAND_SLACK))


def slice_diameter(s: SimplexSlice) -> float:
    """Hilbert diameter of the sub-simplex ``{p : p_i >= gamma**(N-1)}``.

    The extreme points put ``1 - (N-1) g`` on one coordinate and ``g`` on the
    rest; the diameter is the distance between any two of them.
    """
    N = s.n_states
    log_g = s.log_floor
    big = -math.expm1(math.log(N - 1) + log_g) if N > 1 else 1.0
    if big <= 0:
        return math.inf
    return 2.0 * (math.log(big) - log_g)


def uniform_certificate(n_states: int, delta: float, bounds) -> ContractionCertificate:
    """Uniform Birkhoff bound for every length ``N-1`` block of a driver with these bounds."""
    s = positivity_floor(delta, bounds, n_states)
    dbar = slice_diameter(s)
    return ContractionCertificate(dbar, birkhoff_ratio(dbar), n_states - 1)


def a_priori_depth(n_states: int, dbar: float, eps: float) -> float:
    """Pullback depth after which the image diameter is guaranteed below ``eps``.

    May be astronomically large (or ``inf``) when the uniform ratio is near one.
    """
    if eps >= dbar:
        return n_states - 1
    log_nu = log_birkhoff_ratio(dbar)
    if log_nu == 0.0:
        return math.inf
    blocks = math.ceil(math.log(eps / dbar) / log_nu)
    return (n_states - 1) * (1 + blocks)
