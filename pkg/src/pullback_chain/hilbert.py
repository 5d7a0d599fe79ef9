"""Hilbert projective metric on the nonnegative orthant and Birkhoff contraction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidParameterError

# below this magnitude ratios are formed from log differences
_TINY = 1e-300
# relative spread of x_i/y_i under which two vectors count as proportional
PROPORTIONAL_RTOL = 1e-12


@dataclass(frozen=True)
class ContractionCertificate:
    projective_diameter: float
    birkhoff_ratio: float
    block_length: int = 1


def _as_cone_vector(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {x.shape}")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise InvalidParameterError(f"{name} must have finite nonnegative components")
    if not np.any(x > 0):
        raise InvalidParameterError(f"{name} is identically zero")
    return x


def hilbert_distance(x, y) -> float:
    """``ln(max_i x_i/y_i * max_j y_j/x_j)``, or ``inf`` off a common face.

    Coordinates where both vectors vanish are ignored; a zero in only one
    of them puts the pair at infinite distance.
    """
    x = _as_cone_vector(x, "x")
    y = _as_cone_vector(y, "y")
    if x.shape != y.shape:
        raise DimensionError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    zx, zy = x == 0, y == 0
    if np.any(zx != zy):
        return math.inf
    keep = ~zx
    x, y = x[keep], y[keep]
    if x.min() < _TINY or y.min() < _TINY:
        r = np.log(x) - np.log(y)
        spread = float(r.max() - r.min())
    else:
        r = x / y
        spread = math.log(r.max()) + math.log((y / x).max())
    if spread <= PROPORTIONAL_RTOL:
        return 0.0
    return spread


def projective_diameter(L) -> float:
    """Largest Hilbert distance between two columns of a positive matrix.

    Returns ``inf`` as soon as any entry is not strictly positive.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {L.shape}")
    if L.shape[1] < 2:
        return 0.0 if np.all(L > 0) else math.inf
    if not np.all(L > 0):
        return math.inf
    logL = np.log(L)
    n = L.shape[1]
    if n <= 64:
        # M[j, k] = max_i (log L_ij - log L_ik)
        M = (logL[:, :, None] - logL[:, None, :]).max(axis=0)
    else:
        M = np.empty((n, n))
        for j in range(n):
            M[j] = (logL[:, j : j + 1] - logL).max(axis=0)
    d = float((M + M.T).max())
    return d if d > PROPORTIONAL_RTOL else 0.0


def simplex_image_diameter(L) -> float:
    """Hilbert diameter of ``L`` applied to the probability simplex.

    The image is the convex hull of the columns, so this coincides with
    :func:`projective_diameter`.
    """
    return projective_diameter(L)


def birkhoff_ratio(delta: float) -> float:
    """Birkhoff bound ``tanh(delta / 4)`` on the contraction ratio."""
    if math.isnan(delta) or delta < 0:
        raise InvalidParameterError(f"projective diameter must be >= 0, got {delta!r}")
    if math.isinf(delta):
        return 1.0
    return math.tanh(delta / 4.0)


def log_birkhoff_ratio(delta: float) -> float:
    """``log(tanh(delta / 4))`` without rounding to zero for large ``delta``."""
    if math.isnan(delta) or delta < 0:
        raise InvalidParameterError(f"projective diameter must be >= 0, got {delta!r}")
    if delta == 0:
        return -math.inf
    if math.isinf(delta):
        return 0.0
    e = math.exp(-delta / 2.0)
    return math.log1p(-e) - math.log1p(e)


def certificate(L, block_length: int = 1) -> ContractionCertificate:
    d = projective_diameter(L)
    return ContractionCertificate(d, birkhoff_ratio(d), block_length)


def project_to_simplex(x) -> np.ndarray:
    """Rescale a nonnegative vector to unit component sum."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise InvalidParameterError("projection needs finite nonnegative components")
    s = x.sum()
    if s <= 0:
        raise InvalidParameterError("cannot project the zero vector")
    return x / s
