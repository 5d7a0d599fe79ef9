"""Pullback computation of the singleton random attractor and its diagnostics.

For a target time ``t`` the pullback product ``L_{t-1} @ ... @ L_{t-n}`` maps
the simplex onto a nested family of sets whose Hilbert diameter shrinks to
zero; once the diameter falls below ``eps`` every column (normalised) lies
within ``eps`` of the attractor point ``a_t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chain_model import positivity_floor
from .cocycle import a_priori_depth, uniform_certificate
from .driving import EnvironmentDriver, periodic_driver, transition_at
from .errors import InvalidParameterError, UnconvergedError
from .hilbert import hilbert_distance, project_to_simplex, simplex_image_diameter

DEFAULT_EPS = 1e-10
# column-sum drift tolerated per matrix application before renormalising
DRIFT_TOL = 1e-13


@dataclass(frozen=True)
class AttractorPoint:
    point: np.ndarray
    error_radius: float
    pullback_depth: int
    target_index: int


@dataclass
class TraceRow:
    n: int
    image_diameter: float
    forward_distance: float
    certified_bound: float = math.inf


@dataclass
class ConvergenceTrace:
    rows: list[TraceRow] = field(default_factory=list)
    block_length: int = 1
    uniform_ratio: float = 1.0

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)


def default_max_depth(n_states: int, eps: float) -> int:
    return 10 * n_states * math.ceil(math.log(1.0 / eps))


def _renormalize(x: np.ndarray) -> np.ndarray:
    s = x.sum(axis=0)
    if np.max(np.abs(s - 1.0)) > DRIFT_TOL:
        raise FloatingPointError(f"probability mass drifted by {np.max(np.abs(s - 1.0)):.3e} in one step")
    return x / s


def pullback_point(
    d: EnvironmentDriver,
    target: int,
    delta: float,
    eps: float = DEFAULT_EPS,
    max_depth: int | None = None,
) -> AttractorPoint:
    """Attractor point at time ``target`` with a certified Hilbert radius below ``eps``.

    Raises :class:`UnconvergedError` (carrying the best estimate) when the
    image diameter is still ``>= eps`` after ``max_depth`` factors.
    """
    if eps <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {eps!r}")
    d.bounds.check_step(delta)
    if max_depth is None:
        max_depth = default_max_depth(d.n_states, eps)
    P = np.eye(d.n_states)
    diam = math.inf
    n = 0
    while n < max_depth:
        n += 1
        P = _renormalize(P @ transition_at(d, target - n, delta))
        if P.min() > 0:
            diam = simplex_image_diameter(P)
            if diam < eps:
                break
    best = AttractorPoint(project_to_simplex(P[:, 0]), diam, n, int(target))
    if not diam < eps:
        raise UnconvergedError(
            f"pullback at t={target} reached depth {n} with diameter {diam:.3e} >= eps={eps:.1e}", best
        )
    return best


def pullback_diameters(d: EnvironmentDriver, target: int, delta: float, depth: int) -> np.ndarray:
    """Image diameters ``d_0..d_depth`` of the pullback products ending at ``target``."""
    P = np.eye(d.n_states)
    out = [simplex_image_diameter(P)]
    for n in range(1, depth + 1):
        P = _renormalize(P @ transition_at(d, target - n, delta))
        out.append(simplex_image_diameter(P))
    return np.array(out)


def attractor_path(
    d: EnvironmentDriver,
    start: int,
    stop: int,
    delta: float,
    eps: float = DEFAULT_EPS,
    max_depth: int | None = None,
) -> list[AttractorPoint]:
    """Independent pullback points for every index in ``start..stop`` inclusive."""
    if start > stop:
        raise InvalidParameterError(f"empty window: from={start} > to={stop}")
    return [pullback_point(d, t, delta, eps, max_depth) for t in range(start, stop + 1)]


def equivariance_defects(d: EnvironmentDriver, path: list[AttractorPoint], delta: float) -> np.ndarray:
    """``rho_H(L_t a_t, a_{t+1})`` along consecutive points of a path."""
    out = []
    for a, b in zip(path, path[1:]):
        out.append(hilbert_distance(transition_at(d, a.target_index, delta) @ a.point, b.point))
    return np.array(out)


def block_certified_bound(n: int, n_states: int, dbar: float, nu: float) -> float:
    """Guaranteed bound on ``d_n``: ``nu**(floor(n/(N-1)) - 1) * dbar`` once a full block is in."""
    k = n // (n_states - 1)
    if k < 1:
        return math.inf
    return nu ** (k - 1) * dbar


def forward_tracking_report(
    d: EnvironmentDriver,
    p0,
    target_start: int,
    steps: int,
    delta: float,
    eps: float = DEFAULT_EPS,
    path: list[AttractorPoint] | None = None,
    max_depth: int | None = None,
) -> ConvergenceTrace:
    """Run the chain forward from ``p0`` at ``target_start`` and compare with the attractor.

    Row ``n`` holds the pullback image diameter ``d_n`` at ``target_start``,
    the distance ``rho_H(p^(n), a_{target_start+n})`` and the block bound on ``d_n``.
    Boundary starting points give ``inf`` distances until the orbit enters the interior.
    """
    p = project_to_simplex(p0)
    if path is None:
        path = attractor_path(d, target_start, target_start + steps, delta, eps, max_depth)
    if len(path) < steps + 1:
        raise InvalidParameterError(f"path has {len(path)} points, need {steps + 1}")
    cert = uniform_certificate(d.n_states, delta, d.bounds)
    diams = pullback_diameters(d, target_start, delta, steps)
    trace = ConvergenceTrace(block_length=d.n_states - 1, uniform_ratio=cert.birkhoff_ratio)
    for n in range(steps + 1):
        bound = block_certified_bound(n, d.n_states, cert.projective_diameter, cert.birkhoff_ratio)
        trace.rows.append(TraceRow(n, float(diams[n]), hilbert_distance(p, path[n].point), bound))
        if n < steps:
            p = _renormalize(transition_at(d, target_start + n, delta) @ p)
    return trace


def periodic_attractor(blocks, delta: float, eps: float = DEFAULT_EPS, max_iter: int = 100_000, bounds=None):
    """Phase points of the periodic attractor from the fixed point of the period map.

    Iterates the normalised period map from the uniform vector and stops when
    the a-posteriori error estimate ``step * r / (1 - r)`` (``r`` the observed
    ratio of successive steps) is below ``eps / 2``.
    """
    d = periodic_driver(blocks, bounds)
    T = len(d.blocks)
    N = d.n_states
    mats = [transition_at(d, k, delta) for k in range(T)]
    period_map = np.eye(N)
    for L in mats:
        period_map = L @ period_map

    x = np.full(N, 1.0 / N)
    prev_step = math.nan
    err = math.inf
    it = 0
    while it < max_iter:
        it += 1
        y = project_to_simplex(period_map @ x)
        step = hilbert_distance(x, y)
        x = y
        if step <= 1e-3 * eps:
            err = step
            break
        r = step / prev_step
        prev_step = step
        if math.isfinite(r) and 0.0 < r < 1.0:
            err = step * r / (1.0 - r)
            if err < eps / 2:
                break
    if not err < eps / 2:
        raise UnconvergedError(f"period map did not settle after {it} iterations (err {err:.3e})")

    points = [AttractorPoint(x, err, it * T, 0)]
    for k in range(1, T):
        x = project_to_simplex(mats[k - 1] @ x)
        points.append(AttractorPoint(x, err, it * T, k))
    return points


def subdominant_spectral_bound(L, iterations: int = 10_000) -> float:
    """Modulus of the largest eigenvalue of ``L`` on the zero-sum subspace.

    Power iteration from ``(1, -1, 0, ...)/sqrt(2)``, re-projected onto
    ``sum(x) = 0`` every step.  The readout is the geometric mean of the last
    two growth factors, which is insensitive to a sign-alternating pair of
    eigenvalues of equal modulus.
    """
    L = np.asarray(L, dtype=float)
    N = L.shape[0]
    x = np.zeros(N)
    x[0], x[1] = 1.0, -1.0
    x /= math.sqrt(2.0)
    g_prev = g = 1.0
    for _ in range(iterations):
        y = L @ x
        y -= y.mean()
        nrm = float(np.linalg.norm(y))
        if nrm == 0.0:
            return 0.0
        g_prev, g = g, nrm
        x = y / nrm
    return math.sqrt(g * g_prev)


def contraction_summary(n_states: int, delta: float, bounds) -> dict:
    s = positivity_floor(delta, bounds, n_states)
    cert = uniform_certificate(n_states, delta, bounds)
    return {
        "gamma": s.gamma,
        "gamma_floor": s.gamma_floor,
        "slice_diameter": cert.projective_diameter,
        "uniform_ratio": cert.birkhoff_ratio,
        "block_length": cert.block_length,
    }


__all__ = [
    "AttractorPoint",
    "ConvergenceTrace",
    "TraceRow",
    "a_priori_depth",
    "attractor_path",
    "block_certified_bound",
    "contraction_summary",
    "equivariance_defects",
    "forward_tracking_report",
    "periodic_attractor",
    "pullback_diameters",
    "pullback_point",
    "subdominant_spectral_bound",
]
