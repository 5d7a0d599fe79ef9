"""Property checks run by ``pullback-chain verify``.

Each check returns ``(name, passed, detail)``.  ``matrix_hook`` replaces every
transition matrix used by the structural checks; it exists so tests can feed a
corrupted chain and watch the suite fail.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .attractor import attractor_path, equivariance_defects, pullback_diameters
from .chain_model import positivity_floor
from .cocycle import CocycleProduct, uniform_certificate, verify_band_structure, verify_dissipativity
from .config import ExperimentConfig
from .driving import transition_at
from .errors import UnconvergedError
from .hilbert import hilbert_distance, projective_diameter

CheckResult = tuple[str, bool, str]


def _positive(rng, n, size):
    return rng.uniform(1e-3, 1.0, size=(size, n))


def run_checks(cfg: ExperimentConfig, matrix_hook: Callable | None = None, seed: int | None = None) -> list[CheckResult]:
    d = cfg.build_driver()
    N, delta = cfg.n_states, cfg.delta
    if seed is None:
        seed = cfg.driver.seed
    rng = np.random.default_rng(seed)
    k = cfg.verify_samples
    results: list[CheckResult] = []

    def L(n):
        M = transition_at(d, n, delta)
        return M if matrix_hook is None else np.asarray(matrix_hook(M), dtype=float)

    def product(start, length):
        P = np.eye(N)
        for t in range(start, start + length):
            P = L(t) @ P
        return CocycleProduct(P, start, length)

    # metric axioms
    X, Y, Z = _positive(rng, N, k), _positive(rng, N, k), _positive(rng, N, k)
    sym = max(abs(hilbert_distance(x, y) - hilbert_distance(y, x)) for x, y in zip(X, Y))
    results.append(("metric_symmetry", sym <= 1e-12, f"max asymmetry {sym:.3e}"))
    tri = max(hilbert_distance(x, z) - hilbert_distance(x, y) - hilbert_distance(y, z) for x, y, z in zip(X, Y, Z))
    results.append(("metric_triangle", tri <= 1e-12, f"max excess {tri:.3e}"))
    s, t = rng.uniform(1e-3, 1e6, k), rng.uniform(1e-3, 1e6, k)
    sc = max(
        abs(hilbert_distance(a * x, b * y) - hilbert_distance(x, y)) / max(hilbert_distance(x, y), 1e-300)
        for a, b, x, y in zip(s, t, X, Y)
    )
    results.append(("metric_scale_invariance", sc <= 1e-10, f"max relative change {sc:.3e}"))

    starts = rng.integers(-1000, 1000, size=min(k, 50))

    # stochastic, nonnegative factors
    bad = 0.0
    for st in starts:
        M = L(int(st))
        bad = max(bad, float(np.abs(M.sum(axis=0) - 1).max()), float(-M.min()), float(M.max() - 1))
    results.append(("stochastic_factors", bad <= 1e-14 * N, f"max violation {bad:.3e}"))

    # banded positivity and dissipativity
    gamma = positivity_floor(delta, cfg.bounds, N).gamma
    ok, worst = True, ""
    for st in starts[:20]:
        for n in range(1, N):
            rep = verify_band_structure(product(int(st), n), gamma)
            if not rep.ok:
                ok, worst = False, f"start={st} n={n} banded={rep.is_banded} min={rep.band_min:.3e} floor={rep.floor:.3e}"
        if not verify_dissipativity(product(int(st), N - 1), gamma):
            ok, worst = False, f"start={st} block not dissipative"
    results.append(("band_positivity", ok, worst or f"gamma={gamma:.6g}"))

    # cocycle property
    disc = 0.0
    for st in starts[:20]:
        n, m = (int(v) for v in rng.integers(0, 2 * N + 1, size=2))
        lhs = product(int(st), n + m).matrix
        rhs = product(int(st) + m, n).matrix @ product(int(st), m).matrix
        disc = max(disc, float(np.abs(lhs - rhs).max()))
    results.append(("cocycle_property", disc <= 1e-12, f"max discrepancy {disc:.3e}"))

    # uniform block contraction
    cert = uniform_certificate(N, delta, cfg.bounds)
    nu, dbar = cert.birkhoff_ratio, cert.projective_diameter
    ok, worst = True, 0.0
    for st in starts[:20]:
        B = product(int(st), N - 1).matrix
        if not projective_diameter(B) <= dbar + 1e-9:
            ok = False
        for x, y in zip(X[:20], Y[:20]):
            excess = hilbert_distance(B @ x, B @ y) - nu * hilbert_distance(x, y)
            worst = max(worst, excess)
    ok = ok and worst <= 1e-10
    results.append(("uniform_contraction", ok, f"nu={nu:.6g} max excess {worst:.3e}"))

    # nested pullback images
    diams = pullback_diameters(d, cfg.window[0], delta, 4 * N)
    fin = diams[np.isfinite(diams)]
    inc = float(np.diff(fin).max()) if fin.size > 1 else 0.0
    results.append(("nested_images", inc <= 1e-12, f"max increase {inc:.3e}"))

    # equivariance of the attractor path
    lo = cfg.window[0]
    hi = min(cfg.window[1], lo + 4)
    try:
        path = attractor_path(d, lo, hi, delta, cfg.tolerance, cfg.max_depth)
        defect = float(equivariance_defects(d, path, delta).max()) if len(path) > 1 else 0.0
        results.append(("equivariance", defect <= 2 * cfg.tolerance, f"max defect {defect:.3e}"))
    except UnconvergedError as exc:
        results.append(("equivariance", False, str(exc)))
    return results
