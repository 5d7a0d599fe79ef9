"""YAML experiment configuration, validated into a frozen dataclass.

Grammar (all keys lowercase; unknown keys are rejected)::

    n_states: 3                 # N >= 2
    delta: 0.1                  # 0 < delta < 1/(2*beta)
    bounds: {alpha: 1.0, beta: 2.0}
    driver:
      kind: constant            # constant | periodic | random
      rates: [1, 2, 1.5, 1]     # constant; defaults to (alpha+beta)/2 everywhere
      blocks: [[...], [...]]    # periodic; one list of 2N-2 rates per phase
      seed: 7                   # random
      distribution: uniform     # random; uniform | two_point
    tolerance: 1.0e-10
    max_depth: null             # default 10*N*ceil(ln(1/tolerance))
    horizon: 100                # forward steps for trace
    window: [0, 10]             # inclusive index range for attractor paths
    initial: null               # forward start vector for trace; default e_1
    verify_samples: 200         # random pairs per property in verify
    output: results
    format: csv                 # csv | json
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import yaml

from .chain_model import BandParameters, RateBounds
from .driving import DISTRIBUTIONS, EnvironmentDriver, constant_driver, periodic_driver, random_driver
from .errors import ConfigError, InvalidParameterError

_TOP_KEYS = {
    "n_states", "delta", "bounds", "driver", "tolerance", "max_depth", "horizon",
    "window", "initial", "verify_samples", "output", "format",
}
_DRIVER_KEYS = {
    "constant": {"kind", "rates"},
    "periodic": {"kind", "blocks"},
    "random": {"kind", "seed", "distribution"},
}


@dataclass(frozen=True)
class DriverSpec:
    kind: str
    rates: tuple[float, ...] | None = None
    blocks: tuple[tuple[float, ...], ...] = ()
    seed: int = 0
    distribution: str = "uniform"


@dataclass(frozen=True)
class ExperimentConfig:
    n_states: int
    delta: float
    alpha: float
    beta: float
    driver: DriverSpec
    tolerance: float = 1e-10
    max_depth: int | None = None
    horizon: int = 100
    window: tuple[int, int] = (0, 10)
    initial: tuple[float, ...] | None = None
    verify_samples: int = 200
    output: str = "results"
    format: str = "csv"

    @property
    def bounds(self) -> RateBounds:
        return RateBounds(self.alpha, self.beta)

    def build_driver(self) -> EnvironmentDriver:
        spec, N, bounds = self.driver, self.n_states, self.bounds
        if spec.kind == "constant":
            return constant_driver(BandParameters(N, spec.rates), bounds)
        if spec.kind == "periodic":
            return periodic_driver([BandParameters(N, b) for b in spec.blocks], bounds)
        return random_driver(N, bounds, spec.seed, spec.distribution)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "seed" in kw:
            seed = kw.pop("seed")
            if self.driver.kind != "random":
                raise ConfigError("--seed applies only to random drivers")
            kw["driver"] = dataclasses.replace(self.driver, seed=int(seed))
        return dataclasses.replace(self, **kw)


def _fail(key, msg):
    raise ConfigError(f"{key}: {msg}")


def _number(raw, key, cast=float):
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(key, f"expected a number, got {v!r}")
    if cast is int and int(v) != v:
        _fail(key, f"expected an integer, got {v!r}")
    return cast(v)


def _rates(v, key, n):
    if not isinstance(v, list) or not all(isinstance(q, (int, float)) and not isinstance(q, bool) for q in v):
        _fail(key, "expected a list of numbers")
    if len(v) != 2 * n - 2:
        _fail(key, f"expected {2 * n - 2} rates for n_states={n}, got {len(v)}")
    return tuple(float(q) for q in v)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a YAML document; raise :class:`ConfigError` with the offending key."""
    try:
        raw = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise ConfigError(f"parse error at {where}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"parse error: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping at top level")

    unknown = set(raw) - _TOP_KEYS
    if unknown:
        _fail(sorted(unknown)[0], "unknown key")
    for key in ("n_states", "delta", "bounds", "driver"):
        if key not in raw:
            _fail(key, "required key missing")

    n = _number(raw, "n_states", int)
    if n < 2:
        _fail("n_states", f"must be >= 2, got {n}")
    b = raw["bounds"]
    if not isinstance(b, dict) or set(b) != {"alpha", "beta"}:
        _fail("bounds", "expected a mapping with exactly alpha and beta")
    alpha, beta = _number(b, "alpha"), _number(b, "beta")
    try:
        bounds = RateBounds(alpha, beta)
    except InvalidParameterError as exc:
        _fail("bounds", str(exc))
    delta = _number(raw, "delta")
    if delta <= 0:
        _fail("delta", f"must be positive, got {delta!r}")
    try:
        bounds.check_step(delta)
    except InvalidParameterError as exc:
        _fail("delta", str(exc))

    dr = raw["driver"]
    if not isinstance(dr, dict) or "kind" not in dr:
        _fail("driver", "expected a mapping with a kind")
    kind = dr["kind"]
    if kind not in _DRIVER_KEYS:
        _fail("driver.kind", f"expected one of {sorted(_DRIVER_KEYS)}, got {kind!r}")
    extra = set(dr) - _DRIVER_KEYS[kind]
    if extra:
        _fail(f"driver.{sorted(extra)[0]}", f"unknown key for {kind} driver")
    if kind == "constant":
        rates = dr.get("rates")
        rates = _rates(rates, "driver.rates", n) if rates is not None else (0.5 * (alpha + beta),) * (2 * n - 2)
        spec = DriverSpec(kind, rates=rates)
    elif kind == "periodic":
        blocks = dr.get("blocks")
        if not isinstance(blocks, list) or not blocks:
            _fail("driver.blocks", "expected a non-empty list of rate lists")
        spec = DriverSpec(kind, blocks=tuple(_rates(bl, f"driver.blocks[{i}]", n) for i, bl in enumerate(blocks)))
    else:
        seed = _number(dr, "seed", int) if "seed" in dr else 0
        dist = dr.get("distribution", "uniform")
        if dist not in DISTRIBUTIONS:
            _fail("driver.distribution", f"expected one of {list(DISTRIBUTIONS)}, got {dist!r}")
        spec = DriverSpec(kind, seed=seed, distribution=dist)

    kw = {}
    if raw.get("tolerance") is not None:
        kw["tolerance"] = _number(raw, "tolerance")
        if kw["tolerance"] <= 0:
            _fail("tolerance", "must be positive")
    if raw.get("max_depth") is not None:
        kw["max_depth"] = _number(raw, "max_depth", int)
        if kw["max_depth"] < 1:
            _fail("max_depth", "must be >= 1")
    for key in ("horizon", "verify_samples"):
        if raw.get(key) is not None:
            kw[key] = _number(raw, key, int)
            if kw[key] < 1:
                _fail(key, "must be >= 1")
    if raw.get("window") is not None:
        w = raw["window"]
        if not (isinstance(w, list) and len(w) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in w)):
            _fail("window", "expected [from, to] integers")
        if w[0] > w[1]:
            _fail("window", f"from={w[0]} exceeds to={w[1]}")
        kw["window"] = (w[0], w[1])
    if raw.get("initial") is not None:
        p0 = raw["initial"]
        if not (isinstance(p0, list) and len(p0) == n and all(isinstance(v, (int, float)) for v in p0)):
            _fail("initial", f"expected a list of {n} numbers")
        if any(v < 0 for v in p0) or sum(p0) <= 0:
            _fail("initial", "components must be nonnegative with positive sum")
        kw["initial"] = tuple(float(v) for v in p0)
    if raw.get("output") is not None:
        kw["output"] = str(raw["output"])
    if raw.get("format") is not None:
        if raw["format"] not in ("csv", "json"):
            _fail("format", f"expected csv or json, got {raw['format']!r}")
        kw["format"] = raw["format"]

    cfg = ExperimentConfig(n, delta, alpha, beta, spec, **kw)
    try:
        cfg.build_driver()
    except InvalidParameterError as exc:
        _fail("driver", str(exc))
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text)
