"""Command-line front end: ``pullback-chain {stationary,attractor,trace,verify,contraction}``.

Exit codes: 0 success, 1 verification failure, 2 configuration error, 3 unconverged.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .attractor import attractor_path, contraction_summary, forward_tracking_report
from .chain_model import build_generator, stationary_distribution
from .config import ExperimentConfig, load_config
from .errors import ConfigError, InvalidParameterError, UnconvergedError
from .results import write_table
from .verify import run_checks

log = logging.getLogger("pullback_chain")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_UNCONVERGED = 0, 1, 2, 3


def _prob_columns(n):
    return [f"p_{i}" for i in range(1, n + 1)]


def cmd_stationary(cfg: ExperimentConfig) -> int:
    d = cfg.build_driver()
    t = cfg.window[0]
    bands = d.env_at(t)
    p = stationary_distribution(bands)
    residual = float(np.abs(build_generator(bands) @ p).max())
    path = write_table(cfg.output, "stationary", ["index", *_prob_columns(cfg.n_states), "residual"],
                       [[t, *p.tolist(), residual]], cfg.format)
    log.info("stationary distribution at t=%d written to %s (residual %.3e)", t, path, residual)
    return EXIT_OK


def cmd_attractor(cfg: ExperimentConfig) -> int:
    d = cfg.build_driver()
    try:
        pts = attractor_path(d, cfg.window[0], cfg.window[1], cfg.delta, cfg.tolerance, cfg.max_depth)
    except UnconvergedError as exc:
        log.error("%s", exc)
        return EXIT_UNCONVERGED
    rows = [[a.target_index, *a.point.tolist(), float(a.error_radius), a.pullback_depth] for a in pts]
    path = write_table(cfg.output, "attractor",
                       ["index", *_prob_columns(cfg.n_states), "error_radius", "depth"], rows, cfg.format)
    log.info("%d attractor points written to %s", len(rows), path)
    return EXIT_OK


def cmd_trace(cfg: ExperimentConfig) -> int:
    d = cfg.build_driver()
    if cfg.initial is not None:
        p0 = np.array(cfg.initial)
    else:
        p0 = np.zeros(cfg.n_states)
        p0[0] = 1.0
    try:
        trace = forward_tracking_report(d, p0, cfg.window[0], cfg.horizon, cfg.delta, cfg.tolerance,
                                        max_depth=cfg.max_depth)
    except UnconvergedError as exc:
        log.error("%s", exc)
        return EXIT_UNCONVERGED
    rows = [[r.n, r.image_diameter, r.forward_distance, r.certified_bound] for r in trace.rows]
    path = write_table(cfg.output, "trace", ["n", "image_diameter", "forward_distance", "certified_bound"],
                       rows, cfg.format)
    log.info("%d trace rows written to %s", len(rows), path)
    return EXIT_OK


def cmd_verify(cfg: ExperimentConfig, matrix_hook=None) -> int:
    results = run_checks(cfg, matrix_hook=matrix_hook)
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    write_table(cfg.output, "verify", ["check", "passed", "detail"], [list(r) for r in results], cfg.format)
    return EXIT_OK if all(p for _, p, _ in results) else EXIT_VERIFY


def cmd_contraction(cfg: ExperimentConfig) -> int:
    s = contraction_summary(cfg.n_states, cfg.delta, cfg.bounds)
    for k, v in s.items():
        print(f"{k} = {v!r}")
    write_table(cfg.output, "contraction", list(s), [list(s.values())], cfg.format)
    return EXIT_OK


COMMANDS = {
    "stationary": cmd_stationary,
    "attractor": cmd_attractor,
    "trace": cmd_trace,
    "verify": cmd_verify,
    "contraction": cmd_contraction,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pullback-chain", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML experiment configuration")
        p.add_argument("--output", help="output directory (overrides config)")
        p.add_argument("--format", choices=["csv", "json"], help="output format (overrides config)")
        p.add_argument("--seed", type=int, help="seed override for random drivers")
        p.add_argument("--quiet", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    try:
        cfg = load_config(args.config).with_overrides(output=args.output, format=args.format, seed=args.seed)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidParameterError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
