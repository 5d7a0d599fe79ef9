"""Pullback diameters and forward distances for the bundled driver configs.

Writes one trace CSV per config into ``results/decay/`` and prints a summary of
the measured block contraction next to the uniform Birkhoff bound.

    python scripts/decay_curves.py [configs/*.yaml]
"""

import sys
from pathlib import Path

import numpy as np

from pullback_chain.attractor import forward_tracking_report
from pullback_chain.config import load_config
from pullback_chain.results import write_table


def run(path, out_dir):
    cfg = load_config(path)
    d = cfg.build_driver()
    p0 = np.array(cfg.initial) if cfg.initial else np.eye(cfg.n_states)[0]
    trace = forward_tracking_report(d, p0, cfg.window[0], cfg.horizon, cfg.delta, cfg.tolerance,
                                    max_depth=cfg.max_depth)
    rows = [[r.n, r.image_diameter, r.forward_distance, r.certified_bound] for r in trace.rows]
    write_table(out_dir / Path(path).stem, "trace", ["n", "image_diameter", "forward_distance", "certified_bound"], rows)

    d_n = trace.column("image_diameter")
    k = cfg.n_states - 1
    ok = np.isfinite(d_n[:-k]) & (d_n[:-k] > 1e-9)
    block = (d_n[k:][ok] / d_n[:-k][ok]).max() if ok.any() else float("nan")
    print(f"{Path(path).name:>16}: N={cfg.n_states} uniform nu={trace.uniform_ratio:.6f} "
          f"worst measured block ratio={block:.6f} final forward distance={trace.rows[-1].forward_distance:.2e}")


def main(argv):
    paths = argv or sorted(str(p) for p in Path(__file__).resolve().parent.parent.glob("configs/*.yaml"))
    out_dir = Path("results/decay")
    for p in paths:
        run(p, out_dir)


if __name__ == "__main__":
    main(sys.argv[1:])
