"""Command-line harness: run, sweep, compare, mms, probe.

Exit code 0 on success, 2 for configuration or usage errors, 1 for runtime
failures.  Errors print a single `error: ...` line on stderr so scripted
callers can scrape them.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness, solver
from .config import SimConfig, apply_overrides, parse_config
from .diagnostics import LineAxis, detect_turning_points, sample_line
from .errors import ConfigError, SolverError
from .grid import build_grid


def _load_config(path: str, overrides) -> SimConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    cfg = parse_config(text)
    return apply_overrides(cfg, list(overrides or []))


def _parse_float_list(text: str, what: str):
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"bad {what} list {text!r}") from None


def _cmd_run(args) -> int:
    cfg = _load_config(args.config, args.set)
    state, records = solver.run(cfg)
    turning = detect_turning_points(records, cfg.jump_threshold)
    out = harness.resolve_out_dir(cfg.out_dir)
    print(f"run finished at t={state.t:.6f} with {len(records)} records")
    print(f"peak max_v {max(r.max_v for r in records):.6e}, "
          f"final energy {records[-1].energy:.6e}")
    print(f"turning points: {[round(t, 6) for t in turning] or 'none'}")
    if out:
        print(f"artifacts written to {out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config, args.set)
    re_list = _parse_float_list(args.re, "re") if args.re else [cfg.re]
    swirl_list = {"both": [True, False], "on": [True], "off": [False]}[args.swirl]
    arts = harness.sweep(cfg, re_list, swirl_list)
    root = harness.resolve_out_dir(cfg.out_dir)
    n_cells = len(re_list) * len(swirl_list)
    print(f"sweep wrote {len(arts)}/{n_cells} cells under {root}")
    for art in arts:
        print(f"  {art.out_dir.name}: ok")
    if len(arts) < n_cells:
        print(f"  (see {Path(root) / 'sweep_summary.json'} for failures)")
    return 0 if arts else 1


def _cmd_compare(args) -> int:
    report = harness.compare_runs(args.dir_a, args.dir_b)
    print(report.summary())
    return 0


def _cmd_mms(args) -> int:
    report = harness.mms_convergence(levels=args.levels, re=args.re)
    print(report.summary())
    return 0


def _cmd_probe(args) -> int:
    cfg = _load_config(args.config, args.set)
    if args.time is not None:
        cfg = cfg.replace(t_end=args.time)
    grid = build_grid(cfg)
    state, _ = solver.run(cfg, out_dir="")

    if args.offsets:
        offsets = _parse_float_list(args.offsets, "offsets")
    elif args.line == "z":
        offsets = list(np.arange(1, 26) * 0.005)
    else:
        offsets = list(np.linspace(0.01, 0.2, 20))

    if args.line == "z":
        base = (0.0, args.x2, grid.z_min)
        axis = LineAxis.PARALLEL_Z
    else:
        base = (0.0, 0.0, grid.z_min + args.height)
        axis = LineAxis.PARALLEL_X2
    sample = sample_line(state, grid, base, axis, offsets, floor=cfg.xi_floor)
    if args.out:
        harness.write_line_sample(sample, args.out)
        print(f"probe written to {args.out}")
    else:
        for k in range(sample.offsets.size):
            x1, x2, x3 = sample.points[k]
            xi1, xi2, xi3 = sample.xi[k]
            print(f"{sample.offsets[k]:.6f} ({x1:.4f},{x2:.4f},{x3:.4f}) "
                  f"|w|={sample.w_mag[k]:.6e} "
                  f"xi=({xi1:+.4f},{xi2:+.4f},{xi3:+.4f})"
                  f"{'' if sample.valid[k] else ' [below floor]'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saddlesim",
        description="axisymmetric swirling-flow simulations in a cylinder")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", required=True, help="path to key = value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")

    p_run = sub.add_parser("run", help="run one simulation")
    add_config(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a grid of (re, swirl) cells")
    add_config(p_sweep)
    p_sweep.add_argument("--re", help="comma-separated Reynolds numbers "
                                      "(default: the config value)")
    p_sweep.add_argument("--swirl", choices=("both", "on", "off"), default="both")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cmp = sub.add_parser("compare", help="compare two run directories")
    p_cmp.add_argument("dir_a")
    p_cmp.add_argument("dir_b")
    p_cmp.set_defaults(func=_cmd_compare)

    p_mms = sub.add_parser("mms", help="manufactured-solution refinement ladder")
    p_mms.add_argument("--levels", type=int, default=3)
    p_mms.add_argument("--re", type=float, default=100.0)
    p_mms.set_defaults(func=_cmd_mms)

    p_probe = sub.add_parser("probe",
                             help="sample vorticity magnitude and direction on a line")
    add_config(p_probe)
    p_probe.add_argument("--time", type=float, default=None,
                         help="run to this time instead of the configured t_end")
    p_probe.add_argument("--line", choices=("z", "x2"), default="z",
                         help="z: parallel to the symmetry axis; "
                              "x2: parallel to the x2 axis on the lower wall")
    p_probe.add_argument("--x2", type=float, default=0.05,
                         help="x2 coordinate of the z-parallel line")
    p_probe.add_argument("--height", type=float, default=0.05,
                         help="height above the lower wall for the x2-parallel line")
    p_probe.add_argument("--offsets", help="comma-separated sample offsets")
    p_probe.add_argument("--out", help="write probe CSV here instead of stdout")
    p_probe.set_defaults(func=_cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
