"""Command line front end.

    aderdg run <config> [--output-dir DIR] [--threads K]
    aderdg convergence <config-template> --levels n1,n2,... [--output-dir DIR]
    aderdg compare <a.csv> <b.csv> --tol TOL

Exit codes: 0 success, 2 configuration error, 3 solver error,
4 comparison failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import AderDgError, ConfigError
from .output import read_csv
from .runconfig import load_config
from .runner import convergence_study, run, write_convergence_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_COMPARE = 4


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.output_dir:
        cfg.output_dir = args.output_dir
    if args.threads:
        cfg.threads = args.threads
    report = run(cfg)
    print(f"steps: {report.steps}  t_end: {report.t_end}"
          f"  wall: {report.wall_time:.2f}s")
    if report.errors:
        for name, err in report.errors.items():
            print(f"  L2({name}) = {err:.6e}")
    if report.traction_max is not None:
        print(f"  max traction residual: normal {report.traction_max[0]:.3e}"
          f" shear {report.traction_max[1]:.3e}")
    return EXIT_OK


def _cmd_convergence(args) -> int:
    levels = [int(tok) for tok in args.levels.split(",") if tok.strip()]
    if len(levels) < 1:
        raise ConfigError("need at least one level")
    outdir = args.output_dir or "out/convergence"
    degree, lv, errors, orders, names = convergence_study(
        args.config, levels, output_dir=outdir)
    text = write_convergence_outputs(outdir, degree, lv, errors, orders, names)
    print(text, end="")
    return EXIT_OK


def _cmd_compare(args) -> int:
    ha, da = read_csv(args.a)
    hb, db = read_csv(args.b)
    if ha != hb:
        print(f"header mismatch: {ha} vs {hb}")
        return EXIT_COMPARE
    if da.shape != db.shape:
        print(f"shape mismatch: {da.shape} vs {db.shape}")
        return EXIT_COMPARE
    scale = np.maximum(1.0, np.maximum(np.abs(da), np.abs(db)))
    diff = np.abs(da - db) / scale
    worst = float(diff.max()) if diff.size else 0.0
    if worst > args.tol:
        idx = np.unravel_index(np.argmax(diff), diff.shape)
        print(f"mismatch {worst:.3e} > tol {args.tol:.3e} at row {idx[0]}, "
              f"column {ha[idx[1]]}")
        return EXIT_COMPARE
    print(f"files agree within {args.tol:.3e} (worst {worst:.3e})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aderdg",
                                description="ADER-DG wave solvers")
    sub = p.add_subparsers(dest="cmd", required=True)

    pr = sub.add_parser("run", help="advance one configured problem")
    pr.add_argument("config")
    pr.add_argument("--output-dir", default=None)
    pr.add_argument("--threads", type=int, default=None)
    pr.set_defaults(fn=_cmd_run)

    pc = sub.add_parser("convergence", help="mesh refinement study")
    pc.add_argument("config")
    pc.add_argument("--levels", required=True,
                    help="comma separated cell counts, e.g. 10,15,20")
    pc.add_argument("--output-dir", default=None)
    pc.add_argument("--threads", type=int, default=None)
    pc.set_defaults(fn=_cmd_convergence)

    pm = sub.add_parser("compare", help="numeric CSV comparison")
    pm.add_argument("a")
    pm.add_argument("b")
    pm.add_argument("--tol", type=float, default=1e-12)
    pm.set_defaults(fn=_cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None):
        import numba

        numba.set_num_threads(args.threads)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AderDgError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
