"""Command line front end.

    plotkit seismo a.csv [b.csv ...] [--labels A,B] [--vars u,v] -o DIR
    plotkit cut field.csv [--y 0] [--var h] -o DIR
    plotkit conv convergence.csv -o DIR
"""

from __future__ import annotations

import argparse
import os
import sys

from .conv import plot_convergence
from .cut import plot_cut
from .io import SchemaMismatch
from .seismo import TraceBundle, plot_seismograms


def _cmd_seismo(args) -> int:
    labels = (args.labels.split(",") if args.labels
              else [os.path.splitext(os.path.basename(p))[0]
                    for p in args.inputs])
    if len(labels) != len(args.inputs):
        raise SchemaMismatch("one label per input file required")
    variables = args.vars.split(",") if args.vars else []
    bundle = TraceBundle(traces=list(zip(labels, args.inputs)),
                         variables=variables)
    written = plot_seismograms(bundle, args.output)
    for path in written:
        print(path)
    return 0


def _cmd_cut(args) -> int:
    out = os.path.join(args.output, "cut.png")
    print(plot_cut(args.inputs[0], out, y=args.y, var=args.var))
    return 0


def _cmd_conv(args) -> int:
    out = os.path.join(args.output, "convergence.png")
    slopes = plot_convergence(args.inputs[0], out)
    for var, s in slopes.items():
        print(f"{var}: fitted slope {s:.3f}")
    print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plotkit",
                                description="figures from aderdg CSV files")
    sub = p.add_subparsers(dest="cmd", required=True)

    ps = sub.add_parser("seismo", help="seismogram overlays, one per variable")
    ps.add_argument("inputs", nargs="+")
    ps.add_argument("--labels", default=None)
    ps.add_argument("--vars", default=None)
    ps.add_argument("-o", "--output", default="figures")
    ps.set_defaults(fn=_cmd_seismo)

    pc = sub.add_parser("cut", help="1D cut through a field dump")
    pc.add_argument("inputs", nargs=1)
    pc.add_argument("--y", type=float, default=0.0)
    pc.add_argument("--var", default=None)
    pc.add_argument("-o", "--output", default="figures")
    pc.set_defaults(fn=_cmd_cut)

    pv = sub.add_parser("conv", help="log-log convergence figure")
    pv.add_argument("inputs", nargs=1)
    pv.add_argument("-o", "--output", default="figures")
    pv.set_defaults(fn=_cmd_conv)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaMismatch as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
