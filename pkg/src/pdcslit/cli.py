"""Command-line entry point: ``pdcslit <command> [options]``.

Exit codes: 0 success, 2 invalid configuration, 3 quadrature did not converge.
"""
from __future__ import annotations

import argparse
import os
import sys

from .config import COMMANDS, ConfigError, parse_file, parse_text
from .errors import ConvergenceFailure
from .figures import panel_configs, run

OUT_ENV = "PDCSLIT_OUT"

# flag -> (config key, type)
FLAGS = {
    "--out": ("out", str),
    "--threads": ("threads", int),
    "--grid": ("x_points", int),
    "--tol": ("rel_tol", float),
    "--delta0": ("delta0", float),
    "--g": ("g", float),
    "--q0": ("q0_norm", float),
    "--rho": ("rho", float),
    "--intensity": ("intensity", float),
    "--qin": ("q_inject", float),
    "--mode": ("mode", str),
    "--kind": ("kind", str),
    "--beam": ("beam", str),
    "--sweep-axis": ("sweep_axis", str),
    "--sweep-min": ("sweep_min", float),
    "--sweep-max": ("sweep_max", float),
    "--sweep-points": ("sweep_points", int),
    "--sweep-scale": ("sweep_scale", str),
}


def make_parser():
    p = argparse.ArgumentParser(prog="pdcslit", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="PATH", help="key = value file (a manifest works too)")
    p.add_argument("--panel", default="", help="figure panel letter; default runs all panels")
    p.add_argument("--type", dest="crystal_type", choices=("1", "2"), help="crystal type I or II")
    p.add_argument("--rate", type=float, help="amplification rate exp(2g); overrides --g")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="any other config key")
    for flag, (key, kind) in FLAGS.items():
        p.add_argument(flag, dest=key, type=kind, default=None)
    return p


def overrides_from(args):
    over = parse_text("\n".join(args.set)) if args.set else {}
    for _, (key, _kind) in FLAGS.items():
        val = getattr(args, key)
        if val is not None:
            over[key] = val
    if args.crystal_type is not None:
        over["crystal_type"] = "I" if args.crystal_type == "1" else "II"
    if args.rate is not None:
        over.update(parse_text(f"rate = {args.rate!r}"))
    if "out" not in over and os.environ.get(OUT_ENV):
        over["out"] = os.environ[OUT_ENV]
    return over


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        file_values = parse_file(args.config) if args.config else {}
        configs = panel_configs(args.command, args.panel, file_values, overrides_from(args))
        for cfg in configs:
            res = run(cfg)
            print(f"{cfg.label}: wrote {len(res.files)} files, manifest {res.manifest}")
    except ConfigError as exc:
        print(f"pdcslit: config error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceFailure as exc:
        print(f"pdcslit: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
