"""Regenerate every figure panel into one directory.

    python3 scripts/reproduce_all.py --out results --threads 4

Full-resolution Fig. 4 panels take a few minutes each; ``--quick`` cuts
every sweep to 9 samples for a smoke run.
"""
import argparse
import time

from pdcslit.figures import panel_configs, run

FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("figures", nargs="*", default=FIGURES)
    args = ap.parse_args()
    over = {"out": args.out, "threads": args.threads}
    if args.quick:
        over["sweep_points"] = 9
    for fig in args.figures:
        for cfg in panel_configs(fig, overrides=over):
            t0 = time.perf_counter()
            res = run(cfg)
            print(f"{cfg.label:8s} {time.perf_counter() - t0:7.1f} s  {res.manifest}")


if __name__ == "__main__":
    main()
