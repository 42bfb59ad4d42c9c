"""Why the frequency window is held fixed.

For a few window half-widths W this prints, at g = (1/2) ln 1.5:
  * eta_hat and xi_hat, showing Im xi_hat drifting like 1/W;
  * the narrowband (q0_norm = 1e-3) shape error of G2(X, X) against the
    coherent double-slit pattern, which grows as the off-axis
    phase-matching ring enters the window.

    python3 scripts/window_study.py
"""
import numpy as np

from pdcslit.correlations import build_kernels, g2_spontaneous
from pdcslit.gain import CrystalParams, rate_to_gain
from pdcslit.kernels import QuadratureSpec, broadband_constants
from pdcslit.limits import shape_error
from pdcslit.slit import SlitGeometry, coherent_g2


def main():
    geom = SlitGeometry(0.2)
    g = rate_to_gain(1.5)
    x = np.linspace(-1, 1, 401)
    print(f"{'W':>5} {'eta_hat':>12} {'Re xi_hat':>12} {'Im xi_hat':>12} {'narrowband err':>15}")
    for w in (8.0, 16.0, 32.0, 64.0):
        spec = QuadratureSpec(w_halfwidth=w)
        k0 = broadband_constants(CrystalParams(g=g), spec)
        kn = build_kernels(CrystalParams(g=g, q0_norm=1e-3), geom, spec)
        err = shape_error(g2_spontaneous(kn, geom, x, x), coherent_g2(x, x, geom))
        print(f"{w:5.0f} {k0.eta_hat:12.6f} {k0.xi_hat.real:12.6f} {k0.xi_hat.imag:12.6f} {err:15.4f}")


if __name__ == "__main__":
    main()
