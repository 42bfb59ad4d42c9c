"""Independent quad evaluation of eta_hat, xi_hat and theta.

Regenerates the constants frozen in tests/test_kernels.py.  Uses the
textbook complex formulas for u and v and adaptive quadrature on the same
frequency window as the engine, so it shares no code with pdcslit.

    python3 scripts/kernel_oracle.py
"""
import argparse
import cmath
import math

from scipy.integrate import quad


def uv(g, delta, delta0):
    gam = cmath.sqrt(g * g - delta * delta / 4)
    th = cmath.exp(-0.5j * delta0)
    sh = cmath.sinh(gam) / gam if abs(gam) > 1e-12 else 1.0
    return th * (cmath.cosh(gam) + 0.5j * delta * sh), th * g * sh


def constants(g, delta0=0.0, q=0.0, q0=2.0, w=None):
    w = w or max(8.0, 2 * math.sqrt(2 * g + abs(delta0)))

    def mismatch(om):
        return delta0 + om * om - (q / q0) ** 2

    def integral(f):
        return quad(f, -w, w, limit=400, epsabs=0, epsrel=1e-13)[0]

    s = integral(lambda om: abs(uv(g, mismatch(om), delta0)[1]) ** 2)
    pr = integral(lambda om: (uv(g, mismatch(om), delta0)[1] * uv(g, mismatch(om), delta0)[0]).real)
    pi = integral(lambda om: (uv(g, mismatch(om), delta0)[1] * uv(g, mismatch(om), delta0)[0]).imag)
    eta, xi = 2 * s, 2 * complex(pr, pi)
    return eta, xi, eta**2 / abs(xi) ** 2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=float, default=None, help="frequency half-width (default: engine's)")
    args = ap.parse_args()
    cases = [(0.5 * math.log(1.5), 0.0), (3.0, 0.0), (0.5 * math.log(10), 0.0), (1.0, -5.85), (1.0, 5.85)]
    for g, d0 in cases:
        eta, xi, theta = constants(g, d0, w=args.window)
        print(f"g={g!r} delta0={d0!r}: eta_hat={eta!r} xi_hat={xi!r} theta={theta!r}")
    s, p, _ = constants(1.0, q=1.3, q0=2.0, w=args.window)
    print(f"g=1 q0_norm=2 Q=1.3: S={s / 2!r} P={p / 2!r}")


if __name__ == "__main__":
    main()
