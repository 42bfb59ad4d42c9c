"""Discrete two-photon amplitudes C(q_s, q_i) pushed through the double slit.

This engine knows nothing about parametric gain; it is the reference for
the coherence/entanglement complementarity.  Constant prefactors are
dropped, so results are in the units of the normalized slit spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import ordered_sum
from .slit import slit_spectrum

PREFACTOR_NOTE = "k/(2 pi f) prefactor of the detection-plane field dropped"


@dataclass(frozen=True)
class BiphotonAmplitude:
    qs_grid: np.ndarray
    qi_grid: np.ndarray
    c_vals: np.ndarray

    def __post_init__(self):
        qs = np.asarray(self.qs_grid, dtype=float)
        qi = np.asarray(self.qi_grid, dtype=float)
        c = np.asarray(self.c_vals, dtype=complex)
        if c.shape != (qs.size, qi.size):
            raise ValueError("c_vals must have shape (len(qs_grid), len(qi_grid))")
        for g in (qs, qi):
            d = np.diff(g)
            if g.size < 2 or np.any(d <= 0) or not np.allclose(d, d[0]):
                raise ValueError("wavevector grids must be uniform and increasing")
        object.__setattr__(self, "qs_grid", qs)
        object.__setattr__(self, "qi_grid", qi)
        object.__setattr__(self, "c_vals", c)
        if not self.norm > 0:
            raise ValueError("amplitude must not vanish identically")

    @property
    def dqs(self):
        return float(self.qs_grid[1] - self.qs_grid[0])

    @property
    def dqi(self):
        return float(self.qi_grid[1] - self.qi_grid[0])

    @property
    def norm(self):
        return float(np.sum(np.abs(self.c_vals) ** 2) * self.dqs * self.dqi)

    @classmethod
    def separable(cls, cs, ci, qs_grid, qi_grid=None):
        """C(q_s, q_i) = cs(q_s) ci(q_i), from arrays or callables."""
        qi_grid = qs_grid if qi_grid is None else qi_grid
        qs = np.asarray(qs_grid, dtype=float)
        qi = np.asarray(qi_grid, dtype=float)
        a = cs(qs) if callable(cs) else np.asarray(cs)
        b = ci(qi) if callable(ci) else np.asarray(ci)
        return cls(qs, qi, np.outer(a, b))

    @classmethod
    def delta_ridge(cls, halfwidth, n):
        """q_s + q_i = 0 on a symmetric grid: one cell per column, value 1/dq."""
        if n % 2 == 0:
            raise ValueError("need an odd point count so the grid is symmetric")
        q = np.linspace(-halfwidth, halfwidth, n)
        dq = q[1] - q[0]
        return cls(q, q, np.fliplr(np.eye(n)) / dq)

    @classmethod
    def single(cls, qs_grid, qi_grid, qs, qi, value=1.0):
        qs_grid = np.asarray(qs_grid, dtype=float)
        qi_grid = np.asarray(qi_grid, dtype=float)
        c = np.zeros((qs_grid.size, qi_grid.size), dtype=complex)
        c[np.argmin(np.abs(qs_grid - qs)), np.argmin(np.abs(qi_grid - qi))] = value
        return cls(qs_grid, qi_grid, c)


def _positions(x1, x2):
    x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    return x1.shape, np.atleast_1d(x1).ravel(), np.atleast_1d(x2).ravel()


def biphoton_wavepacket(amp, geom, x1, x2):
    """<0| r_s(X2) r_i(X1) |psi> as a double Riemann sum."""
    shape, x1, x2 = _positions(x1, x2)
    ts = slit_spectrum(x2[:, None] - amp.qs_grid[None, :], geom)
    ti = slit_spectrum(x1[:, None] - amp.qi_grid[None, :], geom)
    # (ts @ C)[n, i] = sum_s T(X2 - q_s) C(q_s, q_i)
    out = ordered_sum((ts @ amp.c_vals) * ti) * amp.dqs * amp.dqi
    return out.item() if shape == () else out.reshape(shape)


def biphoton_g2(amp, geom, x1, x2):
    return np.abs(biphoton_wavepacket(amp, geom, x1, x2)) ** 2


def biphoton_g1(amp, geom, x1, x2, which="signal"):
    """First-order correlation of one photon, the partner's wavevector traced out."""
    shape, x1, x2 = _positions(x1, x2)
    c = amp.c_vals
    if which == "signal":
        a1 = slit_spectrum(x1[:, None] - amp.qs_grid[None, :], geom) @ c * amp.dqs
        a2 = slit_spectrum(x2[:, None] - amp.qs_grid[None, :], geom) @ c * amp.dqs
        out = ordered_sum(np.conj(a1) * a2) * amp.dqi
    elif which == "idler":
        a1 = slit_spectrum(x1[:, None] - amp.qi_grid[None, :], geom) @ c.T * amp.dqi
        a2 = slit_spectrum(x2[:, None] - amp.qi_grid[None, :], geom) @ c.T * amp.dqi
        out = ordered_sum(np.conj(a1) * a2) * amp.dqs
    else:
        raise ValueError("which must be 'signal' or 'idler'")
    return out.item() if shape == () else out.reshape(shape)
