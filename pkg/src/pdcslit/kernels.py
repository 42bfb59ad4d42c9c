"""Frequency-collapsed spectral kernels.

For every transverse wavevector Q on a uniform grid the frequency integrals

    S(Q) = int |v(Q, w)|^2 dw,        P(Q) = int v(Q, w) u(-Q, -w) dw

are done once per crystal setting, so every detector-plane correlation
afterwards is a single sum over Q.

The frequency integral runs over the fixed window |w| <= w_halfwidth, which
acts as the spectral acceptance of the detection.  Refinement doubles the
grid density inside that window until eta_hat and xi_hat settle.  Growing
the window instead cannot converge: Im P has a 1/w^2 tail, and a wider
window lets the off-axis phase-matching ring (w^2 = (Q/q0)^2 - Delta0) leak
into S(Q) far from Q = 0, which destroys the narrowband limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceFailure, DegenerateGain
from .gain import cosh_sinhc

# Fixed chunk sizes: results must not depend on how work is split over threads.
Q_CHUNK = 256
MIN_POINTS = 64
DEFAULT_Q_STEP = 0.05
Q_STEP_PER_BANDWIDTH = 1.0 / 64


def ordered_sum(a, axis=-1):
    """Sum along ``axis`` in strictly ascending index order."""
    return np.take(np.cumsum(a, axis=axis), -1, axis=axis)


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid settings. ``None`` fields are filled in from the crystal by :meth:`resolved`.

    Point counts are numbers of intervals across the symmetric window, so
    they are even and every grid contains the origin.
    """

    q_halfwidth: float | None = None
    q_points: int | None = None
    w_halfwidth: float | None = None
    w_points: int = 64
    rel_tol: float = 1e-6
    max_rounds: int = 12

    def __post_init__(self):
        for name in ("q_halfwidth", "w_halfwidth"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("q_points", "w_points"):
            val = getattr(self, name)
            if val is not None and (val < MIN_POINTS or val % 2):
                raise ValueError(f"{name} must be an even integer >= {MIN_POINTS}")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")

    @property
    def q_step(self):
        return 2.0 * self.q_halfwidth / self.q_points

    def resolved(self, params):
        w = self.w_halfwidth
        if w is None:
            w = max(8.0, 2.0 * math.sqrt(2.0 * params.g + abs(params.delta0)))
        if self.q_halfwidth is not None and self.q_points is not None:
            return replace(self, w_halfwidth=w)
        step = min(DEFAULT_Q_STEP, params.q0_norm * Q_STEP_PER_BANDWIDTH)
        qh = self.q_halfwidth
        if qh is None:
            qh = min(max(4.0, 4.0 * params.q0_norm), 2.0 * ring_support(params, w))
        if self.q_points is not None:
            return replace(self, q_halfwidth=qh, w_halfwidth=w)
        half = max(MIN_POINTS // 2, math.ceil(qh / step))
        return replace(self, q_halfwidth=half * step, q_points=2 * half, w_halfwidth=w)


def ring_support(params, w_halfwidth):
    """|Q| beyond which the phase-matching ring sits outside the frequency window."""
    reach = w_halfwidth**2 + max(params.delta0, 0.0) + 2.0 * params.g + 1.0
    return params.q0_norm * math.sqrt(reach)


@dataclass(frozen=True)
class SpectralKernels:
    params: object
    spec: QuadratureSpec
    q_grid: np.ndarray
    s_vals: np.ndarray
    p_vals: np.ndarray
    eta_hat: float
    xi_hat: complex
    w_points_used: int
    rounds: int
    filter_leakage: float
    history: tuple = field(default=(), compare=False)

    @property
    def q_step(self):
        return float(self.q_grid[1] - self.q_grid[0]) if self.q_grid.size > 1 else 0.0

    def trapezoid_weights(self):
        w = np.full(self.q_grid.size, self.q_step)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def metadata(self):
        return {
            "w_halfwidth": self.spec.w_halfwidth,
            "w_points": self.w_points_used,
            "w_rounds": self.rounds,
            "q_halfwidth": float(self.q_grid[-1]),
            "q_points": int(self.q_grid.size - 1),
            "q_step": self.q_step,
            "rel_tol": self.spec.rel_tol,
            "eta_hat": self.eta_hat,
            "xi_hat_re": self.xi_hat.real,
            "xi_hat_im": self.xi_hat.imag,
            "filter_leakage": self.filter_leakage,
        }


def _half_weights(w_halfwidth, n):
    """Nodes 0..W and weights that fold the symmetric trapezoid onto w >= 0."""
    h = 2.0 * w_halfwidth / n
    nodes = np.arange(n // 2 + 1) * h
    weights = np.full(nodes.size, 2.0 * h)
    weights[0] = h
    weights[-1] = h
    return nodes, weights


def _collapse(params, qs, w_halfwidth, n):
    """S and P at each |Q| in ``qs`` on the n-interval frequency grid."""
    nodes, weights = _half_weights(w_halfwidth, n)
    w2 = nodes * nodes
    theta2 = params.theta**2
    s_out = np.empty(qs.size)
    p_out = np.empty(qs.size, dtype=complex)
    for start in range(0, qs.size, Q_CHUNK):
        q = qs[start:start + Q_CHUNK]
        base = params.delta0 - np.square(q / params.q0_norm)
        delta = base[:, None] + w2[None, :]
        c, sh = cosh_sinhc(params.g, delta)
        v = params.g * sh
        # v(Q,w) u(-Q,-w) without the common phase theta^2
        vu = v * (c + 0.5j * delta * sh)
        s_out[start:start + Q_CHUNK] = ordered_sum(weights * v * v)
        p_out[start:start + Q_CHUNK] = theta2 * ordered_sum(weights * vu)
    return s_out, p_out


def _rel_change(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def omega_collapse(params, spec=None, *, q_grid=None):
    """Collapse the frequency integral on the quadrature's wavevector grid.

    ``q_grid`` overrides the grid (it must be symmetric about 0 and uniform);
    pass ``np.zeros(1)`` to get only eta_hat and xi_hat.
    """
    spec = (spec or QuadratureSpec()).resolved(params)
    W = spec.w_halfwidth
    n = spec.w_points
    zero = np.zeros(1)
    s0, p0 = _collapse(params, zero, W, n)
    history = [(n, s0[0], p0[0])]
    rounds = 0
    while True:
        if rounds >= spec.max_rounds:
            raise ConvergenceFailure("frequency collapse", rounds, history[-2][1:], history[-1][1:])
        n *= 2
        rounds += 1
        s1, p1 = _collapse(params, zero, W, n)
        history.append((n, s1[0], p1[0]))
        done = (_rel_change(s0[0], s1[0]) < spec.rel_tol
                and _rel_change(p0[0], p1[0]) < spec.rel_tol)
        s0, p0 = s1, p1
        if done:
            break

    if q_grid is None:
        half = spec.q_points // 2
        q_grid = np.arange(-half, half + 1) * spec.q_step
    q_grid = np.asarray(q_grid, dtype=float)
    m = q_grid.size // 2
    if q_grid.size % 2 == 0 or q_grid[m] != 0.0:
        raise ValueError("q_grid must be odd-sized and centred on 0")
    # evaluate on Q >= 0 and mirror so the kernels are exactly even
    s_pos, p_pos = _collapse(params, np.abs(q_grid[m:]), W, n)
    s_vals = np.concatenate([s_pos[:0:-1], s_pos])
    p_vals = np.concatenate([p_pos[:0:-1], p_pos])

    _, v_edge = cosh_sinhc(params.g, params.delta0 + W * W)
    s_zero = s_pos[0]
    leakage = 0.0 if s_zero == 0 else float((params.g * v_edge) ** 2 * W / s_zero)
    return SpectralKernels(
        params=params,
        spec=spec,
        q_grid=q_grid,
        s_vals=s_vals,
        p_vals=p_vals,
        eta_hat=float(2.0 * params.c_omega * s_zero),
        xi_hat=complex(2.0 * params.c_omega * p_pos[0]),
        w_points_used=n,
        rounds=rounds,
        filter_leakage=leakage,
        history=tuple(history),
    )


def broadband_constants(params, spec=None):
    """Kernels evaluated at Q = 0 only (enough for eta_hat, xi_hat, theta)."""
    return omega_collapse(params, spec, q_grid=np.zeros(1))


def widen(kernels):
    """Same kernels on a q window twice as wide, reusing the computed values."""
    q = kernels.q_grid
    m = q.size // 2
    h = kernels.q_step
    extra = np.arange(m + 1, 2 * m + 1) * h
    p = kernels.params
    s_new, p_new = _collapse(p, extra, kernels.spec.w_halfwidth, kernels.w_points_used)
    s_pos = np.concatenate([kernels.s_vals[m:], s_new])
    p_pos = np.concatenate([kernels.p_vals[m:], p_new])
    grid = np.arange(-2 * m, 2 * m + 1) * h
    spec = replace(kernels.spec, q_halfwidth=2 * m * h, q_points=4 * m)
    return replace(
        kernels,
        spec=spec,
        q_grid=grid,
        s_vals=np.concatenate([s_pos[:0:-1], s_pos]),
        p_vals=np.concatenate([p_pos[:0:-1], p_pos]),
    )


def theta_ratio(kernels):
    """eta_hat^2 / |xi_hat|^2."""
    mag = abs(kernels.xi_hat)
    if mag < 1e-300:
        raise DegenerateGain("theta is undefined without parametric gain (xi_hat = 0)")
    return kernels.eta_hat**2 / mag**2
