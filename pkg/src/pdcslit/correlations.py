"""First- and second-order correlations in the detection plane.

Every position dependence reduces to one sum over the precomputed kernel
grid.  With the slit spectrum T normalized to T(0) = 1,

    M(X1, X2) = 4 c_omega sum_Q S(Q) T(X1 - Q) T(X2 - Q) dQ
    N(X1, X2) = 4 c_omega sum_Q P(Q) T(X1 - Q) T(X2 + Q) dQ

so that in the broadband limit M(X, X) = eta_hat and N = xi_hat T(X1 + X2).
X1 is the idler-side detector and X2 the signal-side detector.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConvergenceFailure
from .gain import THETA_CONVENTION, CrystalType, gain_pair
from .kernels import omega_collapse, ordered_sum, widen
from .slit import slit_spectrum

CELL_CHUNK = 16
MAX_Q_DOUBLINGS = 8
NEGATIVE_SLACK = 1e-12


class Beam(enum.Enum):
    SIGNAL = "signal"
    IDLER = "idler"
    TYPE_I = "typeI"
    # type II, detector blind to polarization: signal and idler intensities add
    SUMMED = "summed"


@dataclass(frozen=True)
class StimulatedInput:
    """Injected plane wave: intensity in units of 2 k b^2 A^2 / (pi f) and its wavevector."""

    amplitude_sq: float = 0.0
    q_inject: float = 0.0

    def __post_init__(self):
        if not self.amplitude_sq >= 0:
            raise ValueError("amplitude_sq must be >= 0")


@dataclass
class CorrelationMap:
    grid: object
    values: np.ndarray
    meta: dict = field(default_factory=dict)


def _run_chunks(fn, n, threads):
    """Apply ``fn(start, stop)`` over fixed-size chunks of ``range(n)``."""
    bounds = [(s, min(s + CELL_CHUNK, n)) for s in range(0, n, CELL_CHUNK)]
    if threads <= 1 or len(bounds) == 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))


def folded_sum(terms):
    """Ordered sum over a symmetric Q grid, adding the +Q and -Q terms first.

    Pairing mirror terms makes M and N exactly symmetric under X1 <-> X2.
    """
    m = terms.shape[-1] // 2
    folded = terms[..., m:].copy()
    folded[..., 1:] += terms[..., m - 1::-1]
    return ordered_sum(folded)


def _pairs(x1, x2):
    x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    return x1.shape, np.atleast_1d(x1).ravel(), np.atleast_1d(x2).ravel()


def kernel_sums(kernels, geom, x1, x2, which=("m11", "m22", "m12", "n12"), threads=1):
    """M(X1,X1), M(X2,X2), M(X1,X2) and N(X1,X2) for paired positions, in one pass.

    Each slit-spectrum table is built once per chunk of cells and shared by
    every requested sum.
    """
    shape, x1, x2 = _pairs(x1, x2)
    q = kernels.q_grid
    base = 4.0 * kernels.params.c_omega * kernels.trapezoid_weights()
    ws = base * kernels.s_vals
    wp = base * kernels.p_vals

    def block(a, b):
        t1 = slit_spectrum(x1[a:b, None] - q[None, :], geom)
        out = {}
        if "m11" in which:
            out["m11"] = folded_sum(ws * (t1 * t1))
        if "m22" in which or "m12" in which:
            t2 = slit_spectrum(x2[a:b, None] - q[None, :], geom)
            if "m22" in which:
                out["m22"] = folded_sum(ws * (t2 * t2))
            if "m12" in which:
                out["m12"] = folded_sum(ws * (t1 * t2))
        if "n12" in which:
            t2p = slit_spectrum(x2[a:b, None] + q[None, :], geom)
            out["n12"] = folded_sum(wp * (t1 * t2p))
        return out

    parts = _run_chunks(block, x1.size, threads)
    return {k: np.concatenate([p[k] for p in parts]).reshape(shape) for k in which}


def _scalar_if(out, shape):
    return out.item() if shape == () else out


def m_kernel(kernels, geom, x1, x2, threads=1):
    shape = np.broadcast(np.asarray(x1), np.asarray(x2)).shape
    return _scalar_if(kernel_sums(kernels, geom, x1, x2, ("m12",), threads)["m12"], shape)


def n_kernel(kernels, geom, x1, x2, threads=1):
    shape = np.broadcast(np.asarray(x1), np.asarray(x2)).shape
    return _scalar_if(kernel_sums(kernels, geom, x1, x2, ("n12",), threads)["n12"], shape)


def build_kernels(params, geom, spec=None):
    """Kernels whose q window has been doubled until M(0, 0) settles."""
    kernels = omega_collapse(params, spec)
    tol = kernels.spec.rel_tol
    prev = m_kernel(kernels, geom, 0.0, 0.0)
    for _ in range(MAX_Q_DOUBLINGS):
        wider = widen(kernels)
        cur = m_kernel(wider, geom, 0.0, 0.0)
        scale = max(abs(prev), abs(cur))
        kernels = wider
        if scale == 0 or abs(cur - prev) <= tol * scale:
            return kernels
        prev = cur
    raise ConvergenceFailure("q window", MAX_Q_DOUBLINGS, prev, cur)


def _ctype(kernels, crystal_type):
    return CrystalType.parse(crystal_type if crystal_type is not None else kernels.params.crystal_type)


def g2_spontaneous(kernels, geom, x1, x2, crystal_type=None, threads=1):
    """M(X1,X1) M(X2,X2) + |N(X1,X2)|^2 + delta |M(X1,X2)|^2."""
    delta = _ctype(kernels, crystal_type).delta
    which = ("m11", "m22", "n12", "m12") if delta else ("m11", "m22", "n12")
    k = kernel_sums(kernels, geom, x1, x2, which, threads)
    out = k["m11"] * k["m22"] + np.abs(k["n12"]) ** 2
    if delta:
        out = out + np.square(k["m12"])
    return out


def w_amplitude(params, geom, inp, x, beam):
    """Stimulated field amplitude of one output beam at detector X."""
    beam = Beam(beam)
    pair = gain_pair(params, inp.q_inject, 0.0)
    a = np.sqrt(inp.amplitude_sq)
    x = np.asarray(x, dtype=float)
    if beam is Beam.SIGNAL:
        out = a * pair.u * slit_spectrum(x - inp.q_inject, geom)
    elif beam is Beam.IDLER:
        out = a * pair.v * slit_spectrum(x + inp.q_inject, geom)
    elif beam is Beam.TYPE_I:
        out = a * (pair.u * slit_spectrum(x - inp.q_inject, geom)
                   + pair.v * slit_spectrum(x + inp.q_inject, geom))
    else:
        raise ValueError("the summed display has no single amplitude")
    return out


def g1_stimulated(params, kernels, geom, inp, x, beam, threads=1):
    """|W(X)|^2 + M(X, X); ``summed`` adds the signal and idler patterns."""
    beam = Beam(beam)
    x = np.asarray(x, dtype=float)
    m = kernel_sums(kernels, geom, x, x, ("m11",), threads)["m11"]
    if np.ndim(x) == 0:
        m = m.item()
    if beam is Beam.SUMMED:
        ws = w_amplitude(params, geom, inp, x, Beam.SIGNAL)
        wi = w_amplitude(params, geom, inp, x, Beam.IDLER)
        return np.abs(ws) ** 2 + np.abs(wi) ** 2 + 2.0 * m
    if inp.amplitude_sq == 0:
        return m
    return np.abs(w_amplitude(params, geom, inp, x, beam)) ** 2 + m


def g2_stimulated_complex(params, kernels, geom, inp, x1, x2, crystal_type=None, threads=1):
    """The stimulated second-order correlation before taking the real part."""
    ctype = _ctype(kernels, crystal_type)
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    which = ("m11", "m22", "n12", "m12") if ctype.delta else ("m11", "m22", "n12")
    k = kernel_sums(kernels, geom, x1, x2, which, threads)
    if ctype is CrystalType.TYPE_I:
        wi = w_amplitude(params, geom, inp, x1, Beam.TYPE_I)
        ws = w_amplitude(params, geom, inp, x2, Beam.TYPE_I)
    else:
        wi = w_amplitude(params, geom, inp, x1, Beam.IDLER)
        ws = w_amplitude(params, geom, inp, x2, Beam.SIGNAL)
    n12 = k["n12"]
    cross = wi * ws * np.conj(n12)
    out = ((np.abs(wi) ** 2 + k["m11"]) * (np.abs(ws) ** 2 + k["m22"])
           + cross + np.conj(cross) + np.abs(n12) ** 2)
    if ctype.delta:
        m12 = k["m12"]
        mixed = np.conj(wi) * ws * m12
        out = out + mixed + np.conj(mixed) + m12 * m12
    return out


def g2_stimulated(params, kernels, geom, inp, x1, x2, crystal_type=None, threads=1):
    out = g2_stimulated_complex(params, kernels, geom, inp, x1, x2, crystal_type, threads)
    scale = max(1.0, float(np.max(np.abs(out))))
    if np.max(np.abs(np.imag(out))) > 1e-10 * scale:
        raise ArithmeticError("assembled G2 is not real")
    return np.real(out)


def clamp_nonnegative(values):
    values = np.asarray(values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    if values.size and values.min() < -NEGATIVE_SLACK * scale:
        raise ArithmeticError(f"correlation went negative beyond round-off: {values.min()}")
    return np.maximum(values, 0.0)


def correlation_meta(params, kernels, geom, inp=None):
    meta = {
        "engine_version": __version__,
        "theta_convention": THETA_CONVENTION,
        "rho": geom.rho,
        "g": params.g,
        "delta0": params.delta0,
        "q0_norm": params.q0_norm,
        "crystal_type": params.crystal_type.name,
        "c_omega": params.c_omega,
    }
    if kernels is not None:
        meta.update(kernels.metadata())
    if inp is not None:
        meta["amplitude_sq"] = inp.amplitude_sq
        meta["q_inject"] = inp.q_inject
    return meta


def correlation_map(kind, params, geom, grid, *, kernels=None, inp=None, beam=None,
                    crystal_type=None, threads=1):
    """Evaluate one correlation over a detection grid.

    ``kind`` is ``g1`` (one-photon intensity at X2 of each pair) or ``g2``.
    A nonzero injected intensity selects the stimulated formulas.
    """
    if kernels is None:
        kernels = build_kernels(params, geom)
    inp = inp or StimulatedInput()
    x1, x2 = grid.pairs()
    if kind == "g1":
        if beam is None:
            beam = Beam.TYPE_I if params.crystal_type is CrystalType.TYPE_I else Beam.SIGNAL
        vals = g1_stimulated(params, kernels, geom, inp, x2, beam, threads)
    elif kind == "g2":
        if inp.amplitude_sq > 0:
            vals = g2_stimulated(params, kernels, geom, inp, x1, x2, crystal_type, threads)
        else:
            vals = g2_spontaneous(kernels, geom, x1, x2, crystal_type, threads)
    else:
        raise ValueError(f"unknown correlation kind {kind!r}")
    meta = correlation_meta(params, kernels, geom, inp)
    meta.update(kind=kind, mode=grid.mode, beam=None if beam is None else Beam(beam).value)
    return CorrelationMap(grid, clamp_nonnegative(vals).reshape(grid.shape), meta)
