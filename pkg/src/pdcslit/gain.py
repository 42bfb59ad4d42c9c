"""Transfer coefficients of a plane-wave pumped parametric amplifier.

With the degenerate-carrier mismatch Delta = Delta0 + w^2 - (Q/q0)^2 the
coefficients only depend on Delta, so they are even in (Q, w) and one pair
serves both beams.  The crystal phase factor is taken as the constant
exp(-i Delta0 / 2); every observable computed here only sees it through
products whose phase this convention reproduces.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

THETA_CONVENTION = "constant: Theta_s = Theta_i = exp(-i*delta0/2)"

_SERIES_CUTOFF = 1e-6


class CrystalType(enum.Enum):
    TYPE_I = 1
    TYPE_II = 2

    @property
    def delta(self):
        """1 when signal and idler are indistinguishable, else 0."""
        return 1 if self is CrystalType.TYPE_I else 0

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper().replace("TYPE", "").strip("_ -")
        table = {"1": cls.TYPE_I, "I": cls.TYPE_I, "2": cls.TYPE_II, "II": cls.TYPE_II}
        if key not in table:
            raise ValueError(f"unknown crystal type {value!r}")
        return table[key]


@dataclass(frozen=True)
class CrystalParams:
    """Normalized crystal parameters.

    ``q0_norm`` is the spatial gain bandwidth in units of 2 pi / b and
    ``c_omega`` the unit of the spontaneous correlation functions,
    k b Omega0 / (4 pi^2 f).
    """

    g: float
    delta0: float = 0.0
    q0_norm: float = 2.0
    crystal_type: CrystalType = CrystalType.TYPE_I
    c_omega: float = 1.0

    def __post_init__(self):
        if not self.g >= 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if not self.q0_norm > 0:
            raise ValueError(f"q0_norm must be > 0, got {self.q0_norm}")
        if not self.c_omega > 0:
            raise ValueError(f"c_omega must be > 0, got {self.c_omega}")
        if not all(math.isfinite(v) for v in (self.g, self.delta0, self.q0_norm, self.c_omega)):
            raise ValueError("crystal parameters must be finite")
        object.__setattr__(self, "crystal_type", CrystalType.parse(self.crystal_type))

    @property
    def theta(self):
        return complex(math.cos(self.delta0 / 2), -math.sin(self.delta0 / 2))


@dataclass(frozen=True)
class GainPair:
    u: complex
    v: complex


def rate_to_gain(rate):
    """Coupling g for an amplification rate exp(2g)."""
    return 0.5 * math.log(rate)


def phase_mismatch(params, qt, wt):
    qt = np.asarray(qt, dtype=float)
    wt = np.asarray(wt, dtype=float)
    out = params.delta0 + wt * wt - np.square(qt / params.q0_norm)
    return out if out.ndim else float(out)


def gamma_fn(g, delta):
    """sqrt(g^2 - delta^2/4), imaginary (with Im >= 0) outside the gain band."""
    s = g * g - np.square(np.asarray(delta, dtype=float)) / 4.0
    out = np.where(s >= 0, np.sqrt(np.abs(s)) + 0j, 1j * np.sqrt(np.abs(s)))
    return out if out.ndim else complex(out)


def cosh_sinhc(g, delta):
    """Real pair (cosh G, sinh G / G) for G = gamma_fn(g, delta).

    Both are real on either side of the branch point, and the removable
    singularity at G = 0 is evaluated by its series.
    """
    delta = np.asarray(delta, dtype=float)
    s = g * g - delta * delta / 4.0
    r = np.sqrt(np.abs(s))
    small = np.abs(s) < _SERIES_CUTOFF
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        c = np.where(s >= 0, np.cosh(r), np.cos(r))
        sh = np.where(s >= 0, np.sinh(r), np.sin(r)) / np.where(small, 1.0, r)
    c = np.where(small, 1.0 + s / 2.0 + s * s / 24.0, c)
    sh = np.where(small, 1.0 + s / 6.0 + s * s / 120.0, sh)
    return c, sh


def gain_from_mismatch(g, delta, theta=1.0):
    """(u, v) as functions of the mismatch alone."""
    delta = np.asarray(delta, dtype=float)
    c, sh = cosh_sinhc(g, delta)
    u = theta * (c + 0.5j * delta * sh)
    v = theta * (g * sh)
    return u, v


def gain_pair(params, qt, wt):
    delta = phase_mismatch(params, qt, wt)
    u, v = gain_from_mismatch(params.g, delta, params.theta)
    if np.ndim(u) == 0:
        return GainPair(complex(u), complex(v))
    return GainPair(u, v)
