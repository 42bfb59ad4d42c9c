"""Double-slit geometry in normalized units and the coherent-beam reference patterns.

Positions in the detection plane are X = x k b / (2 pi f) and transverse
wavevectors are Qt = q b / (2 pi).  In these units the slit spectrum is a
function of a single variable and a detector at X sees the spectrum at X.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class SlitGeometry:
    """Slit width over slit separation, b/d."""

    rho: float = 0.2

    def __post_init__(self):
        if not (0.0 < self.rho < 1.0):
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")

    @property
    def fringe_period(self):
        return self.rho


MODES = ("single", "diagonal", "antidiagonal", "full")


@dataclass(frozen=True)
class DetectionGrid:
    """Detector positions and how they are paired into (X1, X2) samples.

    ``single`` scans X2 over ``points`` with X1 held at ``x_fixed``;
    ``full`` is the outer product, flattened row-major with X1 as the row.
    """

    points: tuple
    mode: str = "diagonal"
    x_fixed: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown detection mode {self.mode!r}")
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("need at least two detector positions")
        steps = np.diff(pts)
        if np.any(steps <= 0):
            raise ValueError("detector positions must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
            raise ValueError("detector positions must be uniformly spaced")
        object.__setattr__(self, "points", tuple(float(p) for p in pts))

    @classmethod
    def uniform(cls, lo=-1.0, hi=1.0, n=401, mode="diagonal", x_fixed=0.0):
        return cls(tuple(np.linspace(lo, hi, n)), mode, x_fixed)

    @property
    def x(self):
        return np.asarray(self.points)

    @property
    def step(self):
        return self.points[1] - self.points[0]

    @property
    def shape(self):
        n = len(self.points)
        return (n, n) if self.mode == "full" else (n,)

    def pairs(self):
        """Return flat arrays (X1, X2) of every sample this grid describes."""
        x = self.x
        if self.mode == "diagonal":
            return x.copy(), x.copy()
        if self.mode == "antidiagonal":
            return x.copy(), -x
        if self.mode == "single":
            return np.full_like(x, self.x_fixed), x.copy()
        x1, x2 = np.meshgrid(x, x, indexing="ij")
        return x1.ravel(), x2.ravel()


def sinc(z):
    """sin(z)/z, with the removable point handled by its Taylor series."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, z)
    z2 = z * z
    out = np.where(small, 1.0 - z2 / 6.0 + z2 * z2 / 120.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)


def slit_transmission(xp, geom):
    """1 inside either slit, 0 elsewhere.

    Slits have unit width and are centred at +-1/(2 rho); each is the
    half-open interval [centre - 1/2, centre + 1/2).
    """
    xp = np.asarray(xp, dtype=float)
    c = 0.5 / geom.rho
    inside = ((xp >= c - 0.5) & (xp < c + 0.5)) | ((xp >= -c - 0.5) & (xp < -c + 0.5))
    out = inside.astype(np.int8)
    return out if out.ndim else int(out)


def slit_spectrum(qt, geom):
    """Slit spectrum normalized to 1 at the origin: sinc(pi Q) cos(pi Q / rho)."""
    qt = np.asarray(qt, dtype=float)
    out = sinc(np.pi * qt) * np.cos(np.pi * qt / geom.rho)
    return out if np.ndim(out) else float(out)


def coherent_g1(x, geom, intensity=1.0):
    return intensity * np.square(slit_spectrum(x, geom))


def coherent_g2(x1, x2, geom, intensity=1.0):
    return coherent_g1(x1, geom, intensity) * coherent_g1(x2, geom, intensity)
