"""Closed-form bandwidth limits and fringe visibilities, used as oracles."""
from __future__ import annotations

import numpy as np

from .errors import InvalidForTypeII
from .gain import CrystalType
from .slit import slit_spectrum


def g2_broadband(eta_hat, xi_hat, geom, x1, x2, crystal_type):
    """Second-order correlation when the gain is flat over the slit spectrum."""
    delta = CrystalType.parse(crystal_type).delta
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    t_diff = slit_spectrum(x2 - x1, geom)
    t_sum = slit_spectrum(x1 + x2, geom)
    return eta_hat**2 * (1.0 + delta * np.square(t_diff)) + abs(xi_hat) ** 2 * np.square(t_sum)


def g2_narrowband(eta_hat, xi_hat, geom, x1, x2, crystal_type, scale=1.0):
    """Narrowband limit: the coherent-beam shape T^2(X1) T^2(X2).

    ``scale`` absorbs the normalization, which lives in units this package
    does not carry; see :func:`fit_scale`.
    """
    delta = CrystalType.parse(crystal_type).delta
    amp = (1.0 + delta) * eta_hat**2 + abs(xi_hat) ** 2
    t1 = slit_spectrum(x1, geom)
    t2 = slit_spectrum(x2, geom)
    return scale * amp * np.square(t1) * np.square(t2)


def fit_scale(measured, model):
    """Least-squares factor C minimizing |measured - C model|."""
    measured = np.asarray(measured, dtype=float).ravel()
    model = np.asarray(model, dtype=float).ravel()
    return float(np.dot(measured, model) / np.dot(model, model))


def shape_error(measured, model):
    """Largest difference between the two curves after each is scaled to peak 1."""
    measured = np.asarray(measured, dtype=float)
    model = np.asarray(model, dtype=float)
    return float(np.max(np.abs(measured / measured.max() - model / model.max())))


def visibility_v1(theta, crystal_type):
    """Visibility of the sub-wavelength fringe in the two-photon intensity G2(X, X)."""
    delta = CrystalType.parse(crystal_type).delta
    return 1.0 / (1.0 + 2.0 * (1 + delta) * np.asarray(theta, dtype=float))


def visibility_v2(theta, crystal_type=CrystalType.TYPE_I):
    """Visibility of the joint-intensity fringe G2(X, -X); type I only."""
    if CrystalType.parse(crystal_type) is CrystalType.TYPE_II:
        raise InvalidForTypeII("G2(X, -X) carries no fringe for a type II crystal")
    theta = np.asarray(theta, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(theta > 0, 1.0 / (3.0 + 2.0 / np.where(theta > 0, theta, 1.0)), 0.0)


def fringe_visibility(values):
    values = np.asarray(values, dtype=float)
    hi, lo = values.max(), values.min()
    return float((hi - lo) / (hi + lo)) if hi + lo > 0 else 0.0


def local_maxima(values):
    """Indices of strict interior local maxima."""
    v = np.asarray(values, dtype=float)
    idx = np.nonzero((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:]))[0] + 1
    return idx


def local_minima(values):
    return local_maxima(-np.asarray(values, dtype=float))


def fringe_spacing(x, values, window=None):
    """Mean distance between adjacent local maxima, optionally only for |x| <= window."""
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    idx = local_maxima(values)
    if window is not None:
        idx = idx[np.abs(x[idx]) <= window]
    if idx.size < 2:
        raise ValueError("fewer than two fringe maxima")
    return float(np.mean(np.diff(x[idx])))
