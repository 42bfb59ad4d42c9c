"""Figure-reproduction pipelines.

Each pipeline takes a resolved RunConfig for one panel, computes the data,
writes CSV (and PGM for maps) into ``cfg.out`` and finishes with a manifest
that is itself a loadable config.  Returned ``FigureResult`` objects keep the
arrays for programmatic use.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import FIGURE_DEFAULTS, PANELS, build_config, replace
from .correlations import (
    Beam,
    StimulatedInput,
    build_kernels,
    clamp_nonnegative,
    g1_stimulated,
    g2_spontaneous,
    g2_stimulated,
)
from .gain import THETA_CONVENTION, CrystalType
from .io import write_curves, write_manifest, write_map_csv, write_pgm
from .kernels import broadband_constants, theta_ratio
from .limits import visibility_v1, visibility_v2
from .slit import coherent_g1, coherent_g2

SWEEP_LABELS = {"g": "g", "q0_norm": "q0_norm", "q_inject": "Q_in"}


@dataclass
class FigureResult:
    config: object
    x: np.ndarray = None
    sweep: np.ndarray = None
    values: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    manifest: Path = None
    info: list = field(default_factory=list)


def _comments(cfg, extra=()):
    return [f"pdcslit {__version__} {cfg.label}",
            f"theta convention: {THETA_CONVENTION}",
            *extra]


def _finish(res):
    cfg = res.config
    info = [("engine_version", __version__), ("theta_convention", THETA_CONVENTION)]
    info += res.info
    res.manifest = write_manifest(Path(cfg.out) / f"{cfg.label}.manifest.txt",
                                  cfg.to_items(), info, res.files)
    return res


# -- curves ------------------------------------------------------------------

def run_fig2(cfg):
    geom = cfg.geometry
    x = cfg.detection("diagonal").x
    intensity = cfg.intensity
    g1 = coherent_g1(x, geom, intensity)
    g2 = coherent_g2(x, x, geom, intensity)
    res = FigureResult(cfg, x=x, values={"G1": g1, "G2": g2})
    path = Path(cfg.out) / f"{cfg.label}.csv"
    res.files.append(write_curves(
        path, {"X": x, "G1": g1, "G2_diag": g2},
        _comments(cfg, [f"coherent double slit, rho={cfg.rho!r}, I_A={intensity!r}"])))
    return _finish(res)


def visibility_table(cfg, gains):
    theta = np.empty(len(gains))
    for i, g in enumerate(gains):
        theta[i] = theta_ratio(broadband_constants(cfg.crystal(g=float(g)), cfg.quadrature))
    return {
        "theta": theta,
        "V1_typeII": visibility_v1(theta, CrystalType.TYPE_II),
        "V1_typeI": visibility_v1(theta, CrystalType.TYPE_I),
        "V2_typeI": visibility_v2(theta, CrystalType.TYPE_I),
    }


def run_visibility(cfg):
    gains = cfg.sweep_values() if cfg.sweep_axis == "g" else np.array([cfg.g])
    table = visibility_table(cfg, gains)
    info = [("quadrature", "theta from Q=0 kernels; frequency window auto per g"
             if not cfg.w_halfwidth else f"frequency window {cfg.w_halfwidth!r}")]
    res = FigureResult(cfg, sweep=gains, values=table, info=info)
    path = Path(cfg.out) / f"{cfg.label}.csv"
    res.files.append(write_curves(
        path, {"g": gains, **table},
        _comments(cfg, [f"delta0={cfg.delta0!r}, q0_norm={cfg.q0_norm!r} (theta uses Q=0 only)"])))
    return _finish(res)


run_fig3 = run_visibility


# -- maps --------------------------------------------------------------------

def _pairs(cfg, x):
    """Detector pairs for one row; type II antidiagonal puts X on the signal side."""
    if cfg.mode == "antidiagonal":
        if cfg.ctype is CrystalType.TYPE_II and cfg.intensity > 0:
            return -x, x
        return x, -x
    if cfg.mode == "single":
        return np.full_like(x, cfg.x_fixed), x
    return x, x


def _row(cfg, kernels, params, x, q_inject):
    geom = cfg.geometry
    inp = StimulatedInput(cfg.intensity, q_inject)
    if cfg.kind == "g1":
        beam = Beam(cfg.beam) if cfg.beam else (
            Beam.TYPE_I if params.crystal_type is CrystalType.TYPE_I else Beam.SUMMED)
        vals = g1_stimulated(params, kernels, geom, inp, x, beam, cfg.threads)
    else:
        x1, x2 = _pairs(cfg, x)
        if cfg.intensity > 0:
            vals = g2_stimulated(params, kernels, geom, inp, x1, x2, threads=cfg.threads)
        else:
            vals = g2_spontaneous(kernels, geom, x1, x2, threads=cfg.threads)
    return clamp_nonnegative(vals)


def compute_map(cfg):
    """Rows over the sweep axis, columns over X; returns (x, sweep, values, kernel info)."""
    if cfg.mode == "full":
        raise ValueError("maps sweep one axis; use the g2 command for full 2D grids")
    x = cfg.detection().x
    sweep = cfg.sweep_values()
    values = np.empty((len(sweep), len(x)))
    info = []
    kernels = None
    for j, s in enumerate(sweep):
        s = float(s)
        over = {cfg.sweep_axis: s} if cfg.sweep_axis in ("g", "q0_norm") else {}
        params = cfg.crystal(**over)
        if kernels is None or over:
            kernels = build_kernels(params, cfg.geometry, cfg.quadrature)
            meta = kernels.metadata()
            info.append((f"kernels.{j}", " ".join(f"{k}={meta[k]!r}" for k in sorted(meta))))
        q_inject = s if cfg.sweep_axis == "q_inject" else cfg.q_inject
        values[j] = _row(cfg, kernels, params, x, q_inject)
    return x, sweep, values, info


def run_map(cfg):
    x, sweep, values, info = compute_map(cfg)
    name = SWEEP_LABELS[cfg.sweep_axis]
    label = "G1" if cfg.kind == "g1" else "G2"
    res = FigureResult(cfg, x=x, sweep=sweep, values={label: values}, info=info)
    out = Path(cfg.out)
    comments = _comments(cfg, [
        f"{label} {cfg.mode} map, type {cfg.ctype.name}, rows swept over {name}",
        f"g={cfg.g!r} delta0={cfg.delta0!r} q0_norm={cfg.q0_norm!r}"
        f" I_A={cfg.intensity!r} Q_in={cfg.q_inject!r}",
    ])
    res.files.append(write_map_csv(out / f"{cfg.label}.csv", x, sweep, values,
                                   ("X", name, label), comments))
    res.files.extend(write_pgm(out / f"{cfg.label}.pgm", values, x, sweep, name))
    return _finish(res)


def run_g2(cfg):
    """Correlation on the configured detection grid at fixed parameters."""
    params = cfg.crystal()
    kernels = build_kernels(params, cfg.geometry, cfg.quadrature)
    grid = cfg.detection()
    meta = kernels.metadata()
    info = [("kernels", " ".join(f"{k}={meta[k]!r}" for k in sorted(meta)))]
    out = Path(cfg.out)
    comments = _comments(cfg, [f"{cfg.kind} {cfg.mode}, type {cfg.ctype.name}"])
    if cfg.mode == "full":
        x = grid.x
        x1, x2 = grid.pairs()
        inp = StimulatedInput(cfg.intensity, cfg.q_inject)
        if cfg.intensity > 0:
            vals = g2_stimulated(params, kernels, cfg.geometry, inp, x1, x2, threads=cfg.threads)
        else:
            vals = g2_spontaneous(kernels, cfg.geometry, x1, x2, threads=cfg.threads)
        vals = clamp_nonnegative(vals).reshape(len(x), len(x))
        res = FigureResult(cfg, x=x, sweep=x, values={"G2": vals}, info=info)
        res.files.append(write_map_csv(out / f"{cfg.label}.csv", x, x, vals,
                                       ("X2", "X1", "G2"), comments))
        res.files.extend(write_pgm(out / f"{cfg.label}.pgm", vals, x, x, "X1"))
        return _finish(res)
    x1, x2 = grid.pairs()
    vals = _row(cfg, kernels, params, grid.x, cfg.q_inject)
    col = "G1" if cfg.kind == "g1" else "G2"
    res = FigureResult(cfg, x=grid.x, values={col: vals}, info=info)
    res.files.append(write_curves(out / f"{cfg.label}.csv",
                                  {"X1": x1, "X2": x2, col: vals}, comments))
    return _finish(res)


RUNNERS = {
    "fig2": run_fig2,
    "fig3": run_fig3,
    "fig4": run_map,
    "fig5": run_map,
    "fig6": run_map,
    "g2": run_g2,
    "visibility": run_visibility,
    "sweep": run_map,
}


def run(cfg):
    return RUNNERS[cfg.command](cfg)


def panel_configs(command, panel="", file_values=None, overrides=None):
    """Resolved configs for the requested panel, or for every panel of a figure."""
    file_values = dict(file_values or {})
    if not panel:
        panel = file_values.pop("panel", "")
    else:
        file_values.pop("panel", None)
    overrides = dict(overrides or {})
    if not panel and command == "fig3" and "delta0" in {**file_values, **overrides}:
        # a single requested detuning selects the matching panel if there is one
        d0 = float({**file_values, **overrides}["delta0"])
        panel = next((p for p in PANELS["fig3"]
                      if FIGURE_DEFAULTS[f"fig3{p}"]["delta0"] == d0), "")
        return [build_config(command, panel, file_values, overrides)]
    if panel or command not in PANELS or command == "fig2":
        return [build_config(command, panel, file_values, overrides)]
    return [build_config(command, p, file_values, overrides) for p in PANELS[command]]


__all__ = ["FigureResult", "run", "panel_configs", "compute_map", "visibility_table", "replace"]
