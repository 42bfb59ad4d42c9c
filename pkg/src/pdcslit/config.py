"""Run configuration: flat ``key = value`` files plus command-line overrides."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .gain import CrystalParams, CrystalType, rate_to_gain
from .kernels import QuadratureSpec
from .slit import MODES, DetectionGrid, SlitGeometry

COMMANDS = ("fig2", "fig3", "fig4", "fig5", "fig6", "g2", "visibility", "sweep")
SWEEP_AXES = ("g", "q0_norm", "q_inject")
IGNORED_PREFIXES = ("checksum.", "info.")

PANELS = {
    "fig2": (),
    "fig3": ("a", "b", "c"),
    "fig4": ("a", "b", "c", "d"),
    "fig5": ("a", "b"),
    "fig6": ("a", "b", "c", "d"),
}

LOW_GAIN = rate_to_gain(1.5)
HIGH_GAIN = rate_to_gain(10.0)

# Per-panel settings.  fig5/fig6 default to amplification rate 10.
FIGURE_DEFAULTS = {
    "fig2": {},
    "fig3a": {"delta0": -5.85},
    "fig3b": {"delta0": 0.0},
    "fig3c": {"delta0": 5.85},
    "fig4a": {"crystal_type": "I", "mode": "diagonal", "g": LOW_GAIN},
    "fig4b": {"crystal_type": "I", "mode": "antidiagonal", "g": HIGH_GAIN},
    "fig4c": {"crystal_type": "II", "mode": "diagonal", "g": LOW_GAIN},
    "fig4d": {"crystal_type": "II", "mode": "antidiagonal", "g": HIGH_GAIN},
    "fig5a": {"crystal_type": "I", "beam": "typeI"},
    "fig5b": {"crystal_type": "II", "beam": "summed"},
    "fig6a": {"crystal_type": "I", "mode": "diagonal"},
    "fig6b": {"crystal_type": "I", "mode": "antidiagonal"},
    "fig6c": {"crystal_type": "II", "mode": "diagonal"},
    "fig6d": {"crystal_type": "II", "mode": "antidiagonal"},
}

COMMAND_DEFAULTS = {
    "fig2": {"intensity": 1.0},
    "fig3": {"sweep_axis": "g", "sweep_min": 1e-3, "sweep_max": 3.0},
    "fig4": {"sweep_axis": "q0_norm", "sweep_min": 1e-3, "sweep_max": 50.0,
             "sweep_scale": "log"},
    "fig5": {"sweep_axis": "q_inject", "sweep_min": 0.0, "sweep_max": 3.0,
             "g": HIGH_GAIN, "intensity": 1.0, "kind": "g1"},
    "fig6": {"sweep_axis": "q_inject", "sweep_min": 0.0, "sweep_max": 3.0,
             "g": HIGH_GAIN, "intensity": 1.0},
    "visibility": {"g": LOW_GAIN},
    "g2": {"g": LOW_GAIN},
    "sweep": {"g": LOW_GAIN},
}


@dataclass(frozen=True)
class RunConfig:
    command: str = "g2"
    panel: str = ""
    # geometry and crystal
    rho: float = 0.2
    g: float = 0.0
    delta0: float = 0.0
    q0_norm: float = 2.0
    crystal_type: str = "I"
    c_omega: float = 1.0
    # injected beam; intensity 0 means spontaneous
    intensity: float = 0.0
    q_inject: float = 0.0
    # detection
    x_min: float = -1.0
    x_max: float = 1.0
    x_points: int = 401
    mode: str = "diagonal"
    x_fixed: float = 0.0
    kind: str = "g2"
    beam: str = ""
    # sweep
    sweep_axis: str = ""
    sweep_min: float = 0.0
    sweep_max: float = 1.0
    sweep_points: int = 81
    sweep_scale: str = "linear"
    # quadrature
    q_halfwidth: float = 0.0
    q_points: int = 0
    w_halfwidth: float = 0.0
    w_points: int = 64
    rel_tol: float = 1e-6
    # run
    out: str = "."
    threads: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.panel and self.panel not in PANELS.get(self.command, ()):
            raise ConfigError(f"{self.command} has no panel {self.panel!r}")
        try:
            CrystalType.parse(self.crystal_type)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        checks = [
            (0 < self.rho < 1, "rho must lie in (0, 1)"),
            (self.g >= 0, "g must be >= 0"),
            (self.q0_norm > 0, "q0_norm must be > 0"),
            (self.c_omega > 0, "c_omega must be > 0"),
            (self.intensity >= 0, "intensity must be >= 0"),
            (self.x_points >= 2, "x_points must be >= 2"),
            (self.x_max > self.x_min, "x_max must exceed x_min"),
            (self.mode in MODES, f"mode must be one of {MODES}"),
            (self.kind in ("g1", "g2"), "kind must be g1 or g2"),
            (self.sweep_axis in ("",) + SWEEP_AXES, f"sweep_axis must be one of {SWEEP_AXES}"),
            (self.sweep_points >= 2, "sweep_points must be >= 2"),
            (self.sweep_scale in ("linear", "log"), "sweep_scale must be linear or log"),
            (self.w_points >= 64 and self.w_points % 2 == 0, "w_points must be even and >= 64"),
            (self.q_points == 0 or (self.q_points >= 64 and self.q_points % 2 == 0),
             "q_points must be 0 (auto) or even and >= 64"),
            (self.q_halfwidth >= 0 and self.w_halfwidth >= 0, "halfwidths must be >= 0 (0 = auto)"),
            (self.rel_tol > 0, "rel_tol must be > 0"),
            (self.threads >= 1, "threads must be >= 1"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)
        vals = [getattr(self, f.name) for f in fields(self) if f.type in ("float", float)]
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("all numeric settings must be finite")
        if self.sweep_axis:
            if not self.sweep_max > self.sweep_min:
                raise ConfigError("sweep range must be ordered (sweep_min < sweep_max)")
            if self.sweep_scale == "log" and self.sweep_min <= 0:
                raise ConfigError("log sweep needs sweep_min > 0")
            if self.sweep_axis == "q0_norm" and self.sweep_min <= 0:
                raise ConfigError("q0_norm sweep needs sweep_min > 0")
            if self.sweep_axis == "g" and self.sweep_min < 0:
                raise ConfigError("g sweep needs sweep_min >= 0")
        if self.command in ("fig4", "fig5", "fig6", "sweep") and not self.sweep_axis:
            raise ConfigError(f"{self.command} needs exactly one sweep axis")

    # -- derived objects ---------------------------------------------------
    @property
    def geometry(self):
        return SlitGeometry(self.rho)

    @property
    def ctype(self):
        return CrystalType.parse(self.crystal_type)

    def crystal(self, **over):
        kw = dict(g=self.g, delta0=self.delta0, q0_norm=self.q0_norm,
                  crystal_type=self.ctype, c_omega=self.c_omega)
        kw.update(over)
        return CrystalParams(**kw)

    @property
    def quadrature(self):
        return QuadratureSpec(
            q_halfwidth=self.q_halfwidth or None,
            q_points=self.q_points or None,
            w_halfwidth=self.w_halfwidth or None,
            w_points=self.w_points,
            rel_tol=self.rel_tol,
        )

    def detection(self, mode=None):
        return DetectionGrid.uniform(self.x_min, self.x_max, self.x_points,
                                     mode or self.mode, self.x_fixed)

    def sweep_values(self):
        import numpy as np

        if self.sweep_scale == "log":
            return np.geomspace(self.sweep_min, self.sweep_max, self.sweep_points)
        return np.linspace(self.sweep_min, self.sweep_max, self.sweep_points)

    @property
    def label(self):
        return f"{self.command}{self.panel}"

    def to_items(self):
        """Every setting except the run-only ones, in field order."""
        return [(f.name, getattr(self, f.name)) for f in fields(self)
                if f.name not in ("out", "threads")]


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key, raw):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind in ("float", float):
            return float(raw)
        if kind in ("int", int):
            return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None
    return raw


def parse_text(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key.startswith(IGNORED_PREFIXES):
            continue
        if key == "rate":
            values["g"] = _rate(raw)
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def _rate(raw):
    try:
        rate = float(raw)
    except ValueError:
        raise ConfigError(f"rate: cannot parse {raw!r}") from None
    if not rate >= 1:
        raise ConfigError("amplification rate must be >= 1")
    return rate_to_gain(rate)


def parse_file(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_text(text)


def build_config(command, panel="", file_values=None, overrides=None):
    """Layer command defaults, figure-panel defaults, the file, then overrides."""
    values = {"command": command, "panel": panel}
    values.update(COMMAND_DEFAULTS.get(command, {}))
    values.update(FIGURE_DEFAULTS.get(f"{command}{panel}", {}))
    for layer in (file_values or {}, overrides or {}):
        for key, val in layer.items():
            if key not in _FIELD_TYPES:
                raise ConfigError(f"unknown setting {key!r}")
            values[key] = val
    values["command"] = command
    if panel or "panel" not in (file_values or {}):
        values["panel"] = panel or values.get("panel", "")
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def format_value(val):
    if isinstance(val, float):
        return repr(val)
    return str(val)


def dump_items(items):
    return "".join(f"{k} = {format_value(v)}\n" for k, v in items)


def replace(cfg, **kw):
    try:
        return dataclasses.replace(cfg, **kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
