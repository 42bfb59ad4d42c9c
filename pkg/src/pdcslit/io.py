"""File output: CSV curves and maps, 16-bit PGM images, manifests."""
from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .config import dump_items

GRAY_MAX = 65535


def fmt(x):
    return f"{x:.9g}"


def _write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _header(comments):
    return "".join(f"# {line}\n" for line in comments)


def write_curves(path, columns, comments=()):
    """Write equal-length columns given as ``{name: array}``."""
    names = list(columns)
    data = [np.asarray(columns[n], dtype=float) for n in names]
    n = len(data[0])
    if any(len(d) != n for d in data):
        raise ValueError("columns differ in length")
    lines = [_header(comments), ",".join(names), "\n"]
    for i in range(n):
        lines.append(",".join(fmt(d[i]) for d in data))
        lines.append("\n")
    return _write_text(path, "".join(lines))


def write_map_csv(path, x, sweep, values, names=("X", "sweep", "value"), comments=()):
    """Long format: one row per (sweep, X) cell, sweep-major."""
    values = np.asarray(values, dtype=float)
    if values.shape != (len(sweep), len(x)):
        raise ValueError("values must have shape (len(sweep), len(x))")
    lines = [_header(comments), ",".join(names), "\n"]
    for j, s in enumerate(sweep):
        sj = fmt(s)
        for i, xi in enumerate(x):
            lines.append(f"{fmt(xi)},{sj},{fmt(values[j, i])}\n")
    return _write_text(path, "".join(lines))


def to_gray(values):
    """Linear map onto 0..65535; returns (gray, lo, hi)."""
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo
    if span <= 0:
        return np.zeros(values.shape, dtype=np.int64), lo, hi
    gray = np.rint((values - lo) / span * GRAY_MAX).astype(np.int64)
    return gray, lo, hi


def write_pgm(path, values, x, sweep, sweep_name="sweep"):
    """Plain 16-bit PGM; the top row is the last sweep value.

    A sidecar ``<path>.scale.txt`` records the value/gray relation.
    """
    gray, lo, hi = to_gray(values)
    img = gray[::-1]
    h, w = img.shape
    rows = "".join(" ".join(str(v) for v in row) + "\n" for row in img)
    pgm = _write_text(path, f"P2\n{w} {h}\n{GRAY_MAX}\n{rows}")
    scale = _write_text(
        str(path) + ".scale.txt",
        "# value = value_min + gray * (value_max - value_min) / gray_max\n"
        f"gray_max = {GRAY_MAX}\n"
        f"value_min = {fmt(lo)}\n"
        f"value_max = {fmt(hi)}\n"
        f"columns = X from {fmt(x[0])} to {fmt(x[-1])} ({len(x)} samples)\n"
        f"rows = {sweep_name} from {fmt(sweep[-1])} (top) to {fmt(sweep[0])} (bottom)"
        f" ({len(sweep)} samples)\n",
    )
    return pgm, scale


def read_pgm(path):
    """Inverse of write_pgm's image part; returns gray rows top to bottom."""
    tokens = Path(path).read_text(encoding="utf-8").split()
    if tokens[0] != "P2":
        raise ValueError("not a plain PGM")
    w, h, _ = (int(t) for t in tokens[1:4])
    return np.array(tokens[4:], dtype=np.int64).reshape(h, w)


def read_csv(path):
    """Return (comments, header, data) for a file written here."""
    comments, rows, header = [], [], None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return comments, header, np.array(rows)


def sha256_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, config_items, info, files):
    """Manifest is itself a valid config file: settings, then ignored info and checksums."""
    lines = ["# run manifest; re-run with --config on this file\n",
             dump_items(config_items)]
    lines += [f"info.{k} = {v}\n" for k, v in info]
    lines += [f"checksum.{Path(f).name} = {sha256_file(f)}\n" for f in files]
    return _write_text(path, "".join(lines))


def read_checksums(path):
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("checksum."):
            key, val = line.split("=", 1)
            out[key.strip()[len("checksum."):]] = val.strip()
    return out
