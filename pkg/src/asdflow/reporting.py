"""Deterministic report emission: CSV, JSON, and flat config files.

All floating-point output carries 17 significant digits so that reading a
report back reproduces every float64 bit-for-bit, and repeated runs of the
same configuration produce byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .dynamics import TrajectoryRecord
from .errors import ConfigError
from .grid import PeriodicProfile, TorusGrid


def fmt17(x: float) -> str:
    """17-significant-digit decimal form; round-trips any finite float64."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


# ---------------------------------------------------------------------------
# JSON


def dumps_json(obj: Any, indent: int = 0) -> str:
    """Serialize nested dict/list/scalar data with fmt17 floats.

    A tiny writer instead of the stdlib module so numbers are never rendered
    in a truncated exponent-free form; key order is insertion order.
    """
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {dumps_json(v, indent + 2)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{dumps_json(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt17(obj)
    if isinstance(obj, complex):
        return dumps_json({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path: Path | str, obj: Any) -> None:
    Path(path).write_text(dumps_json(obj) + "\n")


# ---------------------------------------------------------------------------
# profile snapshots


def write_profile_csv(path: Path | str, profile: PeriodicProfile) -> None:
    lines = ["x,r"]
    for x, r in zip(profile.grid.nodes, profile.values):
        lines.append(f"{fmt17(x)},{fmt17(r)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_profile_csv(path: Path | str) -> PeriodicProfile:
    text = Path(path).read_text().strip().splitlines()
    if not text or text[0].strip() != "x,r":
        raise ConfigError(f"{path}: expected profile CSV with header 'x,r'")
    values = []
    for line in text[1:]:
        _, r = line.split(",")
        values.append(float(r))
    return PeriodicProfile(TorusGrid(len(values)), np.array(values))


# ---------------------------------------------------------------------------
# trajectory and branch tables


def write_trajectory_csv(path: Path | str, record: TrajectoryRecord) -> None:
    k_track = record.mode_amps.shape[0]
    header = "t,volume,area,min_r,max_r," + ",".join(f"amp_k{k}" for k in range(1, k_track + 1))
    lines = [header]
    for i in range(record.times.size):
        row = [
            fmt17(record.times[i]),
            fmt17(record.volume[i]),
            fmt17(record.area[i]),
            fmt17(record.min_r[i]),
            fmt17(record.max_r[i]),
        ] + [fmt17(record.mode_amps[k, i]) for k in range(k_track)]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path: Path | str) -> dict[str, np.ndarray]:
    text = Path(path).read_text().strip().splitlines()
    if not text or not text[0].startswith("t,volume,area,min_r,max_r"):
        raise ConfigError(f"{path}: not a trajectory CSV")
    names = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    if data.ndim != 2 or data.shape[1] != len(names):
        raise ConfigError(f"{path}: malformed trajectory CSV")
    return {name: data[:, i] for i, name in enumerate(names)}


def write_branch_csv(path: Path | str, samples: Iterable) -> None:
    lines = ["B,lambda,amplitude,residual,leading_mu"]
    for b in samples:
        lines.append(
            ",".join(fmt17(v) for v in (b.ecc, b.lam, b.amplitude, b.residual, b.leading_mu))
        )
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# flat config files: `key = value` lines, '#' comments


def parse_config_file(path: Path | str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def parse_range(spec: str) -> list[float]:
    """Parse 'start:step:stop' into an inclusive list of floats."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"expected start:step:stop, got {spec!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"non-numeric range bound in {spec!r}") from exc
    if step <= 0.0:
        raise ConfigError(f"range step must be positive in {spec!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ConfigError(f"empty range {spec!r}")
    return [start + i * step for i in range(count)]
