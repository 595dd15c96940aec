"""File formats: long-format CSV, JSON reports and raw float64 dumps."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .model import Grid, ValidationError
from .profiles import Profile

FLOAT_FMT = "%.17g"


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and non-finite floats for JSON."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def _write_table(path, header: str, columns) -> None:
    data = np.column_stack(columns) if columns else np.empty((0, 0))
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt=FLOAT_FMT)


def write_fields_csv(path, times, states, g: Grid) -> None:
    """Long format: one row per (t, x) sample, header ``t,x,u``."""
    times = np.asarray(times, dtype=float)
    states = np.asarray(states, dtype=float).reshape(len(times), g.n)
    t = np.repeat(times, g.n)
    x = np.tile(g.x, len(times))
    _write_table(path, "t,x,u", [t, x, states.ravel()])


def write_monitors_csv(path, times, monitors) -> None:
    """Long format ``t,name,value``; names sorted for reproducible output."""
    with open(path, "w") as fh:
        fh.write("t,name,value\n")
        for t, mon in zip(times, monitors):
            for name in sorted(mon):
                fh.write(f"{FLOAT_FMT % t},{name},{FLOAT_FMT % mon[name]}\n")


def read_monitors_csv(path) -> dict:
    out: dict = {}
    with open(path) as fh:
        next(fh)
        for line in fh:
            t, name, value = line.strip().split(",")
            out.setdefault(name, []).append((float(t), float(value)))
    return out


def write_raw(path, u, g: Grid, t: float) -> None:
    """Little-endian float64 dump plus a JSON sidecar ``<path>.json`` with n, L, t."""
    u = g.check_field(u)
    Path(path).write_bytes(np.asarray(u, dtype="<f8").tobytes())
    write_json(str(path) + ".json", {"n": g.n, "L": g.length, "t": float(t)})


def read_raw(path) -> tuple[np.ndarray, Grid, float]:
    meta = read_json(str(path) + ".json")
    u = np.frombuffer(Path(path).read_bytes(), dtype="<f8").astype(float)
    g = Grid(float(meta["L"]), int(meta["n"]))
    if u.size != g.n:
        raise ValidationError(f"raw file has {u.size} values, sidecar says {g.n}")
    return u, g, float(meta["t"])


def write_profile(path, prof: Profile) -> None:
    """``z,phi`` CSV plus ``<stem>.meta.json``."""
    _write_table(path, "z,phi", [np.asarray(prof.z, float), np.asarray(prof.phi, float)])
    write_json(Path(path).with_suffix(".meta.json"), prof.meta)


def read_profile(path) -> Profile:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    z, phi = data[:, 0], data[:, 1]
    if np.any(np.diff(z) <= 0):
        raise ValidationError("profile z must be strictly increasing")
    meta_path = Path(path).with_suffix(".meta.json")
    meta = read_json(meta_path) if meta_path.exists() else {}
    return Profile(z, phi, meta)
