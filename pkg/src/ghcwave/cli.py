"""Batch command line: ``ghcwave <command> --config FILE [--key value]...``.

Exit status: 0 success, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import os
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy
import sympy

from . import __version__, io, kernels, pss, weak
from . import jets as J
from .classifier import IllConditionedRoots, classify
from .model import EquationParams, Grid, ValidationError, WaveParams
from .profiles import ProfileError, integrate_profile, quadrature_residual, resample
from .solver import BlowUpError, SolverConfig, simulate

COMMANDS = ("simulate", "classify", "profile", "check-weak", "check-pss", "verify-claws", "sweep")
EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

# key -> (section, type, default)
KEYS = {
    "command": ("run", str, None),
    "output": ("run", str, "ghcwave_out"),
    "seed": ("run", int, 0),
    "alpha": ("equation", float, 0.0),
    "beta": ("equation", float, 0.0),
    "gamma": ("equation", float, 0.0),
    "Gamma": ("equation", float, 0.0),
    "epsilon": ("equation", float, 1.0),
    "c": ("wave", float, 1.0),
    "A": ("wave", float, 0.0),
    "B": ("wave", float, 0.0),
    "L": ("grid", float, 40.0),
    "n": ("grid", int, 512),
    "dt": ("solver", float, 1e-3),
    "t_end": ("solver", float, 1.0),
    "dealias": ("solver", str, "zero_pad_2x"),
    "monitor_every": ("solver", int, 10),
    "initial": ("initial", str, "gaussian"),
    "amplitude": ("initial", float, 0.5),
    "center": ("initial", float, None),
    "width": ("initial", float, 1.0),
    "profile_file": ("initial", str, None),
    "verdict_index": ("profile", int, 0),
    "zmin": ("profile", float, -20.0),
    "zmax": ("profile", float, 20.0),
    "nz": ("profile", int, 4096),
    "n_tests": ("checks", int, 20),
    "n_jets": ("checks", int, 1000),
    "eta_values": ("checks", str, "-2, -1, 0.5, 1, 2"),
    "sweep_command": ("sweep", str, "classify"),
    "sweep_key": ("sweep", str, None),
    "sweep_values": ("sweep", str, None),
}
SECTIONS = sorted({s for s, _, _ in KEYS.values()})
TOP = "__top__"


class ConfigError(ValidationError):
    """Malformed or unknown configuration input."""


@dataclass
class RunConfig:
    command: str
    values: dict
    params: EquationParams
    wave: WaveParams | None
    grid: Grid
    solver: SolverConfig
    output: Path
    seed: int
    extras: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {k: self.values[k] for k in sorted(self.values)}


def _convert(key: str, raw):
    typ = KEYS[key][1]
    if raw is None:
        return None
    try:
        return typ(raw) if typ is not int else int(str(raw).strip())
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {typ.__name__}") from None


def read_config_text(text: str) -> dict:
    """Parse ``key = value`` lines with optional ``[section]`` headers."""
    cp = configparser.ConfigParser(interpolation=None, strict=True,
                                   comment_prefixes=("#", ";"), inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(f"[{TOP}]\n" + text)
    except configparser.ParsingError as e:
        lines = ", ".join(f"line {ln - 1}: {raw}" for ln, raw in e.errors)
        raise ConfigError(f"parse error at {lines}") from None
    except configparser.Error as e:
        raise ConfigError(f"parse error: {e}".replace(f"[{TOP}]", "top level")) from None
    out = {}
    for sec in cp.sections():
        if sec != TOP and sec not in SECTIONS:
            raise ConfigError(f"unknown section [{sec}]")
        for key, raw in cp.items(sec):
            if key not in KEYS:
                raise ConfigError(f"unknown key {key!r}")
            if sec != TOP and KEYS[key][0] != sec:
                raise ConfigError(f"key {key!r} belongs in [{KEYS[key][0]}], not [{sec}]")
            if key in out:
                raise ConfigError(f"duplicate key {key!r}")
            out[key] = raw
    return out


def parse_config(text: str = "", overrides: dict | None = None, command: str | None = None) -> RunConfig:
    """Validated RunConfig from config text; ``overrides`` win over the file."""
    raw = read_config_text(text)
    for k, v in (overrides or {}).items():
        if k not in KEYS:
            raise ConfigError(f"unknown key {k!r}")
        if v is not None:
            raw[k] = v
    if command is not None:
        raw["command"] = command
    values = {k: _convert(k, raw.get(k, d)) for k, (_, _, d) in KEYS.items()}
    cmd = values["command"]
    if cmd not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {cmd!r}")
    p = EquationParams(values["alpha"], values["beta"], values["gamma"], values["Gamma"], values["epsilon"])
    wave = None
    if cmd in ("classify", "profile", "check-weak") or (cmd == "simulate" and values["initial"] == "profile"):
        wave = WaveParams(values["c"], values["A"], values["B"])
    g = Grid(values["L"], values["n"])
    cfg = SolverConfig(values["dt"], values["t_end"], values["dealias"], values["monitor_every"])
    if values["initial"] not in ("gaussian", "profile", "file"):
        raise ConfigError("initial must be gaussian, profile or file")
    if cmd == "simulate" and values["initial"] == "file" and not values["profile_file"]:
        raise ConfigError("initial = file needs profile_file")
    if values["center"] is None:
        values["center"] = g.length / 2
    if cmd == "sweep":
        if values["sweep_key"] not in KEYS or values["sweep_key"] in ("command", "output", "sweep_key"):
            raise ConfigError("sweep_key must name a parameter key")
        if not values["sweep_values"]:
            raise ConfigError("sweep_values is required")
        if values["sweep_command"] not in COMMANDS or values["sweep_command"] == "sweep":
            raise ConfigError("sweep_command must be a non-sweep command")
        cells = [s.strip() for s in values["sweep_values"].split(",") if s.strip()]
        # validate every cell before any compute starts
        for v in cells:
            parse_config(text, {**(overrides or {}), values["sweep_key"]: v}, values["sweep_command"])
    if values["n_jets"] < 1 or values["n_tests"] < 1 or values["nz"] < 8:
        raise ConfigError("n_jets, n_tests must be >= 1 and nz >= 8")
    eta = [float(s) for s in values["eta_values"].split(",") if s.strip()]
    out = Path(values["output"])
    return RunConfig(cmd, values, p, wave, g, cfg, out, values["seed"], {"eta": eta})


def _versions() -> dict:
    return {"ghcwave": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "sympy": sympy.__version__, "python": platform.python_version(),
            "kernels": kernels.BACKEND}


# --- commands -----------------------------------------------------------------

def _initial_field(cfg: RunConfig) -> np.ndarray:
    g, v = cfg.grid, cfg.values
    if v["initial"] == "gaussian":
        return v["amplitude"] * np.exp(-(((g.x - v["center"]) / v["width"]) ** 2))
    if v["initial"] == "file":
        return resample(io.read_profile(v["profile_file"]), g, v["center"])
    verdicts = classify(cfg.params, cfg.wave)
    if not verdicts:
        raise ValidationError("no bounded travelling wave to use as initial data")
    prof = integrate_profile(verdicts[v["verdict_index"]], cfg.params, cfg.wave, np.array([0.0]))
    return resample(prof, g, v["center"])


def cmd_simulate(cfg: RunConfig, out: Path) -> dict:
    u0 = _initial_field(cfg)
    try:
        traj = simulate(u0, cfg.params, cfg.grid, cfg.solver)
        status = {"blew_up": False}
    except BlowUpError as e:
        traj = e.trajectory
        status = {"blew_up": True, "blow_up_time": e.t_last}
    if traj is not None and traj.times:
        io.write_fields_csv(out / "fields.csv", traj.times, traj.states, cfg.grid)
        io.write_monitors_csv(out / "monitors.csv", traj.times, traj.monitors)
        io.write_raw(out / "field_final.bin", traj.states[-1], cfg.grid, traj.times[-1])
        first, last = traj.monitors[0], traj.monitors[-1]
        status["drift"] = {k: (last[k] - first[k]) / max(abs(first[k]), 1e-300)
                           for k in ("energy", "m_mass", "mass") if k in first}
        status["t_final"] = traj.times[-1]
    if status["blew_up"]:
        raise _NumericFailure(f"solution blew up after t = {status['blow_up_time']:.6g}", status)
    return status


class _NumericFailure(RuntimeError):
    def __init__(self, msg: str, result: dict):
        super().__init__(msg)
        self.result = result


def cmd_classify(cfg: RunConfig, out: Path) -> dict:
    verdicts = [v.to_json() for v in classify(cfg.params, cfg.wave)]
    io.write_json(out / "verdicts.json", verdicts)
    return {"verdicts": verdicts}


def cmd_profile(cfg: RunConfig, out: Path) -> dict:
    verdicts = classify(cfg.params, cfg.wave)
    idx = cfg.values["verdict_index"]
    if not verdicts or idx >= len(verdicts):
        raise ValidationError(f"no bounded wave with index {idx} ({len(verdicts)} available)")
    v = verdicts[idx]
    probe = integrate_profile(v, cfg.params, cfg.wave, np.array([0.0]))
    nz = cfg.values["nz"]
    period = probe.meta.get("period_ode")
    if period:
        z = np.linspace(-period / 2, period / 2, nz)
    else:
        z = np.linspace(cfg.values["zmin"], cfg.values["zmax"], nz)
    prof = integrate_profile(v, cfg.params, cfg.wave, z)
    io.write_profile(out / "profile.csv", prof)
    io.write_json(out / "verdicts.json", [x.to_json() for x in verdicts])
    return {"verdict": v.to_json(), "meta": prof.meta,
            "quadrature_residual": quadrature_residual(prof, cfg.params, cfg.wave, derivatives="exact")}


def cmd_check_weak(cfg: RunConfig, rng: np.random.Generator, out: Path) -> dict:
    p, c = cfg.params, cfg.wave.c
    tests = weak.test_family(rng, cfg.values["n_tests"])
    report = weak.peakon_iff_test(p, c, tests)
    if report["verdict"] == "rejected" and p.alpha + c != 0:
        # residual of the would-be peakon and its closed-form prediction
        amp, eps = p.alpha + c, p.epsilon
        cand = lambda z: amp * np.exp(-np.abs(z) / eps)
        cand.meta = {"crests": [0.0]}
        res = weak.weak_residual(cand, p, c, tests)
        pred = [weak.peakon_leftover(p, c, amp, t) for t in tests]
        report.update(residuals=res, predicted=pred, max_residual=float(np.max(np.abs(res))))
    report["tests"] = [{"family": t.family, "center": t.center, "width": t.width} for t in tests]
    io.write_json(out / "weak_report.json", report)
    return {"verdict": report["verdict"], "max_residual": report.get("max_residual"),
            "reason": report.get("reason")}


def cmd_check_pss(cfg: RunConfig, rng: np.random.Generator, out: Path) -> dict:
    p = cfg.params
    try:
        npar = pss.normalize_for_pss(p)
        match = pss.exp_class_match(npar.beta_n, npar.gamma_n, npar.alpha_n)
    except pss.Unsupported as e:
        # the coefficients are read as those of the normalized equation directly
        npar = None
        match = pss.exp_class_match(p.beta, p.gamma, p.alpha)
        match["note"] = str(e)
    report = {"eta": cfg.extras["eta"], "match": match, "max_residuals": {}}
    if npar is not None:
        jet = pss.on_equation_jets(rng, cfg.values["n_jets"], npar)
        for s in (1, -1):
            for eta in cfg.extras["eta"]:
                r = pss.structure_residuals(pss.chpss_forms(npar.alpha_n, eta, s), npar, jet)
                report["max_residuals"][f"sign={s:+d},eta={eta:g}"] = np.max(np.abs(r), axis=0)
        report["alpha_n"] = npar.alpha_n
        allmax = max((float(np.max(v)) for v in report["max_residuals"].values()), default=0.0)
        report["max_residual"] = allmax
    io.write_json(out / "pss_report.json", report)
    return {"match": match["match"], "max_residual": report.get("max_residual")}


def cmd_verify_claws(cfg: RunConfig, rng: np.random.Generator, out: Path) -> dict:
    p, n = cfg.params, cfg.values["n_jets"]
    jet = J.random_jets(rng, n)
    report = {"n_jets": n, "divergence": {}, "euler": {}}
    for which in ("Q1", "Qu", "Qsqrt"):
        if which == "Qsqrt":
            if not p.sqrt_m_admissible:
                report["divergence"][which] = "not admissible for these parameters"
                continue
            m = jet["u"] - p.eps2 * jet["u_xx"]
            keep = m >= 0.1
            sub = {k: v[keep] for k, v in jet.items()}
        else:
            sub = jet
        lhs, rhs, scale = J.current_divergence_check(which, p, sub, with_scale=True)
        diff = np.asarray(lhs) - np.asarray(rhs)
        report["divergence"][which] = {"max_abs": float(np.max(np.abs(diff))),
                                       "max_rel": float(np.max(np.abs(diff) / scale)),
                                       "n": int(np.size(diff))}
        q = J.CURRENTS[which][0]
        er, escale = J.euler_residual(q, p, sub, with_scale=True)
        report["euler"][which] = {"max_rel": float(np.max(np.abs(er) / escale))}
    io.write_json(out / "claws_report.json", report)
    rel = [d["max_rel"] for d in report["divergence"].values() if isinstance(d, dict)]
    return {"max_rel_divergence": max(rel), "report": "claws_report.json"}


def cmd_sweep(cfg: RunConfig, text: str, overrides: dict, out: Path) -> dict:
    key, sub = cfg.values["sweep_key"], cfg.values["sweep_command"]
    cells = [s.strip() for s in cfg.values["sweep_values"].split(",") if s.strip()]
    threads = int(os.environ.get("GHCWAVE_THREADS", "0") or 0) or (os.cpu_count() or 1)

    def one(i_v):
        i, v = i_v
        cell_dir = out / f"cell_{i:03d}"
        cell_over = {**overrides, key: v, "output": str(cell_dir)}
        c = parse_config(text, cell_over, sub)
        code = run(c, text, cell_over)
        return {"index": i, key: v, "exit_code": code, "dir": cell_dir.name}

    with ThreadPoolExecutor(max_workers=max(1, min(threads, len(cells)))) as ex:
        results = list(ex.map(one, enumerate(cells)))
    failed = [r for r in results if r["exit_code"] != 0]
    return {"cells": results, "failed": len(failed)}


def run(cfg: RunConfig, text: str = "", overrides: dict | None = None) -> int:
    """Execute a parsed config; writes summary.json; returns the exit status."""
    out = cfg.output
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    summary = {"command": cfg.command, "input": cfg.echo(), "versions": _versions(), "seed": cfg.seed}
    code = EXIT_OK
    try:
        if cfg.command == "simulate":
            result = cmd_simulate(cfg, out)
        elif cfg.command == "classify":
            result = cmd_classify(cfg, out)
        elif cfg.command == "profile":
            result = cmd_profile(cfg, out)
        elif cfg.command == "check-weak":
            result = cmd_check_weak(cfg, rng, out)
        elif cfg.command == "check-pss":
            result = cmd_check_pss(cfg, rng, out)
        elif cfg.command == "verify-claws":
            result = cmd_verify_claws(cfg, rng, out)
        else:
            result = cmd_sweep(cfg, text, overrides or {}, out)
            if result["failed"]:
                code = max(r["exit_code"] for r in result["cells"])
        summary["status"] = "ok" if code == EXIT_OK else "cell failures"
    except _NumericFailure as e:
        code, result = EXIT_NUMERIC, e.result
        summary["status"] = f"numerical failure: {e}"
    except (BlowUpError, IllConditionedRoots, ProfileError, FloatingPointError) as e:
        code, result = EXIT_NUMERIC, {}
        summary["status"] = f"numerical failure: {e}"
    except ValueError as e:
        code, result = EXIT_INVALID, {}
        summary["status"] = f"invalid input: {e}"
    summary["result"] = result
    summary["exit_code"] = code
    summary["wall_time_s"] = time.perf_counter() - t0
    io.write_json(out / "summary.json", summary)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ghcwave", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="key = value file with optional [section] headers")
    for key in KEYS:
        if key != "command":
            ap.add_argument(f"--{key}", dest=key, default=None, metavar="VALUE")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k in KEYS and v is not None}
    try:
        text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text, overrides, args.command)
    except (OSError, ValueError) as e:
        print(f"ghcwave: {e}", file=sys.stderr)
        return EXIT_INVALID
    code = run(cfg, text, overrides)
    summary = io.read_json(cfg.output / "summary.json")
    print(f"ghcwave {cfg.command}: {summary['status']} (exit {code}), output in {cfg.output}")
    return code


if __name__ == "__main__":
    sys.exit(main())
