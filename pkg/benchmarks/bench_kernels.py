"""Compare the compiled kernels with the numpy fallback.

Times each kernel at several array sizes, then a short solver run with each
backend swapped in.  Usage: python benchmarks/bench_kernels.py [--json FILE]
"""
import argparse
import json
import timeit

import numpy as np

from ghcwave import kernels
from ghcwave.model import EquationParams, Grid
from ghcwave.solver import SolverConfig, simulate


def _best(stmt, number: int, repeat: int = 5) -> float:
    return min(timeit.repeat(stmt, number=number, repeat=repeat)) / number


def bench_kernels(sizes=(512, 4096, 65536)) -> list:
    rng = np.random.default_rng(0)
    coeffs = np.array([0.3, -1.2, 0.5, -1.0, 0.2, -0.05])
    rows = []
    for n in sizes:
        u, ux, uxx = (rng.standard_normal(n) for _ in range(3))
        number = max(10, 200000 // n)
        for name, mod in kernels.backends().items():
            t_flux = _best(lambda: mod.nonlinear_flux(u, ux, uxx, 1.0, 0.1, -0.05), number)
            t_quad = _best(lambda: mod.quadrature_ratio(coeffs, u, 2.0, -1.0), number)
            rows.append({"n": n, "backend": name, "flux_us": 1e6 * t_flux, "ratio_us": 1e6 * t_quad})
    return rows


def bench_solver(t_end: float = 0.5) -> list:
    p = EquationParams(0.5, 0.3, -0.2, 0.4, 1.0)
    g = Grid(40.0, 512)
    u0 = -0.5 * np.exp(-(((g.x - 20.0) / 2.0) ** 2))
    cfg = SolverConfig(dt=2e-3, t_end=t_end, monitor_every=1000)
    rows, saved = [], kernels._impl
    try:
        for name, mod in kernels.backends().items():
            kernels._impl = mod
            t = _best(lambda: simulate(u0, p, g, cfg), 1, repeat=3)
            rows.append({"backend": name, "steps": int(round(t_end / cfg.dt)), "seconds": t})
    finally:
        kernels._impl = saved
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", help="also write results to this file")
    args = ap.parse_args(argv)
    kr, sr = bench_kernels(), bench_solver()
    print(f"{'n':>7} {'backend':>8} {'flux [us]':>11} {'ratio [us]':>11}")
    for r in kr:
        print(f"{r['n']:>7} {r['backend']:>8} {r['flux_us']:>11.2f} {r['ratio_us']:>11.2f}")
    print()
    for r in sr:
        print(f"solver {r['backend']:>8}: {r['steps']} steps in {r['seconds']:.3f} s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"kernels": kr, "solver": sr}, fh, indent=2)


if __name__ == "__main__":
    main()
