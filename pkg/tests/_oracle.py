"""Independent reference for the classifier: high-precision roots and sign scans."""
import math

import mpmath as mp
import numpy as np

from ghcwave.model import EquationParams, WaveParams, pole_location, poly_from_params


def random_draw(rng: np.random.Generator):
    eps = 0.0 if rng.random() < 0.2 else float(rng.uniform(0.2, 2.0))
    G = float(rng.uniform(-2, 2))
    if eps == 0.0 and abs(G) < 0.05:
        G = 0.5
    p = EquationParams(*(float(v) for v in rng.uniform(-2, 2, 3)), Gamma=G, epsilon=eps)
    c = float(rng.uniform(0.1, 2.0) * rng.choice([-1, 1]))
    A, B = (float(v) for v in rng.uniform(-1, 1, 2))
    return p, WaveParams(c, A, B)


def exact_F(p: EquationParams, w: WaveParams, phi):
    """F in extended precision directly from the parameters."""
    with mp.workdps(40):
        x = mp.mpf(phi)
        P = (mp.mpf(w.B) + 2 * mp.mpf(w.A) * x + (mp.mpf(w.c) + p.alpha) * x**2 - x**3
             + mp.mpf(p.beta) / 6 * x**4 + mp.mpf(p.gamma) / 10 * x**5)
        if p.epsilon == 0:
            return float(-P / p.Gamma)
        return float(P / (mp.mpf(p.eps2) * (w.c - x) - p.Gamma))


def distinguished_points(p: EquationParams, w: WaveParams):
    coeffs = list(poly_from_params(p, w).coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    with mp.workdps(60):
        roots = mp.polyroots([mp.mpf(c) for c in reversed(coeffs)], maxsteps=400, extraprec=400)
        pts = sorted(float(mp.re(r)) for r in roots if abs(mp.im(r)) < mp.mpf(10) ** -25)
    pole = pole_location(p, w)
    if pole is not None:
        pts.append(pole)
    return sorted(pts)


def positive_bounded_intervals(p: EquationParams, w: WaveParams):
    pts = distinguished_points(p, w)
    out = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi - lo <= 1e-12 * (1 + abs(lo)):
            continue
        if exact_F(p, w, 0.5 * (lo + hi)) > 0:
            out.append((lo, hi))
    return out


def scan_positive(p: EquationParams, w: WaveParams, lo: float, hi: float, n: int = 10_000,
                  evaluate=None) -> bool:
    z = np.linspace(lo, hi, n + 2)[1:-1]
    vals = evaluate(z) if evaluate is not None else np.array([exact_F(p, w, v) for v in z])
    return bool(np.all(vals > 0))


def same_interval(a, b, tol=1e-7):
    return all(math.isclose(x, y, rel_tol=tol, abs_tol=tol) for x, y in zip(a, b))
