"""Travelling-wave profiles phi(z), z = x - ct.

Profiles are built from the quadrature (phi')^2 = F(phi).  Away from the
pole the second-order form phi'' = F'(phi)/2 is regular through turning
points, so it carries a profile from a crest to the next turning point.
Tails approaching a double root use the first-order flow phi' = +-sqrt(F),
which is stable in that direction, and finish with the linearized
exponential.  Near a cusp the inverse map z(phi) is regular and is
integrated instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicSpline

from .classifier import WaveVerdict, classify, reduced_ratio
from .model import EquationParams, Grid, ValidationError, WaveParams

P_ = np.polynomial.polynomial

ODE_RTOL = 1e-12
ODE_ATOL = 1e-14
TAIL_TOL = 1e-12


class ProfileError(RuntimeError):
    """Profile construction failed (event not found, tolerance not met)."""


class ConstraintError(ValueError):
    """Parameters violate the hypotheses of a closed-form family."""


@dataclass
class Profile:
    """Samples of phi on an increasing z grid.

    ``func`` evaluates the profile anywhere when an exact representation is
    available (closed form or dense ODE output); ``dfunc`` gives
    (phi', phi'') likewise.
    """
    z: np.ndarray
    phi: np.ndarray
    meta: dict = field(default_factory=dict)
    func: Callable | None = None
    dfunc: Callable | None = None

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.func is not None:
            return self.func(z)
        period = self.meta.get("period")
        if period:
            zz = self.z[0] + np.mod(z - self.z[0], period)
            return CubicSpline(self.z, self.phi)(zz)
        return np.interp(z, self.z, self.phi)


class ClosedForm:
    """A profile given by a formula, with analytic derivatives."""

    def __init__(self, f, df, d2f, meta):
        self._f, self._df, self._d2f = f, df, d2f
        self.meta = meta

    def __call__(self, z):
        return self._f(np.asarray(z, dtype=float))

    def derivatives(self, z):
        z = np.asarray(z, dtype=float)
        return self._df(z), self._d2f(z)

    def sample(self, zgrid) -> Profile:
        z = np.asarray(zgrid, dtype=float)
        return Profile(z, self(z), dict(self.meta), func=self,
                       dfunc=lambda s: self.derivatives(s))


# --- the quadrature ratio as a rational function ------------------------------

class Ratio:
    """F = N/D with N, D ascending coefficient arrays (D of degree <= 1)."""

    def __init__(self, num, den):
        self.n = np.asarray(num, dtype=float)
        self.d = np.asarray(den, dtype=float)
        self.n1 = P_.polyder(self.n)
        self.n2 = P_.polyder(self.n, 2)
        self.d1 = P_.polyder(self.d) if self.d.size > 1 else np.array([0.0])

    def F(self, x):
        return P_.polyval(x, self.n) / P_.polyval(x, self.d)

    __call__ = F

    def deflated(self, r: float, k: int = 1):
        """G with F = (phi - r)^k G, the root divided out of the numerator."""
        q, _ = P_.polydiv(self.n, P_.polypow([-r, 1.0], k))
        return lambda x: P_.polyval(x, q) / P_.polyval(x, self.d)

    def dF(self, x):
        N, D = P_.polyval(x, self.n), P_.polyval(x, self.d)
        N1, D1 = P_.polyval(x, self.n1), P_.polyval(x, self.d1)
        return (N1 * D - N * D1) / D**2

    def d2F(self, x):
        N, D = P_.polyval(x, self.n), P_.polyval(x, self.d)
        N1, D1 = P_.polyval(x, self.n1), P_.polyval(x, self.d1)
        N2 = P_.polyval(x, self.n2)
        return (N2 * D - N * 0.0) / D**2 - 2 * D1 * (N1 * D - N * D1) / D**3


def wave_ratio(p: EquationParams, w: WaveParams) -> Ratio:
    return Ratio(*reduced_ratio(p, w))


# --- half period --------------------------------------------------------------

def _endpoint_order(F, x0: float, inward: float) -> float:
    """Estimate the power k in F ~ |phi - x0|^k from two nearby samples."""
    d1, d2 = 1e-4 * inward, 1e-6 * inward
    f1, f2 = abs(F(x0 + d1)), abs(F(x0 + d2))
    if f1 == 0 or f2 == 0:
        return 2.0
    return math.log(f1 / f2) / math.log(abs(d1 / d2))


def half_period(F, lo: float, hi: float, lo_order: int | None = None,
                hi_order: int | None = None) -> float:
    """z-span of a monotone half wave, the integral of dphi/sqrt(F) over (lo, hi).

    Each half of the interval uses phi = end +- s^2, which absorbs the
    inverse square root at a simple zero.  Endpoint orders >= 2 (double or
    higher roots) give +inf.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    width = hi - lo
    probe = lo + width * (np.arange(1, 64) / 64)
    if np.any(np.asarray([F(x) for x in probe]) <= 0):
        raise ValueError("F is not positive inside the interval")
    if lo_order is None:
        lo_order = round(_endpoint_order(F, lo, width))
    if hi_order is None:
        hi_order = round(_endpoint_order(F, hi, -width))
    if lo_order >= 2 or hi_order >= 2:
        return math.inf
    if lo_order == 1 and not isinstance(F, Ratio):
        lo = _refine_root(F, lo, width)
    if hi_order == 1 and not isinstance(F, Ratio):
        hi = _refine_root(F, hi, -width)
    mid = 0.5 * (lo + hi)
    smax = math.sqrt(mid - lo)

    if isinstance(F, Ratio):
        # exact division by the endpoint root avoids cancellation near it
        G_lo = F.deflated(lo) if lo_order == 1 else None
        G_hi = F.deflated(hi) if hi_order == 1 else None
    else:
        G_lo = G_hi = None

    def g_lo(s):
        if G_lo is not None:
            return 2.0 / math.sqrt(G_lo(lo + s * s))
        return 2 * s / math.sqrt(F(lo + s * s)) if s > 0 else _limit(F, lo, +1, lo_order)

    def g_hi(s):
        if G_hi is not None:
            return 2.0 / math.sqrt(-G_hi(hi - s * s))
        return 2 * s / math.sqrt(F(hi - s * s)) if s > 0 else _limit(F, hi, -1, hi_order)

    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=400)
    a, _ = integrate.quad(g_lo, 0.0, smax, **opts)
    b, _ = integrate.quad(g_hi, 0.0, smax, **opts)
    return a + b


def _refine_root(F, x0: float, inward: float) -> float:
    """Move a simple-root endpoint onto the sign change of F nearby."""
    h = 1e-8 * abs(inward)
    a, b = x0 - math.copysign(h, inward), x0 + math.copysign(h, inward)
    fa, fb = F(a), F(b)
    if fb > 0 and fa < 0:
        return optimize.brentq(F, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    return x0


def _limit(F, x0, sgn, order):
    if order == 1:
        s = 1e-8
        return 2 * s / math.sqrt(F(x0 + sgn * s * s))
    return 0.0


# --- ODE pieces -----------------------------------------------------------------

class _Piece:
    """phi on [z0, z1] from a dense ODE solution or a closed form."""

    def __init__(self, z0, z1, fn, dfn):
        self.z0, self.z1, self.fn, self.dfn = z0, z1, fn, dfn


def _second_order(R: Ratio, z0, phi0, dphi0, stop, zmax):
    def rhs(z, y):
        return [y[1], 0.5 * R.dF(y[0])]

    events = []
    if stop == "turn":
        ev = lambda z, y: y[1]
        ev.terminal = True
        ev.direction = 0
        events.append(ev)
    else:
        target = stop
        ev = lambda z, y: y[0] - target
        ev.terminal = True
        events.append(ev)
    sol = integrate.solve_ivp(rhs, (z0, zmax), [phi0, dphi0], method="DOP853",
                              rtol=ODE_RTOL, atol=ODE_ATOL, dense_output=True, events=events)
    # an event exactly at the start (turning point with zero slope) is skipped by solve_ivp
    if sol.status != 1 or not len(sol.t_events[0]):
        raise ProfileError(f"event {stop!r} not reached before z = {zmax}")
    z1 = float(sol.t_events[0][-1])
    dense = sol.sol
    return _Piece(z0, z1, lambda z: dense(z)[0], lambda z: (dense(z)[1], 0.5 * R.dF(dense(z)[0]))), z1, dense(z1)


def _first_order_tail(R: Ratio, z0, phi0, target, sgn, order, zmax):
    """phi' = sgn sqrt(F) toward a root of multiplicity ``order``, then an exponential tail.

    The root is divided out of the numerator, F = (phi - r)^k Q/D, so that
    sqrt(F) keeps full relative accuracy as phi approaches r.
    """
    scale = 1.0 + abs(target)
    factor = P_.polypow([-target, 1.0], order)
    Q, _rem = P_.polydiv(R.n, factor)
    half = order / 2.0

    def g(x):
        return max(P_.polyval(x, Q) / P_.polyval(x, R.d), 0.0)

    def rhs(z, y):
        d = target - y[0]
        return [math.copysign(abs(d) ** half * math.sqrt(g(y[0])), d)]

    kappa = math.sqrt(g(target)) if order == 2 else 0.0
    ev = lambda z, y: abs(y[0] - target) - TAIL_TOL * scale
    ev.terminal = True
    sol = integrate.solve_ivp(rhs, (z0, zmax), [phi0], method="DOP853",
                              rtol=ODE_RTOL, atol=1e-3 * TAIL_TOL * scale, dense_output=True,
                              events=[ev])
    z1 = float(sol.t[-1])
    dense = sol.sol
    phi1 = float(dense(z1)[0])
    d0 = phi1 - target

    def fn(z):
        z = np.asarray(z, dtype=float)
        inside = z <= z1
        out = np.empty_like(z)
        if np.any(inside):
            out[inside] = dense(np.minimum(z[inside], z1))[0]
        out[~inside] = target + d0 * np.exp(-kappa * (z[~inside] - z1))
        return out

    def dfn(z):
        f = fn(z)
        d1 = sgn * np.sqrt(np.maximum(R.F(f), 0.0))
        return d1, 0.5 * R.dF(f)

    return _Piece(z0, math.inf, fn, dfn)


def _cusp_piece(R: Ratio, pole, target, sgn):
    """Half wave leaving a cusp at z=0: integrate z(phi) and invert."""
    def dz(phi, z):
        with np.errstate(divide="ignore"):
            f = R.F(phi)  # infinite at the pole itself, where dz/dphi = 0
        return [sgn / math.sqrt(f) if f > 0 else 0.0]

    sol = integrate.solve_ivp(dz, (pole, target), [0.0], method="DOP853",
                              rtol=ODE_RTOL, atol=ODE_ATOL, dense_output=True)
    zend = float(sol.y[0, -1])
    dense = sol.sol

    def fn(z):
        # z(phi) is monotone: vectorized bisection on the dense output
        z = np.clip(np.atleast_1d(np.asarray(z, dtype=float)), 0.0, zend)
        a = np.full_like(z, pole)
        b = np.full_like(z, target)
        for _ in range(60):
            m = 0.5 * (a + b)
            below = dense(m)[0] < z
            a = np.where(below, m, a)
            b = np.where(below, b, m)
        return 0.5 * (a + b)

    def dfn(z):
        f = fn(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return sgn * np.sqrt(np.maximum(R.F(f), 0.0)), 0.5 * R.dF(f)

    return _Piece(0.0, zend, fn, dfn), zend


def _half_wave(v: WaveVerdict, R: Ratio, crest: float, far: float, far_order: int,
               crest_type: str, zmax: float):
    """Pieces covering z >= 0 from the crest toward the far endpoint."""
    sgn = 1.0 if far > crest else -1.0
    mid = 0.5 * (crest + far)
    pieces = []
    if crest_type == "cusp":
        piece, zc = _cusp_piece(R, crest, mid, sgn)
        pieces.append(piece)
        z_start, phi_start = zc, mid
        dphi_start = sgn * math.sqrt(R.F(mid))
    else:
        dphi0 = sgn * math.sqrt(max(R.F(crest), 0.0)) if crest_type == "peak" else 0.0
        piece, zc, y = _second_order(R, 0.0, crest, dphi0, mid, zmax)
        pieces.append(piece)
        z_start, phi_start, dphi_start = zc, float(y[0]), float(y[1])
    if far_order >= 2:
        pieces.append(_first_order_tail(R, z_start, phi_start, far, sgn, far_order, zmax))
        return pieces, math.inf
    piece, zt, _ = _second_order(R, z_start, phi_start, dphi_start, "turn", zmax)
    pieces.append(piece)
    return pieces, zt


def _assemble(pieces):
    def fn(zabs):
        zabs = np.asarray(zabs, dtype=float)
        out = np.empty_like(zabs)
        for pc in pieces:
            m = (zabs >= pc.z0) & (zabs <= pc.z1)
            if np.any(m):
                out[m] = pc.fn(zabs[m])
        return out

    def dfn(zabs):
        zabs = np.asarray(zabs, dtype=float)
        d1 = np.empty_like(zabs)
        d2 = np.empty_like(zabs)
        for pc in pieces:
            m = (zabs >= pc.z0) & (zabs <= pc.z1)
            if np.any(m):
                a, b = pc.dfn(zabs[m])
                d1[m], d2[m] = a, b
        return d1, d2

    return fn, dfn


def _endpoint_type(role: str) -> str:
    return {"min_attained": "attained", "max_attained": "attained",
            "inf_asymptotic": "asymptotic", "sup_asymptotic": "asymptotic",
            "cusp_extremum": "cusp", "peak_extremum": "peak"}[role]


def integrate_profile(v: WaveVerdict, p: EquationParams, w: WaveParams, zgrid,
                      zmax: float = 1e3) -> Profile:
    """Sample the wave of verdict ``v`` on ``zgrid``, crest at z = 0.

    Even waves are mirrored about the crest; periodic ones are extended with
    the period.  Fronts joining two asymptotic levels are centred at the
    mid value.
    """
    if v.kind in ("none", "unbounded"):
        raise ValidationError(f"cannot build a profile for kind {v.kind!r}")
    zgrid = np.asarray(zgrid, dtype=float)
    R = wave_ratio(p, w)
    t_lo, t_hi = _endpoint_type(v.lo_role), _endpoint_type(v.hi_role)
    meta = {"c": w.c, "kind": v.kind, "interval": [v.lo, v.hi],
            "roles": [v.lo_role, v.hi_role]}

    if t_lo == "asymptotic" and t_hi == "asymptotic":
        return _front(v, R, zgrid, meta, zmax)

    if t_lo in ("cusp", "peak"):
        crest, far, ctype, far_order = v.lo, v.hi, t_lo, v.hi_order
    elif t_hi in ("cusp", "peak"):
        crest, far, ctype, far_order = v.hi, v.lo, t_hi, v.lo_order
    elif t_hi == "attained":
        crest, far, ctype, far_order = v.hi, v.lo, "attained", v.lo_order
    else:
        crest, far, ctype, far_order = v.lo, v.hi, "attained", v.hi_order

    pieces, zhalf = _half_wave(v, R, crest, far, far_order, ctype, zmax)
    fn, dfn = _assemble(pieces)
    if math.isfinite(zhalf):
        period_ode = 2 * zhalf
        hp = half_period(R, v.lo, v.hi, lo_order=max(v.lo_order, 0), hi_order=max(v.hi_order, 0))
        meta.update(period=2 * hp, period_ode=period_ode)

        def reduce(z):
            zz = np.mod(np.asarray(z, dtype=float) + zhalf, period_ode) - zhalf
            return np.abs(zz), np.sign(zz)
    else:
        def reduce(z):
            z = np.asarray(z, dtype=float)
            return np.abs(z), np.sign(z)

    def func(z):
        za, _ = reduce(z)
        return fn(za)

    def dfunc(z):
        za, s = reduce(z)
        d1, d2 = dfn(za)
        with np.errstate(invalid="ignore"):  # 0 * inf at a cusp crest
            return s * d1, d2

    crests = [0.0]
    if "period_ode" in meta:
        T = meta["period_ode"]
        k0, k1 = math.floor(zgrid.min() / T), math.ceil(zgrid.max() / T)
        crests = [k * T for k in range(k0, k1 + 1) if zgrid.min() <= k * T <= zgrid.max()]
    meta["crests"] = crests
    meta["crest_value"] = crest
    return Profile(zgrid, func(zgrid), meta, func=func, dfunc=dfunc)


def _front(v, R, zgrid, meta, zmax):
    mid = 0.5 * (v.lo + v.hi)
    up = _first_order_tail(R, 0.0, mid, v.hi, 1.0, v.hi_order, zmax)
    down = _first_order_tail(R, 0.0, mid, v.lo, -1.0, v.lo_order, zmax)

    def func(z):
        z = np.asarray(z, dtype=float)
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = up.fn(z[pos])
        out[~pos] = down.fn(-z[~pos])
        return out

    def dfunc(z):
        z = np.asarray(z, dtype=float)
        d1 = np.empty_like(z)
        d2 = np.empty_like(z)
        pos = z >= 0
        a, b = up.dfn(z[pos])
        d1[pos], d2[pos] = a, b
        a, b = down.dfn(-z[~pos])
        d1[~pos], d2[~pos] = -a, b
        return d1, d2

    meta["crests"] = []
    return Profile(zgrid, func(zgrid), meta, func=func, dfunc=dfunc)


def profile_for(p: EquationParams, w: WaveParams, zgrid, index: int = 0) -> Profile:
    """Classify and integrate the ``index``-th bounded wave."""
    verdicts = classify(p, w)
    if not verdicts:
        raise ValidationError("no bounded travelling wave for these parameters")
    return integrate_profile(verdicts[index], p, w, zgrid)


# --- residual of the once-integrated profile equation -----------------------------

def profile_lhs(phi, d1, d2, p: EquationParams, c: float):
    """Left side of the once-integrated travelling-wave equation (equals A)."""
    e2 = p.eps2
    return (-c * phi + 1.5 * phi**2 - e2 * phi * d2 - 0.5 * e2 * d1**2 + c * e2 * d2
            - p.alpha * phi - p.beta / 3 * phi**3 - p.gamma / 4 * phi**4 - p.Gamma * d2)


def _fd_derivatives(z, phi):
    """Sixth-order central differences on a uniform grid (interior points)."""
    h = z[1] - z[0]
    if not np.allclose(np.diff(z), h, rtol=1e-9, atol=0):
        raise ValidationError("quadrature residual needs a uniform z grid")
    f = phi
    n = f.size
    s = [f[3 + j: n - 3 + j] for j in range(-3, 4)]
    d1 = (-s[0] + 9 * s[1] - 45 * s[2] + 45 * s[4] - 9 * s[5] + s[6]) / (60 * h)
    d2 = (2 * s[0] - 27 * s[1] + 270 * s[2] - 490 * s[3] + 270 * s[4] - 27 * s[5]
          + 2 * s[6]) / (180 * h * h)
    return d1, d2


def quadrature_residual(prof: Profile, p: EquationParams, w: WaveParams,
                        exclude_cells: int = 3, derivatives: str = "fd") -> float:
    """Max |LHS - A| over interior samples.

    ``derivatives="fd"`` differentiates the samples with sixth-order central
    differences; ``"exact"`` uses the profile's own derivative callable,
    which is the meaningful check next to a cusp where difference
    quotients cannot resolve phi''.  Samples within ``exclude_cells`` grid
    cells of a crest marker are skipped.
    """
    z, phi = np.asarray(prof.z, dtype=float), np.asarray(prof.phi, dtype=float)
    if derivatives == "fd":
        d1, d2 = _fd_derivatives(z, phi)
        zi, fi = z[3:-3], phi[3:-3]
    elif derivatives == "exact":
        if prof.dfunc is None:
            raise ValidationError("profile has no derivative callable")
        d1, d2 = prof.dfunc(z)
        zi, fi = z, phi
    else:
        raise ValidationError("derivatives must be 'fd' or 'exact'")
    keep = np.ones(zi.size, dtype=bool)
    h = z[1] - z[0]
    for zc in prof.meta.get("crests", []):
        keep &= np.abs(zi - zc) > exclude_cells * h * (1 + 1e-9)
    if not np.any(keep):
        return 0.0
    res = profile_lhs(fi[keep], d1[keep], d2[keep], p, w.c) - w.A
    return float(np.max(np.abs(res)))


# --- closed forms -------------------------------------------------------------------

def _require(cond: bool, violation: str):
    if not cond:
        raise ConstraintError(f"constraint violated: {violation}")


def _peakon_constraints(p: EquationParams, c: float):
    _require(p.epsilon != 0, "epsilon = 0")
    _require(p.beta == 0, "beta != 0")
    _require(p.gamma == 0, "gamma != 0")
    _require(math.isclose(p.Gamma, -p.alpha * p.eps2, rel_tol=1e-14, abs_tol=1e-14),
             "Gamma != -alpha*epsilon^2")
    _require(p.alpha + c != 0, "alpha + c = 0")


def peakon(p: EquationParams, c: float) -> ClosedForm:
    """phi(z) = (alpha + c) exp(-|z|/eps)."""
    _peakon_constraints(p, c)
    amp, eps = p.alpha + c, p.epsilon

    def f(z):
        return amp * np.exp(-np.abs(z) / eps)

    def df(z):
        return -np.sign(z) * f(z) / eps

    def d2f(z):
        return f(z) / eps**2

    return ClosedForm(f, df, d2f, {"c": c, "kind": "peakon", "amplitude": amp,
                                    "crests": [0.0], "bounded": True})


def explicit_family(p: EquationParams, lam: float, branch: str) -> ClosedForm:
    """Hyperbolic profiles with beta = gamma = 0.

    cosh:        phi = lam/2 cosh(z/eps) + s
    sinh_plus:   phi = +lam/2 sinh(z/eps) + s
    sinh_minus:  phi = -lam/2 sinh(z/eps) + s
    with s = (Gamma + alpha eps^2) / (2 eps^2).  These are unbounded and
    solve the profile equation for every speed c with A, B from
    :meth:`wave_constants`.
    """
    if branch not in ("cosh", "sinh_plus", "sinh_minus"):
        raise ValidationError(f"unknown branch {branch!r}")
    _require(p.epsilon != 0, "epsilon = 0")
    _require(p.beta == 0 and p.gamma == 0, "beta or gamma != 0")
    _require(lam != 0, "lambda = 0")
    eps, e2 = p.epsilon, p.eps2
    s0 = (p.Gamma + p.alpha * e2) / (2 * e2)
    a = lam / 2
    if branch == "cosh":
        f = lambda z: a * np.cosh(z / eps) + s0
        df = lambda z: a * np.sinh(z / eps) / eps
        d2f = lambda z: a * np.cosh(z / eps) / e2
        sgn = -1.0
    else:
        sg = 1.0 if branch == "sinh_plus" else -1.0
        f = lambda z: sg * a * np.sinh(z / eps) + s0
        df = lambda z: sg * a * np.cosh(z / eps) / eps
        d2f = lambda z: sg * a * np.sinh(z / eps) / e2
        sgn = 1.0
    b = -(p.Gamma + p.alpha * e2) / eps**4
    d = ((p.Gamma + p.alpha * e2) / (2 * eps**3)) ** 2 + sgn * (lam / (2 * eps)) ** 2
    meta = {"kind": branch, "lambda": lam, "offset": s0, "b": b, "d": d,
            "bounded": False, "crests": []}
    cf = ClosedForm(f, df, d2f, meta)

    def wave_constants(c: float) -> WaveParams:
        phi0, d10, d20 = f(0.0), df(0.0), d2f(0.0)
        A = profile_lhs(phi0, d10, d20, p, c)
        K = e2 * (c - phi0) - p.Gamma
        B = K * d10**2 - (2 * A * phi0 + (c + p.alpha) * phi0**2 - phi0**3)
        return WaveParams(c, float(A), float(B))

    cf.wave_constants = wave_constants
    return cf


def sqrt_m_quadrature(p: EquationParams, c: float, k1: float, k2: float, wgrid,
                      branch: str = "regular"):
    """Profiles from the sqrt(m) conservation law.

    (eps phi')^2 = phi^2 + k1/(phi - alpha - c); with w = 1/(phi - alpha - c)
    the quadrature reads  int dw / (w sqrt(k1 w^3 + ((alpha + c) w + 1)^2)) = z/eps + k2.
    The regular branch returns phi(z) = alpha + c + 1/w at the z values
    implied by ``wgrid``; the weak branch with k1 = 0 is the peakon.
    """
    _require(p.beta == 0 and p.gamma == 0, "beta or gamma != 0")
    _require(p.epsilon != 0, "epsilon = 0")
    _require(math.isclose(p.Gamma, -p.alpha * p.eps2, rel_tol=1e-14, abs_tol=1e-14),
             "Gamma != -alpha*epsilon^2")
    if branch == "weak":
        _require(k1 == 0, "weak branch with k1 != 0")
        return peakon(p, c)
    if branch != "regular":
        raise ValidationError(f"unknown branch {branch!r}")
    wgrid = np.asarray(wgrid, dtype=float)
    ac = p.alpha + c

    def radicand(w):
        return k1 * w**3 + (ac * w + 1) ** 2

    lo, hi = float(wgrid.min()), float(wgrid.max())
    probe = np.linspace(lo, hi, 2049)
    if np.any(probe == 0) or lo <= 0 <= hi or np.any(radicand(probe) <= 0):
        raise ValueError("singular integrand on the w range")

    def g(w):
        return 1.0 / (w * math.sqrt(radicand(w)))

    steps = [integrate.quad(g, a, b, epsabs=1e-14, epsrel=1e-13)[0]
             for a, b in zip(wgrid[:-1], wgrid[1:])]
    I = np.concatenate([[0.0], np.cumsum(steps)])
    z = p.epsilon * (I - k2)
    phi = ac + 1.0 / wgrid
    order = np.argsort(z)
    return Profile(z[order], phi[order], {"c": c, "kind": "sqrt_m", "k1": k1, "k2": k2,
                                          "crests": []})


# --- resampling for the solver ---------------------------------------------------------

def resample(prof, g: Grid, shift: float | None = None) -> np.ndarray:
    """Profile values on the solver grid, crest placed at x = shift (default L/2).

    Uses the exact representation when there is one, otherwise cubic
    interpolation of the samples (periodic when the profile has a period).
    """
    shift = g.length / 2 if shift is None else shift
    z = g.x - shift
    if isinstance(prof, ClosedForm):
        return prof(z)
    if prof.func is not None:
        return prof.func(z)
    return prof(z)
