"""One-forms of pseudo-spherical type and their structure equations.

For the normalized equation (eps = 1, Gamma removed by a shift)

    u_t - u_txx = u u_xxx + 2 u_x u_xx + (alpha_n - 3u + beta_n u^2 + gamma_n u^3) u_x

the forms omega_i = f_i1 dx + f_i2 dt must satisfy

    d omega_1 = omega_3 ^ omega_2,  d omega_2 = omega_1 ^ omega_3,  d omega_3 = omega_1 ^ omega_2

on solutions.  With d(f1 dx + f2 dt) = (D_x f2 - D_t f1) dx ^ dt every
equation becomes a scalar residual checked at jets lying on the equation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from . import jets as J
from .model import EquationParams, ValidationError

U, UX, UXX, UXXX = J.U, J.UX, J.UXX, J.UXXX
UT, UTX, UTXX = J.UT, J.UTX, J.UTXX
ALPHA, BETA, GAMMA, ETA = J.ALPHA, J.BETA, J.GAMMA, J.ETA


class Unsupported(ValueError):
    """The requested normalization is not defined."""


class OffEquationJet(ValueError):
    """A jet does not satisfy the normalized equation."""


@dataclass(frozen=True)
class NormalizedParams:
    alpha_n: float
    beta_n: float = 0.0
    gamma_n: float = 0.0

    def as_equation(self) -> EquationParams:
        return EquationParams(self.alpha_n, self.beta_n, self.gamma_n, 0.0, 1.0)


@dataclass(frozen=True)
class FormSet:
    """Coefficients (f11, f12, f21, f22, f31, f32) as jet expressions.

    The expressions may contain the symbols eta and alpha; their values are
    carried in ``eta`` and ``alpha_n``.
    """
    f: tuple
    eta: float
    sign: int
    b: float
    alpha_n: float = 0.0

    @property
    def f11(self):
        return self.f[0]

    def replace(self, index: int, expr) -> "FormSet":
        f = list(self.f)
        f[index] = sp.sympify(expr)
        return FormSet(tuple(f), self.eta, self.sign, self.b, self.alpha_n)

    def evaluate(self, jet) -> np.ndarray:
        p = NormalizedParams(self.alpha_n).as_equation()
        return np.array([J.evaluate(e, jet, p, self.eta) for e in self.f])

    def nondegeneracy(self, jet):
        """f11 f22 - f12 f21 at the given jet(s)."""
        f11, f12, f21, f22 = (self.f[i] for i in (0, 1, 2, 3))
        p = NormalizedParams(self.alpha_n).as_equation()
        return J.evaluate(f11 * f22 - f12 * f21, jet, p, self.eta)


def normalize_for_pss(p: EquationParams) -> NormalizedParams:
    """Rescale to eps = 1 and shift u by -Gamma/eps^2.

    The shift cancels the Gamma u_xxx term and moves 3 Gamma/eps^2 into the
    u_x coefficient.  With beta or gamma nonzero the shift changes the form of
    the u_x coefficient, so that case is refused.
    """
    if p.epsilon == 0:
        raise ValidationError("epsilon must be nonzero")
    if p.beta != 0 or p.gamma != 0:
        raise Unsupported("normalization is only defined for beta = gamma = 0")
    return NormalizedParams(p.alpha + 3 * p.Gamma / p.eps2)


def chpss_b(alpha_n: float, eta: float) -> float:
    return -1 + (eta**2 - alpha_n) / 2


@lru_cache(maxsize=4)
def _chpss_exprs(sign: int):
    s = sp.Integer(sign)
    b = -1 + (ETA**2 - ALPHA) / 2
    f11 = U - UXX + b
    f12 = -(U * (U - UXX + b + 1) + b - s * ETA * UX)
    f21 = ETA
    f22 = -(ETA * (1 + U) - s * UX)
    f31 = s * (U - UXX + b + 1)
    f32 = ETA * UX + s * U * UXX - s * (U + 1) * (U + b + 1)
    return tuple(sp.sympify(e) for e in (f11, f12, f21, f22, f31, f32))


def chpss_forms(alpha_n: float, eta: float, sign: int) -> FormSet:
    """The one-parameter family of forms for beta_n = gamma_n = 0.

    omega_1 = (u - u_xx + b) dx - [u (u - u_xx + b + 1) + b -+ eta u_x] dt
    omega_2 = eta dx - [eta (1 + u) -+ u_x] dt
    omega_3 = +-(u - u_xx + b + 1) dx + [eta u_x +- u u_xx -+ (u + 1)(u + b + 1)] dt
    with b = -1 + (eta^2 - alpha_n)/2.
    """
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    return FormSet(_chpss_exprs(sign), float(eta), sign, chpss_b(alpha_n, eta), float(alpha_n))


def exp_class_b(a: float, mu: float, eta: float, theta: float, m2: float) -> float:
    return a / (2 * theta) * ((mu * theta - a * eta) ** 2 / (a**2 * (1 + mu**2))
                              - a / theta + m2 * theta - 1)


def exp_class_forms(a: float, b: float, mu: float, eta: float, theta: float, m1: float,
                    m2: float, lam: float = 1.0, sign: int = 1, tol: float = 1e-12) -> FormSet:
    """General coefficient table for equations of the exponential type.

    Requires a, theta != 0 and b consistent with the constraint tying it to
    (a, mu, eta, theta, m2).
    """
    if a == 0 or theta == 0:
        raise ValidationError("a and theta must be nonzero")
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    b_req = exp_class_b(a, mu, eta, theta, m2)
    if abs(b - b_req) > tol * max(1.0, abs(b_req)):
        raise ValidationError(f"constraint violated: b = {b} but the relation requires {b_req}")
    s = sp.Integer(sign)
    a_, b_, mu_, eta_, th, m1_, lam_ = (sp.Float(v) if not float(v).is_integer() else sp.Integer(int(v))
                                        for v in (a, b, mu, eta, theta, m1, lam))
    root = sp.sqrt(1 + mu_**2)
    E = m1_ * th * sp.exp(th * U)
    f11 = a_ * (U - UXX) + b_
    f21 = mu_ * f11 + eta_
    f31 = s * root * f11 + s * (th + s * a_ * eta_ * mu_) / (1 + mu_**2)
    f12 = (-lam_ * U * f11 + a_ * E * UX**2
           + (E - lam_) * ((a_ * U + b_) / th + s * (mu_ - a_ * eta_ / th) * UX / root))
    f22 = (-lam_ * U * f21 + mu_ * a_ * E * UX**2
           + (E - lam_) / th * (mu_ * (a_ * U + b_) + eta_ - s * (th - mu_ * a_ * eta_) * UX / root))
    f32 = (-lam_ * U * f31 + s * root * a_ * E * UX**2
           - (E - lam_) / th * (a_ * eta_ * UX
                                - s / root * ((1 + mu_**2) * (a_ * U + b_) + mu_ * eta_ + th / a_)))
    exprs = tuple(sp.sympify(e) for e in (f11, f12, f21, f22, f31, f32))
    return FormSet(exprs, float(eta), sign, float(b), -float(m2))


# --- jets on the equation -----------------------------------------------------

def _rhs_expr():
    return U * UXXX + 2 * UX * UXX + (ALPHA - 3 * U + BETA * U**2 + GAMMA * U**3) * UX


def equation_residual(npar: NormalizedParams, jet) -> np.ndarray:
    """u_t - u_txx - rhs at the jet(s)."""
    return np.asarray(J.evaluate(UT - UTXX - _rhs_expr(), jet, npar.as_equation()))


def on_equation_jets(rng: np.random.Generator, n: int, npar: NormalizedParams,
                     low: float = -2.0, high: float = 2.0) -> dict:
    """Random jets with u_txx solved from the equation.

    The x-labels, u_t and u_tx are sampled freely; the equation fixes
    u_txx = u_t - rhs.  The structure equations involve no other t-label.
    """
    jet = J.random_jets(rng, n, low, high)
    rhs = np.asarray(J.evaluate(_rhs_expr(), jet, npar.as_equation()))
    jet["u_txx"] = jet["u_t"] - rhs
    return jet


@lru_cache(maxsize=64)
def _structure_exprs(f: tuple):
    f11, f12, f21, f22, f31, f32 = f
    r1 = J.total_dx(f12) - J.total_dt(f11) - (f31 * f22 - f32 * f21)
    r2 = J.total_dx(f22) - J.total_dt(f21) - (f11 * f32 - f12 * f31)
    r3 = J.total_dx(f32) - J.total_dt(f31) - (f11 * f22 - f12 * f21)
    return r1, r2, r3


def structure_residuals(fs: FormSet, npar: NormalizedParams, jet, tol: float = 1e-10) -> np.ndarray:
    """(R1, R2, R3) per jet, shape (n, 3); off-equation jets are rejected."""
    eq = np.atleast_1d(equation_residual(npar, jet))
    scale = 1 + np.abs(np.atleast_1d(np.asarray(jet["u_t"])))
    if np.any(np.abs(eq) > tol * 1e2 * scale):
        raise OffEquationJet(f"jet off the equation, residual {np.max(np.abs(eq)):.3g}")
    p = EquationParams(fs.alpha_n, npar.beta_n, npar.gamma_n, 0.0, 1.0)
    out = [np.atleast_1d(J.evaluate(r, jet, p, fs.eta)) for r in _structure_exprs(fs.f)]
    n = eq.size
    return np.column_stack([np.broadcast_to(r, (n,)) for r in out])


# --- matching against the exponential class ---------------------------------------

def exp_class_match(beta_n: float, gamma_n: float, alpha_n: float) -> dict:
    """Match G = 2 z1 z2 + (alpha - 3 z0 + beta z0^2 + gamma z0^3) z1 against

        G5 = 2 z1 z2 - 3 z0 z1 - m2 z1 + m1 theta e^{theta z0} (theta z1^3 + z1 z2 + 2 z0 z1 + m2 z1)

    by comparing coefficients.  The z1^3 term forces m1 theta = 0, hence
    m1 = 0 since theta != 0; the remaining polynomial identity decides.
    """
    z0, z1, z2, m2 = sp.symbols("z0 z1 z2 m2")
    g = 2 * z1 * z2 + (sp.nsimplify(alpha_n) - 3 * z0 + sp.nsimplify(beta_n) * z0**2
                       + sp.nsimplify(gamma_n) * z0**3) * z1
    g5 = 2 * z1 * z2 - 3 * z0 * z1 - m2 * z1
    diff = sp.Poly(sp.expand(g5 - g), z0, z1, z2)
    sol = {}
    for monom, coeff in sorted(diff.terms(), key=lambda t: t[0]):
        if coeff.free_symbols:
            (m,) = sp.solve(coeff, m2)
            sol[m2] = m
            continue
        if coeff != 0:
            name = "*".join(f"{v}^{k}" if k > 1 else str(v)
                            for v, k in zip(("z0", "z1", "z2"), monom) if k)
            return {"match": False,
                    "violated": f"coefficient of {name} is {float(-coeff):g}, must vanish",
                    "reason": "z1^3 forces m1*theta = 0, leaving no term to balance it"}
    return {"match": True, "m1": 0.0, "m2": float(sol.get(m2, 0.0)), "theta": "free"}


def forms_proportional(f1: FormSet, f2: FormSet, jet, tol: float = 1e-9) -> bool:
    """True when all six coefficients of f2 are one common multiple of f1's."""
    a, b = f1.evaluate(jet), f2.evaluate(jet)
    a, b = np.broadcast_arrays(a, b)
    ratio = None
    for x, y in zip(a.ravel(), b.ravel()):
        if abs(x) < tol and abs(y) < tol:
            continue
        if abs(x) < tol:
            return False
        r = y / x
        if ratio is None:
            ratio = r
        elif not math.isclose(r, ratio, rel_tol=1e-9, abs_tol=tol):
            return False
    return True
