"""Total-derivative calculus on jet coordinates.

Jet labels are independent symbols ``u, u_x, ..., u_xxxxx`` and the mixed
labels ``u_t, u_tx, ..., u_txxxx``.  Expressions are sympy expressions over
these labels and the parameter symbols ``alpha, beta, gamma, Gamma, eps,
eta``.  Identities are checked by evaluating at random jets.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy as sp

from .model import EquationParams

MAX_X_ORDER = 5
MAX_TX_ORDER = 4

X_LABELS = ["u"] + ["u_" + "x" * k for k in range(1, MAX_X_ORDER + 1)]
T_LABELS = ["u_t"] + ["u_t" + "x" * k for k in range(1, MAX_TX_ORDER + 1)]
LABELS = X_LABELS + T_LABELS

SYM = {name: sp.Symbol(name, real=True) for name in LABELS}
U, UX, UXX, UXXX, UXXXX, UXXXXX = (SYM[n] for n in X_LABELS)
UT, UTX, UTXX, UTXXX, UTXXXX = (SYM[n] for n in T_LABELS)

ALPHA, BETA, GAMMA, BIGGAMMA, EPS, ETA = sp.symbols("alpha beta gamma Gamma eps eta", real=True)
PARAM_SYMBOLS = (ALPHA, BETA, GAMMA, BIGGAMMA, EPS, ETA)

_X_SUCC = {SYM[a]: SYM[b] for a, b in zip(X_LABELS, X_LABELS[1:])}
_X_SUCC.update({SYM[a]: SYM[b] for a, b in zip(T_LABELS, T_LABELS[1:])})
_T_SUCC = {SYM[a]: SYM[b] for a, b in zip(X_LABELS, T_LABELS)}

M = U - EPS**2 * UXX


class JetOrderError(ValueError):
    """Differentiation would need a jet label beyond the supported set."""


class JetDomainError(ValueError):
    """Evaluation outside the real domain of an expression."""


def _total(e: sp.Expr, succ: dict, what: str) -> sp.Expr:
    e = sp.sympify(e)
    out = sp.Integer(0)
    for s in e.free_symbols:
        if s in PARAM_SYMBOLS:
            continue
        if s not in succ:
            raise JetOrderError(f"{what} of an expression containing {s} needs an unsupported label")
        out += sp.diff(e, s) * succ[s]
    return out


def total_dx(e) -> sp.Expr:
    """Formal total x-derivative by the chain rule over jet labels."""
    return _total(e, _X_SUCC, "D_x")


def total_dt(e) -> sp.Expr:
    """Formal total t-derivative; defined on expressions free of t-labels."""
    return _total(e, _T_SUCC, "D_t")


def param_values(p: EquationParams | None, eta: float = 0.0) -> dict:
    if p is None:
        return {}
    return {ALPHA: p.alpha, BETA: p.beta, GAMMA: p.gamma, BIGGAMMA: p.Gamma,
            EPS: p.epsilon, ETA: eta}


@lru_cache(maxsize=512)
def _compiled(e: sp.Expr):
    names = [SYM[n] for n in LABELS]
    return sp.lambdify(names + list(PARAM_SYMBOLS), e, modules="numpy")


def evaluate(e, jet, p: EquationParams | None = None, eta: float = 0.0):
    """Evaluate at a jet mapping label -> value (scalars or equal-length arrays).

    Labels the expression does not use may be omitted.
    """
    e = sp.sympify(e)
    needed = {str(s) for s in e.free_symbols if s not in PARAM_SYMBOLS}
    missing = needed - set(jet)
    if missing:
        raise KeyError(f"jet is missing labels {sorted(missing)}")
    pv = param_values(p, eta)
    unbound = [s for s in e.free_symbols if s in PARAM_SYMBOLS and s not in pv]
    if unbound:
        raise KeyError(f"unbound parameters {unbound}")
    args = [np.asarray(jet.get(n, 0.0), dtype=float) for n in LABELS]
    args += [pv.get(s, 0.0) for s in PARAM_SYMBOLS]
    with np.errstate(invalid="raise"):
        try:
            val = _compiled(e)(*args)
        except FloatingPointError as exc:
            raise JetDomainError(str(exc)) from None
    val = np.asarray(val, dtype=float)
    if args[0].ndim and val.ndim == 0:
        val = np.broadcast_to(val, args[0].shape).copy()
    return val if val.ndim else float(val)


def random_jets(rng: np.random.Generator, n: int, low: float = -2.0, high: float = 2.0) -> dict:
    """n random jets, all labels independent and uniform on [low, high]."""
    return {name: rng.uniform(low, high, n) for name in LABELS}


# --- the equation and its conservation laws -----------------------------------

def delta_symbolic() -> sp.Expr:
    """Residual m_t + u m_x + 2 u_x m - alpha u_x - beta u^2 u_x - gamma u^3 u_x - Gamma u_xxx."""
    m_t = UT - EPS**2 * UTXX
    m_x = UX - EPS**2 * UXXX
    return (m_t + U * m_x + 2 * UX * M - ALPHA * UX - BETA * U**2 * UX
            - GAMMA * U**3 * UX - BIGGAMMA * UXXX)


def pde_residual(p: EquationParams) -> sp.Expr:
    """The residual with the numeric parameters of ``p`` substituted."""
    return delta_symbolic().subs(param_values(p))


def _currents():
    e2 = EPS**2
    q1 = (sp.Integer(1), U,
          sp.Rational(3, 2) * U**2 - e2 * UTX - e2 * U * UXX - e2 / 2 * UX**2 - ALPHA * U
          - BETA / 3 * U**3 - GAMMA / 4 * U**4 - BIGGAMMA * UXX)
    qu = (U, (U**2 + e2 * UX**2) / 2,
          U**3 - e2 * U**2 * UXX - e2 * U * UTX + BIGGAMMA * UX**2 / 2 - BIGGAMMA * U * UXX
          - ALPHA * U**2 / 2 - BETA * U**4 / 4 - GAMMA * U**5 / 5)
    root_m = sp.sqrt(M)
    qsqrt = (1 / (2 * root_m), root_m, (U - ALPHA) * root_m)
    return {"Q1": q1, "Qu": qu, "Qsqrt": qsqrt}


CURRENTS = _currents()
"""name -> (characteristic Q, density C0, flux C1)."""


@lru_cache(maxsize=None)
def _divergence_pair(which: str):
    q, c0, c1 = CURRENTS[which]
    lhs = total_dt(c0) + total_dx(c1)
    rhs = q * delta_symbolic()
    terms = sp.Add.make_args(sp.expand(rhs))
    scale = 1 + sum(sp.Abs(t) for t in terms)
    return lhs, rhs, scale


def _check_sqrt_admissible(p: EquationParams):
    if not p.sqrt_m_admissible:
        raise ValueError("Qsqrt needs beta = gamma = 0 and Gamma = -alpha eps^2")


def current_divergence_check(which: str, p: EquationParams, jet, with_scale: bool = False):
    """Evaluate (D_t C0 + D_x C1, Q Delta) at ``jet``.

    With ``with_scale`` a third entry gives the sum of magnitudes of the
    monomials of Q Delta, a natural yardstick for round-off.
    """
    if which not in CURRENTS:
        raise KeyError(f"unknown characteristic {which!r}")
    if which == "Qsqrt":
        _check_sqrt_admissible(p)
        m = evaluate(M, jet, p)
        if np.any(np.asarray(m) <= 0):
            raise JetDomainError("sqrt(m) characteristic needs m > 0")
    lhs, rhs, scale = _divergence_pair(which)
    out = (evaluate(lhs, jet, p), evaluate(rhs, jet, p))
    if with_scale:
        out = out + (evaluate(scale, jet, p),)
    return out


def euler_operator(e) -> sp.Expr:
    """Variational derivative E_u over the supported labels.

    Terms from t-labels read (-D_t)(-D_x)^k d/du_{t x^k}; D_t is only defined
    on t-free expressions, so Q must not depend on t-labels.
    """
    e = sp.sympify(e)
    out = sp.Integer(0)
    for k, name in enumerate(X_LABELS):
        term = sp.diff(e, SYM[name])
        if term == 0:
            continue
        for _ in range(k):
            term = -total_dx(term)
        out += term
    for k, name in enumerate(T_LABELS):
        term = sp.diff(e, SYM[name])
        if term == 0:
            continue
        for _ in range(k):
            term = -total_dx(term)
        out += -total_dt(term)
    return out


@lru_cache(maxsize=64)
def _euler_of(q: sp.Expr):
    expr = euler_operator(q * delta_symbolic())
    scale = 1 + sum(sp.Abs(t) for t in sp.Add.make_args(expr))
    return expr, scale


def euler_residual(q, p: EquationParams, jet, order: int = MAX_X_ORDER,
                   with_scale: bool = False):
    """E_u(Q Delta) evaluated at ``jet``; vanishes for conservation-law characteristics.

    With ``with_scale`` also returns the summed magnitude of the additive
    terms of the unsimplified residual, for relative round-off checks.
    """
    q = sp.sympify(q)
    if order > MAX_X_ORDER:
        raise JetOrderError(f"order {order} exceeds supported {MAX_X_ORDER}")
    expr, scale = _euler_of(q)
    used = max((X_LABELS.index(str(s)) for s in expr.free_symbols if str(s) in X_LABELS),
               default=0)
    if used > order:
        raise JetOrderError(f"residual needs x-order {used} > requested {order}")
    val = evaluate(expr, jet, p)
    if with_scale:
        return val, evaluate(scale, jet, p)
    return val
