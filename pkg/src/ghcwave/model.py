"""Parameter, polynomial and grid types shared across the package.

The equation is

    u_t - eps^2 u_txx = eps^2 u u_xxx + 2 eps^2 u_x u_xx
                        + (alpha - 3u + beta u^2 + gamma u^3) u_x + Gamma u_xxx

with m = u - eps^2 u_xx.  ``EquationParams`` always stores these physical
coefficients; the /6 and /10 scalings used by the travelling-wave polynomial
are applied in exactly one place, :func:`poly_from_params`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ValidationError(ValueError):
    """Invalid user-supplied parameters."""


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class EquationParams:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    Gamma: float = 0.0
    epsilon: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "Gamma", "epsilon"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.epsilon < 0:
            raise ValidationError("epsilon must be >= 0")
        if self.epsilon == 0 and self.Gamma == 0:
            raise ValidationError("epsilon and Gamma cannot both vanish")

    @property
    def eps2(self) -> float:
        return self.epsilon * self.epsilon

    @property
    def sqrt_m_admissible(self) -> bool:
        """True when the sqrt(m) density is conserved (beta=gamma=0, Gamma=-alpha eps^2)."""
        return (self.beta == 0 and self.gamma == 0
                and math.isclose(self.Gamma, -self.alpha * self.eps2,
                                 rel_tol=1e-12, abs_tol=1e-14))

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
                "Gamma": self.Gamma, "epsilon": self.epsilon}


@dataclass(frozen=True)
class WaveParams:
    """Wave speed and the two integration constants of the profile ODE."""
    c: float
    A: float = 0.0
    B: float = 0.0

    def __post_init__(self):
        for name in ("c", "A", "B"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.c == 0:
            raise ValidationError("wave speed c must be nonzero")

    def as_dict(self) -> dict:
        return {"c": self.c, "A": self.A, "B": self.B}


@dataclass(frozen=True)
class QuinticPoly:
    """Coefficients c0..c5 of c5 x^5 + ... + c1 x + c0 (ascending order)."""
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(float(v) for v in self.coeffs)
        if len(cs) != 6:
            raise ValidationError("QuinticPoly needs exactly 6 coefficients")
        object.__setattr__(self, "coeffs", cs)

    def __call__(self, x):
        # numpy's polyval wants descending order
        return np.polyval(self.coeffs[::-1], x)

    def deriv(self, k: int = 1) -> np.ndarray:
        """Ascending coefficients of the k-th derivative."""
        return np.polynomial.polynomial.polyder(np.asarray(self.coeffs), k)

    @property
    def degree(self) -> int:
        for d in range(5, -1, -1):
            if self.coeffs[d] != 0.0:
                return d
        return -1


def poly_from_params(p: EquationParams, w: WaveParams) -> QuinticPoly:
    """P(phi) = B + 2A phi + (c+alpha) phi^2 - phi^3 + beta/6 phi^4 + gamma/10 phi^5."""
    return QuinticPoly((w.B, 2.0 * w.A, w.c + p.alpha, -1.0, p.beta / 6.0, p.gamma / 10.0))


def pole_location(p: EquationParams, w: WaveParams) -> float | None:
    """Pole c - Gamma/eps^2 of the quadrature ratio, or None when eps = 0."""
    if p.epsilon == 0:
        return None
    return w.c - p.Gamma / p.eps2


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid x_j = j L / n on [0, L)."""
    length: float
    n: int
    x: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        length = _finite("L", self.length)
        n = int(self.n)
        if length <= 0:
            raise ValidationError("grid length must be positive")
        if n < 8 or n & (n - 1):
            raise ValidationError("grid size n must be a power of two >= 8")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "n", n)
        x = np.arange(n) * (length / n)
        x.flags.writeable = False
        object.__setattr__(self, "x", x)

    @property
    def spacing(self) -> float:
        return self.length / self.n

    def check_field(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n,):
            raise ValidationError(f"field has shape {u.shape}, grid needs ({self.n},)")
        return u
