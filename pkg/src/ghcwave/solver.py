"""Pseudo-spectral solver on a periodic grid.

The equation is advanced in the nonlocal flux form

    u_t = L(u) + (1 - eps^2 d_xx)^{-1} d_x [eps^2 (u u_xx + u_x^2/2) - 3/2 u^2 + beta/3 u^3 + gamma/4 u^4]

where the linear part has the Fourier symbol i k (alpha - Gamma k^2) / (1 + eps^2 k^2).
Time stepping is RK4 with an integrating factor for the linear part, which
keeps the stiff Gamma u_xxx term exact when eps = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .model import EquationParams, Grid, ValidationError

DEALIAS_MODES = ("zero_pad_2x", "two_thirds")
BLOWUP_THRESHOLD = 1e8


class BlowUpError(RuntimeError):
    """Raised when the solution leaves the finite range; carries the partial run."""

    def __init__(self, t_last: float, trajectory: "Trajectory | None" = None, msg: str = ""):
        super().__init__(msg or f"solution blew up after t = {t_last:.6g}")
        self.t_last = t_last
        self.trajectory = trajectory


@dataclass(frozen=True)
class SolverConfig:
    dt: float = 1e-3
    t_end: float = 1.0
    dealias: str = "zero_pad_2x"
    monitor_every: int = 10

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValidationError("dt must be positive")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ValidationError("t_end must be positive")
        if self.dealias not in DEALIAS_MODES:
            raise ValidationError(f"dealias must be one of {DEALIAS_MODES}")
        if int(self.monitor_every) < 1:
            raise ValidationError("monitor_every must be >= 1")
        object.__setattr__(self, "monitor_every", int(self.monitor_every))


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    monitors: list = field(default_factory=list)

    def append(self, t: float, u: np.ndarray, mon: dict):
        self.times.append(float(t))
        self.states.append(u.copy())
        self.monitors.append(mon)

    def monitor_series(self, name: str) -> np.ndarray:
        return np.array([m.get(name, np.nan) for m in self.monitors])


@lru_cache(maxsize=64)
def wavenumbers(length: float, n: int) -> np.ndarray:
    """rfft wavenumbers 2 pi j / L; the Nyquist entry is zeroed."""
    k = 2 * np.pi * np.fft.rfftfreq(n, d=length / n)
    k[-1] = 0.0
    k.flags.writeable = False
    return k


def _k(g: Grid) -> np.ndarray:
    return wavenumbers(g.length, g.n)


def helmholtz_inverse(f, epsilon: float, g: Grid) -> np.ndarray:
    """Apply (1 - eps^2 d_xx)^{-1} via the symbol 1/(1 + eps^2 k^2)."""
    f = g.check_field(f)
    k = _k(g)
    return np.fft.irfft(np.fft.rfft(f) / (1 + epsilon**2 * k**2), g.n)


def spectral_derivative(f, g: Grid, order: int = 1) -> np.ndarray:
    k = _k(g)
    return np.fft.irfft(np.fft.rfft(f) * (1j * k) ** order, g.n)


def linear_symbol(p: EquationParams, g: Grid) -> np.ndarray:
    k = _k(g)
    return 1j * k * (p.alpha - p.Gamma * k**2) / (1 + p.eps2 * k**2)


class SpectralSolver:
    """Operators and buffers for one (params, grid, dealias) combination."""

    def __init__(self, p: EquationParams, g: Grid, dealias: str = "zero_pad_2x"):
        if dealias not in DEALIAS_MODES:
            raise ValidationError(f"dealias must be one of {DEALIAS_MODES}")
        self.p, self.g, self.dealias = p, g, dealias
        k = _k(g)
        self.k = k
        self.ik = 1j * k
        self.lin = linear_symbol(p, g)
        self.nl_factor = 1j * k / (1 + p.eps2 * k**2)
        self.nm = k.size
        if dealias == "zero_pad_2x":
            self.m = 2 * g.n
            self.mask = None
        else:
            self.m = g.n
            j = np.arange(self.nm)
            self.mask = j < g.n // 3
        self._b3 = p.beta / 3.0
        self._g4 = p.gamma / 4.0
        self._cache_dt = None

    # physical <-> spectral with optional padding
    def _to_phys(self, vhat: np.ndarray) -> np.ndarray:
        if self.m == self.g.n:
            return np.fft.irfft(vhat, self.m)
        padded = np.zeros(self.m // 2 + 1, dtype=complex)
        padded[: self.nm] = vhat
        return np.fft.irfft(padded, self.m) * (self.m / self.g.n)

    def _to_spec(self, f: np.ndarray) -> np.ndarray:
        fh = np.fft.rfft(f)
        if self.m == self.g.n:
            return fh
        out = fh[: self.nm] * (self.g.n / self.m)
        out[-1] = 0.0
        return out

    def nonlinear(self, uhat: np.ndarray) -> np.ndarray:
        """Spectral coefficients of the nonlinear part of the right side."""
        if self.mask is not None:
            uhat = uhat * self.mask
        u = self._to_phys(uhat)
        if self.p.eps2 == 0:
            # no derivative terms in the flux
            ux = uxx = u
        else:
            ux = self._to_phys(self.ik * uhat)
            uxx = self._to_phys(-(self.k**2) * uhat)
        flux = kernels.nonlinear_flux(u, ux, uxx, self.p.eps2, self._b3, self._g4)
        out = self.nl_factor * self._to_spec(flux)
        if self.mask is not None:
            out *= self.mask
        return out

    def rhs_hat(self, uhat: np.ndarray) -> np.ndarray:
        return self.lin * uhat + self.nonlinear(uhat)

    def rhs(self, u) -> np.ndarray:
        u = self.g.check_field(u)
        return np.fft.irfft(self.rhs_hat(np.fft.rfft(u)), self.g.n)

    def _factors(self, dt: float):
        if self._cache_dt != dt:
            e1 = np.exp(self.lin * (dt / 2))
            self._e = (e1, e1 * e1)
            self._cache_dt = dt
        return self._e

    def step_hat(self, uhat: np.ndarray, dt: float) -> np.ndarray:
        e1, e2 = self._factors(dt)
        nl = self.nonlinear
        k1 = nl(uhat)
        a = e1 * (uhat + 0.5 * dt * k1)
        k2 = nl(a)
        b = e1 * uhat + 0.5 * dt * k2
        k3 = nl(b)
        c = e2 * uhat + dt * e1 * k3
        k4 = nl(c)
        return e2 * uhat + (dt / 6.0) * (e2 * k1 + 2.0 * e1 * (k2 + k3) + k4)

    def step(self, u, dt: float) -> np.ndarray:
        u = self.g.check_field(u)
        out = np.fft.irfft(self.step_hat(np.fft.rfft(u), dt), self.g.n)
        if not _finite_and_bounded(out):
            raise BlowUpError(0.0)
        return out

    def simulate(self, u0, cfg: SolverConfig) -> Trajectory:
        u0 = self.g.check_field(u0)
        if not np.all(np.isfinite(u0)):
            raise ValidationError("initial data must be finite")
        nsteps = max(1, int(round(cfg.t_end / cfg.dt)))
        dt = cfg.t_end / nsteps
        traj = Trajectory()
        traj.append(0.0, u0, monitors(u0, self.p, self.g))
        uhat = np.fft.rfft(u0)
        uhat[-1] = 0.0
        t_last = 0.0
        for i in range(1, nsteps + 1):
            uhat = self.step_hat(uhat, dt)
            if i % cfg.monitor_every == 0 or i == nsteps:
                u = np.fft.irfft(uhat, self.g.n)
                if not _finite_and_bounded(u):
                    raise BlowUpError(t_last, traj)
                t_last = i * dt
                traj.append(t_last, u, monitors(u, self.p, self.g))
            elif not np.isfinite(uhat[0]):
                raise BlowUpError(t_last, traj)
        return traj


def _finite_and_bounded(u: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(u)) and np.max(np.abs(u)) <= BLOWUP_THRESHOLD)


def rhs(u, p: EquationParams, g: Grid, dealias: str = "zero_pad_2x") -> np.ndarray:
    """Time derivative u_t of a field."""
    return SpectralSolver(p, g, dealias).rhs(u)


def step(u, dt: float, p: EquationParams, g: Grid, cfg: SolverConfig | None = None) -> np.ndarray:
    """One integrating-factor RK4 step."""
    dealias = cfg.dealias if cfg is not None else "zero_pad_2x"
    return SpectralSolver(p, g, dealias).step(u, dt)


def simulate(u0, p: EquationParams, g: Grid, cfg: SolverConfig) -> Trajectory:
    """Integrate to cfg.t_end; raises BlowUpError with the partial trajectory."""
    return SpectralSolver(p, g, cfg.dealias).simulate(u0, cfg)


def stable_dt(u, p: EquationParams, g: Grid, safety: float = 0.5) -> float:
    """Advective step estimate for the nonlinear part.

    The linear symbol is integrated exactly, so only the nonlinear transport
    speed limits the step; RK4 is stable for |lambda dt| <= 2 sqrt(2) on the
    imaginary axis.
    """
    u = np.asarray(u, dtype=float)
    kmax = np.pi * g.n / g.length
    umax = float(np.max(np.abs(u))) if u.size else 0.0
    speed = 3 * umax + abs(p.beta) * umax**2 + abs(p.gamma) * umax**3 + 1e-300
    if p.epsilon > 0:
        speed += 2 * umax
    return safety * 2 * math.sqrt(2) / (speed * kmax)


def monitors(u, p: EquationParams, g: Grid) -> dict:
    """Conserved and diagnostic quantities of a field."""
    u = g.check_field(u)
    n, L = g.n, g.length
    k = _k(g)
    uh = np.fft.rfft(u)
    ux = np.fft.irfft(1j * k * uh, n)
    m = u - p.eps2 * np.fft.irfft(-(k**2) * uh, n)
    # Parseval for the quadratic energy: weights 1 for j=0 and Nyquist, 2 otherwise
    w = np.full(uh.size, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    energy = 0.5 * L / n**2 * float(np.sum(w * np.abs(uh) ** 2 * (1 + p.eps2 * k**2)))
    out = {
        "mass": float(uh[0].real) * L / n,
        "energy": energy,
        "m_mass": float(np.sum(m)) * L / n,
        "m_min": float(np.min(m)),
        "slope_bound": float(np.max(-p.eps2 * ux)),
    }
    if out["m_min"] > 0 and p.sqrt_m_admissible:
        out["sqrt_m_mass"] = float(np.sum(np.sqrt(m))) * L / n
    return out
