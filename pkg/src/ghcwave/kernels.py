"""Kernel dispatch: compiled extension when available, numpy otherwise.

Set GHCWAVE_PURE_PYTHON=1 to force the fallback.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("GHCWAVE_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def nonlinear_flux(u, ux, uxx, eps2: float, b3: float, g4: float) -> np.ndarray:
    return _impl.nonlinear_flux(_c(u), _c(ux), _c(uxx), float(eps2), float(b3), float(g4))


def quadrature_ratio(coeffs, phi, a: float, b: float) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64)
    out = _impl.quadrature_ratio(_c(coeffs), _c(phi.ravel()), float(a), float(b))
    return np.asarray(out).reshape(phi.shape)


def backends() -> dict:
    """Every importable backend, for tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
