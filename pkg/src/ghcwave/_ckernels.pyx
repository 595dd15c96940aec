# Compiled pointwise kernels; see _pykernels for the reference versions.
import numpy as np
cimport numpy as cnp

cnp.import_array()


def nonlinear_flux(const double[::1] u, const double[::1] ux, const double[::1] uxx,
                   double eps2, double b3, double g4):
    """eps2 (u u_xx + u_x^2/2) - 3/2 u^2 + b3 u^3 + g4 u^4, fused in one pass."""
    cdef Py_ssize_t i, n = u.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double v
    for i in range(n):
        v = u[i]
        o[i] = eps2 * (v * uxx[i] + 0.5 * ux[i] * ux[i]) + v * v * (-1.5 + v * (b3 + g4 * v))
    return out


def quadrature_ratio(const double[::1] coeffs, const double[::1] phi, double a, double b):
    """P(phi) / (a + b phi) with P given by ascending coefficients (Horner)."""
    cdef Py_ssize_t i, k, n = phi.shape[0], d = coeffs.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double x, acc
    for i in range(n):
        x = phi[i]
        acc = coeffs[d - 1]
        for k in range(d - 2, -1, -1):
            acc = acc * x + coeffs[k]
        o[i] = acc / (a + b * x)
    return out
