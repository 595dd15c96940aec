"""Pure numpy reference versions of the compiled kernels."""
import numpy as np


def nonlinear_flux(u, ux, uxx, eps2, b3, g4):
    """eps2 (u u_xx + u_x^2/2) - 3/2 u^2 + b3 u^3 + g4 u^4."""
    return eps2 * (u * uxx + 0.5 * ux * ux) + u * u * (-1.5 + u * (b3 + g4 * u))


def quadrature_ratio(coeffs, phi, a, b):
    """P(phi) / (a + b phi) with P given by ascending coefficients."""
    phi = np.asarray(phi, dtype=float)
    acc = np.full_like(phi, coeffs[-1])
    for ck in coeffs[-2::-1]:
        acc = acc * phi + ck
    return acc / (a + b * phi)
