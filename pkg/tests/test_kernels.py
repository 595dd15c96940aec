import os
import subprocess
import sys

import numpy as np
import pytest

from ghcwave import _pykernels, kernels


def test_fallback_matches_formula():
    rng = np.random.default_rng(0)
    u, ux, uxx = rng.standard_normal((3, 200))
    f = _pykernels.nonlinear_flux(u, ux, uxx, 1.3, 0.2, -0.05)
    expected = 1.3 * (u * uxx + 0.5 * ux**2) - 1.5 * u**2 + 0.2 * u**3 + -0.05 * u**4
    np.testing.assert_allclose(f, expected, rtol=1e-13, atol=1e-13)
    coeffs = np.array([0.3, -1.2, 0.5, -1.0, 0.2, -0.05])
    phi = np.linspace(-2, 1.9, 101)
    r = _pykernels.quadrature_ratio(coeffs, phi, 2.0, -1.0)
    np.testing.assert_allclose(r, np.polynomial.polynomial.polyval(phi, coeffs) / (2.0 - phi),
                               rtol=1e-13)


@pytest.mark.skipif(len(kernels.backends()) < 2, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(1)
    py, cy = kernels.backends()["python"], kernels.backends()["cython"]
    for n in (1, 17, 4096):
        u, ux, uxx = (np.ascontiguousarray(a) for a in rng.standard_normal((3, n)))
        np.testing.assert_allclose(cy.nonlinear_flux(u, ux, uxx, 0.7, 0.3, -0.1),
                                   py.nonlinear_flux(u, ux, uxx, 0.7, 0.3, -0.1), rtol=1e-14, atol=1e-14)
        coeffs = rng.standard_normal(6)
        phi = np.ascontiguousarray(rng.uniform(-3, 3, n))
        np.testing.assert_allclose(np.asarray(cy.quadrature_ratio(coeffs, phi, 1.5, -0.5)),
                                   py.quadrature_ratio(coeffs, phi, 1.5, -0.5), rtol=1e-13)


def test_dispatch_shapes():
    phi = np.linspace(-1, 1, 12).reshape(3, 4)
    out = kernels.quadrature_ratio(np.array([1.0, 0, 0, 0, 0, 0]), phi, 2.0, 0.0)
    assert out.shape == (3, 4)
    np.testing.assert_allclose(out, 0.5)


def test_pure_python_switch():
    env = dict(os.environ, GHCWAVE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ghcwave.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
