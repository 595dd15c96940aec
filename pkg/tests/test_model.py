import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghcwave.model import (EquationParams, Grid, QuinticPoly, ValidationError, WaveParams,
                           pole_location, poly_from_params)

finite = st.floats(-50, 50, allow_nan=False)


def test_poly_plain_ch():
    P = poly_from_params(EquationParams(0, 0, 0, 0, 1), WaveParams(1, 0, 0))
    assert P.coeffs == (0.0, 0.0, 1.0, -1.0, 0.0, 0.0)


def test_poly_quintic_matches_factorization():
    P = poly_from_params(EquationParams(0, 6, -10, 0, 1), WaveParams(1, 0, 0))
    assert P.coeffs == (0.0, 0.0, 1.0, -1.0, 1.0, -1.0)
    x = np.linspace(-2, 2, 11)
    np.testing.assert_allclose(P(x), -x**2 * (x - 1) * (x**2 + 1), atol=1e-12)


def test_poly_quartic_eps_zero():
    P = poly_from_params(EquationParams(1, 6, 0, 1, 0), WaveParams(-1, 0.5, -1))
    assert P.coeffs == (-1.0, 1.0, 0.0, -1.0, 1.0, 0.0)
    x = np.linspace(-2, 2, 11)
    np.testing.assert_allclose(P(x), (x**2 - 1) * (x**2 - x + 1), atol=1e-12)


def test_pole_examples():
    assert pole_location(EquationParams(0, 0, 0, 0, 1), WaveParams(1)) == 1.0
    assert pole_location(EquationParams(0, 0, 0, -4, 2), WaveParams(3)) == 4.0
    assert pole_location(EquationParams(0, 0, 0, 1, 0), WaveParams(1)) is None


@given(finite, finite, finite, finite, finite, st.floats(0.1, 5), finite)
def test_cubic_coefficient_is_minus_one(a, b, g, G, c, eps, A):
    if c == 0:
        c = 1.0
    P = poly_from_params(EquationParams(a, b, g, G, eps), WaveParams(c, A, 0.0))
    assert P.coeffs[3] == -1.0


@given(finite, finite, finite, finite)
def test_poly_linear_in_A_B(A1, B1, A2, B2):
    p = EquationParams(0.3, 1.2, -0.7, 0.1, 1.0)
    c0 = np.array(poly_from_params(p, WaveParams(2.0, 0, 0)).coeffs)
    c1 = np.array(poly_from_params(p, WaveParams(2.0, A1, B1)).coeffs)
    c2 = np.array(poly_from_params(p, WaveParams(2.0, A2, B2)).coeffs)
    c12 = np.array(poly_from_params(p, WaveParams(2.0, A1 + A2, B1 + B2)).coeffs)
    np.testing.assert_allclose(c12 - c0, (c1 - c0) + (c2 - c0), atol=1e-12 * (1 + abs(A1) + abs(A2) + abs(B1) + abs(B2)))


@given(st.floats(0.1, 5), st.floats(-10, 10), st.floats(-10, 10).filter(lambda c: c != 0),
       st.floats(0.2, 5))
def test_pole_scale_consistency(eps, G, c, k):
    p = EquationParams(0, 0, 0, G, eps)
    q = EquationParams(0, 0, 0, G / k, eps)
    w = WaveParams(c)
    diff = pole_location(q, w) - pole_location(p, w)
    assert math.isclose(diff, -(1 / k - 1) * G / eps**2, rel_tol=1e-9, abs_tol=1e-9)


def test_validation():
    with pytest.raises(ValidationError):
        EquationParams(epsilon=0, Gamma=0)
    with pytest.raises(ValidationError):
        EquationParams(epsilon=-1)
    with pytest.raises(ValidationError):
        EquationParams(alpha=math.nan)
    with pytest.raises(ValidationError):
        WaveParams(0.0)
    with pytest.raises(ValidationError):
        Grid(10.0, 100)
    with pytest.raises(ValidationError):
        Grid(10.0, 4)
    with pytest.raises(ValidationError):
        Grid(0.0, 64)
    with pytest.raises(ValidationError):
        QuinticPoly((1, 2, 3))


def test_grid_samples():
    g = Grid(2 * np.pi, 16)
    assert g.spacing == pytest.approx(2 * np.pi / 16)
    np.testing.assert_allclose(g.x, np.arange(16) * g.spacing)
    with pytest.raises(ValidationError):
        g.check_field(np.zeros(15))
