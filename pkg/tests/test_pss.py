import numpy as np
import pytest
import sympy as sp

from ghcwave import jets as J
from ghcwave import pss
from ghcwave.model import EquationParams, ValidationError

ETAS = (-2.0, -1.0, 0.5, 1.0, 2.0)
ALPHAS = (-3.0, -1.0, 0.0, 2.0, 4.0)


def test_normalize_examples():
    assert pss.normalize_for_pss(EquationParams(0, 0, 0, 0, 1)).alpha_n == 0.0
    assert pss.normalize_for_pss(EquationParams(1, 0, 0, 2, 1)).alpha_n == 7.0
    assert pss.normalize_for_pss(EquationParams(0, 0, 0, -4, 2)).alpha_n == -3.0
    with pytest.raises(pss.Unsupported):
        pss.normalize_for_pss(EquationParams(0, 1.0, 0, 0, 1))
    with pytest.raises(ValidationError):
        pss.normalize_for_pss(EquationParams(0, 0, 0, 1.0, 0.0))


def test_normalize_substitution_oracle():
    # u = v - Gamma with eps = 1: the Gamma u_xxx term cancels, alpha gains 3 Gamma
    a, G = sp.symbols("a G")
    v, vx, vxx, vxxx = sp.symbols("v vx vxx vxxx")
    u = v - G
    rhs = u * vxxx + 2 * vx * vxx + (a - 3 * u) * vx + G * vxxx
    target = v * vxxx + 2 * vx * vxx + ((a + 3 * G) - 3 * v) * vx
    assert sp.expand(rhs - target) == 0
    assert pss.normalize_for_pss(EquationParams(0.7, 0, 0, 1.3, 1)).alpha_n == pytest.approx(0.7 + 3 * 1.3)


def test_chpss_examples():
    fs = pss.chpss_forms(0.0, 2.0, 1)
    assert fs.b == 1.0
    jet = {"u": 0.3, "u_x": -0.8, "u_xx": 0.1}
    for sign in (1, -1):
        fs = pss.chpss_forms(0.0, 2.0, sign)
        val = fs.evaluate(jet)
        assert val[2] == pytest.approx(2.0)
        assert val[3] == pytest.approx(-(2 * (1 + 0.3) - sign * (-0.8)))
    assert pss.chpss_forms(4.0, 2.0, 1).b == -1.0
    with pytest.raises(ValidationError):
        pss.chpss_forms(0.0, 1.0, 0)


def test_nondegeneracy():
    fs = pss.chpss_forms(0.0, 1.0, 1)
    # f11 f22 - f12 f21 reduces to eta u_xx + s u_x (u - u_xx + b - eta^2)
    expr = fs.f[0] * fs.f[3] - fs.f[1] * fs.f[2]
    s, b = fs.sign, sp.Symbol("b")
    closed = J.ETA * J.UXX + s * J.UX * (J.U - J.UXX + b - J.ETA**2)
    bexpr = -1 + (J.ETA**2 - J.ALPHA) / 2
    assert sp.expand(expr - closed.subs(b, bexpr)) == 0
    # hence it vanishes at u_x = u_xx = 0 for every u, but not identically
    assert fs.nondegeneracy({"u": 1.0, "u_x": 0.0, "u_xx": 0.0}) == pytest.approx(0.0, abs=1e-15)
    jets = J.random_jets(np.random.default_rng(0), 50)
    assert np.max(np.abs(fs.nondegeneracy(jets))) > 0.1


def test_exp_class_specialization():
    rng = np.random.default_rng(1)
    jets = J.random_jets(rng, 100)
    for alpha_n, eta, sign in ((0.0, 2.0, 1), (3.0, -1.0, -1), (-1.5, 0.5, 1)):
        b = pss.chpss_b(alpha_n, eta)
        gen = pss.exp_class_forms(1, b, 0, eta, 1, 0, -alpha_n, sign=sign)
        ch = pss.chpss_forms(alpha_n, eta, sign)
        assert np.max(np.abs(gen.evaluate(jets) - ch.evaluate(jets))) <= 1e-13


def test_exp_class_constraint():
    assert pss.exp_class_b(1, 1, 0, 1, 0) == pytest.approx(-0.75)
    pss.exp_class_forms(1, -0.75, 1, 0, 1, 0, 0)
    with pytest.raises(ValidationError, match="constraint"):
        pss.exp_class_forms(1, -0.75 + 0.1, 1, 0, 1, 0, 0)
    with pytest.raises(ValidationError):
        pss.exp_class_forms(0, 0, 0, 1, 1, 0, 0)


def test_structure_example():
    npar = pss.NormalizedParams(0.0)
    jets = pss.on_equation_jets(np.random.default_rng(2), 100, npar)
    r = pss.structure_residuals(pss.chpss_forms(0.0, 2.0, 1), npar, jets)
    assert r.shape == (100, 3)
    assert np.max(np.abs(r)) <= 1e-10


def test_structure_grid():
    rng = np.random.default_rng(3)
    for alpha_n in ALPHAS:
        npar = pss.NormalizedParams(alpha_n)
        jets = pss.on_equation_jets(rng, 100, npar)
        for eta in ETAS:
            for sign in (1, -1):
                r = pss.structure_residuals(pss.chpss_forms(alpha_n, eta, sign), npar, jets)
                assert np.max(np.abs(r)) <= 1e-10


def test_perturbed_forms_fail():
    npar = pss.NormalizedParams(0.0)
    jets = pss.on_equation_jets(np.random.default_rng(4), 100, npar)
    fs = pss.chpss_forms(0.0, 2.0, 1)
    bad = fs.replace(0, fs.f[0] + sp.Rational(1, 100))
    assert np.max(np.abs(pss.structure_residuals(bad, npar, jets))) >= 1e-3


def test_origin_jet():
    npar = pss.NormalizedParams(0.0)
    jet = {name: np.array([0.0]) for name in J.LABELS}
    r = pss.structure_residuals(pss.chpss_forms(0.0, 2.0, 1), npar, jet)
    assert r[0, 1] == pytest.approx(0.0, abs=1e-15)


def test_off_equation_jet_rejected():
    npar = pss.NormalizedParams(0.0)
    jets = J.random_jets(np.random.default_rng(5), 10)
    with pytest.raises(pss.OffEquationJet):
        pss.structure_residuals(pss.chpss_forms(0.0, 2.0, 1), npar, jets)


def test_on_equation_jets():
    npar = pss.NormalizedParams(1.5)
    jets = pss.on_equation_jets(np.random.default_rng(6), 50, npar)
    assert np.max(np.abs(pss.equation_residual(npar, jets))) <= 1e-12


def test_general_forms_hold_on_equation():
    # a = theta = 1, mu = 0 with nonzero m1 is outside the matched class (m1 must vanish)
    npar = pss.NormalizedParams(-1.0)
    jets = pss.on_equation_jets(np.random.default_rng(7), 50, npar)
    b = pss.exp_class_b(1, 0, 1.5, 1, 1.0)
    fs = pss.exp_class_forms(1, b, 0, 1.5, 1, 0, 1.0)
    assert np.max(np.abs(pss.structure_residuals(fs, npar, jets))) <= 1e-10


def test_exp_class_match_examples():
    assert pss.exp_class_match(0, 0, 3) == {"match": True, "m1": 0.0, "m2": -3.0, "theta": "free"}
    out = pss.exp_class_match(1, 0, 0)
    assert out["match"] is False and "z0^2*z1" in out["violated"]
    out = pss.exp_class_match(0, 0.5, 0)
    assert out["match"] is False and "z0^3*z1" in out["violated"]


def test_exp_class_match_random_no_match():
    rng = np.random.default_rng(8)
    for _ in range(20):
        b, g = rng.uniform(-2, 2, 2)
        assert pss.exp_class_match(b, g, rng.uniform(-2, 2))["match"] is False


def test_eta_family_not_proportional():
    jet = J.random_jets(np.random.default_rng(9), 1)
    jet = {k: float(v[0]) for k, v in jet.items()}
    f1 = pss.chpss_forms(0.0, 1.0, 1)
    f2 = pss.chpss_forms(0.0, 2.0, 1)
    assert not pss.forms_proportional(f1, f2, jet)
    assert pss.forms_proportional(f1, f1, jet)
