import numpy as np
import pytest
import sympy as sp

from ghcwave import jets as J
from ghcwave.model import EquationParams

U, UX, UXX, UXXX = J.U, J.UX, J.UXX, J.UXXX


def test_total_dx_examples():
    assert sp.expand(J.total_dx(U**2) - 2 * U * UX) == 0
    assert sp.expand(J.total_dx(U * UXX) - (UX * UXX + U * UXXX)) == 0
    e = sp.sqrt(U - J.EPS**2 * UXX)
    expected = (UX - J.EPS**2 * UXXX) / (2 * sp.sqrt(U - J.EPS**2 * UXX))
    assert sp.simplify(J.total_dx(e) - expected) == 0


def test_total_dt_examples():
    assert J.total_dt(U) == J.UT
    e = U**2 + J.EPS**2 * UX**2
    assert sp.expand(J.total_dt(e) - (2 * U * J.UT + 2 * J.EPS**2 * UX * J.UTX)) == 0
    assert sp.expand(J.total_dt(U * UXX) - (J.UT * UXX + U * J.UTXX)) == 0


def test_order_overflow():
    with pytest.raises(J.JetOrderError):
        J.total_dx(J.SYM["u_xxxxx"])


def test_delta_examples():
    p = EquationParams(0.3, 0.2, -0.1, 0.5, 1.3)
    const = {name: 0.0 for name in J.LABELS}
    const["u"] = 5.0
    assert J.evaluate(J.pde_residual(p), const) == pytest.approx(0.0, abs=1e-12)
    jet = dict.fromkeys(J.LABELS, 0.0)
    jet.update(u=1.0, u_x=1.0)
    assert J.evaluate(J.pde_residual(EquationParams(0, 0, 0, 0, 1)), jet) == pytest.approx(3.0)


def test_delta_vanishes_on_travelling_profile():
    # cosh(z) solves the profile ODE for alpha=beta=gamma=Gamma=0, eps=1 and any c
    from ghcwave.profiles import explicit_family
    p = EquationParams(0, 0, 0, 0, 1)
    fam = explicit_family(p, 2.0, "cosh")
    c = 0.7
    z = np.linspace(-1, 1, 7)
    d = [np.cosh(z), np.sinh(z)]
    jet = {}
    for k, name in enumerate(J.X_LABELS):
        jet[name] = d[k % 2]
    for k, name in enumerate(J.T_LABELS):
        jet[name] = -c * d[(k + 1) % 2]
    np.testing.assert_allclose(fam(z), np.cosh(z), rtol=1e-14)
    np.testing.assert_allclose(J.evaluate(J.pde_residual(p), jet), 0.0, atol=1e-12)


def test_current_examples():
    p = EquationParams(0.4, 0.1, 0.2, 0.3, 1.0)
    const = dict.fromkeys(J.LABELS, 0.0)
    const["u"] = 2.0
    lhs, rhs = J.current_divergence_check("Q1", p, const)
    assert lhs == pytest.approx(0.0, abs=1e-12) and rhs == pytest.approx(0.0, abs=1e-12)
    jet = dict.fromkeys(J.LABELS, 0.0)
    jet.update(u=1.0, u_x=1.0)
    lhs, rhs = J.current_divergence_check("Qu", EquationParams(0, 0, 0, 0, 1), jet)
    assert lhs == pytest.approx(3.0) and rhs == pytest.approx(3.0)


def test_sqrt_current_example(rng):
    p = EquationParams(1.0, 0, 0, -1.0, 1.0)
    jet = J.random_jets(rng, 50)
    jet["u_xx"] = jet["u"] - 4.0  # m = 4
    lhs, rhs, scale = J.current_divergence_check("Qsqrt", p, jet, with_scale=True)
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale)


def test_sqrt_current_guards(rng):
    with pytest.raises(ValueError):
        J.current_divergence_check("Qsqrt", EquationParams(1.0, 0, 0, 0.0, 1.0),
                                   J.random_jets(rng, 3))
    jet = J.random_jets(rng, 3)
    jet["u_xx"] = jet["u"] + 1.0  # m = -1
    with pytest.raises(J.JetDomainError):
        J.current_divergence_check("Qsqrt", EquationParams(0, 0, 0, 0, 1), jet)


@pytest.mark.parametrize("which", ["Q1", "Qu"])
def test_currents_random(rng, which):
    for _ in range(5):
        a, b, g, G = rng.uniform(-2, 2, 4)
        p = EquationParams(a, b, g, G, rng.uniform(0.2, 2))
        lhs, rhs, scale = J.current_divergence_check(which, p, J.random_jets(rng, 200),
                                                     with_scale=True)
        assert np.max(np.abs(lhs - rhs) / scale) <= 1e-12


def test_euler_examples(rng):
    p = EquationParams(0.7, -0.4, 0.9, 0.2, 1.1)
    jet = J.random_jets(rng, 100)
    for q in (1, U):
        val, scale = J.euler_residual(q, p, jet, with_scale=True)
        assert np.max(np.abs(val) / scale) <= 1e-10
    pq = EquationParams(0, 0, 0, 0, 1)
    bad = J.euler_residual(U**2, pq, J.random_jets(np.random.default_rng(1), 1))
    assert np.all(np.abs(bad) > 1e-6)


def test_euler_u_squared_at_explicit_jet():
    # independent expansion: E_u(u^2 Delta) for the plain equation, evaluated by sympy directly
    pq = EquationParams(0, 0, 0, 0, 1)
    jet = {name: 0.1 * (i + 1) for i, name in enumerate(J.LABELS)}
    expr = (U**2 * J.delta_symbolic()).subs(J.param_values(pq))
    x = sp.Symbol("x")
    t = sp.Symbol("t")
    f = sp.Function("f")(x, t)
    subs = {}
    for k, name in enumerate(J.X_LABELS):
        subs[J.SYM[name]] = sp.diff(f, x, k) if k else f
    for k, name in enumerate(J.T_LABELS):
        subs[J.SYM[name]] = sp.diff(f, t, 1, x, k) if k else sp.diff(f, t)
    lag = expr.xreplace(subs)
    from sympy.calculus.euler import euler_equations
    (eq,) = euler_equations(lag, f, [x, t])
    back = {}
    for k, name in reversed(list(enumerate(J.X_LABELS))):
        back[sp.diff(f, x, k) if k else f] = jet[name]
    val = eq.lhs
    derivs = sorted(val.atoms(sp.Derivative), key=lambda d: -sum(c for _, c in d.variable_count))
    table = {}
    for d in derivs:
        counts = dict(d.variable_count)
        nx, nt = counts.get(x, 0), counts.get(t, 0)
        if nt == 0:
            table[d] = jet[J.X_LABELS[nx]]
        elif nt == 1:
            table[d] = jet[J.T_LABELS[nx]]
        else:
            pytest.skip("second t-derivative outside the jet")
    val = val.xreplace(table).xreplace({f: jet["u"]})
    ours = J.euler_residual(U**2, pq, jet)
    assert float(val) == pytest.approx(ours, rel=1e-10)
    assert abs(ours) > 1e-6


def test_commutation_and_leibniz(rng):
    exprs = [U**2 * UXX, sp.sqrt(U**2 + 1) * UX, U * UX**3 + UXX**2, sp.exp(U) * UXX]
    jet = J.random_jets(rng, 100)
    for e in exprs:
        a = J.evaluate(J.total_dx(J.total_dt(e)), jet)
        b = J.evaluate(J.total_dt(J.total_dx(e)), jet)
        np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-11)
    for e, f in zip(exprs, exprs[1:]):
        a = J.evaluate(J.total_dx(e * f), jet)
        b = J.evaluate(J.total_dx(e) * f + e * J.total_dx(f), jet)
        np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-10)


def test_missing_label():
    with pytest.raises(KeyError):
        J.evaluate(U * UX, {"u": 1.0})
