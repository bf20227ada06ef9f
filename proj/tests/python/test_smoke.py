import math

import pytest

import sheetlab as sl


def test_moment_closed_form():
    value, se = sl.moment_E(sl.FractionalOrder.parse("1/2"), 1.0)
    assert value == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-13)
    assert se == 0.0


def test_moment_routes_agree():
    order = sl.FractionalOrder.from_nu(3)
    exact, _ = sl.moment_E(order, 2.0)
    quad, _ = sl.moment_E(order, 2.0, sl.MomentRoute.QUADRATURE)
    mc, se = sl.moment_E(order, 2.0, sl.MomentRoute.MONTE_CARLO, samples=200_000, seed=11)
    assert quad == pytest.approx(exact, abs=1e-6)
    assert abs(mc - exact) < 4 * se


def test_btbs_solution_worked_example():
    f = sl.InitialFunction.quadratic(1)
    spec = sl.QuadratureSpec(1)
    spec.polynomial_growth = True
    u = sl.eval_functional(sl.Functional.u(), sl.Clock.btbs(), f, [1.0], [0.0], spec)
    assert u == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-8)
    assert sl.oracle_polynomial(sl.Functional.u(), sl.Clock.btbs(), f, [1.0], [0.0]) == pytest.approx(u, abs=1e-8)


def test_polynomial_growth_is_opt_in():
    with pytest.raises(ValueError):
        sl.eval_functional(sl.Functional.u(), sl.Clock.btbs(), sl.InitialFunction.quadratic(1), [1.0], [0.0])


def test_mc_matches_quadrature():
    clock = sl.Clock.isltbs(sl.FractionalOrder.from_nu(3))
    f = sl.InitialFunction.gaussian(1)
    quad = sl.eval_functional(sl.Functional.u(), clock, f, [0.8], [0.3])
    est, se = sl.mc_expectation(sl.Functional.u(), clock, f, [0.8], [0.3], samples=100_000, seed=3)
    assert abs(est - quad) < 4 * se + 1e-6


def test_densities_and_caputo():
    # g_{1/2} in closed form
    x = 0.7
    g = x ** -1.5 * math.exp(-1.0 / (4 * x)) / (2 * math.sqrt(math.pi))
    assert sl.stable_g(0.5, x) == pytest.approx(g, rel=1e-8)
    assert sl.inv_subordinator_density(0.5, 1.0, 0.4) > 0.0
    t = [i / 400 for i in range(401)]
    d = sl.caputo_l1([s * s for s in t], 1.0, 0.5)
    assert math.isnan(d[0])
    assert d[-1] == pytest.approx(sl.caputo_power(2.0, 0.5, 1.0), rel=1e-3)


def test_residual_report():
    grid = sl.VerifyGrid()
    grid.t_points = 16
    grid.h = 0.125
    r = sl.residual_fractional(sl.Clock.btbs(), sl.InitialFunction.quadratic(1), grid=grid, polynomial_growth=True)
    assert r["system"] == "HALF_FRACTIONAL"
    assert r["inf_norm"] < 5e-3
    assert all(ok for _, _, ok in r["boundary"])
    assert r["extras"]["coefficient"] == pytest.approx(1 / math.sqrt(8))


def test_numerical_error_is_exposed():
    spec = sl.QuadratureSpec(1)
    spec.tolerance = 1e-12
    with pytest.raises(sl.NumericalError):
        sl.eval_functional(sl.Functional.u(), sl.Clock.btbs(), sl.InitialFunction.bump(1), [3.0], [0.0], spec)
