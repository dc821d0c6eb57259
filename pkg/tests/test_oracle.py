"""Independent quadrature oracles against the analytic paths."""

import math

import pytest

from fracgreen import oracle
from fracgreen.green_td import FractionalParams, SpacetimeSeparation, green_td_closed_alpha2, green_td_series
from fracgreen.green_ti import TIContext, green_ti_plus, script_i1, script_i2


@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0])
@pytest.mark.parametrize("k", [0, 1, 4])
def test_contour_identity(alpha, k):
    rep = oracle.ik_gamma_identity(k, alpha)
    assert rep.rel_error < 1e-8


@pytest.mark.parametrize("alpha", [1.5, 1.8])
def test_double_quad_matches_hfunction_forms(alpha):
    q1, q2 = oracle.i1i2_double_quad(1.0, ctx_or_alpha=alpha)
    assert abs(q1.value - script_i1(1.0, alpha)) < 1e-6 * abs(q1.value)
    assert abs(q2.value - script_i2(1.0, alpha)) < 1e-6 * abs(q2.value)


def test_double_quad_second_integral_vanishes_at_alpha2():
    _, q2 = oracle.i1i2_double_quad(2.0, ctx_or_alpha=2.0)
    assert q2.value == 0


@pytest.mark.parametrize("s", [0.3, 0.7])
def test_mellin_transforms_alpha2(s):
    r1, r2 = oracle.mellin_numeric(s, 2.0)
    assert r1.rel_error < 1e-5
    assert r2.rel_error == 0.0


def test_mellin_transform_alpha15_off_pole():
    for rep in oracle.mellin_numeric(0.3, 1.5):
        assert rep.rel_error < 1e-5


def test_mellin_pole_reported_as_divergent():
    # the closed form has a gamma pole at alpha=1.5, s=0.5; no finite value exists
    reps = oracle.mellin_numeric(0.5, 1.5)
    assert any(not math.isfinite(r.rel_error) for r in reps)


@pytest.mark.parametrize("alpha,x", [(2.0, 3.0), (1.5, 1.0), (1.5, 10.0)])
def test_ieps_quadrature_matches_gplus(alpha, x):
    ctx = TIContext(FractionalParams(alpha), 1.0)
    r = x / ctx.k_mag
    rep = oracle.gplus_direct_quad(r, ctx)
    exact = green_ti_plus(r, ctx).value
    assert abs(rep.value - exact) < 1e-3 * abs(exact)


def test_principal_quad_matches_real_part():
    ctx = TIContext(FractionalParams(1.5), 1.0)
    rep = oracle.gplus_principal_quad(2.0, ctx)
    exact = green_ti_plus(2.0, ctx).value.real
    assert abs(rep.value.real - exact) < 1e-3 * abs(exact)


@pytest.mark.parametrize("alpha", [1.5, 1.2])
@pytest.mark.parametrize("r", [0.0, 1.0, 2.5])
def test_td_direct_quadrature_matches_series(alpha, r):
    p = FractionalParams(alpha)
    rep = oracle.td_green_direct(r, 1.0, p)
    ser = green_td_series(SpacetimeSeparation(r, 1.0), p).value
    assert abs(rep.value - ser) < 1e-8 * abs(ser)


def test_td_direct_quadrature_alpha2_closed_form():
    p = FractionalParams(2.0)
    rep = oracle.td_green_direct(1.3, 0.7, p)
    ref = green_td_closed_alpha2(SpacetimeSeparation(1.3, 0.7), p)
    assert abs(rep.value - ref) < 1e-8 * abs(ref)


def test_helmholtz_stencil_residual():
    rep = oracle.helmholtz_residual_check(TIContext(FractionalParams(2.0), 1.0))
    assert rep.value.real < 1e-3


def test_helmholtz_stencil_needs_alpha2():
    with pytest.raises(ValueError):
        oracle.helmholtz_residual_check(TIContext(FractionalParams(1.5), 1.0))


def test_schrodinger_stencil_residual():
    rep = oracle.schrodinger_residual_check(FractionalParams(2.0))
    assert rep.value.real < 1e-3


def test_stencil_detects_wrong_function():
    # the residual must be large for a function that is not the Green's function
    p = FractionalParams(2.0, d_alpha=2.0)
    ctx = TIContext(p, 1.0)
    good = oracle.helmholtz_residual_check(ctx)
    assert good.value.real < 1e-3
    wrong = TIContext(FractionalParams(2.0), 1.0)
    g = lambda r: green_ti_plus(r, wrong).value  # noqa: E731
    h, r0 = 1e-3, 1.0
    lap = (g(r0 + h) + g(r0 - h) + 2 * g(math.hypot(r0, h)) - 4 * g(r0)) / h**2
    res = abs(lap + ctx.kappa * g(r0)) / abs(ctx.kappa * g(r0))
    assert res > 0.1


def test_spectral_residual_decreases_alpha15():
    rep = oracle.spectral_residual_td(FractionalParams(1.5))
    res = rep.extra["residuals"]
    assert rep.converged
    assert all(b < a for a, b in zip(res, res[1:]))
