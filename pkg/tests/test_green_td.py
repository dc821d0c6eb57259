import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracgreen.errors import PrecisionBudgetExceeded, RegimeWarning
from fracgreen.green_td import (
    FractionalParams,
    SpacetimeSeparation,
    d_alpha_from_mass,
    green_td,
    green_td_asymptotic,
    green_td_closed_alpha2,
    green_td_hform,
    green_td_series,
    plane_wave_td,
    xi_of,
    y_of,
)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.1, 2.0))
def test_alpha2_series_is_free_propagator(r, dt):
    p = FractionalParams(2.0)
    sep = SpacetimeSeparation(r, dt)
    ref = green_td_closed_alpha2(sep, p)
    assert abs(green_td_series(sep, p).value - ref) <= 1e-8 * abs(ref)


def test_alpha2_with_units():
    p = FractionalParams(2.0, d_alpha=0.7, hbar=1.3)
    sep = SpacetimeSeparation(1.1, 0.4)
    ref = green_td_closed_alpha2(sep, p)
    assert abs(green_td_series(sep, p).value - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("dt", [0.0, -0.5])
@pytest.mark.parametrize("method", ["series", "hform", "asymptotic", "auto"])
def test_causality(dt, method):
    res = green_td(SpacetimeSeparation(1.0, dt), FractionalParams(1.5), method=method)
    assert res.value == 0


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
@pytest.mark.parametrize("y", [0.01, 1.0, 5.0])
def test_series_equals_hform(alpha, y):
    p = FractionalParams(alpha)
    r = 2 * xi_of(1.0, p) * math.sqrt(y)
    sep = SpacetimeSeparation(r, 1.0)
    assert y_of(sep, p) == pytest.approx(y)
    a = green_td_series(sep, p).value
    b = green_td_hform(sep, p).value
    assert abs(a - b) <= 1e-9 * abs(b)


def test_origin_is_finite():
    v = green_td_series(SpacetimeSeparation(0.0, 1.0), FractionalParams(1.5)).value
    assert math.isfinite(abs(v)) and abs(v) > 0


def test_asymptotic_exact_at_alpha2():
    p = FractionalParams(2.0)
    sep = SpacetimeSeparation(2.0, 0.5)
    res = green_td_asymptotic(sep, p, warn=False)
    assert abs(res.value - green_td_closed_alpha2(sep, p)) < 1e-14
    assert res.abs_err_estimate == 0


def test_asymptotic_approaches_series():
    p = FractionalParams(1.5)
    devs = []
    for r in (5.0, 10.0, 20.0):
        sep = SpacetimeSeparation(r, 1.0)
        a = green_td_asymptotic(sep, p, warn=False)
        s = green_td_series(sep, p).value
        devs.append(abs(a.value - s) / abs(s))
        assert abs(a.value - s) <= 5 * a.abs_err_estimate
    assert devs[0] > devs[1] > devs[2]


def test_asymptotic_warns_outside_regime():
    with pytest.warns(RegimeWarning):
        green_td_asymptotic(SpacetimeSeparation(0.1, 1.0), FractionalParams(1.5))


def test_precision_budget():
    p = FractionalParams(1.2)
    r = 2 * xi_of(1.0, p) * math.sqrt(25.0)
    with pytest.raises(PrecisionBudgetExceeded):
        green_td_series(SpacetimeSeparation(r, 1.0), p, max_dps=200)


def test_parameter_validation():
    for bad in (dict(alpha=1.0), dict(alpha=2.1), dict(d_alpha=0.0), dict(hbar=-1.0)):
        with pytest.raises(ValueError):
            FractionalParams(**{"alpha": 1.5, **bad})
    with pytest.raises(ValueError):
        SpacetimeSeparation(-1.0, 1.0)
    with pytest.raises(ValueError):
        green_td(SpacetimeSeparation(1.0, 1.0), FractionalParams(1.5), method="magic")


def test_mass_parametrisation():
    assert d_alpha_from_mass(2.0, 3.0) == pytest.approx(1 / 6)
    p = FractionalParams.from_mass(1.5, 2.0, cbar=3.0)
    assert p.d_alpha == pytest.approx(3.0**0.5 / (1.5 * 2.0**0.5))


def test_plane_wave_unit_modulus():
    p = FractionalParams(1.5)
    v = plane_wave_td((1.0, 2.0), 0.3, (0.4, -0.2), p)
    assert abs(abs(v) - 1) < 1e-15


def test_auto_dispatch():
    p = FractionalParams(1.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        near = green_td(SpacetimeSeparation(0.5, 1.0), p)
        far = green_td(SpacetimeSeparation(400.0, 1.0), p)
    assert near.method == "series"
    assert far.method == "asymptotic"


@pytest.mark.parametrize("r", [1e-300, 9.2e-143, 1e-8])
def test_vanishing_radius(r):
    p = FractionalParams(2.0)
    sep = SpacetimeSeparation(r, 1.0)
    ref = green_td_closed_alpha2(sep, p)
    assert abs(green_td_series(sep, p).value - ref) <= 1e-12 * abs(ref)
