import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import special as sc

from fracgreen.errors import RegimeWarning, SingularityError
from fracgreen.green_td import FractionalParams
from fracgreen.green_ti import (
    RadialKernel,
    TIContext,
    _lambda_exact,
    green_ti,
    green_ti_asymptotic,
    green_ti_minus,
    green_ti_plus,
    green_ti_principal,
    lambda_of_alpha,
    script_h,
    script_i2,
)


def ctx(alpha, energy=1.0, **kw):
    return TIContext(FractionalParams(alpha, **kw), energy)


@pytest.mark.parametrize("x", [0.2, 1.0, 5.0, 30.0])
def test_alpha2_is_hankel(x):
    c = ctx(2.0)
    ref = -0.25j * complex(sc.j0(x), sc.y0(x))
    assert abs(green_ti_plus(x, c).value - ref) < 1e-12 * abs(ref)


def test_alpha2_with_units():
    c = ctx(2.0, energy=2.5, d_alpha=0.5, hbar=1.2)
    r = 0.8
    x = c.x_of(r)
    ref = -1j / (4 * 1.2**2) * complex(sc.j0(x), sc.y0(x))
    assert abs(green_ti_plus(r, c).value - ref) < 1e-12 * abs(ref)


def test_conjugate_and_principal():
    c = ctx(1.5)
    gp = green_ti_plus(2.0, c).value
    assert green_ti_minus(2.0, c).value == gp.conjugate()
    assert green_ti_principal(2.0, c).value == complex(gp.real, 0.0)
    assert green_ti(2.0, c, "minus").value == gp.conjugate()


def test_lambda_values():
    assert lambda_of_alpha(2.0) == 0.0
    assert _lambda_exact(2) == 0
    assert _lambda_exact(1.5) == Fraction(1, 6)
    for a in np.linspace(1.05, 2.0, 20):
        lam = lambda_of_alpha(a)
        assert 0 <= lam < 0.5
        assert lam == pytest.approx(1 / a - 0.5, abs=1e-14)
    with pytest.raises(ValueError):
        lambda_of_alpha(1.0)


def test_second_integral_vanishes_at_alpha2():
    for r in np.linspace(0.1, 10, 7):
        assert abs(script_i2(float(r), 2.0)) < 1e-10


def test_singular_origin():
    with pytest.raises(SingularityError):
        green_ti_plus(0.0, ctx(1.5))
    with pytest.raises(ValueError):
        TIContext(FractionalParams(1.5), 0.0)


def test_script_h_decays_like_one_over_r():
    # x |H| / log x must fall: H decays as o(log r / r)
    for which in (1, 2):
        ratios = [x * abs(script_h(which, x, 1.5).value) / math.log(x) for x in (10.0, 40.0, 160.0)]
        assert ratios[0] > ratios[1] > ratios[2]


def test_asymptotic_close_at_large_x():
    c = ctx(1.5)
    r = 50.0 / c.k_mag
    exact = green_ti_plus(r, c).value
    asym = green_ti_asymptotic(r, c)
    assert abs(asym.value - exact) <= asym.abs_err_estimate
    assert abs(asym.value - exact) < 5e-3 * abs(exact)


def test_asymptotic_warns_at_small_x():
    with pytest.warns(RegimeWarning):
        green_ti_asymptotic(1.0, ctx(1.5))


@pytest.mark.parametrize("alpha", [2.0, 1.5])
def test_radial_kernel_matches_exact(alpha):
    c = ctx(alpha)
    kern = RadialKernel(c, 20.0)
    rs = np.array([0.01, 0.3, 1.7, 8.0, 19.0])
    got = kern(rs)
    for r, g in zip(rs, got):
        ref = green_ti_plus(float(r), c).value
        assert abs(g - ref) < 1e-6 * abs(ref)
    with pytest.raises(SingularityError):
        kern(np.array([0.0, 1.0]))
