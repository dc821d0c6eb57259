import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sc

from fracgreen import specfun
from fracgreen.errors import GammaPoleError, SingularityError

finite_z = st.complex_numbers(min_magnitude=0.05, max_magnitude=8.0, allow_nan=False, allow_infinity=False)


def _off_poles(z):
    return abs(z.imag) > 1e-3 or abs(z.real - round(z.real)) > 1e-3


@settings(max_examples=200, deadline=None)
@given(finite_z.filter(_off_poles))
def test_gamma_matches_mpmath(z):
    ref = complex(mpmath.gamma(z))
    assert abs(specfun.gamma(z) - ref) <= 1e-12 * abs(ref)


@settings(max_examples=200, deadline=None)
@given(finite_z.filter(lambda z: z.real > 0))
def test_gamma_recurrence(z):
    g1 = specfun.gamma(z + 1)
    assert abs(g1 - z * specfun.gamma(z)) <= 1e-12 * abs(g1)


@settings(max_examples=200, deadline=None)
@given(finite_z.filter(_off_poles).filter(lambda z: abs(z.imag) < 5))
def test_gamma_reflection(z):
    v = specfun.gamma(z) * specfun.gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
    assert abs(v - 1) < 1e-10


@pytest.mark.parametrize("n", [0, -1, -7])
def test_gamma_poles_raise(n):
    with pytest.raises(GammaPoleError):
        specfun.gamma(n)
    assert specfun.rgamma(n) == 0


def test_loggamma_survives_overflow():
    z = 300.5
    assert abs(specfun.loggamma(z).real - math.lgamma(z)) < 1e-10 * math.lgamma(z)


def test_gamma_real_axis_is_real():
    assert specfun.gamma(2.5).imag == 0.0
    assert specfun.gamma(5) == pytest.approx(24.0, rel=1e-14)


# the power series lose digits to cancellation just below the crossover
@pytest.mark.parametrize("x,tol", [(1e-6, 1e-13), (0.3, 1e-13), (2.0, 1e-13), (7.5, 1e-12), (11.99, 1e-10), (12.0, 1e-12), (20.0, 1e-13), (150.0, 1e-13)])
def test_bessel_struve_against_scipy(x, tol):
    assert specfun.bessel_j0(x) == pytest.approx(sc.j0(x), abs=tol)
    assert specfun.bessel_y0(x) == pytest.approx(sc.y0(x), abs=tol * max(1, abs(sc.y0(x))))
    assert specfun.struve_h0(x) == pytest.approx(sc.struve(0, x), abs=10 * tol)
    h = specfun.hankel1_0(x)
    assert h.real == specfun.bessel_j0(x) and h.imag == specfun.bessel_y0(x)


def test_small_argument_values():
    assert specfun.bessel_j0(0.0) == 1.0
    assert specfun.struve_h0(0.0) == 0.0
    with pytest.raises(SingularityError):
        specfun.bessel_y0(0.0)
    with pytest.raises(ValueError):
        specfun.bessel_j0(-1.0)


@pytest.mark.parametrize("name", ["j0", "y0", "h0"])
def test_branches_agree_in_crossover_window(name):
    small, large = specfun.branches[name]
    for x in np.linspace(11.0, 13.0, 21):
        assert abs(small(float(x)) - large(float(x))) < 1e-9


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
def test_j0_ode_residual(x):
    from fracgreen.verify import _j0_ode_residual

    assert _j0_ode_residual(x) < 1e-8
