import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sc

from fracgreen._mpseries import gamma_rational
from fracgreen.errors import ConditionsViolated, InapplicableExpansion, PrecisionBudgetExceeded
from fracgreen.foxh import (
    HFunctionSpec,
    characteristics,
    eval_asymptotic,
    eval_residues,
    eval_series,
    evaluate,
    exp_spec,
    mellin_chi,
    parse_spec,
    transform_power,
    transform_shift,
    validate,
)

J0_SPEC = HFunctionSpec(1, 0, 0, 2, (), ((0, 1), (0, 1)))  # J0(2 sqrt z)
K0_SPEC = HFunctionSpec(2, 0, 0, 2, (), ((0, 1), (0, 1)))  # 2 K0(2 sqrt z), double poles
RATIONAL = HFunctionSpec(1, 1, 1, 1, ((0, 1),), ((0, 1),))  # 1/(1+z)


def test_exp_identity_on_interval():
    for z in np.linspace(0.0, 10.0, 41):
        v = eval_series(exp_spec(), float(z)).value
        assert abs(v - math.exp(-z)) <= 1e-12 * math.exp(-z)


@pytest.mark.parametrize("z", [0.1, 1.0, 3.0, 25.0])
def test_bessel_spec(z):
    assert eval_series(J0_SPEC, z).value.real == pytest.approx(sc.j0(2 * math.sqrt(z)), abs=1e-14)


def test_rational_spec_inside_unit_disk():
    assert eval_series(RATIONAL, 0.5).value.real == pytest.approx(2 / 3, rel=1e-14)


def test_rational_spec_outside_disk_is_inapplicable():
    with pytest.raises(InapplicableExpansion):
        eval_series(RATIONAL, 2.0)


def test_negative_delta_rejected():
    spec = HFunctionSpec(1, 1, 1, 1, ((0, 2),), ((0, 1),))
    assert characteristics(spec).delta < 0
    with pytest.raises(InapplicableExpansion):
        eval_series(spec, 0.1)


def test_double_poles_use_residue_evaluator():
    assert any(v.condition == "condition2" for v in validate(K0_SPEC))
    with pytest.raises(ConditionsViolated):
        eval_series(K0_SPEC, 0.7)
    ref = 2 * sc.k0(2 * math.sqrt(0.7))
    assert eval_residues(K0_SPEC, 0.7).value.real == pytest.approx(ref, rel=1e-13)
    assert evaluate(K0_SPEC, 0.7).value.real == pytest.approx(ref, rel=1e-13)


def test_condition1_reported():
    bad = parse_spec("1,1,1,1; 1:1; 0:1")
    names = {v.condition for v in validate(bad)}
    assert "condition1" in names


def test_degenerate_scale_reported():
    spec = HFunctionSpec(1, 0, 0, 1, (), ((0, 0),))
    assert validate(spec)[0].condition == "degenerate"


def test_spec_shape_validation():
    with pytest.raises(ValueError):
        HFunctionSpec(1, 0, 1, 1, (), ((0, 1),))
    with pytest.raises(ValueError):
        HFunctionSpec(2, 0, 0, 1, (), ((0, 1),))
    with pytest.raises(ValueError):
        HFunctionSpec(1, 0, 0, 1, (), ((0, -1),))


def test_parse_spec_errors():
    for text in ("1,0,0,1; 0:1", "1,0,0; ; 0:1", "1,0,0,1; ; 0-1"):
        with pytest.raises(ValueError):
            parse_spec(text)


fractions = st.fractions(min_value=-3, max_value=3, max_denominator=7)
scales = st.fractions(min_value=Fraction(1, 7), max_value=3, max_denominator=7)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(fractions, scales), min_size=1, max_size=3), st.lists(st.tuples(fractions, scales), min_size=1, max_size=3))
def test_spec_text_round_trip(upper, lower):
    spec = HFunctionSpec(len(lower), len(upper), len(upper), len(lower), tuple(upper), tuple(lower))
    assert parse_spec(str(spec)) == spec


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 5.0), st.sampled_from([Fraction(1, 2), Fraction(2), Fraction(3)]))
def test_power_property(z, k):
    base = eval_series(exp_spec(), z).value
    alt = eval_series(transform_power(exp_spec(), k), z ** float(k)).value
    assert abs(float(k) * alt - base) <= 1e-12 * abs(base)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 5.0), st.sampled_from([Fraction(1, 2), Fraction(-1, 3), Fraction(2)]))
def test_shift_property(z, sigma):
    base = eval_series(J0_SPEC, z).value
    alt = eval_series(transform_shift(J0_SPEC, sigma), z).value
    assert abs(alt - z ** float(sigma) * base) <= 1e-12 * max(abs(alt), 1e-300) + 1e-15


def test_mellin_chi_of_exponential_is_gamma():
    s = 0.3 + 0.2j
    assert abs(mellin_chi(exp_spec(), s) - complex(mpmath.gamma(s))) < 1e-13


def test_asymptotic_leading_term():
    res = eval_asymptotic(J0_SPEC, 400.0)
    assert abs(res.value.real - sc.j0(40.0)) < 1e-3


def test_large_argument_series_needs_high_precision():
    # heavy cancellation: cheap budget must refuse instead of returning noise
    with pytest.raises(PrecisionBudgetExceeded):
        eval_series(J0_SPEC, 2000.0, max_dps=30)
    assert eval_series(J0_SPEC, 2000.0).value.real == pytest.approx(sc.j0(2 * math.sqrt(2000.0)), abs=1e-13)


def test_value_at_zero():
    assert eval_series(exp_spec(), 0.0).value == 1


@pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(7, 2), Fraction(-5, 4), Fraction(6)])
def test_binary_splitting_gamma(x):
    prec = 5000
    with mpmath.workprec(prec):
        ref = mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator)
        got = gamma_rational(x, prec)
        assert abs(got - ref) <= abs(ref) * mpmath.mpf(2) ** (-prec + 16)
