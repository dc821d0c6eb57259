import cmath
import math

import numpy as np
import pytest

from fracgreen.errors import FarFieldViolation, SingularityError, UnderResolved
from fracgreen.green_td import FractionalParams
from fracgreen.green_ti import TIContext
from fracgreen.scattering import (
    PotentialSpec,
    QuadSpec,
    ScatteringGeometry,
    TimeProfile,
    WaveField,
    born1_td,
    born1_ti,
    born_iterate,
    born_series,
    fourier_transform,
    initial_field,
    momentum_transfer,
    plane_wave_ti,
    scattering_amplitude,
    square_grid,
)

GAUSS = PotentialSpec("gaussian", 0.3, sigma=0.5)


def ctx(alpha=2.0):
    return TIContext(FractionalParams(alpha), 1.0)


def test_potential_kinds():
    disk = PotentialSpec("disk", 2.0, radius=1.0, center=(1.0, 0.0))
    assert disk(1.5, 0.0) == 2.0 and disk(2.5, 0.0) == 0.0
    ring = PotentialSpec("ring", 1.0, r_in=1.0, r_out=2.0)
    assert ring(0.5, 0.0) == 0.0 and ring(1.5, 0.0) == 1.0
    samp = PotentialSpec("sampled", 2.0, samples=np.ones((3, 3)), spacing=0.5)
    assert samp(0.0, 0.0) == pytest.approx(2.0)
    assert samp(5.0, 0.0) == 0.0
    assert GAUSS(0.5, 0.0) == pytest.approx(0.3 * math.exp(-0.5))


def test_potential_validation():
    with pytest.raises(ValueError):
        PotentialSpec("blob", 1.0)
    with pytest.raises(ValueError):
        PotentialSpec("gaussian", 1.0, sigma=-1.0)
    with pytest.raises(ValueError):
        PotentialSpec.from_dict({"kind": "gaussian", "v0": 1, "sigma": 1, "colour": "red"})


@pytest.mark.parametrize("pot", [
    GAUSS,
    PotentialSpec("ring", 1.0, r_in=1.0, r_out=2.0, center=(0.5, -0.5)),
    PotentialSpec("disk", 1.0, radius=1.0, time_profile=TimeProfile("gaussian_pulse", 2.0, 0.5)),
])
def test_potential_dict_round_trip(pot):
    assert PotentialSpec.from_dict(pot.to_dict()) == pot


def test_time_profile():
    tp = TimeProfile("gaussian_pulse", 1.0, 0.5)
    assert tp(1.0) == 1.0
    lo, hi = tp.window()
    assert lo == pytest.approx(-2.0) and hi == pytest.approx(4.0)
    assert TimeProfile().window() == (-math.inf, math.inf)


def test_gaussian_fourier_transform():
    for q in [(0.0, 0.0), (0.7, -0.3), (1.5, 1.0)]:
        a = fourier_transform(GAUSS, q)
        b = GAUSS.gaussian_transform(q)
        assert abs(a - b) < 1e-10 * abs(GAUSS.gaussian_transform((0, 0)))


def test_shifted_gaussian_phase():
    pot = PotentialSpec("gaussian", 1.0, sigma=0.4, center=(1.0, 0.5))
    q = (0.8, 0.4)
    assert abs(fourier_transform(pot, q) - pot.gaussian_transform(q)) < 1e-10


def test_under_resolved_transform():
    with pytest.raises(UnderResolved):
        fourier_transform(GAUSS, (3.0, 0.0), QuadSpec(dx=0.5))


def test_momentum_transfer():
    c = ctx(1.5)
    g = ScatteringGeometry.from_context(c, 0.0, math.pi / 3)
    assert momentum_transfer(g, c) == pytest.approx(2 * c.k_mag * math.sin(math.pi / 6))
    assert momentum_transfer(g, c) == pytest.approx(math.hypot(*g.q))
    with pytest.raises(ValueError):
        momentum_transfer(ScatteringGeometry.from_context(c, 0.0, 4.0), c)


def test_amplitude_follows_gaussian_transform():
    c = ctx(1.5)
    f0 = abs(scattering_amplitude(0.0, c, GAUSS))
    for th in (0.5, 1.5, math.pi):
        q = 2 * c.k_mag * math.sin(th / 2)
        assert abs(scattering_amplitude(th, c, GAUSS)) / f0 == pytest.approx(math.exp(-0.5 * q * q * 0.25), rel=1e-8)


def test_far_field_guard_and_zero_potential():
    c = ctx(1.5)
    g = ScatteringGeometry.from_context(c)
    with pytest.raises(FarFieldViolation):
        born1_ti((1.0, 0.0), g, c, GAUSS)
    pt = (40.0, 3.0)
    assert born1_ti(pt, g, c, GAUSS.scaled(0.0)) == plane_wave_ti(pt, g)


def test_wavefield_validation():
    x = np.array([0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        WaveField(x, np.array([0.0, 1.0, 3.0]), np.zeros((3, 3)), 0)
    with pytest.raises(ValueError):
        WaveField(x, x, np.zeros((2, 3)), 0)
    f = WaveField(x, x, np.zeros((3, 3)), 0)
    with pytest.raises(ValueError):
        f.values[0, 0] = 1


def _small_field(c, pot=GAUSS, t=None):
    x, y = square_grid(3.0, 0.125)
    return initial_field(x, y, ScatteringGeometry.from_context(c), c, pot, t)


def test_zero_potential_iteration_is_exact():
    c = ctx(2.0)
    f0 = _small_field(c)
    f1 = born_iterate(f0, "ti", GAUSS.scaled(0.0), c)
    assert np.array_equal(f1.values, f0.values)
    assert f1.order == 1


def test_unresolved_self_cell_raises():
    c = ctx(2.0)
    with pytest.raises(SingularityError, match="kernel singularity unresolved"):
        born_iterate(_small_field(c), "ti", GAUSS, c, QuadSpec(self_cell=None))


def test_contraction_scales_with_strength():
    c = ctx(2.0)
    f0 = _small_field(c)

    def ratio(pot):
        fs = born_series(f0, "ti", pot, c, 2)
        return np.max(np.abs(fs[2].values - fs[1].values)) / np.max(np.abs(fs[1].values - fs[0].values))

    assert ratio(GAUSS.scaled(0.5)) / ratio(GAUSS) == pytest.approx(0.5, rel=1e-6)


def test_td_iteration_is_ti_times_phase():
    c = ctx(2.0)
    t = 0.7
    ti = born_iterate(_small_field(c), "ti", GAUSS, c)
    td = born_iterate(_small_field(c, t=t), "td", GAUSS, c)
    ph = cmath.exp(-1j * c.energy * t)
    assert np.allclose(td.values, ti.values * ph, rtol=0, atol=1e-13)


def test_td_iteration_needs_time_and_static_potential():
    c = ctx(2.0)
    with pytest.raises(ValueError):
        born_iterate(_small_field(c), "td", GAUSS, c)
    pulsed = PotentialSpec("gaussian", 0.3, sigma=0.5, time_profile=TimeProfile("gaussian_pulse", 1.0, 0.3))
    with pytest.raises(ValueError):
        born_iterate(_small_field(c, t=0.0), "td", pulsed, c)


def test_iterate_far_field_matches_born1():
    c = ctx(2.0)
    g = ScatteringGeometry.from_context(c)
    rv = GAUSS.extent()
    r = 10 * rv
    x, y = square_grid(r + 1.0, 0.125)
    f1 = born_iterate(initial_field(x, y, g, c, GAUSS), "ti", GAUSS, c)
    ix = int(np.argmin(np.abs(x - r)))
    iy = int(np.argmin(np.abs(y)))
    p = (x[ix], y[iy])
    pw = plane_wave_ti(p, g)
    a = born1_ti(p, g, c, GAUSS) - pw
    b = f1.values[iy, ix] - pw
    assert abs(a - b) < 0.05 * abs(a)


def test_born1_td_static_matches_ti():
    p = FractionalParams(2.0)
    c = TIContext(p, 1.0)
    g = ScatteringGeometry.from_context(c)
    r = 10 * GAUSS.extent()
    pt = (r, 0.0)
    k = c.k_mag
    td = born1_td(pt, 0.0, (k, 0.0), p, GAUSS)
    ti = born1_ti(pt, g, c, GAUSS) - plane_wave_ti(pt, g)
    assert abs(td.scattered - ti) < 1e-3 * abs(ti)


def test_born1_td_pulse_causal():
    p = FractionalParams(1.5)
    pulsed = PotentialSpec("gaussian", 0.3, sigma=0.5, time_profile=TimeProfile("gaussian_pulse", 5.0, 0.3))
    r = 10 * pulsed.extent()
    res = born1_td((r, 0.0), 1.0, (1.0, 0.0), p, pulsed)
    assert res.scattered == 0
