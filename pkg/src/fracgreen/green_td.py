"""Time-dependent (retarded) Green's function of the 2D space-fractional
Schrödinger equation.

With xi = (D dt / hbar)^(1/alpha) and y = (r / (2 xi hbar))^2,

    G(r, dt) = xi^-2 / (2 alpha pi hbar^3 i)
               * sum_k (-1)^k y^k Gamma((2k+2)/alpha) e^{-(k+1) pi i/alpha} / (k!)^2

for dt > 0 and G = 0 for dt <= 0.  The same function written with Fox H
functions is ``xi^-2/(2 alpha hbar^3 i) [H1(y) - i H2(y)]``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ._mpseries import GammaFactor, sum_gamma_series
from ._rational import as_number
from .errors import RegimeWarning
from .foxh import EvalResult, HFunctionSpec, eval_series

DT_MIN = 1e-12
Y_MIN = 50.0


@dataclass(frozen=True)
class FractionalParams:
    """Levy index, generalized kinetic coefficient and hbar."""

    alpha: float = 2.0
    d_alpha: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (1.0 < float(self.alpha) <= 2.0):
            raise ValueError(f"alpha must lie in (1, 2], got {self.alpha}")
        if not float(self.d_alpha) > 0:
            raise ValueError("d_alpha must be positive")
        if not float(self.hbar) > 0:
            raise ValueError("hbar must be positive")

    @property
    def alpha_exact(self):
        return as_number(self.alpha)

    @classmethod
    def from_mass(cls, alpha, mass, cbar=1.0, hbar=1.0):
        return cls(alpha, d_alpha_from_mass(alpha, mass, cbar), hbar)


@dataclass(frozen=True)
class SpacetimeSeparation:
    r: float
    dt: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError("r must be finite and non-negative")
        if not math.isfinite(self.dt):
            raise ValueError("dt must be finite")


def d_alpha_from_mass(alpha, mass, cbar=1.0) -> float:
    """D_alpha = cbar^(2-alpha) / (alpha m^(alpha-1))."""
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")
    if mass <= 0 or cbar <= 0:
        raise ValueError("mass and cbar must be positive")
    return cbar ** (2.0 - alpha) / (alpha * mass ** (alpha - 1.0))


def xi_of(dt, params: FractionalParams) -> float:
    return (params.d_alpha * dt / params.hbar) ** (1.0 / params.alpha)


def y_of(sep: SpacetimeSeparation, params: FractionalParams) -> float:
    return (sep.r / (2.0 * xi_of(sep.dt, params) * params.hbar)) ** 2


def _causal_zero(sep, method):
    if sep.dt <= 0:
        return EvalResult(0j, 0.0, 0, method, {"causal": True})
    if sep.dt < DT_MIN:
        raise ValueError(f"dt={sep.dt} below dt_min={DT_MIN}: G is singular at coincidence")
    return None


def td_coefficient_factors(alpha):
    """Gamma factors of the k-th series coefficient, without phase."""
    two_over = 2 / alpha
    return [
        GammaFactor(two_over, two_over, 1),
        GammaFactor(Fraction(1), Fraction(1), -1),
        GammaFactor(Fraction(1), Fraction(1), -1),
    ]


def green_td_series(
    sep: SpacetimeSeparation,
    params: FractionalParams,
    tol: float = 1e-16,
    max_terms: int = 1_000_000,
    max_dps: int = 40000,
) -> EvalResult:
    """The power series in y, summed in adaptive multi-precision.

    Every term carries a phase exp(-(k+1) pi i / alpha).  For rational alpha
    the terms are grouped by k modulo the phase period and each group is
    summed as a real series; otherwise the phase is folded into z.
    """
    z0 = _causal_zero(sep, "series")
    if z0 is not None:
        return z0
    al = params.alpha_exact
    xi = xi_of(sep.dt, params)
    y = y_of(sep, params)
    hb = params.hbar
    pref = xi**-2 / (2 * float(al) * math.pi * hb**3 * 1j)
    facs = td_coefficient_factors(al)
    if isinstance(al, Fraction):
        period = 2 * (1 / al).denominator
        inv = 1 / al

        def weights():
            return [mpmath.expjpi(-(c + 1) * mpmath.mpf(inv.numerator) / inv.denominator) for c in range(period)]

        res = sum_gamma_series(
            facs, Fraction(1), y, Fraction(0), Fraction(1),
            tol=tol, max_terms=max_terms, max_dps=max_dps, weights=weights,
            where=f"r={sep.r}, dt={sep.dt}",
        )
        s = res.value
    else:
        ph = cmath.exp(-1j * math.pi / params.alpha)
        res = sum_gamma_series(
            facs, 1.0, y * ph, 0.0, 1.0,
            tol=tol, max_terms=max_terms, max_dps=max_dps,
            where=f"r={sep.r}, dt={sep.dt}",
        )
        s = res.value * ph
    return EvalResult(pref * s, abs(pref) * res.abs_err, res.terms, "series", {"dps": res.dps, "y": y})


def td_h_specs(alpha):
    """The two H^{1,1}_{2,3} specs (H1, H2) of the H-function form."""
    a = as_number(alpha)
    h1 = HFunctionSpec(
        1, 1, 2, 3,
        ((1 - 2 / a, 2 / a), (Fraction(1, 2) - 1 / a, 1 / a)),
        ((0, 1), (0, 1), (Fraction(1, 2) - 1 / a, 1 / a)),
    )
    h2 = HFunctionSpec(
        1, 1, 2, 3,
        ((1 - 2 / a, 2 / a), (1 - 1 / a, 1 / a)),
        ((0, 1), (0, 1), (1 - 1 / a, 1 / a)),
    )
    return h1, h2


def green_td_hform(
    sep: SpacetimeSeparation,
    params: FractionalParams,
    tol: float = 1e-16,
    max_terms: int = 1_000_000,
    max_dps: int = 40000,
) -> EvalResult:
    """xi^-2 / (2 alpha hbar^3 i) [H1(y) - i H2(y)] via foxh.eval_series."""
    z0 = _causal_zero(sep, "series")
    if z0 is not None:
        return z0
    xi = xi_of(sep.dt, params)
    y = y_of(sep, params)
    h1, h2 = td_h_specs(params.alpha)
    r1 = eval_series(h1, y, tol, max_terms, max_dps=max_dps)
    r2 = eval_series(h2, y, tol, max_terms, max_dps=max_dps)
    pref = xi**-2 / (2 * params.alpha * params.hbar**3 * 1j)
    val = pref * (r1.value - 1j * r2.value)
    err = abs(pref) * (r1.abs_err_estimate + r2.abs_err_estimate)
    return EvalResult(val, err, r1.terms_used + r2.terms_used, "series", {"y": y})


def green_td_closed_alpha2(sep: SpacetimeSeparation, params: FractionalParams) -> complex:
    """The ordinary 2D retarded propagator, valid at alpha = 2 only.

    With m = 1/(2 D): (1/(i hbar)) m/(2 pi i hbar dt) exp(i m r^2/(2 hbar dt)).
    """
    if sep.dt <= 0:
        return 0j
    m = 1.0 / (2.0 * params.d_alpha)
    hb = params.hbar
    return (1 / (1j * hb)) * m / (2j * math.pi * hb * sep.dt) * cmath.exp(1j * m * sep.r**2 / (2 * hb * sep.dt))


def td_phase(sep: SpacetimeSeparation, params: FractionalParams) -> float:
    """Stationary phase (alpha-1)/hbar (r^alpha/(alpha^alpha D dt))^(1/(alpha-1))."""
    al = params.alpha
    return (al - 1) / params.hbar * (sep.r**al / (al**al * params.d_alpha * sep.dt)) ** (1 / (al - 1))


def green_td_asymptotic(sep: SpacetimeSeparation, params: FractionalParams, warn: bool = True) -> EvalResult:
    """Leading large-r term from stationary phase.

    At alpha = 2 the expression coincides with the exact propagator and the
    error estimate is 0.  Otherwise the estimate is |G| / Phi, Phi being the
    stationary phase, i.e. the relative size of the first omitted order.
    """
    z0 = _causal_zero(sep, "asymptotic")
    if z0 is not None:
        return z0
    if sep.r <= 0:
        raise ValueError("asymptotic form needs r > 0")
    al, D, hb = params.alpha, params.d_alpha, params.hbar
    y = y_of(sep, params)
    if warn and y < Y_MIN:
        warnings.warn(f"asymptotic regime not reached (y={y:.3g} < {Y_MIN})", RegimeWarning, stacklevel=2)
    amp = -sep.r ** ((2 - al) / (al - 1)) / (
        2 * math.pi * hb**2 * (al * D * sep.dt) ** (1 / (al - 1)) * math.sqrt(al - 1)
    )
    phi = td_phase(sep, params)
    val = amp * cmath.exp(1j * phi)
    err = 0.0 if al == 2.0 else abs(amp) / phi
    return EvalResult(val, err, 1, "asymptotic", {"y": y, "regime_ok": y >= Y_MIN})


def green_td(sep: SpacetimeSeparation, params: FractionalParams, method: str = "auto", tol: float = 1e-16, **kw) -> EvalResult:
    """Dispatch on ``method`` in {auto, series, hform, asymptotic}.

    ``auto`` uses the series for y <= Y_MIN and the asymptotic form beyond.
    """
    if method == "series":
        return green_td_series(sep, params, tol, **kw)
    if method == "hform":
        return green_td_hform(sep, params, tol, **kw)
    if method == "asymptotic":
        return green_td_asymptotic(sep, params)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if sep.dt > 0 and y_of(sep, params) > Y_MIN:
        return green_td_asymptotic(sep, params)
    return green_td_series(sep, params, tol, **kw)


def plane_wave_td(r_vec, t, p_vec, params: FractionalParams) -> complex:
    """exp(i (p.r - D |p|^alpha t) / hbar)."""
    pr = float(r_vec[0]) * float(p_vec[0]) + float(r_vec[1]) * float(p_vec[1])
    pm = math.hypot(float(p_vec[0]), float(p_vec[1]))
    return cmath.exp(1j * (pr - params.d_alpha * pm**params.alpha * t) / params.hbar)
