"""Time-independent Green's functions G+, G- and G (principal value).

With kappa = E / D and x = r kappa^(1/alpha) / hbar,

    G+(r) = kappa^((2-alpha)/alpha) / (2 alpha hbar^2 i) [J0(x) + i H0(x)]
          + kappa^((2-alpha)/alpha) / (2 alpha pi hbar^2) * g(x),
    g(x)  = cos(2 pi/alpha) H1(2x) + sin(2 pi/alpha) H2(2x),

where H1, H2 are H^{2,3}_{4,4} functions (see :func:`h1_spec`).  Their
Mellin-Barnes integrands have double poles for every rational alpha, so
they are summed with the general residue evaluator.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special as sc
from scipy.interpolate import CubicSpline

from . import specfun
from ._rational import as_number
from .errors import RegimeWarning, SingularityError
from .foxh import EvalResult, HFunctionSpec, eval_residues
from .green_td import FractionalParams

X_ASYMPTOTIC_MIN = specfun.CROSSOVER


def lambda_of_alpha(alpha) -> float:
    """lambda = -arctan(cot(pi/alpha))/pi, in [0, 1/2)."""
    alpha = float(alpha)
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")
    if alpha == 2.0:
        return 0.0  # cot(pi/2) is 0 exactly; avoid the 6e-17 of cos(pi/2)
    return -math.atan(1.0 / math.tan(math.pi / alpha)) / math.pi


def _lambda_exact(alpha):
    # arctan(cot(pi/alpha)) = pi/2 - pi/alpha on (1, 2], hence lambda = 1/alpha - 1/2
    a = as_number(alpha)
    return 1 / a - Fraction(1, 2) if isinstance(a, Fraction) else lambda_of_alpha(a)


@dataclass(frozen=True)
class TIContext:
    params: FractionalParams
    energy: float

    def __post_init__(self):
        if not self.energy > 0:
            raise ValueError("energy must be positive (scattering states, E > 0)")

    @property
    def kappa(self) -> float:
        return self.energy / self.params.d_alpha

    @property
    def lam(self) -> float:
        return lambda_of_alpha(self.params.alpha)

    @property
    def k_mag(self) -> float:
        """|k| = kappa^(1/alpha) / hbar."""
        return self.kappa ** (1.0 / self.params.alpha) / self.params.hbar

    def x_of(self, r) -> float:
        return r * self.k_mag


def h1_spec(ctx_or_alpha) -> HFunctionSpec:
    a = as_number(_alpha(ctx_or_alpha))
    lam = _lambda_exact(a)
    half = Fraction(1, 2)
    return HFunctionSpec(
        2, 3, 4, 4,
        ((half, half), (half, half), (1 - 2 / a, 1 / a), (half, lam)),
        ((0, 1), (1 - 2 / a, 1 / a), (0, 1), (half, lam)),
    )


def h2_spec(ctx_or_alpha) -> HFunctionSpec:
    a = as_number(_alpha(ctx_or_alpha))
    lam = _lambda_exact(a)
    half = Fraction(1, 2)
    return HFunctionSpec(
        2, 3, 4, 4,
        ((half, half), (half, half), (1 - 2 / a, 1 / a), (0, lam)),
        ((0, 1), (1 - 2 / a, 1 / a), (0, 1), (0, lam)),
    )


def _alpha(obj):
    if isinstance(obj, TIContext):
        return obj.params.alpha
    if isinstance(obj, FractionalParams):
        return obj.alpha
    return obj


def script_h(which: int, x, alpha, tol: float = 1e-16) -> EvalResult:
    """H1 or H2 at argument 2x."""
    if x <= 0:
        raise SingularityError("H1/H2 need x > 0")
    spec = h1_spec(alpha) if which == 1 else h2_spec(alpha)
    return eval_residues(spec, 2.0 * x, tol)


def script_i1(r, ctx_or_alpha, tol: float = 1e-16) -> float:
    """(pi / 2 alpha) H1(2r): the theta-integrated damped cosine integral."""
    alpha = float(_alpha(ctx_or_alpha))
    return math.pi / (2 * alpha) * script_h(1, r, alpha, tol).value.real


def script_i2(r, ctx_or_alpha, tol: float = 1e-16) -> float:
    """-(pi / 2 alpha) H2(2r): the theta-integrated damped sine integral."""
    alpha = float(_alpha(ctx_or_alpha))
    return -math.pi / (2 * alpha) * script_h(2, r, alpha, tol).value.real


def _prefactor(ctx: TIContext) -> float:
    al = ctx.params.alpha
    return ctx.kappa ** ((2.0 - al) / al) / (2.0 * al * ctx.params.hbar**2)


def green_ti_plus(r, ctx: TIContext, tol: float = 1e-16) -> EvalResult:
    """Outgoing-wave Green's function G+(r)."""
    if r <= 0:
        raise SingularityError("G+ is singular at r = 0")
    al = ctx.params.alpha
    x = ctx.x_of(r)
    pref = _prefactor(ctx)
    j0 = specfun.bessel_j0(x)
    h0 = specfun.struve_h0(x)
    c, s = math.cos(2 * math.pi / al), math.sin(2 * math.pi / al)
    r1 = script_h(1, x, al, tol)
    g = c * r1.value.real
    err = abs(c) * r1.abs_err_estimate
    terms = r1.terms_used
    if s != 0.0 and al != 2.0:
        r2 = script_h(2, x, al, tol)
        g += s * r2.value.real
        err += abs(s) * r2.abs_err_estimate
        terms += r2.terms_used
    val = pref / 1j * complex(j0, h0) + pref / math.pi * g
    # special-function layer is good to ~1e-13 relative
    err = pref / math.pi * err + pref * 1e-13 * (abs(j0) + abs(h0) + abs(g))
    return EvalResult(val, err, terms, "series", {"x": x})


def green_ti_minus(r, ctx: TIContext, tol: float = 1e-16) -> EvalResult:
    """Incoming-wave Green's function, the complex conjugate of G+."""
    res = green_ti_plus(r, ctx, tol)
    return EvalResult(res.value.conjugate(), res.abs_err_estimate, res.terms_used, res.method, res.info)


def green_ti_principal(r, ctx: TIContext, tol: float = 1e-16) -> EvalResult:
    """Principal-value Green's function (G+ + G-)/2 = Re G+."""
    res = green_ti_plus(r, ctx, tol)
    return EvalResult(complex(res.value.real, 0.0), res.abs_err_estimate, res.terms_used, res.method, res.info)


def green_ti_asymptotic(r, ctx: TIContext, warn: bool = True) -> EvalResult:
    """Outgoing cylindrical wave, the leading large-x form of G+.

    The error estimate adds the first Hankel correction, |G|/(8x), and the
    1/x size of the Struve-minus-Neumann part that the leading form drops.
    """
    if r <= 0:
        raise SingularityError("G+ is singular at r = 0")
    al, hb = ctx.params.alpha, ctx.params.hbar
    kap = ctx.kappa
    x = ctx.x_of(r)
    if warn and x < X_ASYMPTOTIC_MIN:
        warnings.warn(f"asymptotic regime not reached (x={x:.3g} < {X_ASYMPTOTIC_MIN})", RegimeWarning, stacklevel=2)
    amp = -kap ** ((3.0 - 2.0 * al) / (2.0 * al)) / (al * math.sqrt(2.0 * math.pi * r * hb**3))
    val = amp * cmath.exp(1j * (math.pi / 4 + x))
    err = abs(amp) / (8.0 * x)
    if al != 2.0:
        err += _prefactor(ctx) * 2.0 / (math.pi * x)
    return EvalResult(val, err, 1, "asymptotic", {"x": x, "regime_ok": x >= X_ASYMPTOTIC_MIN})


def green_ti(r, ctx: TIContext, kind: str = "plus", method: str = "series", tol: float = 1e-16) -> EvalResult:
    """Dispatch helper used by the CLI: kind in {plus, minus, principal}."""
    if method == "asymptotic":
        res = green_ti_asymptotic(r, ctx)
        if kind == "minus":
            res.value = res.value.conjugate()
        elif kind == "principal":
            res.value = complex(res.value.real, 0.0)
        return res
    fn = {"plus": green_ti_plus, "minus": green_ti_minus, "principal": green_ti_principal}[kind]
    return fn(r, ctx, tol)


class RadialKernel:
    """Vectorised G+(r) for kernel tables on grids.

    J0 and H0 are evaluated directly (scipy.special); the smooth,
    non-oscillatory remainder g(x) is splined in log x from exact values,
    after scaling by x^(2-alpha) (1+x)^(alpha-1) so the splined quantity
    stays bounded at both ends.  At alpha = 2 the remainder is
    -pi (H0 - Y0)(x) and the kernel is exactly -(i/4) H0^(1) up to the
    prefactor, so no table is built.
    """

    def __init__(self, ctx: TIContext, r_max: float, per_decade: int = 10, x_min: float = 1e-3, tol: float = 1e-14):
        self.ctx = ctx
        self.alpha = ctx.params.alpha
        self.pref = _prefactor(ctx)
        self.k = ctx.k_mag
        self.x_max = max(ctx.x_of(r_max), 10 * x_min)
        self.spline = None
        if self.alpha != 2.0:
            al = self.alpha
            c, s = math.cos(2 * math.pi / al), math.sin(2 * math.pi / al)
            n = max(8, int(math.ceil(per_decade * math.log10(self.x_max / x_min))) + 1)
            u = np.linspace(math.log(x_min), math.log(self.x_max), n)
            vals = []
            for x in np.exp(u):
                g = c * script_h(1, x, al, tol).value.real + s * script_h(2, x, al, tol).value.real
                vals.append(g * self._scale(x))
            self.spline = CubicSpline(u, vals)

    def _scale(self, x):
        return x ** (2.0 - self.alpha) * (1.0 + x) ** (self.alpha - 1.0)

    def remainder(self, x):
        """g(x) = cos(2pi/alpha) H1(2x) + sin(2pi/alpha) H2(2x)."""
        x = np.asarray(x, dtype=float)
        if self.spline is None:
            return -math.pi * (sc.struve(0, x) - sc.y0(x))
        return self.spline(np.log(x)) / self._scale(x)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise SingularityError("G+ is singular at r = 0")
        x = r * self.k
        if self.spline is None:
            return -1j * self.pref * (sc.j0(x) + 1j * sc.y0(x))
        return self.pref / 1j * (sc.j0(x) + 1j * sc.struve(0, x)) + self.pref / math.pi * self.remainder(x)

