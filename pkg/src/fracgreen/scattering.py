"""Incident waves, potentials and the Born approximation in 2D.

Time-independent scattering solves phi = e^{ik.r} + int g(r - r0) V(r0)
phi(r0) d^2 r0 with g = G+/D_alpha.  In the far field the first Born
iterate becomes

    phi(r) ~ e^{ik.r} - kappa^{3/(2 alpha)-1} e^{i(k r + pi/4)}
                      / (sqrt(2 pi r hbar^3) alpha D_alpha) * Vhat(q),

with Vhat(q) = int e^{-i q.r0} V(r0) d^2 r0 and q = k_f - k.  Spatial
integrals use the tensor-product midpoint rule on a square lattice.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline, RegularGridInterpolator
from scipy.signal import fftconvolve

from .errors import FarFieldViolation, NoConvergence, SingularityError, UnderResolved
from .green_td import FractionalParams, plane_wave_td
from .green_ti import RadialKernel, TIContext

FAR_FIELD_FACTOR = 5.0
MAX_PHASE_STEP = 0.5
SUPPORT_LEVEL = 1e-6  # |V| below this fraction of |V0| counts as outside the support
QUAD_LEVEL = 1e-16  # quadrature boxes extend until the Gaussian falls below this
PULSE_WIDTHS = 6.0


@dataclass(frozen=True)
class TimeProfile:
    """Temporal factor of a separable potential V(r, t) = V(r) f(t)."""

    kind: str = "static"
    t0: float = 0.0
    tau: float = 1.0

    def __post_init__(self):
        if self.kind not in ("static", "gaussian_pulse"):
            raise ValueError(f"unknown time profile {self.kind!r}")
        if self.kind == "gaussian_pulse" and not self.tau > 0:
            raise ValueError("pulse width tau must be positive")

    @property
    def static(self) -> bool:
        return self.kind == "static"

    def __call__(self, t):
        if self.static:
            return np.ones_like(np.asarray(t, dtype=float))
        return np.exp(-0.5 * ((np.asarray(t, dtype=float) - self.t0) / self.tau) ** 2)

    def window(self):
        """Support in time, (-inf, inf) when static."""
        if self.static:
            return -math.inf, math.inf
        return self.t0 - PULSE_WIDTHS * self.tau, self.t0 + PULSE_WIDTHS * self.tau


@dataclass(frozen=True)
class PotentialSpec:
    """Declarative 2D potential: gaussian, disk, ring or sampled.

    gaussian: v0 exp(-|r - c|^2 / (2 sigma^2)); disk: v0 inside ``radius``;
    ring: v0 for r_in <= |r - c| <= r_out; sampled: v0 times bilinear
    interpolation of ``samples`` (rows along y) laid out with ``spacing``
    and centred on ``center``, zero outside.
    """

    kind: str
    v0: float
    sigma: Optional[float] = None
    radius: Optional[float] = None
    r_in: Optional[float] = None
    r_out: Optional[float] = None
    samples: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    spacing: Optional[float] = None
    center: tuple = (0.0, 0.0)
    time_profile: TimeProfile = TimeProfile()

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        k = self.kind
        if k == "gaussian":
            _positive(self.sigma, "sigma")
        elif k == "disk":
            _positive(self.radius, "radius")
        elif k == "ring":
            _positive(self.r_out, "r_out")
            if self.r_in is None or not (0 <= self.r_in < self.r_out):
                raise ValueError("ring needs 0 <= r_in < r_out")
        elif k == "sampled":
            _positive(self.spacing, "spacing")
            arr = np.array(self.samples, dtype=complex)
            if arr.ndim != 2 or min(arr.shape) < 2:
                raise ValueError("samples must be a 2D array with at least 2x2 nodes")
            if not np.all(np.isfinite(arr)):
                raise ValueError("samples must be finite")
            arr.setflags(write=False)
            object.__setattr__(self, "samples", arr)
        else:
            raise ValueError(f"unknown potential kind {k!r}")
        if not math.isfinite(self.v0):
            raise ValueError("v0 must be finite")

    # geometry -------------------------------------------------------------

    def support_radius(self) -> float:
        """Radius about ``center`` outside which |V| < SUPPORT_LEVEL |V0|."""
        if self.kind == "gaussian":
            return self.sigma * math.sqrt(2.0 * math.log(1.0 / SUPPORT_LEVEL))
        if self.kind == "disk":
            return self.radius
        if self.kind == "ring":
            return self.r_out
        ny, nx = self.samples.shape
        return 0.5 * self.spacing * math.hypot(nx - 1, ny - 1)

    def extent(self) -> float:
        """R_V: support radius measured from the origin."""
        return math.hypot(*self.center) + self.support_radius()

    def quadrature_radius(self) -> float:
        if self.kind == "gaussian":
            return self.sigma * math.sqrt(2.0 * math.log(1.0 / QUAD_LEVEL))
        return self.support_radius()

    def feature_length(self) -> float:
        """Smallest length the quadrature grid must resolve."""
        if self.kind == "gaussian":
            return self.sigma
        if self.kind == "disk":
            return self.radius / 4
        if self.kind == "ring":
            return (self.r_out - self.r_in) / 2
        return self.spacing

    # values ---------------------------------------------------------------

    def spatial(self, x, y):
        """V(r) without the time profile."""
        x = np.asarray(x, dtype=float) - self.center[0]
        y = np.asarray(y, dtype=float) - self.center[1]
        rr = np.hypot(x, y)
        if self.kind == "gaussian":
            return self.v0 * np.exp(-0.5 * (rr / self.sigma) ** 2)
        if self.kind == "disk":
            return np.where(rr <= self.radius, self.v0, 0.0)
        if self.kind == "ring":
            return np.where((rr >= self.r_in) & (rr <= self.r_out), self.v0, 0.0)
        ny, nx = self.samples.shape
        xs = (np.arange(nx) - 0.5 * (nx - 1)) * self.spacing
        ys = (np.arange(ny) - 0.5 * (ny - 1)) * self.spacing
        vals = self.samples if np.any(self.samples.imag) else self.samples.real
        interp = RegularGridInterpolator((ys, xs), vals, bounds_error=False, fill_value=0.0)
        pts = np.stack(np.broadcast_arrays(y, x), axis=-1)
        return self.v0 * interp(pts)

    def __call__(self, x, y, t=None):
        v = self.spatial(x, y)
        return v if t is None else v * self.time_profile(t)

    def scaled(self, factor: float) -> "PotentialSpec":
        """Same shape with v0 multiplied by ``factor``."""
        d = dict(self.__dict__)
        d["v0"] = self.v0 * factor
        return PotentialSpec(**d)

    def gaussian_transform(self, q_vec) -> complex:
        """Analytic Vhat(q) of a Gaussian: V0 2 pi sigma^2 e^{-q^2 sigma^2/2} e^{-i q.c}."""
        if self.kind != "gaussian":
            raise ValueError("closed-form transform exists only for the gaussian kind")
        qx, qy = float(q_vec[0]), float(q_vec[1])
        q2 = qx * qx + qy * qy
        ph = cmath.exp(-1j * (qx * self.center[0] + qy * self.center[1]))
        return self.v0 * 2.0 * math.pi * self.sigma**2 * math.exp(-0.5 * q2 * self.sigma**2) * ph

    # serialisation --------------------------------------------------------

    @classmethod
    def from_dict(cls, d: dict) -> "PotentialSpec":
        d = dict(d)
        kind = d.pop("kind")
        tp = d.pop("time_profile", None) or {"kind": "static"}
        tp = TimeProfile(tp.get("kind", "static"), float(tp.get("t0", 0.0)), float(tp.get("tau", 1.0)))
        v0 = float(d.pop("v0"))
        center = tuple(d.pop("center", (0.0, 0.0)))
        samples = d.pop("samples", d.pop("values", None))
        known = {"sigma", "radius", "r_in", "r_out", "spacing"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown potential fields: {sorted(extra)}")
        kw = {k: float(v) for k, v in d.items()}
        if samples is not None:
            kw["samples"] = np.asarray(samples, dtype=float)
        return cls(kind, v0, center=center, time_profile=tp, **kw)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "v0": self.v0, "center": list(self.center)}
        for k in ("sigma", "radius", "r_in", "r_out", "spacing"):
            if getattr(self, k) is not None:
                d[k] = getattr(self, k)
        if self.samples is not None:
            d["samples"] = self.samples.real.tolist()
        tp = self.time_profile
        d["time_profile"] = {"kind": tp.kind} if tp.static else {"kind": tp.kind, "t0": tp.t0, "tau": tp.tau}
        return d


def _positive(v, name):
    if v is None or not (v > 0 and math.isfinite(v)):
        raise ValueError(f"{name} must be a positive number")


@dataclass(frozen=True)
class QuadSpec:
    """Midpoint-rule settings.  ``dx=None`` picks feature/4 capped by the phase."""

    dx: Optional[float] = None
    half_width: Optional[float] = None
    self_cell: Optional[str] = "numeric"

    def grid(self, potential: PotentialSpec, q: float = 0.0):
        """Cell-centred nodes covering the potential, as (x, y, dx)."""
        dx = self.dx
        if dx is None:
            dx = potential.feature_length() / 4
            if q > 0:
                dx = min(dx, 0.8 * MAX_PHASE_STEP / q)
        hw = self.half_width if self.half_width is not None else potential.quadrature_radius()
        n = 2 * max(1, math.ceil(hw / dx))
        offs = (np.arange(n) - 0.5 * (n - 1)) * dx
        return potential.center[0] + offs, potential.center[1] + offs, dx


@dataclass(frozen=True)
class ScatteringGeometry:
    """Incident wavevector and scattering angle (radians, counter-clockwise)."""

    k_inc: tuple
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "k_inc", (float(self.k_inc[0]), float(self.k_inc[1])))

    @classmethod
    def from_context(cls, ctx: TIContext, direction: float = 0.0, theta: float = 0.0):
        k = ctx.k_mag
        return cls((k * math.cos(direction), k * math.sin(direction)), theta)

    @property
    def k_mag(self) -> float:
        return math.hypot(*self.k_inc)

    @property
    def k_f(self) -> tuple:
        c, s = math.cos(self.theta), math.sin(self.theta)
        kx, ky = self.k_inc
        return (c * kx - s * ky, s * kx + c * ky)

    @property
    def q(self) -> tuple:
        kf = self.k_f
        return (kf[0] - self.k_inc[0], kf[1] - self.k_inc[1])


def plane_wave_ti(r_vec, geom: ScatteringGeometry) -> complex:
    """e^{i k.r}."""
    return cmath.exp(1j * (geom.k_inc[0] * float(r_vec[0]) + geom.k_inc[1] * float(r_vec[1])))


def momentum_transfer(geom: ScatteringGeometry, ctx: TIContext) -> float:
    """q = 2 kappa^(1/alpha) sin(theta/2) / hbar for theta in [0, pi]."""
    if not (0.0 <= geom.theta <= math.pi):
        raise ValueError("scattering angle must lie in [0, pi]")
    return 2.0 * ctx.k_mag * math.sin(0.5 * geom.theta)


def fourier_transform(potential: PotentialSpec, q_vec, quad: QuadSpec = QuadSpec()) -> complex:
    """Midpoint-rule Vhat(q) = int e^{-i q.r0} V(r0) d^2 r0."""
    qx, qy = float(q_vec[0]), float(q_vec[1])
    q = math.hypot(qx, qy)
    xs, ys, dx = quad.grid(potential, q)
    if q * dx > MAX_PHASE_STEP:
        raise UnderResolved(f"under-resolved phase: q*dx = {q * dx:.3g} > {MAX_PHASE_STEP}")
    X, Y = np.meshgrid(xs, ys)
    v = potential.spatial(X, Y)
    return complex(np.sum(v * np.exp(-1j * (qx * X + qy * Y))) * dx * dx)


def born_coefficient(ctx: TIContext, r: float) -> float:
    """Real factor multiplying e^{i(k r + pi/4)} Vhat(q) in the far field."""
    p = ctx.params
    al = p.alpha
    return -ctx.kappa ** (1.5 / al - 1.0) / (math.sqrt(2.0 * math.pi * r * p.hbar**3) * al * p.d_alpha)


def scattering_amplitude(theta: float, ctx: TIContext, potential: PotentialSpec, quad: QuadSpec = QuadSpec(), direction: float = 0.0) -> complex:
    """f(theta) with phi_sc ~ f(theta) e^{i k r} / sqrt(r) in first Born order."""
    geom = ScatteringGeometry.from_context(ctx, direction, theta)
    vq = fourier_transform(potential, geom.q, quad)
    return born_coefficient(ctx, 1.0) * cmath.exp(0.25j * math.pi) * vq


def born1_ti(r_vec, geom: ScatteringGeometry, ctx: TIContext, potential: PotentialSpec, quad: QuadSpec = QuadSpec()) -> complex:
    """First Born wave function at a far-field point.

    The outgoing direction is that of ``r_vec``: k_f = |k| r/r; geom.theta
    is not consulted.
    """
    x, y = float(r_vec[0]), float(r_vec[1])
    r = math.hypot(x, y)
    rv = potential.extent()
    if r < FAR_FIELD_FACTOR * rv:
        raise FarFieldViolation(f"far-field violated: r = {r:.4g} < {FAR_FIELD_FACTOR:g} R_V = {FAR_FIELD_FACTOR * rv:.4g}")
    k = ctx.k_mag
    kf = (k * x / r, k * y / r)
    q = (kf[0] - geom.k_inc[0], kf[1] - geom.k_inc[1])
    vq = fourier_transform(potential, q, quad)
    return plane_wave_ti(r_vec, geom) + born_coefficient(ctx, r) * cmath.exp(1j * (k * r + 0.25 * math.pi)) * vq


# ---------------------------------------------------------------------------
# time-dependent first Born term


@dataclass
class BornTDResult:
    value: complex
    scattered: complex
    abs_err_estimate: float
    evaluations: int
    info: dict


def _td_kernel_constants(R, params: FractionalParams):
    """Amplitude A, phase Phi and exponent beta of A tau^-beta e^{i Phi tau^-beta}."""
    al, D, hb = params.alpha, params.d_alpha, params.hbar
    beta = 1.0 / (al - 1.0)
    amp = -(al * D * R ** (al - 2.0)) ** (-beta) / (2.0 * math.pi * hb**2 * math.sqrt(al - 1.0))
    phi = (al - 1.0) / hb * ((R / al) ** al / D) ** beta
    return amp, phi, beta


def _fourier_tail(h, a, omega, tol):
    """int_a^inf h(u) e^{i omega u} du for slowly varying complex h (QUADPACK QAWF)."""
    out = 0j
    n = 0
    for part, sgn in ((lambda u: h(u).real, 1.0), (lambda u: h(u).imag, 1j)):
        c, ec, ic = integrate.quad(part, a, math.inf, weight="cos", wvar=omega, epsabs=tol, limlst=200, full_output=1)[:3]
        s, es, is_ = integrate.quad(part, a, math.inf, weight="sin", wvar=omega, epsabs=tol, limlst=200, full_output=1)[:3]
        out += sgn * (c + 1j * s)
        n += ic.get("neval", 0) + is_.get("neval", 0)
    return out, n


def _cquad(f, a, b, tol, limit=400):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, complex_func=True, epsabs=tol, epsrel=tol, limit=limit)
    return val, abs(err)


def td_time_integral(R, t, params: FractionalParams, energy: float, profile: TimeProfile, tol: float = 1e-10):
    """int K(R, tau) f(t - tau) e^{-i E (t - tau)/hbar} dtau over the causal window.

    K is the far-field time-dependent kernel A tau^-beta e^{i Phi tau^-beta}.
    Near tau = 0 the substitution u = tau^-beta turns the essential
    oscillation into a Fourier tail in u; for a static potential the
    tau -> infinity tail is a Fourier integral with frequency E/hbar.
    Returns (value, evaluations).
    """
    hb = params.hbar
    amp, phi, beta = _td_kernel_constants(R, params)
    lo_t, hi_t = profile.window()
    tau_hi = t - lo_t
    tau_lo = max(0.0, t - hi_t)
    if tau_hi <= 0:
        return 0j, 0
    w = energy / hb

    def F(tp):
        return float(profile(tp)) * cmath.exp(-1j * w * tp)

    def k_tau(tau):
        return amp * tau ** (-beta) * cmath.exp(1j * phi * tau ** (-beta)) * F(t - tau)

    # stationary point of phi tau^-beta + w tau separates the two fast regimes
    tau_s = (beta * phi / w) ** (1.0 / (beta + 1.0)) if w > 0 else 1.0
    a = min(tau_s / 4.0, 0.5 * tau_hi) if math.isfinite(tau_hi) else tau_s / 4.0
    b = 4.0 * tau_s if not math.isfinite(tau_hi) else tau_hi
    total, n = 0j, 0
    if tau_lo == 0.0:
        def h(u):
            tau = u ** (-1.0 / beta)
            return amp / beta * u ** (-1.0 / beta) * F(t - tau)

        v, m = _fourier_tail(h, a ** (-beta), phi, tol)
        total += v
        n += m
        start = a
    else:
        start = tau_lo
    if b > start:
        v, _ = _cquad(k_tau, start, b, tol)
        total += v
        n += 1
    if not math.isfinite(tau_hi):
        def h2(tau):
            return amp * tau ** (-beta) * cmath.exp(1j * phi * tau ** (-beta))

        v, m = _fourier_tail(h2, b, w, tol)
        total += v * cmath.exp(-1j * w * t)
        n += m
    return total, n


def born1_td(
    r_vec,
    t: float,
    p_vec,
    params: FractionalParams,
    potential: PotentialSpec,
    quad: QuadSpec = QuadSpec(),
    tol: float = 1e-10,
    n_radial: Optional[int] = None,
) -> BornTDResult:
    """psi0 plus the first Born term with the far-field time-dependent kernel.

    The kernel amplitude uses |r - r'| ~ r as in the far-field reduction; the
    phase keeps the exact distance |r - r'|, so that different parts of the
    potential interfere and the result carries the angular dependence of
    the stationary-phase limit.  psi0 = e^{i(p.r - E t)/hbar}, E = D |p|^alpha.
    The time integral over t' is tabulated in R = |r - r'| and splined.
    """
    x, y = float(r_vec[0]), float(r_vec[1])
    r = math.hypot(x, y)
    rv = potential.extent()
    if r < FAR_FIELD_FACTOR * rv:
        raise FarFieldViolation(f"far-field violated: r = {r:.4g} < {FAR_FIELD_FACTOR:g} R_V = {FAR_FIELD_FACTOR * rv:.4g}")
    p = (float(p_vec[0]), float(p_vec[1]))
    pm = math.hypot(*p)
    energy = params.d_alpha * pm**params.alpha
    psi0 = plane_wave_td((x, y), t, p, params)
    if potential.v0 == 0.0:
        return BornTDResult(psi0, 0j, 0.0, 0, {"window": potential.time_profile.window()})
    k_out = pm / params.hbar
    xs, ys, dx = quad.grid(potential, 2.0 * k_out)
    if 2.0 * k_out * dx > MAX_PHASE_STEP:
        raise UnderResolved(f"under-resolved phase: q*dx = {2 * k_out * dx:.3g} > {MAX_PHASE_STEP}")
    X, Y = np.meshgrid(xs, ys)
    V = potential.spatial(X, Y)
    mask = np.abs(V) > 0
    R = np.hypot(x - X[mask], y - Y[mask])
    amp_r = _td_kernel_constants(r, params)[0]
    # the amplitude is frozen at R = r: rescale each tabulated value
    r_lo, r_hi = R.min(), R.max()
    if n_radial is None:
        n_radial = max(16, int(math.ceil((r_hi - r_lo) * max(k_out, 1.0 / rv) * 8)) + 1)
    grid_r = np.linspace(r_lo, r_hi, n_radial) if r_hi > r_lo else np.array([r_lo])
    vals, evals = [], 0
    for Rk in grid_r:
        v, m = td_time_integral(Rk, t, params, energy, potential.time_profile, tol)
        vals.append(v * amp_r / _td_kernel_constants(Rk, params)[0])
        evals += m
    vals = np.array(vals)
    if len(grid_r) > 1:
        spl_re, spl_im = CubicSpline(grid_r, vals.real), CubicSpline(grid_r, vals.imag)
        kern = spl_re(R) + 1j * spl_im(R)
    else:
        kern = np.full(R.shape, vals[0])
    src = V[mask] * np.exp(1j * (p[0] * X[mask] + p[1] * Y[mask]) / params.hbar)
    scat = complex(np.sum(kern * src) * dx * dx)
    info = {"window": potential.time_profile.window(), "radial_nodes": len(grid_r)}
    if not potential.time_profile.static:
        info["time_window_truncation"] = math.exp(-0.5 * PULSE_WIDTHS**2)
    return BornTDResult(psi0 + scat, scat, tol * float(np.sum(np.abs(src))) * dx * dx, evals, info)


# ---------------------------------------------------------------------------
# Born iteration on a grid


@dataclass(frozen=True)
class WaveField:
    """Complex field on a uniform square lattice; values[iy, ix]."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    order: int
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("x", "y", "values"):
            arr = np.array(getattr(self, name), dtype=complex if name == "values" else float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.values.shape != (len(self.y), len(self.x)):
            raise ValueError("values must have shape (len(y), len(x))")
        dxs = np.diff(self.x)
        dys = np.diff(self.y)
        if len(dxs) == 0 or len(dys) == 0:
            raise ValueError("grid needs at least two nodes per axis")
        h = dxs[0]
        if not (np.allclose(dxs, h, rtol=1e-9, atol=0) and np.allclose(dys, h, rtol=1e-9, atol=0)):
            raise ValueError("grid must be uniform with equal spacing in x and y")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def mesh(self):
        return np.meshgrid(self.x, self.y)


def square_grid(half_width: float, dx: float, center=(0.0, 0.0)):
    """Cell-centred coordinates covering [-half_width, half_width]^2 about center."""
    n = 2 * max(1, math.ceil(half_width / dx))
    offs = (np.arange(n) - 0.5 * (n - 1)) * dx
    return center[0] + offs, center[1] + offs


def initial_field(x, y, geom: ScatteringGeometry, ctx: TIContext, potential: Optional[PotentialSpec] = None, t: Optional[float] = None) -> WaveField:
    """phi^(0) = e^{ik.r}; with ``t`` the time-dependent psi0 = e^{i(k.r - E t/hbar)}."""
    X, Y = np.meshgrid(np.asarray(x, float), np.asarray(y, float))
    vals = np.exp(1j * (geom.k_inc[0] * X + geom.k_inc[1] * Y))
    if t is not None:
        vals = vals * cmath.exp(-1j * ctx.energy * t / ctx.params.hbar)
    meta = {
        "alpha": ctx.params.alpha,
        "d_alpha": ctx.params.d_alpha,
        "hbar": ctx.params.hbar,
        "energy": ctx.energy,
        "k_inc": list(geom.k_inc),
        "t": t,
    }
    if potential is not None:
        meta["potential"] = potential.to_dict()
    return WaveField(x, y, vals, 0, meta)


_KERNEL_CACHE: dict = {}


def kernel_for(ctx: TIContext, r_max: float) -> RadialKernel:
    """Cached RadialKernel covering distances up to r_max."""
    p = ctx.params
    key = (p.alpha, p.d_alpha, p.hbar, ctx.energy)
    k = _KERNEL_CACHE.get(key)
    if k is None or k.x_max < ctx.x_of(r_max):
        k = RadialKernel(ctx, r_max)
        _KERNEL_CACHE[key] = k
    return k


def self_cell_integral(kernel: RadialKernel, dx: float, tol: float = 1e-10) -> complex:
    """int over the square cell [-dx/2, dx/2]^2 of G+(|rho|) d^2 rho.

    Polar form 8 int_0^{pi/4} dtheta int_0^{h/cos theta} G(rho) rho drho;
    G rho is integrable at 0 (log or rho^(alpha-1) behaviour).
    """
    h = 0.5 * dx
    nodes, weights = np.polynomial.legendre.leggauss(24)
    th = 0.125 * math.pi * (nodes + 1.0)
    total = 0j
    for t_, w_ in zip(th, weights):
        v, _ = _cquad(lambda rho: complex(kernel(rho)) * rho, 0.0, h / math.cos(t_), tol)
        total += w_ * v
    return 8.0 * 0.125 * math.pi * total


def born_iterate(
    field_prev: WaveField,
    green: str,
    potential: PotentialSpec,
    ctx: TIContext,
    quad: QuadSpec = QuadSpec(),
    kernel: Optional[RadialKernel] = None,
) -> WaveField:
    """phi^(n) = phi^(0) + int g(r - r0) V(r0) phi^(n-1)(r0) d^2 r0, g = G+/D.

    The integral is the midpoint rule on the field's own lattice, done as
    an FFT convolution.  The coincident node uses the cell average of G+
    (``quad.self_cell == "numeric"``); with ``self_cell=None`` a coincident
    source node is an error.  ``green="td"`` iterates the time-dependent
    equation for a static potential and a monochromatic incident wave at
    the field's time t: the time integral of the retarded kernel against
    e^{iE tau/hbar} equals G+/D, so each slice follows the same recursion
    times e^{-iEt/hbar}.
    """
    if green not in ("ti", "td"):
        raise ValueError("green must be 'ti' or 'td'")
    phase = 1.0 + 0j
    if green == "td":
        if not potential.time_profile.static:
            raise ValueError("the time-dependent iteration needs a static potential")
        t = field_prev.meta.get("t")
        if t is None:
            raise ValueError("time-dependent iteration needs meta['t']")
        phase = cmath.exp(-1j * ctx.energy * t / ctx.params.hbar)
    dx = field_prev.dx
    X, Y = field_prev.mesh()
    V = potential.spatial(X, Y)
    k_inc = field_prev.meta.get("k_inc")
    if k_inc is None:
        raise ValueError("field meta must carry k_inc")
    phi0 = np.exp(1j * (k_inc[0] * X + k_inc[1] * Y))
    ny, nx = V.shape
    if not np.any(V):
        return WaveField(field_prev.x, field_prev.y, phi0 * phase, field_prev.order + 1, dict(field_prev.meta))
    r_max = dx * math.hypot(nx, ny)
    kern = kernel if kernel is not None else kernel_for(ctx, r_max)
    iy = np.arange(-(ny - 1), ny)[:, None] * dx
    ix = np.arange(-(nx - 1), nx)[None, :] * dx
    rho = np.hypot(iy, ix)
    rho[ny - 1, nx - 1] = 1.0  # placeholder, replaced below
    K = kern(rho)
    if quad.self_cell == "numeric":
        K[ny - 1, nx - 1] = self_cell_integral(kern, dx) / (dx * dx)
    elif quad.self_cell is None:
        raise SingularityError("kernel singularity unresolved: source nodes coincide with evaluation nodes")
    else:
        raise ValueError(f"unknown self_cell treatment {quad.self_cell!r}")
    src = V * (field_prev.values / phase) * (dx * dx / ctx.params.d_alpha)
    conv = fftconvolve(src, K, mode="full")[ny - 1 : 2 * ny - 1, nx - 1 : 2 * nx - 1]
    vals = (phi0 + conv) * phase
    if not np.all(np.isfinite(vals)):
        raise NoConvergence("born iteration produced non-finite values")
    return WaveField(field_prev.x, field_prev.y, vals, field_prev.order + 1, dict(field_prev.meta))


def born_series(field0: WaveField, green: str, potential: PotentialSpec, ctx: TIContext, order: int, quad: QuadSpec = QuadSpec()):
    """[phi^(0), ..., phi^(order)] sharing one kernel table."""
    out = [field0]
    dx = field0.dx
    kern = kernel_for(ctx, dx * math.hypot(len(field0.x), len(field0.y)))
    for _ in range(order):
        out.append(born_iterate(out[-1], green, potential, ctx, quad, kernel=kern))
    return out
