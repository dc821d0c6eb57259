"""Arbitrary-precision summation engines behind the Fox H-function series.

Two engines live here:

* :func:`sum_gamma_series` sums ``T_k = c (-1)^k prod Gamma(u + v k)^{+-1}
  z^(e0 + e1 k)``.  When every slope ``v`` is rational the ratio
  ``T_{k+Q} / T_k`` is an exact rational number, so each new term costs a
  couple of integer multiplications regardless of working precision.
* :func:`sum_residues` sums residues of a Mellin-Barnes integrand at poles of
  any order, using Laurent expansions built from polygamma values.

Both choose the working precision from the observed cancellation: a first
estimate comes from double-precision log-magnitudes, and a run is repeated
at higher precision if the ratio of the largest term to the sum demands it.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np
from mpmath.libmp import MPZ
from scipy.special import gammaln

from ._rational import common_denominator, nonpositive_integer
from .errors import GammaPoleError, NoConvergence, PrecisionBudgetExceeded

TARGET_DIGITS = 17
DEFAULT_MAX_DPS = 40000
_MAX_Q = 720


@dataclass
class SeriesSum:
    value: complex
    abs_err: float
    terms: int
    dps: int
    peak_log10: float


@dataclass(frozen=True)
class GammaFactor:
    """Gamma(u + v k) raised to ``power`` (+1 numerator, -1 denominator)."""

    u: object
    v: object
    power: int


def _mpnum(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _mpz(z: complex):
    if z.imag == 0.0:
        return mpmath.mpf(z.real)
    return mpmath.mpc(z.real, z.imag)


def _log10_abs(x) -> float:
    if x == 0:
        return -math.inf
    return float(mpmath.log10(abs(x)))


def _estimate_peak(factors, const, z, e0, e1, max_terms) -> float:
    """Double-precision estimate of max_k log10|T_k| (poles ignored)."""
    logz = complex(np.log(complex(z))) if z != 0 else None
    peak = -math.inf
    chunk = 20000
    start = 0
    while start < max_terms:
        k = np.arange(start, min(start + chunk, max_terms), dtype=float)
        with np.errstate(all="ignore"):
            lt = np.full(k.shape, math.log(abs(float(const))) if const else -np.inf)
            for f in factors:
                lt += f.power * gammaln(float(f.u) + float(f.v) * k)
            if logz is not None:
                lt += ((float(e0) + float(e1) * k) * logz).real
        lt = lt[np.isfinite(lt)]
        if lt.size:
            cmax = float(lt.max())
            if cmax > peak:
                peak = cmax
            elif lt[-1] < peak - 120.0:
                break
        start += chunk
    return peak / math.log(10.0) if math.isfinite(peak) else 0.0


class _RationalPlan:
    """Integer recurrence data for T_{k} = T_{k-Q} * num_k / den_k."""

    def __init__(self, factors, z, e1, alternating):
        slopes = [f.v for f in factors] + [e1]
        self.ok = all(isinstance(x, Fraction) for x in slopes) and all(
            isinstance(f.u, Fraction) for f in factors
        )
        if not self.ok or z.imag != 0.0:
            self.ok = False
            return
        q = common_denominator(slopes)
        if q > _MAX_Q:
            self.ok = False
            return
        self.Q = q
        self.L = common_denominator([f.u for f in factors] + [f.v for f in factors])
        self.facs = [
            (int(f.u * self.L), int(f.v * self.L), int(f.v * q), f.power) for f in factors
        ]
        zq = e1 * q
        zf = Fraction(z.real) ** int(zq) if z.real != 0.0 else Fraction(0)
        self.z_num, self.z_den = zf.numerator, zf.denominator
        self.sign = -1 if (alternating and q % 2) else 1

    def ratio(self, k):
        """(num, den) with T_k / T_{k-Q} = num / den."""
        L = self.L
        num = self.sign * self.z_num
        den = self.z_den
        k0 = k - self.Q
        for U, V, P, power in self.facs:
            a = U + V * k0
            if P > 0:
                top = 1
                for j in range(P):
                    top *= a + j * L
                bot = L**P
            elif P < 0:
                bot = 1
                for j in range(1, -P + 1):
                    bot *= a - j * L
                top = L ** (-P)
            else:
                continue
            if power > 0:
                num *= top
                den *= bot
            else:
                num *= bot
                den *= top
        return num, den


def sum_gamma_series(
    factors: Sequence[GammaFactor],
    const,
    z: complex,
    e0,
    e1,
    *,
    alternating: bool = True,
    tol: float = 1e-16,
    max_terms: int = 200000,
    max_dps: int = DEFAULT_MAX_DPS,
    weights: Optional[Callable[[], list]] = None,
    where: str = "",
) -> SeriesSum:
    """Sum the gamma-product series described in the module docstring.

    ``weights`` (a callable evaluated at the working precision) returns a
    list of period P of unit-modulus factors; term k is multiplied by
    ``weights()[k % P]``.
    """
    z = complex(z)
    if z == 0:
        return _series_at_zero(factors, const, e0, e1, alternating, weights, where)
    plan = _RationalPlan(factors, z, e1, alternating)
    peak = _estimate_peak(factors, const, z, e0, e1, max_terms)
    dps = max(30, int(peak) + TARGET_DIGITS + 10)
    for _ in range(6):
        if dps > max_dps:
            raise PrecisionBudgetExceeded(
                f"series needs ~{dps} digits (budget {max_dps}){' at ' + where if where else ''}"
            )
        if plan.ok and z.real >= 0.0:
            res = _gamma_series_fixed(
                factors, const, z, e0, e1, alternating, tol, max_terms, dps, plan, weights, where
            )
            value, err, nterms, peak_mag, growth = res
            lv = _log10_abs(value)
            # absolute precision 2^-bits, amplified by growth after each seed
            top = max(peak_mag, 0.0, growth) + math.log10(nterms + 1)
            need = (top - lv if math.isfinite(lv) else top + 30) + TARGET_DIGITS + 5
        else:
            res = _gamma_series_run(
                factors, const, z, e0, e1, alternating, tol, max_terms, dps, plan, weights, where
            )
            value, err, nterms, peak_mag = res
            lv = _log10_abs(value)
            need = (peak_mag - lv if math.isfinite(lv) else peak_mag + 30) + TARGET_DIGITS + 5
        if lv < max(peak_mag, 0.0) - dps + 5:
            need = max(need, 2 * dps, peak_mag + 30)
        if value == 0 and peak_mag == -math.inf:
            need = 0
        if need <= dps:
            return SeriesSum(
                complex(value), float(err), nterms, dps, peak_mag
            )
        dps = int(need * 1.1) + 10
    raise PrecisionBudgetExceeded("working precision did not settle")


def _series_at_zero(factors, const, e0, e1, alternating, weights, where):
    """At z = 0 only the term with e0 + e1 k = 0 survives (if any)."""
    if e1 == 0:
        raise ValueError("series in z needs a nonzero exponent slope")
    kf = -e0 / e1
    k = int(round(kf))
    if k < 0 or abs(kf - k) > 1e-12:
        return SeriesSum(0j, 0.0, 0, 30, -math.inf)
    if _pole_checker(factors, where)(k):
        return SeriesSum(0j, 0.0, k + 1, 30, -math.inf)
    with mpmath.workdps(30):
        t = _mpnum(const)
        for f in factors:
            g = mpmath.gamma(_mpnum(f.u + f.v * k))
            t = t * g if f.power > 0 else t / g
        if alternating and k % 2:
            t = -t
        if weights is not None:
            w = weights()
            t = t * w[k % len(w)]
        val = complex(t)
    return SeriesSum(val, 1e-17 * abs(val), k + 1, 30, math.log10(abs(val)) if val else -math.inf)


def _pole_checker(factors, where):
    """Return pole_state(k): True for a zero term, raising on numerator poles."""
    exact = all(isinstance(f.u, Fraction) and isinstance(f.v, Fraction) for f in factors)
    if exact:
        L = common_denominator([f.u for f in factors] + [f.v for f in factors])
        lin = [(int(f.u * L), int(f.v * L), f.power) for f in factors]

        def pole_state(k):
            zero = False
            for U, V, power in lin:
                a = U + V * k
                if a <= 0 and a % L == 0:
                    if power > 0:
                        raise GammaPoleError(-a // L, f"coefficient term k={k}{' ' + where if where else ''}")
                    zero = True
            return zero

        return pole_state

    def pole_state(k):
        zero = False
        for f in factors:
            n = nonpositive_integer(f.u + f.v * k)
            if n is not None:
                if f.power > 0:
                    raise GammaPoleError(-n, f"coefficient term k={k}{' ' + where if where else ''}")
                zero = True
        return zero

    return pole_state


def _gamma_series_fixed(factors, const, z, e0, e1, alternating, tol, max_terms, dps, plan, weights, where):
    """Rational-recurrence summation in binary fixed point.

    Terms are Python integers scaled by 2^bits, so each step is one
    multiplication and one floor division by small integers.  The fourth
    return value is log10 of the largest term, the fifth the largest log10
    growth of any term over the seed of its residue class (the rounding
    error of a seed is amplified by that factor).
    """
    bits = int(dps * 3.3219280948873623) + 64
    scale_mp = mpmath.ldexp(1, -bits)
    pole_state = _pole_checker(factors, where)
    Q = plan.Q
    w = None
    period = 1
    log2tol = math.floor(math.log2(tol))

    def seed(k, prec):
        with mpmath.workprec(prec):
            t = _mpnum(const)
            for f in factors:
                arg = f.u + f.v * k
                if prec > 4000 and isinstance(arg, Fraction):
                    g = gamma_rational(arg, prec)
                else:
                    g = mpmath.gamma(_mpnum(arg))
                t = t * g if f.power > 0 else t / g
            ex = e0 + e1 * k
            if z != 0:
                t = t * mpmath.power(_mpz(z), _mpnum(ex))
            elif ex != 0:
                t = t * 0
            return -t if (alternating and k % 2) else t

    def direct(k):
        # a cheap pass finds the magnitude, then 2^-bits absolute accuracy
        t0 = seed(k, 64)
        if t0 == 0:
            return MPZ(0), -math.inf
        m = mpmath.mag(t0)
        t = seed(k, bits + max(int(m), 0) + 64)
        with mpmath.workprec(bits + max(int(m), 0) + 64):
            return MPZ(int(mpmath.nint(mpmath.ldexp(t, bits)))), float(mpmath.log10(abs(t0)))

    with mpmath.workprec(bits + 64):
        if weights is not None:
            w = weights()
            period = len(w)

        def combined():
            if w is None:
                return class_sums[0] * scale_mp
            return mpmath.fsum(wc * (sc * scale_mp) for wc, sc in zip(w, class_sums))

        history = [MPZ(0)] * Q
        class_sums = [MPZ(0)] * period
        total_bits = 0  # bit length of |current total| (scaled)
        max_bits = 0
        seed_mag = [-math.inf] * Q
        growth = 0.0
        small_run = 0
        window_max = 0
        need_run = max(10, 2 * Q, 2 * period)
        all_zero_run = 0
        for k in range(max_terms):
            if pole_state(k):
                t = MPZ(0)
            elif k >= Q and history[k % Q] != 0:
                num, den = plan.ratio(k)
                t = history[k % Q] * MPZ(num) // MPZ(den)
            else:
                t, seed_mag[k % Q] = direct(k)
            history[k % Q] = t
            class_sums[k % period] += t
            if t == 0:
                all_zero_run += 1
                if not any(class_sums):
                    if all_zero_run >= 200:
                        return mpmath.mpf(0), 0.0, k + 1, -math.inf, 0.0
                    continue
                # below 2^-bits: counts as a small term
            else:
                all_zero_run = 0
            tb = abs(t).bit_length()
            if tb > max_bits:
                max_bits = tb
            if tb > 1:
                growth = max(growth, (tb - bits) * 0.30102999566398120 - seed_mag[k % Q])
            if w is None:
                total_bits = abs(class_sums[0]).bit_length()
            elif k % 1024 == 0 or small_run or tb <= total_bits + log2tol + 8:
                total_bits = bits + int(mpmath.mag(combined())) if any(class_sums) else 0
            if tb <= total_bits + log2tol:
                small_run += 1
                window_max = max(window_max, abs(t))
                if small_run >= need_run:
                    value = combined()
                    peak = (max_bits - bits) * 0.30102999566398120
                    return value, float(window_max * scale_mp), k + 1, peak, growth
            else:
                small_run = 0
                window_max = 0
    raise NoConvergence(
        f"series not converged after {max_terms} terms{' at ' + where if where else ''}"
    )


def _gamma_series_run(factors, const, z, e0, e1, alternating, tol, max_terms, dps, plan, weights, where):
    with mpmath.workdps(dps):
        zmp = _mpz(z)
        cmp_ = _mpnum(const)
        e0m, e1m = _mpnum(e0), _mpnum(e1)
        w = weights() if weights is not None else None
        period = len(w) if w is not None else 1
        class_sums = [mpmath.mpf(0)] * period
        tol_m = mpmath.mpf(tol)
        fac_mp = [(_mpnum(f.u), _mpnum(f.v), f.power) for f in factors]

        pole_state = _pole_checker(factors, where)

        def direct(k):
            t = cmp_
            for u, v, power in fac_mp:
                arg = u + v * k
                t = t * (mpmath.gamma(arg) if power > 0 else mpmath.rgamma(arg))
            if zmp != 0:
                t = t * mpmath.power(zmp, e0m + e1m * k)
            elif e0 + e1 * k != 0:
                t = t * 0
            if alternating and k % 2:
                t = -t
            return t

        Q = plan.Q if plan.ok else 0
        history = [None] * Q
        total = mpmath.mpf(0)
        peak_mag = -math.inf
        small_run = 0
        window_max = mpmath.mpf(0)
        need_run = max(10, 2 * Q, 2 * period)
        all_zero_run = 0
        for k in range(max_terms):
            if pole_state(k):
                t = mpmath.mpf(0)
            elif Q and k >= Q and history[k % Q] != 0:
                num, den = plan.ratio(k)
                t = history[k % Q] * num / den
            else:
                t = direct(k)
            if Q:
                history[k % Q] = t
            if t != 0:
                mag = float(mpmath.mag(t)) * 0.30102999566398120
                if mag > peak_mag:
                    peak_mag = mag
            if w is not None:
                class_sums[k % period] += t
                # recombining the classes is costly at high precision: only do
                # it periodically or once terms approach the stopping level
                if k % 1024 == 0 or small_run or (t != 0 and abs(t) <= 10 * tol_m * abs(total)):
                    total = mpmath.fsum(wc * sc for wc, sc in zip(w, class_sums))
            else:
                total += t
            if t == 0:
                all_zero_run += 1
                if total == 0 and all_zero_run >= 200:
                    return mpmath.mpf(0), 0.0, k + 1, peak_mag
                continue
            all_zero_run = 0
            at = abs(t)  # weights have unit modulus
            if at <= tol_m * abs(total):
                small_run += 1
                if at > window_max:
                    window_max = at
                if small_run >= need_run:
                    if w is not None:
                        total = mpmath.fsum(wc * sc for wc, sc in zip(w, class_sums))
                    return total, float(window_max), k + 1, peak_mag
            else:
                small_run = 0
                window_max = mpmath.mpf(0)
        raise NoConvergence(
            f"series not converged after {max_terms} terms{' at ' + where if where else ''}"
        )


# ---------------------------------------------------------------------------
# residue sums with poles of arbitrary order


class _Laurent:
    """eps^order * (c0 + c1 eps + ... ), truncated to len(c) coefficients."""

    __slots__ = ("order", "c")

    def __init__(self, order, c):
        self.order = order
        self.c = c

    def __mul__(self, other):
        n = len(self.c)
        c = [sum(self.c[i] * other.c[j - i] for i in range(j + 1)) for j in range(n)]
        return _Laurent(self.order + other.order, c)

    def inverse(self):
        n = len(self.c)
        c0 = self.c[0]
        inv = [1 / c0]
        for j in range(1, n):
            s = sum(self.c[i] * inv[j - i] for i in range(1, j + 1))
            inv.append(-s / c0)
        return _Laurent(-self.order, inv)


def _exp_series(a, n):
    """exp(sum_{r>=1} a[r] eps^r) truncated to n coefficients (a[0] ignored)."""
    b = [mpmath.mpf(1)] + [mpmath.mpf(0)] * (n - 1)
    for j in range(1, n):
        s = 0
        for r in range(1, j + 1):
            if r < len(a):
                s += r * a[r] * b[j - r]
        b[j] = s / j
    return b


def _gamma_laurent(x0, C, n_terms):
    """Laurent series of Gamma(x0 + C eps) about eps = 0."""
    n = nonpositive_integer(x0)
    C = _mpnum(C)
    if n is None:
        x = _mpnum(x0)
        a = [0] + [mpmath.psi(r - 1, x) * C**r / mpmath.factorial(r) for r in range(1, n_terms)]
        lead = mpmath.gamma(x)
        return _Laurent(0, [lead * b for b in _exp_series(a, n_terms)])
    a = [0]
    for r in range(1, n_terms):
        p1 = mpmath.psi(r - 1, 1)
        pn = mpmath.psi(r - 1, n + 1)
        a.append(C**r / mpmath.factorial(r) * (p1 + (-1) ** (r - 1) * (pn - p1)))
    lead = (-1) ** n / (mpmath.factorial(n) * C)
    return _Laurent(-1, [lead * b for b in _exp_series(a, n_terms)])


@dataclass(frozen=True)
class MBFactor:
    """Gamma(c + C s)^power inside a Mellin-Barnes integrand."""

    c: object
    C: object
    power: int


def _pole_families(left):
    """Distinct left poles s in decreasing order (exact merge for rationals)."""
    heap = []
    for idx, (c, C) in enumerate(left):
        if C == 0:
            continue
        heapq.heappush(heap, (c / C, idx, 0))
    while heap:
        key, idx, l = heapq.heappop(heap)
        c, C = left[idx]
        heapq.heappush(heap, ((c + l + 1) / C, idx, l + 1))
        while heap and _same_pole(heap[0][0], key):
            _, i2, l2 = heapq.heappop(heap)
            c2, C2 = left[i2]
            heapq.heappush(heap, ((c2 + l2 + 1) / C2, i2, l2 + 1))
        yield -key


def _same_pole(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= 1e-9 * max(1.0, abs(float(b)))


def sum_residues(
    factors: Sequence[MBFactor],
    left: Sequence[tuple],
    z: complex,
    *,
    tol: float = 1e-16,
    max_poles: int = 20000,
    max_dps: int = DEFAULT_MAX_DPS,
    where: str = "",
) -> SeriesSum:
    """Sum of residues of prod Gamma(c + C s)^power * z^(-s) at left poles.

    ``left`` lists the (c, C) of numerator gammas whose poles lie to the left
    of the contour; the poles of the remaining factors must lie to the right.
    """
    z = complex(z)
    for f in factors:
        if f.C == 0 and nonpositive_integer(f.c) is not None:
            if f.power > 0:
                raise GammaPoleError(-nonpositive_integer(f.c), f"constant factor{' ' + where if where else ''}")
            # a constant 1/Gamma at a pole annihilates the whole integrand
            return SeriesSum(0j, 0.0, 0, 0, -math.inf)
    dps = 30
    for _ in range(6):
        if dps > max_dps:
            raise PrecisionBudgetExceeded(f"residue sum needs ~{dps} digits{' at ' + where if where else ''}")
        value, err, n, peak = _residue_run(factors, left, z, tol, max_poles, dps, where)
        lv = _log10_abs(value)
        need = (peak - lv if math.isfinite(lv) else peak + 30) + TARGET_DIGITS + 5
        if lv < peak - dps + 5:
            # the value is rounding noise, so its size says nothing
            need = max(need, 2 * dps, peak + 30)
        if value == 0 and peak == -math.inf:
            need = 0
        if need <= dps:
            return SeriesSum(complex(value), err, n, dps, peak)
        dps = int(need * 1.1) + 10
    raise PrecisionBudgetExceeded("working precision did not settle")


def _residue_run(factors, left, z, tol, max_poles, dps, where):
    with mpmath.workdps(dps):
        zmp = _mpz(z)
        logz = mpmath.log(zmp)
        total = mpmath.mpf(0)
        peak = -math.inf
        small_run = 0
        window_max = 0.0
        need_run = max(10, 3 * len(left))
        count = 0
        for s0 in _pole_families(left):
            count += 1
            if count > max_poles:
                raise NoConvergence(f"residue series not converged after {max_poles} poles{' at ' + where if where else ''}")
            orders = []
            order = 0
            for f in factors:
                if f.C == 0:
                    o = 0
                else:
                    o = -f.power if nonpositive_integer(f.c + f.C * s0) is not None else 0
                orders.append(o)
                order += o
            if order >= 0:
                continue
            nt = -order
            prod = _Laurent(0, [mpmath.mpf(1)] + [mpmath.mpf(0)] * (nt - 1))
            for f, o in zip(factors, orders):
                if f.C == 0:
                    g = mpmath.gamma(_mpnum(f.c)) if f.power > 0 else mpmath.rgamma(_mpnum(f.c))
                    prod = _Laurent(prod.order, [g * ci for ci in prod.c])
                    continue
                lau = _gamma_laurent(f.c + f.C * s0, f.C, nt)
                if f.power < 0:
                    lau = lau.inverse()
                prod = prod * lau
            s0m = _mpnum(s0)
            zpow = _exp_series([0, -logz], nt)
            zlead = mpmath.exp(-s0m * logz)
            prod = prod * _Laurent(0, [zlead * b for b in zpow])
            res = prod.c[-1 - prod.order] if prod.order < 0 else 0
            if res == 0:
                continue
            mag = float(mpmath.mag(res)) * 0.30102999566398120
            peak = max(peak, mag)
            total += res
            ar = abs(res)
            if ar <= tol * abs(total):
                small_run += 1
                window_max = max(window_max, float(ar))
                if small_run >= need_run:
                    return total, window_max, count, peak
            else:
                small_run = 0
                window_max = 0.0
        raise NoConvergence(f"no poles left{' at ' + where if where else ''}")


# ---------------------------------------------------------------------------
# Gamma of a rational argument at very high precision


def _bsplit(a, b, Nq, p, q):
    """Binary splitting of sum_{k=a+1}^{b} prod_{j=a+1}^{k} Nq/(p + j q)."""
    if b - a == 1:
        return Nq, p + b * q, Nq
    m = (a + b) // 2
    P1, Q1, T1 = _bsplit(a, m, Nq, p, q)
    P2, Q2, T2 = _bsplit(m, b, Nq, p, q)
    return P1 * P2, Q1 * Q2, T1 * Q2 + P1 * T2


def gamma_rational(x: Fraction, prec: int):
    """Gamma(x) for rational x as an mpf good to ``prec`` bits.

    Uses Gamma(f) = N^f e^-N sum_k N^k / (f)_{k+1} + Gamma(f, N) with
    N ~ prec ln 2, so the neglected upper incomplete part is below 2^-prec.
    The positive hypergeometric-type sum is evaluated by binary splitting,
    which avoids the Bernoulli-number cost of Stirling's series at tens of
    thousands of digits.  Integer shifts bring x into (0, 1].
    """
    x = Fraction(x)
    if x.denominator == 1:
        if x <= 0:
            raise GammaPoleError(int(-x), "gamma_rational")
        with mpmath.workprec(prec + 16):
            return mpmath.factorial(int(x) - 1)
    n = math.ceil(x) - 1
    f = x - n  # in (0, 1)
    p, q = f.numerator, f.denominator
    N = int(prec * 0.6931471805599453) + 16
    # truncate once N^K / (f+1)_K < e^N 2^-(prec+64)
    ff = float(f)
    limit = N - (prec + 64) * 0.6931471805599453
    K = N
    while K * math.log(N) - (math.lgamma(ff + K + 1) - math.lgamma(ff + 1)) > limit:
        K += max(1, K // 16)
    _, Qs, Ts = _bsplit(0, K, MPZ(N * q), MPZ(p), MPZ(q))
    rise = Fraction(1)
    if n >= 0:
        for j in range(n):
            rise *= f + j
    else:
        for j in range(1, -n + 1):
            rise /= f - j
    with mpmath.workprec(prec + 32):
        ssum = (1 + mpmath.mpf(Ts) / Qs) * q / p
        g = ssum * mpmath.exp(-N) * mpmath.power(N, mpmath.mpf(p) / q)
        return g * rise.numerator / rise.denominator
