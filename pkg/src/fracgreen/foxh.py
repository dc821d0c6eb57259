"""Fox H-function specs, characteristics, pole conditions and evaluators.

The H-function is the Mellin-Barnes integral

    H(z) = 1/(2 pi i) \\int chi(s) z^(-s) ds,
    chi(s) = prod_{j<=m} G(b_j + B_j s) prod_{i<=n} G(1 - a_i - A_i s)
             / [prod_{i>n} G(a_i + A_i s) prod_{j>m} G(1 - b_j - B_j s)].

Two series evaluators are provided.  :func:`eval_series` is the classical
simple-pole expansion and refuses specs that fail the pole conditions.
:func:`eval_residues` sums residues at poles of any order and also accepts
zero-scale pairs (A or B equal to 0), which then act as constant factors.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from . import specfun
from ._mpseries import (
    GammaFactor,
    MBFactor,
    sum_gamma_series,
    sum_residues,
)
from ._rational import as_number, nonpositive_integer
from .errors import (
    ConditionsViolated,
    InapplicableExpansion,
    NoConvergence,
    SingularityError,
)

Pair = Tuple[object, object]


@dataclass(frozen=True)
class HFunctionSpec:
    """Orders and parameter pairs of H^{m,n}_{p,q}.

    Parameters are normalised with :func:`as_number`, so floats that are
    really small rationals (``1 - 2/1.5``) are stored as exact Fractions.
    """

    m: int
    n: int
    p: int
    q: int
    upper: Tuple[Pair, ...] = ()
    lower: Tuple[Pair, ...] = ()

    def __post_init__(self):
        up = tuple((as_number(a), as_number(A)) for a, A in self.upper)
        lo = tuple((as_number(b), as_number(B)) for b, B in self.lower)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)
        if len(up) != self.p or len(lo) != self.q:
            raise ValueError(
                f"expected {self.p} upper and {self.q} lower pairs, got {len(up)} and {len(lo)}"
            )
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValueError(f"orders must satisfy 0<=m<=q, 0<=n<=p (got {self.m},{self.n},{self.p},{self.q})")
        for _, s in up + lo:
            if s < 0:
                raise ValueError("scale parameters A_i, B_j must be non-negative")

    def __str__(self):
        def fmt(pairs):
            return ", ".join(f"{x}:{y}" for x, y in pairs)

        return f"{self.m},{self.n},{self.p},{self.q}; {fmt(self.upper)}; {fmt(self.lower)}"


@dataclass(frozen=True)
class HCharacteristics:
    delta: float
    delta_star: float
    little_delta: float
    mu: float


@dataclass
class EvalResult:
    value: complex
    abs_err_estimate: float
    terms_used: int
    method: str
    info: dict = field(default_factory=dict)

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag


@dataclass(frozen=True)
class Violation:
    condition: str
    indices: tuple

    def __str__(self):
        return f"{self.condition}{self.indices}"


def _exact_sum(values):
    return sum(values, Fraction(0)) if all(isinstance(v, Fraction) for v in values) else sum(float(v) for v in values)


def characteristics(spec: HFunctionSpec) -> HCharacteristics:
    A = [x[1] for x in spec.upper]
    B = [x[1] for x in spec.lower]
    a = [x[0] for x in spec.upper]
    b = [x[0] for x in spec.lower]
    n, m = spec.n, spec.m
    delta = _exact_sum(B) - _exact_sum(A)
    delta_star = _exact_sum(A[:n]) - _exact_sum(A[n:]) + _exact_sum(B[:m]) - _exact_sum(B[m:])
    little = 1.0
    for x in A:
        little *= float(x) ** (-float(x))
    for x in B:
        little *= float(x) ** float(x)
    mu = _exact_sum(b) - _exact_sum(a) + Fraction(spec.p - spec.q, 2)
    return HCharacteristics(float(delta), float(delta_star), little, float(mu))


def _nonneg_int_upto(x, k_max):
    """Return x as an int if it is an integer in [0, k_max], else None."""
    n = nonpositive_integer(-x) if not isinstance(x, Fraction) else (
        int(x) if x.denominator == 1 and x >= 0 else None
    )
    if n is None or n > k_max:
        return None
    return n


def validate(spec: HFunctionSpec, k_check: int = 50) -> List[Violation]:
    """Scan the pole conditions up to index ``k_check``.

    Reported tuples are 1-based ``(i, j, k, l)``.  ``condition3`` uses the
    corrected form A_i(1 - a_j + l) != A_j(1 - a_i + k).  Zero-scale pairs
    are reported as ``degenerate`` with a ``(list, index)`` tuple.
    """
    out: List[Violation] = []
    up, lo = spec.upper, spec.lower
    for idx, (_, A) in enumerate(up, 1):
        if A == 0:
            out.append(Violation("degenerate", ("upper", idx)))
    for idx, (_, B) in enumerate(lo, 1):
        if B == 0:
            out.append(Violation("degenerate", ("lower", idx)))

    # condition1: A_i(b_j + l) = B_j(a_i - k - 1), i <= n, j <= m
    for i in range(spec.n):
        ai, Ai = up[i]
        if Ai == 0:
            continue
        for j in range(spec.m):
            bj, Bj = lo[j]
            if Bj == 0:
                continue
            for l in range(k_check + 1):
                k = _nonneg_int_upto(ai - 1 - Ai * (bj + l) / Bj, k_check)
                if k is not None:
                    out.append(Violation("condition1", (i + 1, j + 1, k, l)))
    # condition2: B_i(b_j + l) = B_j(b_i + k), i < j <= m
    for i in range(spec.m):
        bi, Bi = lo[i]
        for j in range(i + 1, spec.m):
            bj, Bj = lo[j]
            if Bi == 0 or Bj == 0:
                continue
            for l in range(k_check + 1):
                k = _nonneg_int_upto(Bi * (bj + l) / Bj - bi, k_check)
                if k is not None:
                    out.append(Violation("condition2", (i + 1, j + 1, k, l)))
    # condition3: A_i(1 - a_j + l) = A_j(1 - a_i + k), i < j <= n
    for i in range(spec.n):
        ai, Ai = up[i]
        for j in range(i + 1, spec.n):
            aj, Aj = up[j]
            if Ai == 0 or Aj == 0:
                continue
            for l in range(k_check + 1):
                k = _nonneg_int_upto(Ai * (1 - aj + l) / Aj - (1 - ai), k_check)
                if k is not None:
                    out.append(Violation("condition3", (i + 1, j + 1, k, l)))
    return out


def _family_factors(spec: HFunctionSpec, h: int):
    bh, Bh = spec.lower[h]
    facs = []
    for j, (bj, Bj) in enumerate(spec.lower):
        if j == h:
            continue
        if j < spec.m:
            facs.append(GammaFactor(bj - Bj * bh / Bh, -Bj / Bh, 1))
        else:
            facs.append(GammaFactor(1 - bj + Bj * bh / Bh, Bj / Bh, -1))
    for i, (ai, Ai) in enumerate(spec.upper):
        if i < spec.n:
            facs.append(GammaFactor(1 - ai + Ai * bh / Bh, Ai / Bh, 1))
        else:
            facs.append(GammaFactor(ai - Ai * bh / Bh, -Ai / Bh, -1))
    facs.append(GammaFactor(Fraction(1), Fraction(1), -1))  # 1/k!
    return facs


def _series_at_zero(spec: HFunctionSpec) -> EvalResult:
    total = 0.0
    for h in range(spec.m):
        bh, Bh = spec.lower[h]
        facs = _family_factors(spec, h)
        kmax = max(0, math.ceil(-float(bh)))
        for k in range(kmax + 1):
            s = (bh + k) / Bh
            coef = 1.0 / float(Bh) * (-1) ** k
            for f in facs:
                arg = f.u + f.v * k
                if f.power > 0:
                    coef *= float(mpmath.gamma(float(arg)))
                else:
                    coef *= float(mpmath.rgamma(float(arg)))
            if coef == 0:
                continue
            if s < 0:
                raise SingularityError(f"H-function singular at z=0 (exponent {s})")
            if s == 0:
                total += coef
    return EvalResult(complex(total), 0.0, 1, "series")


def eval_series(
    spec: HFunctionSpec,
    z,
    tol: float = 1e-16,
    max_terms: int = 200000,
    *,
    k_check: int = 50,
    max_dps: Optional[int] = None,
) -> EvalResult:
    """Simple-pole power series (sum over the poles of the first m lower gammas).

    Terms are summed in adaptive multi-precision, so heavy cancellation at
    large |z| costs time rather than accuracy.  ``abs_err_estimate`` is the
    largest magnitude among the trailing terms that satisfied the stopping
    test.
    """
    z = complex(z)
    ch = characteristics(spec)
    bad = [v for v in validate(spec, k_check) if v.condition != "condition3"]
    if bad:
        raise ConditionsViolated(bad)
    if ch.delta < 0 or (ch.delta == 0 and abs(z) >= ch.little_delta):
        raise InapplicableExpansion(
            f"series diverges here (Delta={ch.delta}, |z|={abs(z)}, delta={ch.little_delta})"
        )
    if z == 0:
        return _series_at_zero(spec)
    total = 0j
    err = 0.0
    terms = 0
    dps = 0
    for h in range(spec.m):
        bh, Bh = spec.lower[h]
        kw = {} if max_dps is None else {"max_dps": max_dps}
        res = sum_gamma_series(
            _family_factors(spec, h),
            1 / Bh,
            z,
            bh / Bh,
            1 / Bh,
            tol=tol,
            max_terms=max_terms,
            where=f"h={h + 1}",
            **kw,
        )
        total += res.value
        err += res.abs_err
        terms += res.terms
        dps = max(dps, res.dps)
    return EvalResult(total, err, terms, "series", {"dps": dps})


def mb_factors(spec: HFunctionSpec):
    """chi(s) as (c, C, power) gamma factors, plus the left-pole list."""
    facs = []
    left = []
    for j, (b, B) in enumerate(spec.lower):
        if j < spec.m:
            facs.append(MBFactor(b, B, 1))
            left.append((b, B))
        else:
            facs.append(MBFactor(1 - b, -B, -1))
    for i, (a, A) in enumerate(spec.upper):
        if i < spec.n:
            facs.append(MBFactor(1 - a, -A, 1))
        else:
            facs.append(MBFactor(a, A, -1))
    return facs, left


def eval_residues(
    spec: HFunctionSpec,
    z,
    tol: float = 1e-16,
    max_poles: int = 20000,
    *,
    max_dps: Optional[int] = None,
) -> EvalResult:
    """Sum of residues at the left poles, allowing poles of any order.

    Coincident poles produce the logarithmic terms of the expansion; these
    are obtained from Laurent expansions of every gamma factor.  Requires
    Delta > 0 (or Delta = 0 inside |z| < delta).
    """
    z = complex(z)
    ch = characteristics(spec)
    if ch.delta < 0 or (ch.delta == 0 and abs(z) >= ch.little_delta):
        raise InapplicableExpansion(
            f"residue series diverges here (Delta={ch.delta}, |z|={abs(z)})"
        )
    if z == 0:
        raise SingularityError("residue evaluator needs z != 0")
    facs, left = mb_factors(spec)
    kw = {} if max_dps is None else {"max_dps": max_dps}
    res = sum_residues(facs, left, z, tol=tol, max_poles=max_poles, **kw)
    return EvalResult(res.value, res.abs_err, res.terms, "series", {"dps": res.dps})


def evaluate(spec: HFunctionSpec, z, tol: float = 1e-16, **kw) -> EvalResult:
    """eval_series when the simple-pole conditions hold, else eval_residues."""
    try:
        return eval_series(spec, z, tol, **kw)
    except ConditionsViolated:
        kw.pop("max_terms", None)
        kw.pop("k_check", None)
        return eval_residues(spec, z, tol, **kw)


def mellin_chi(spec: HFunctionSpec, s) -> complex:
    """chi(s) in double precision (reciprocal gammas vanish at their poles)."""
    val = 1 + 0j
    for f in mb_factors(spec)[0]:
        arg = float(f.c) + float(f.C) * s
        val *= specfun.gamma(arg) if f.power > 0 else specfun.rgamma(arg)
    return val


# ---------------------------------------------------------------------------
# asymptotics for large |z| (Delta > 0, Delta* = 0)


def eval_asymptotic(spec: HFunctionSpec, z, *, k_check: int = 50) -> EvalResult:
    """Leading algebraic and oscillatory terms of the large-|z| expansion.

    ``abs_err_estimate`` is the size of each retained term multiplied by
    the relative order of its first omitted correction (|z|^{-1/A_i} for the
    algebraic terms, (C |z|^{1/Delta})^{-1} for the oscillatory one).
    """
    z = complex(z)
    ch = characteristics(spec)
    if ch.delta <= 0:
        raise InapplicableExpansion("Delta must be positive")
    if abs(ch.delta_star) > 1e-12:
        raise InapplicableExpansion(f"Delta* != 0 (Delta* = {ch.delta_star})")
    bad = [v for v in validate(spec, k_check) if v.condition in ("condition1", "condition3", "degenerate")]
    if bad:
        raise ConditionsViolated(bad)
    m, n, p, q = spec.m, spec.n, spec.p, spec.q
    a = [float(x[0]) for x in spec.upper]
    A = [float(x[1]) for x in spec.upper]
    b = [float(x[0]) for x in spec.lower]
    B = [float(x[1]) for x in spec.lower]
    D, mu, dl = ch.delta, ch.mu, ch.little_delta

    value = 0j
    err = 0.0
    for i in range(n):
        t = (a[i] - 1.0) / A[i]
        h = 1.0 / A[i]
        for j in range(m):
            h *= specfun.gamma(b[j] - B[j] * t)
        for j in range(n):
            if j != i:
                h *= specfun.gamma(1.0 - a[j] + A[j] * t)
        for j in range(n, p):
            h *= specfun.rgamma(a[j] - A[j] * t)
        for j in range(m, q):
            h *= specfun.rgamma(1.0 - b[j] + B[j] * t)
        term = h * z**t
        value += term
        err += abs(term) * abs(z) ** (-1.0 / A[i])

    A0 = (2 * math.pi) ** ((p - q + 1) / 2.0) * D ** (-mu)
    for i in range(p):
        A0 *= A[i] ** (-a[i] + 0.5)
    for j in range(q):
        A0 *= B[j] ** (b[j] - 0.5)
    ratio = D**D / dl
    amp = A0 / (2j * math.pi * D) * ratio ** ((mu + 0.5) / D)
    Bc = (2 * mu + 1) * math.pi / 4
    Cc = ratio ** (1.0 / D)
    phase_sum = sum(a[n:p]) - sum(b[:m])
    c0 = (2j * math.pi) ** (m + n - p) * cmath.exp(1j * math.pi * phase_sum)
    d0 = (-2j * math.pi) ** (m + n - p) * cmath.exp(-1j * math.pi * phase_sum)
    arg = Bc + Cc * z ** (1.0 / D)
    osc = amp * z ** ((mu + 0.5) / D) * (c0 * cmath.exp(1j * arg) - d0 * cmath.exp(-1j * arg))
    value += osc
    err += abs(amp * z ** ((mu + 0.5) / D)) * (abs(c0) + abs(d0)) / abs(Cc * z ** (1.0 / D))
    return EvalResult(value, err, n + 1, "asymptotic")


# ---------------------------------------------------------------------------
# parameter transformations


def transform_power(spec: HFunctionSpec, k) -> HFunctionSpec:
    """Spec H' with H'(z^k) = H(z)/k."""
    k = as_number(k)
    if k <= 0:
        raise ValueError("k must be positive")
    return HFunctionSpec(
        spec.m, spec.n, spec.p, spec.q,
        tuple((a, k * A) for a, A in spec.upper),
        tuple((b, k * B) for b, B in spec.lower),
    )


def transform_shift(spec: HFunctionSpec, sigma) -> HFunctionSpec:
    """Spec H' with H'(z) = z^sigma H(z)."""
    sigma = as_number(sigma)
    return HFunctionSpec(
        spec.m, spec.n, spec.p, spec.q,
        tuple((a + sigma * A, A) for a, A in spec.upper),
        tuple((b + sigma * B, B) for b, B in spec.lower),
    )


# ---------------------------------------------------------------------------
# text form used by the CLI:  "m,n,p,q; a1:A1, a2:A2; b1:B1, ..."

_NUM = r"\s*([-+]?[0-9./eE+-]+)\s*"


def _parse_pairs(text: str):
    text = text.strip()
    if not text:
        return ()
    pairs = []
    for item in text.split(","):
        mt = re.fullmatch(_NUM + ":" + _NUM, item)
        if not mt:
            raise ValueError(f"bad parameter pair {item.strip()!r} (expected x:X)")
        pairs.append((Fraction(mt.group(1)), Fraction(mt.group(2))))
    return tuple(pairs)


def parse_spec(text: str) -> HFunctionSpec:
    """Parse ``"m,n,p,q; a1:A1, ...; b1:B1, ..."``.

    Numbers may be integers, decimals or fractions such as ``-1/3``; they are
    read exactly.  Empty lists are written as nothing between semicolons.
    """
    parts = text.split(";")
    if len(parts) != 3:
        raise ValueError("spec needs three ';'-separated fields: orders; upper; lower")
    try:
        m, n, p, q = (int(x) for x in parts[0].split(","))
    except ValueError:
        raise ValueError(f"bad orders field {parts[0].strip()!r}") from None
    return HFunctionSpec(m, n, p, q, _parse_pairs(parts[1]), _parse_pairs(parts[2]))


def exp_spec() -> HFunctionSpec:
    """H^{1,0}_{0,1}[z | -; (0,1)] = exp(-z)."""
    return HFunctionSpec(1, 0, 0, 1, (), ((0, 1),))


__all__ = [
    "HFunctionSpec",
    "HCharacteristics",
    "EvalResult",
    "Violation",
    "characteristics",
    "validate",
    "eval_series",
    "eval_residues",
    "evaluate",
    "eval_asymptotic",
    "mellin_chi",
    "transform_power",
    "transform_shift",
    "parse_spec",
    "exp_spec",
]
