"""Real gamma function, Kummer's confluent hypergeometric series and
parabolic cylinder functions in the trap convention.

The parabolic cylinder function used throughout the package is

    D_lam(z) = 2^lam exp(-z^2/2) [ sqrt(pi) M(-lam/2, 1/2, z^2) / Gamma((1-lam)/2)
                                  + Gamma(-1/2) z M((1-lam)/2, 3/2, z^2) / Gamma(-lam/2) ]

which solves psi'' + (2 lam + 1 - z^2) psi = 0 and decays as z -> +inf. It is
related to the usual Whittaker form by D_lam(z) = 2^(lam/2) D_std(lam, sqrt(2) z).

Every evaluator returns a precision flag. Double-precision series are tried
first; when the measured cancellation is worse than the policy guard the same
expression is re-evaluated in extended precision (stdlib ``decimal``).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal
from typing import NamedTuple

from . import _decimal_math as dm
from . import kernels

SQRT_PI = math.sqrt(math.pi)
LN2 = math.log(2.0)


class Flag(str, enum.Enum):
    ok = "ok"
    degraded = "degraded"
    pole = "pole"

    def __str__(self) -> str:
        return self.value


def worst(*flags: Flag) -> Flag:
    """Combine flags: pole beats degraded beats ok."""
    if Flag.pole in flags:
        return Flag.pole
    if Flag.degraded in flags:
        return Flag.degraded
    return Flag.ok


@dataclass(frozen=True)
class PrecisionPolicy:
    """Truncation and conditioning controls for series evaluation.

    Attributes:
        term_tolerance: relative size of a term below which summation may stop.
        max_terms: hard cap on series length.
        cancellation_guard: a double-precision result whose magnitude relative
            to its largest contribution falls below this is recomputed in
            extended precision (or flagged degraded if ``extended`` is off).
        asymptotic_switch: z above which the large-argument expansion is tried.
        extended: allow the extended-precision fallback.
    """

    term_tolerance: float = 1e-15
    max_terms: int = 5000
    cancellation_guard: float = 1e-4
    asymptotic_switch: float = 5.0
    extended: bool = True

    def __post_init__(self):
        if not self.term_tolerance > 0:
            raise ValueError("term_tolerance must be positive")
        if self.max_terms < 50:
            raise ValueError("max_terms must be at least 50")
        if not 0 < self.cancellation_guard < 1:
            raise ValueError("cancellation_guard must lie in (0, 1)")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class SpecialValue:
    """A special-function value with its precision flag.

    The represented number is ``value * exp(log_scale)``; ``log_scale`` is zero
    unless the number would overflow a double.
    """

    value: float | complex
    precision_flag: Flag = Flag.ok
    log_scale: float = 0.0

    @property
    def ok(self) -> bool:
        return self.precision_flag == Flag.ok

    def __float__(self) -> float:
        if self.log_scale == 0.0:
            return float(self.value)
        return float(self.value) * math.exp(self.log_scale)


class PcfPair(NamedTuple):
    """D_lam(z) and its z-derivative on a shared scale exp(log_scale)."""

    d: float
    g: float
    log_scale: float
    flag: Flag
    method: str


class RegularPair(NamedTuple):
    """Value and z-derivative of an interior regular solution."""

    f: float
    df: float
    flag: Flag


# ---------------------------------------------------------------- gamma

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _is_pole(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _lanczos_log(x: float) -> float:
    """ln Gamma(x) for x >= 1/2."""
    x -= 1.0
    s = _LANCZOS[0]
    for i in range(1, 9):
        s += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(s)


def _sinpi(x: float) -> float:
    # every step below is exact in binary floating point
    r = x - 2.0 * round(0.5 * x)
    sign = 1.0 if r >= 0 else -1.0
    r = abs(r)
    if r > 0.5:
        r = 1.0 - r
    return sign * math.sin(math.pi * r)


def lgamma_sign(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign Gamma(x))``; raises at poles."""
    if _is_pole(x):
        raise ValueError(f"Gamma has a pole at {x}")
    if x >= 0.5:
        return _lanczos_log(x), 1
    s = _sinpi(x)
    lg = math.log(math.pi / abs(s)) - _lanczos_log(1.0 - x)
    return lg, (1 if s > 0 else -1)


def gamma_real(x: float) -> SpecialValue:
    """Gamma(x) for real x, with the ``pole`` flag at non-positive integers."""
    if not math.isfinite(x):
        raise ValueError("gamma_real needs a finite argument")
    if _is_pole(x):
        return SpecialValue(math.inf, Flag.pole)
    if x >= 0.5:
        if x == math.floor(x) and x < 30:
            return SpecialValue(float(math.prod(range(1, int(x)))))
        lg = _lanczos_log(x)
        if lg > 709.0:
            return SpecialValue(math.exp(lg - 700.0 * math.floor(lg / 700.0)), Flag.ok, 700.0 * math.floor(lg / 700.0))
        return SpecialValue(math.exp(lg))
    # reflection
    inner = gamma_real(1.0 - x)
    val = math.pi / (_sinpi(x) * inner.value)
    return SpecialValue(val, inner.precision_flag, -inner.log_scale)


def rgamma(x: float) -> float:
    """1/Gamma(x); exactly 0 at the poles (underflows to 0 for huge x)."""
    if _is_pole(x):
        return 0.0
    lg, sign = lgamma_sign(x)
    if lg > 745.0:
        return 0.0
    return sign * math.exp(-lg)


# ---------------------------------------------------------------- Kummer series

def _kummer_double(a: float, b: float, y: float, policy: PrecisionPolicy):
    """Double-precision sum with its conditioning ratio |sum| / largest contribution."""
    s, scale, n, conv = kernels.kummer_series(a, b, y, policy.term_tolerance, policy.max_terms)
    if not math.isfinite(s) or not math.isfinite(scale):
        return s, 0.0, False
    ratio = abs(s) / scale if scale > 0 else 1.0
    return s, ratio, conv


_MAX_ROUNDS = 6
_MAX_DIGITS = 1200


def _next_precision(prec: int, lost: float) -> int:
    # a result that is pure rounding noise reports ~prec lost digits; grow geometrically
    if lost >= prec - 8:
        return min(2 * prec, _MAX_DIGITS)
    return min(int(lost) + 26, _MAX_DIGITS)


def _required_digits(ratio: float) -> int:
    if ratio <= 0 or not math.isfinite(ratio):
        return 60
    return int(-math.log10(max(ratio, 1e-300))) + 1


def _kummer_extended(a: float, b: float, y: float, policy: PrecisionPolicy, hint: int):
    da, db, dy = dm.to_decimal(a), dm.to_decimal(b), dm.to_decimal(y)
    prec = 24 + hint
    for _ in range(_MAX_ROUNDS):
        total, big, _n, conv = dm.kummer(da, db, dy, prec, policy.max_terms)
        lost = dm.lost_digits(total, big)
        if not conv:
            return float(total), Flag.degraded
        if lost <= prec - 18:
            return float(total), Flag.ok
        prec = _next_precision(prec, lost)
    return float(total), Flag.degraded


def kummer_phi(alpha: float, gamma_par: float, y: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> SpecialValue:
    """Kummer's confluent hypergeometric function M(alpha, gamma_par, y).

    Raises ValueError when ``gamma_par`` is a non-positive integer.
    """
    if _is_pole(gamma_par):
        raise ValueError(f"gamma_par={gamma_par} is a non-positive integer")
    if y == 0.0:
        return SpecialValue(1.0)
    s, ratio, conv = _kummer_double(alpha, gamma_par, y, policy)
    if conv and ratio >= policy.cancellation_guard:
        return SpecialValue(s)
    if not policy.extended:
        return SpecialValue(s, Flag.degraded)
    val, flag = _kummer_extended(alpha, gamma_par, y, policy, _required_digits(ratio))
    return SpecialValue(val, flag)


# ---------------------------------------------------------------- parabolic cylinder functions

def _pair_asymptotic(lam: float, z: float, policy: PrecisionPolicy) -> PcfPair | None:
    s, ds, ok = kernels.pcf_asymptotic(lam, z, policy.term_tolerance, min(policy.max_terms, 400))
    if not ok:
        return None
    return PcfPair(s, ds, lam * math.log(2.0 * z) - 0.5 * z * z, Flag.ok, "asymptotic")


def _pair_double(lam: float, z: float, policy: PrecisionPolicy):
    """Term-wise evaluation in double precision; returns (pair or None, conditioning)."""
    if abs(lam) > 150.0:
        return None, 0.0
    y = z * z
    p = SQRT_PI * rgamma(0.5 * (1.0 - lam))
    q = -2.0 * SQRT_PI * rgamma(-0.5 * lam)
    tol, nmax = policy.term_tolerance, policy.max_terms
    m1, s1, _, c1 = kernels.kummer_series(-0.5 * lam, 0.5, y, tol, nmax)
    m2, s2, _, c2 = kernels.kummer_series(0.5 * (1.0 - lam), 1.5, y, tol, nmax)
    m3, s3, _, c3 = kernels.kummer_series(1.0 - 0.5 * lam, 1.5, y, tol, nmax)
    m4, s4, _, c4 = kernels.kummer_series(0.5 * (3.0 - lam), 2.5, y, tol, nmax)
    if not (c1 and c2 and c3 and c4):
        return None, 0.0
    dm1 = -lam * m3
    dm2 = (1.0 - lam) / 3.0 * m4
    t1 = p * m1
    t2 = q * z * m2
    big_s = abs(p) * s1 + abs(q * z) * s2
    s = t1 + t2
    u1 = 2.0 * z * p * dm1
    u2 = q * m2
    u3 = 2.0 * q * y * dm2
    ds = u1 + u2 + u3
    g = ds - z * s
    big_g = abs(2.0 * z * p * lam) * s3 + abs(q) * s2 + abs(2.0 * q * y * (1.0 - lam) / 3.0) * s4 + abs(z) * big_s
    vals = (s, g, big_s, big_g)
    if not all(math.isfinite(v) for v in vals):
        return None, 0.0
    r_s = abs(s) / big_s if big_s > 0 else 1.0
    r_g = abs(g) / big_g if big_g > 0 else 1.0
    cond = min(r_s, r_g)
    return PcfPair(s, g, lam * LN2 - 0.5 * y, Flag.ok, "series"), cond


def _pair_decimal(lam: float, z: float, policy: PrecisionPolicy, hint: int) -> PcfPair:
    dl, dz = dm.to_decimal(lam), dm.to_decimal(z)
    half = Decimal("0.5")
    prec = 26 + hint
    flag = Flag.ok
    for _ in range(_MAX_ROUNDS + 2):
        ctx = dm.context(prec + 5)
        y = ctx.multiply(dz, dz)
        a1 = ctx.multiply(-half, dl)
        a2 = ctx.multiply(half, ctx.subtract(1, dl))
        sqrt_pi = ctx.sqrt(dm.pi(prec + 5))
        p = ctx.multiply(sqrt_pi, dm.rgamma(a2, prec + 5))
        q = ctx.multiply(ctx.multiply(-2, sqrt_pi), dm.rgamma(a1, prec + 5))
        n = policy.max_terms
        m1, s1, _, c1 = dm.kummer(a1, half, y, prec, n)
        m2, s2, _, c2 = dm.kummer(a2, Decimal("1.5"), y, prec, n)
        m3, s3, _, c3 = dm.kummer(ctx.add(a1, 1), Decimal("1.5"), y, prec, n)
        m4, s4, _, c4 = dm.kummer(ctx.add(a2, 1), Decimal("2.5"), y, prec, n)
        if not (c1 and c2 and c3 and c4):
            flag = Flag.degraded
        t1 = ctx.multiply(p, m1)
        t2 = ctx.multiply(ctx.multiply(q, dz), m2)
        s = ctx.add(t1, t2)
        u1 = ctx.multiply(ctx.multiply(ctx.multiply(2, dz), p), ctx.multiply(ctx.minus(dl), m3))
        u2 = ctx.multiply(q, m2)
        u3 = ctx.multiply(ctx.multiply(ctx.multiply(2, q), y), ctx.divide(ctx.multiply(ctx.subtract(1, dl), m4), 3))
        g = ctx.subtract(ctx.add(ctx.add(u1, u2), u3), ctx.multiply(dz, s))
        lost_terms = max(dm.lost_digits(m1, s1), dm.lost_digits(m2, s2), dm.lost_digits(m3, s3), dm.lost_digits(m4, s4))
        lost_s = dm.lost_digits(s, abs(t1) + abs(t2))
        lost_g = dm.lost_digits(g, abs(u1) + abs(u2) + abs(u3) + abs(ctx.multiply(dz, s)))
        lost = lost_terms + max(lost_s, lost_g)
        if lost <= prec - 18:
            break
        if max(lost_s, lost_g) == float("inf") and lost_terms <= prec - 18:
            break  # exact zero of D or G
        if prec >= _MAX_DIGITS:
            flag = Flag.degraded
            break
        prec = _next_precision(prec, lost)
    # common prefactor 2^lam exp(-y/2) goes to the log scale
    base = lam * LN2 - 0.5 * z * z
    big = max(abs(s), abs(g))
    if big == 0:
        return PcfPair(0.0, 0.0, base, flag, "extended")
    e10 = big.adjusted()
    d_m = float(s.scaleb(-e10))
    g_m = float(g.scaleb(-e10))
    return PcfPair(d_m, g_m, base + e10 * math.log(10.0), flag, "extended")


def _pair_recurrence(lam: float, z: float, policy: PrecisionPolicy) -> PcfPair:
    steps = int(math.floor(lam))
    l0 = lam - steps
    lo = pcf_pair(l0 - 1.0, z, policy)
    hi = pcf_pair(l0, z, policy)
    shift = math.exp(lo.log_scale - hi.log_scale)
    d, g, extra = kernels.pcf_recur_up(l0, z, lo.d * shift, hi.d, lo.g * shift, hi.g, steps)
    return PcfPair(d, g, hi.log_scale + extra, worst(lo.flag, hi.flag), "recurrence")


def pcf_pair(lam: float, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> PcfPair:
    """D_lam(z) and G_lam(z) = dD_lam/dz on a common log scale.

    G is the exact term-wise derivative of the series (or of the asymptotic
    expansion, or carried through the differentiated order recurrence), never
    a finite difference.
    """
    if not (math.isfinite(lam) and math.isfinite(z)):
        raise ValueError("pcf_pair needs finite arguments")
    if z > policy.asymptotic_switch:
        pair = _pair_asymptotic(lam, z, policy)
        if pair is not None:
            return pair
    pair, cond = _pair_double(lam, z, policy)
    if pair is not None and cond >= policy.cancellation_guard:
        return pair
    if lam >= 1.0 and z >= 0.0:
        return _pair_recurrence(lam, z, policy)
    if not policy.extended:
        if pair is None:
            return PcfPair(math.nan, math.nan, 0.0, Flag.degraded, "series")
        return pair._replace(flag=Flag.degraded)
    return _pair_decimal(lam, z, policy, _required_digits(cond) if pair is not None else 40)


def _unscale(mant: float, log_scale: float) -> tuple[float, float]:
    if log_scale == 0.0 or mant == 0.0:
        return mant, 0.0
    lm = math.log(abs(mant)) + log_scale
    if -700.0 < lm < 700.0:
        return mant * math.exp(log_scale), 0.0
    return mant, log_scale


def pcf_D(lam: float, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> SpecialValue:
    """Parabolic cylinder function D_lam(z) in the trap convention."""
    p = pcf_pair(lam, z, policy)
    v, ls = _unscale(p.d, p.log_scale)
    return SpecialValue(v, p.flag, ls)


def pcf_G(lam: float, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> SpecialValue:
    """G_lam(z) = d D_lam(z) / dz."""
    p = pcf_pair(lam, z, policy)
    v, ls = _unscale(p.g, p.log_scale)
    return SpecialValue(v, p.flag, ls)


def pcf_second_derivative(lam: float, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> SpecialValue:
    """D''_lam(z) from the defining equation D'' = (z^2 - 2 lam - 1) D."""
    d = pcf_D(lam, z, policy)
    return SpecialValue((z * z - 2.0 * lam - 1.0) * d.value, d.precision_flag, d.log_scale)


# ---------------------------------------------------------------- interior regular solutions

def regular_even(lam: float, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> RegularPair:
    """Even solution exp(-z^2/2) M(-lam/2, 1/2, z^2), normalized to 1 at z=0."""
    y = z * z
    m1 = kummer_phi(-0.5 * lam, 0.5, y, policy)
    m2 = kummer_phi(1.0 - 0.5 * lam, 1.5, y, policy) if lam != 0.0 else SpecialValue(0.0)
    e = math.exp(-0.5 * y)
    f = e * m1.value
    df = e * z * (-m1.value - 2.0 * lam * m2.value)
    return RegularPair(f, df, worst(m1.precision_flag, m2.precision_flag))


def regular_odd(lam: float, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> RegularPair:
    """Odd solution z exp(-z^2/2) M((1-lam)/2, 3/2, z^2), unit slope at z=0."""
    y = z * z
    m1 = kummer_phi(0.5 * (1.0 - lam), 1.5, y, policy)
    m2 = kummer_phi(0.5 * (3.0 - lam), 2.5, y, policy) if lam != 1.0 else SpecialValue(0.0)
    e = math.exp(-0.5 * y)
    f = z * e * m1.value
    df = e * ((1.0 - y) * m1.value + 2.0 * y * (1.0 - lam) / 3.0 * m2.value)
    return RegularPair(f, df, worst(m1.precision_flag, m2.precision_flag))


def regular_solution(parity: str, lam: float, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> RegularPair:
    if parity == "even":
        return regular_even(lam, z, policy)
    if parity == "odd":
        return regular_odd(lam, z, policy)
    raise ValueError(f"unknown parity {parity!r}")
