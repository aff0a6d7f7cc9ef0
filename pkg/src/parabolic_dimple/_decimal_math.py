"""Extended-precision helpers built on the stdlib ``decimal`` module.

Only what the cancellation fallbacks in :mod:`specfun` need: pi, sin(pi x),
log-gamma / reciprocal gamma, Kummer's series, and conversion of a Decimal
into a (mantissa, natural-log scale) pair.
"""
from __future__ import annotations

import math
from decimal import Context, Decimal, MAX_EMAX, MIN_EMIN
from fractions import Fraction
from functools import lru_cache

_ZERO = Decimal(0)
_ONE = Decimal(1)


def context(prec: int) -> Context:
    return Context(prec=prec, Emax=MAX_EMAX, Emin=MIN_EMIN)


def to_decimal(x) -> Decimal:
    """Exact conversion of a float (or int / Decimal) to Decimal."""
    if isinstance(x, Decimal):
        return x
    return Decimal(x)


@lru_cache(maxsize=64)
def pi(prec: int) -> Decimal:
    """pi to ``prec`` digits (Machin's formula)."""
    ctx = context(prec + 10)

    def arctan_inv(n: int) -> Decimal:
        x = ctx.divide(_ONE, Decimal(n))
        x2 = ctx.multiply(x, x)
        term = x
        total = x
        k = 1
        eps = Decimal(10) ** (-(prec + 8))
        while abs(term) > eps:
            term = ctx.multiply(term, x2)
            k += 2
            piece = ctx.divide(term, Decimal(k))
            total = ctx.subtract(total, piece) if (k // 2) % 2 else ctx.add(total, piece)
        return total

    val = ctx.subtract(ctx.multiply(Decimal(16), arctan_inv(5)), ctx.multiply(Decimal(4), arctan_inv(239)))
    return context(prec).plus(val)


def sinpi(x: Decimal, prec: int) -> Decimal:
    """sin(pi x) with exact argument reduction."""
    ctx = context(prec + 5)
    exact = context(len(x.as_tuple().digits) + max(0, x.adjusted()) + 10)
    two = Decimal(2)
    k = exact.divide(x, two).to_integral_value(rounding="ROUND_FLOOR")
    r = exact.subtract(x, exact.multiply(two, k))  # r in [0, 2)
    sign = 1
    if r >= 1:
        r = exact.subtract(r, _ONE)
        sign = -sign
    if r > Decimal("0.5"):
        r = exact.subtract(_ONE, r)
    if r == 0:
        return _ZERO
    t = ctx.multiply(pi(prec + 5), r)
    t2 = ctx.multiply(t, t)
    term = t
    total = t
    k = 1
    eps = Decimal(10) ** (-(prec + 4))
    while abs(term) > eps * abs(total):
        term = ctx.divide(ctx.multiply(ctx.minus(term), t2), Decimal((k + 1) * (k + 2)))
        total = ctx.add(total, term)
        k += 2
    return context(prec).plus(total) if sign > 0 else context(prec).minus(total)


@lru_cache(maxsize=1)
def _bernoulli_even(count: int = 200) -> tuple:
    """B_2, B_4, ... as Fractions (Akiyama-Tanigawa)."""
    nmax = 2 * count
    a = [Fraction(0)] * (nmax + 1)
    out = []
    for m in range(nmax + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=64)
def _stirling_coeffs(prec: int) -> tuple:
    ctx = context(prec + 5)
    return tuple(
        ctx.divide(Decimal(b.numerator), ctx.multiply(Decimal(b.denominator), Decimal((2 * k + 2) * (2 * k + 1))))
        for k, b in enumerate(_bernoulli_even())
    )


@lru_cache(maxsize=64)
def _half_log_two_pi(prec: int) -> Decimal:
    ctx = context(prec + 5)
    return ctx.divide(ctx.ln(ctx.multiply(Decimal(2), pi(prec + 5))), Decimal(2))


def lngamma_pos(x: Decimal, prec: int) -> Decimal:
    """ln Gamma(x) for x > 0 via a shifted Stirling series."""
    ctx = context(prec + 10)
    shift_to = Decimal(max(12, int(1.2 * prec)))
    prod = _ONE
    while x < shift_to:
        prod = ctx.multiply(prod, x)
        x = ctx.add(x, _ONE)
    lnx = ctx.ln(x)
    total = ctx.subtract(ctx.multiply(ctx.subtract(x, Decimal("0.5")), lnx), x)
    total = ctx.add(total, _half_log_two_pi(prec + 5))
    inv = ctx.divide(_ONE, x)
    inv2 = ctx.multiply(inv, inv)
    power = inv
    eps = Decimal(10) ** (-(prec + 6))
    for c in _stirling_coeffs(prec + 5):
        term = ctx.multiply(c, power)
        total = ctx.add(total, term)
        if abs(term) < eps:
            break
        power = ctx.multiply(power, inv2)
    if prod != _ONE:
        total = ctx.subtract(total, ctx.ln(prod))
    return context(prec).plus(total)


def is_nonpositive_integer(x: Decimal) -> bool:
    return x <= 0 and x == x.to_integral_value()


def rgamma(x: Decimal, prec: int) -> Decimal:
    """1/Gamma(x); exactly zero at the poles."""
    ctx = context(prec + 10)
    if is_nonpositive_integer(x):
        return _ZERO
    if x >= Decimal("0.5"):
        return context(prec).plus(ctx.exp(ctx.minus(lngamma_pos(x, prec + 5))))
    # reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    g1 = ctx.exp(lngamma_pos(ctx.subtract(_ONE, x), prec + 5))
    val = ctx.divide(ctx.multiply(sinpi(x, prec + 5), g1), pi(prec + 5))
    return context(prec).plus(val)


def kummer(a: Decimal, b: Decimal, y: Decimal, prec: int, max_terms: int, tol_digits: int | None = None):
    """Kummer's series at working precision ``prec``.

    Returns ``(sum, max_magnitude, nterms, converged)``.
    """
    ctx = context(prec)
    if tol_digits is None:
        tol_digits = prec - 2
    eps = Decimal(10) ** (-tol_digits)
    mul = ctx.multiply
    div = ctx.divide
    add = ctx.add
    term = _ONE
    total = _ONE
    big = _ONE
    quiet = 0
    n = 0
    while n < max_terms:
        num = mul(add(a, n), y)
        if num == 0:
            return total, big, n + 1, True
        term = div(mul(term, num), mul(add(b, n), n + 1))
        n += 1
        total = add(total, term)
        at = abs(term)
        if at > big:
            big = at
        if at <= eps * abs(total):
            quiet += 1
            if quiet >= 3:
                return total, max(big, abs(total)), n, True
        else:
            quiet = 0
    return total, max(big, abs(total)), n, False


def lost_digits(value: Decimal, scale: Decimal) -> float:
    """Decimal digits cancelled when ``value`` is a sum of terms of size ``scale``."""
    if scale == 0:
        return 0.0
    if value == 0:
        return float("inf")
    return max(0.0, float((abs(scale) / abs(value)).log10()))


def split(value: Decimal) -> tuple[float, float]:
    """Return ``(mantissa, log_scale)`` with value = mantissa * exp(log_scale)."""
    if value == 0:
        return 0.0, 0.0
    e10 = value.adjusted()
    if -300 < e10 < 300:
        return float(value), 0.0
    mant = float(value.scaleb(-e10))
    return mant, e10 * math.log(10.0)
