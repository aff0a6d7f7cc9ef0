"""Pure-Python reference kernels.

Same signatures and semantics as the compiled ``_kernels`` extension; used
when the extension is not built or ``PARABOLIC_DIMPLE_PURE_PYTHON`` is set.
"""
import math


def kummer_series(a, b, y, tol, max_terms):
    """Sum Kummer's series M(a, b, y) in double precision.

    Returns ``(value, scale, nterms, converged)`` where ``scale`` is the
    largest magnitude met among partial sums and terms. Summation stops
    after three consecutive terms below ``tol * |partial sum|`` or at an
    exactly zero term (terminating series).
    """
    term = 1.0
    total = 1.0
    scale = 1.0
    quiet = 0
    n = 0
    while n < max_terms:
        term *= (a + n) * y / ((b + n) * (n + 1.0))
        n += 1
        if term == 0.0:
            return total, scale, n, True
        total += term
        at = abs(term)
        if at > scale:
            scale = at
        if abs(total) > scale:
            scale = abs(total)
        if at <= tol * abs(total):
            quiet += 1
            if quiet >= 3:
                return total, scale, n, True
        else:
            quiet = 0
    return total, scale, n, False


def pcf_asymptotic(lam, z, tol, max_terms):
    """Large-z expansion of the decaying parabolic cylinder function.

    With D = (2z)^lam exp(-z^2/2) * S(z), returns ``(S, dS, ok)`` where
    dS is the mantissa of dD/dz on the same scale. ``ok`` is False when
    the divergent series stalls before reaching ``tol``.
    """
    inv = 1.0 / (4.0 * z * z)
    term = 1.0
    total = 1.0
    dtotal = 0.0  # sum of -2s * c_s z^(-2s-1)
    prev = 1.0
    for s in range(1, max_terms):
        k = 2 * s
        term *= -(-lam + k - 2) * (-lam + k - 1) * inv / s
        at = abs(term)
        if at > prev and at > tol * abs(total):
            return total, 0.0, False
        total += term
        dtotal += -k * term / z
        if at <= tol * abs(total):
            g = (lam / z - z) * total + dtotal
            return total, g, True
        prev = at
    return total, 0.0, False


def ho_psi(n, z):
    """Unit-norm Hermite function in the z variable (three-term recurrence)."""
    p0 = math.pi ** -0.25 * math.exp(-0.5 * z * z)
    if n == 0:
        return p0
    p1 = math.sqrt(2.0) * z * p0
    for k in range(1, n):
        p0, p1 = p1, math.sqrt(2.0 / (k + 1)) * z * p1 - math.sqrt(k / (k + 1.0)) * p0
    return p1


def ho_psi_all(nmax, z):
    """List of psi_0..psi_nmax at z."""
    out = [math.pi ** -0.25 * math.exp(-0.5 * z * z)]
    if nmax >= 1:
        out.append(math.sqrt(2.0) * z * out[0])
    for k in range(1, nmax):
        out.append(math.sqrt(2.0 / (k + 1)) * z * out[k] - math.sqrt(k / (k + 1.0)) * out[k - 1])
    return out


def pcf_recur_up(l0, z, d_prev, d, g_prev, g, nsteps):
    """Advance (D, dD/dz) from order l0 to l0 + nsteps by the three-term recurrence.

    Upward recurrence in the order is the stable direction for the decaying
    solution when z >= 0. Values are rescaled on the fly; returns
    ``(d, g, log_rescale)`` with the true pair equal to (d, g) * exp(log_rescale)
    relative to the input scale.
    """
    log_rescale = 0.0
    lam = l0
    for _ in range(nsteps):
        d_next = 2.0 * z * d - 2.0 * lam * d_prev
        g_next = 2.0 * d + 2.0 * z * g - 2.0 * lam * g_prev
        d_prev, d, g_prev, g = d, d_next, g, g_next
        lam += 1.0
        s = abs(d) + abs(g)
        if s > 1e150:
            d_prev /= s
            d /= s
            g_prev /= s
            g /= s
            log_rescale += math.log(s)
    return d, g, log_rescale
