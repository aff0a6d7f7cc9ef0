# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; mirror ``_kernels_py`` exactly."""
from libc.math cimport fabs, exp, log, sqrt, M_PI, pow


def kummer_series(double a, double b, double y, double tol, int max_terms):
    cdef double term = 1.0, total = 1.0, scale = 1.0, at
    cdef int quiet = 0, n = 0
    while n < max_terms:
        term *= (a + n) * y / ((b + n) * (n + 1.0))
        n += 1
        if term == 0.0:
            return total, scale, n, True
        total += term
        at = fabs(term)
        if at > scale:
            scale = at
        if fabs(total) > scale:
            scale = fabs(total)
        if at <= tol * fabs(total):
            quiet += 1
            if quiet >= 3:
                return total, scale, n, True
        else:
            quiet = 0
    return total, scale, n, False


def pcf_asymptotic(double lam, double z, double tol, int max_terms):
    cdef double inv = 1.0 / (4.0 * z * z)
    cdef double term = 1.0, total = 1.0, dtotal = 0.0, prev = 1.0, at, g
    cdef int s, k
    for s in range(1, max_terms):
        k = 2 * s
        term *= -(-lam + k - 2) * (-lam + k - 1) * inv / s
        at = fabs(term)
        if at > prev and at > tol * fabs(total):
            return total, 0.0, False
        total += term
        dtotal += -k * term / z
        if at <= tol * fabs(total):
            g = (lam / z - z) * total + dtotal
            return total, g, True
        prev = at
    return total, 0.0, False


def ho_psi(int n, double z):
    cdef double p0 = pow(M_PI, -0.25) * exp(-0.5 * z * z), p1, p2
    cdef int k
    if n == 0:
        return p0
    p1 = sqrt(2.0) * z * p0
    for k in range(1, n):
        p2 = sqrt(2.0 / (k + 1)) * z * p1 - sqrt(k / (k + 1.0)) * p0
        p0 = p1
        p1 = p2
    return p1


def ho_psi_all(int nmax, double z):
    cdef list out = [pow(M_PI, -0.25) * exp(-0.5 * z * z)]
    cdef int k
    if nmax >= 1:
        out.append(sqrt(2.0) * z * <double>out[0])
    for k in range(1, nmax):
        out.append(sqrt(2.0 / (k + 1)) * z * <double>out[k] - sqrt(k / (k + 1.0)) * <double>out[k - 1])
    return out


def pcf_recur_up(double l0, double z, double d_prev, double d, double g_prev, double g, int nsteps):
    cdef double log_rescale = 0.0, lam = l0, d_next, g_next, s
    cdef int i
    for i in range(nsteps):
        d_next = 2.0 * z * d - 2.0 * lam * d_prev
        g_next = 2.0 * d + 2.0 * z * g - 2.0 * lam * g_prev
        d_prev = d
        d = d_next
        g_prev = g
        g = g_next
        lam += 1.0
        s = fabs(d) + fabs(g)
        if s > 1e150:
            d_prev /= s
            d /= s
            g_prev /= s
            g /= s
            log_rescale += log(s)
    return d, g, log_rescale
