import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from parabolic_dimple import kernels
from parabolic_dimple.specfun import (
    Flag, PrecisionPolicy, SpecialValue, gamma_real, kummer_phi, lgamma_sign, pcf_D, pcf_G, pcf_pair,
    pcf_second_derivative, regular_even, regular_odd, regular_solution, rgamma, worst,
)

from conftest import d_trap_oracle, dprime_trap_oracle

SQRT_PI = math.sqrt(math.pi)


# ------------------------------------------------------------------ gamma

@pytest.mark.parametrize("x, expected", [(0.5, SQRT_PI), (5.0, 24.0), (-0.5, -2.0 * SQRT_PI), (1.0, 1.0)])
def test_gamma_examples(x, expected):
    g = gamma_real(x)
    assert g.precision_flag is Flag.ok
    assert g.value == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0])
def test_gamma_poles_are_flagged_and_reciprocal_is_zero(x):
    assert gamma_real(x).precision_flag is Flag.pole
    assert rgamma(x) == 0.0


@given(st.floats(min_value=-30.0, max_value=40.0).filter(lambda x: abs(x - round(x)) > 1e-6 or x > 0.5))
def test_gamma_matches_stdlib(x):
    assert gamma_real(x).value == pytest.approx(math.gamma(x), rel=1e-12)


@given(st.floats(min_value=-50.0, max_value=150.0).filter(lambda x: abs(x - round(x)) > 1e-6 or x > 0.5))
def test_lgamma_sign(x):
    lg, s = lgamma_sign(x)
    assert lg == pytest.approx(math.lgamma(x), rel=1e-12, abs=1e-12)
    assert s == (1 if math.gamma(x) > 0 else -1) if x < 170 else True


def test_worst_flag_order():
    assert worst(Flag.ok, Flag.degraded) is Flag.degraded
    assert worst(Flag.ok, Flag.pole, Flag.degraded) is Flag.pole
    assert worst() is Flag.ok


# ------------------------------------------------------------------ policy

def test_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(term_tolerance=0.0)
    with pytest.raises(ValueError):
        PrecisionPolicy(max_terms=10)
    with pytest.raises(ValueError):
        PrecisionPolicy(cancellation_guard=1.0)


def test_special_value_float_with_log_scale():
    assert float(SpecialValue(2.0, Flag.ok, math.log(3.0))) == pytest.approx(6.0)


# ------------------------------------------------------------------ Kummer

def test_kummer_examples():
    assert kummer_phi(0.3, 1.7, 0.0).value == 1.0
    assert kummer_phi(1.0, 1.0, 1.0).value == pytest.approx(math.e, rel=1e-15)
    assert kummer_phi(-1.0, 0.5, 2.0).value == -3.0


def test_kummer_pole_raises():
    with pytest.raises(ValueError):
        kummer_phi(1.0, -2.0, 1.0)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
@pytest.mark.parametrize("b, y", [(0.5, 2.0), (1.5, 7.25), (2.5, 0.125)])
def test_kummer_terminates_exactly(n, b, y):
    # closed-form polynomial in exact rationals
    from fractions import Fraction

    term = Fraction(1)
    total = Fraction(1)
    for k in range(n):
        term *= Fraction(-n + k) / (Fraction(b) + k) * Fraction(y) / (k + 1)
        total += term
    # no truncation error: only rounding of the finite sum remains, bounded
    # by a few ulps of the largest partial sum
    _, scale, nterms, converged = kernels.kummer_series(-float(n), b, y, 1e-300, 5000)
    assert converged and nterms <= n + 1
    assert kummer_phi(-float(n), b, y).value == pytest.approx(float(total), rel=0, abs=8e-16 * scale * (n + 1))


@given(st.floats(-30.0, 30.0), st.sampled_from([0.5, 1.5, 2.5, 3.7]), st.floats(0.0, 60.0))
def test_kummer_matches_mpmath(a, b, y):
    v = kummer_phi(a, b, y)
    assert v.precision_flag is Flag.ok
    ref = float(mpmath.hyp1f1(a, b, y))
    assert abs(v.value - ref) <= 1e-11 * max(abs(ref), 1e-300) + 1e-300


def test_kummer_recovers_from_cancellation():
    # M(-40.5, 1/2, 90) suffers heavy cancellation in double precision
    v = kummer_phi(-40.5, 0.5, 90.0)
    ref = float(mpmath.hyp1f1(-40.5, 0.5, 90.0))
    assert v.precision_flag is Flag.ok
    assert v.value == pytest.approx(ref, rel=1e-11)


# ------------------------------------------------------------------ parabolic cylinder functions

def test_pcf_examples():
    assert pcf_D(0.0, 1.0).value == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert pcf_D(1.0, 1.0).value == pytest.approx(2.0 * math.exp(-0.5), rel=1e-14)
    assert pcf_G(0.0, 0.0).value == pytest.approx(0.0, abs=1e-15)
    assert pcf_G(1.0, 0.0).value == pytest.approx(2.0, rel=1e-14)


def test_pcf_bridge_example():
    assert pcf_D(0.3, 4.0).value == pytest.approx(d_trap_oracle(0.3, 4.0), rel=1e-10)


def test_pcf_G_matches_finite_difference():
    h = 1e-5
    fd = (pcf_D(0.7, 1.3 + h).value - pcf_D(0.7, 1.3 - h).value) / (2 * h)
    assert pcf_G(0.7, 1.3).value == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("z", [0.3, 1.7, 4.2])
def test_pcf_parity_low_orders(z):
    assert pcf_D(0.0, -z).value == pcf_D(0.0, z).value
    assert pcf_D(1.0, -z).value == -pcf_D(1.0, z).value


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12, 30])
@given(z=st.floats(-6.0, 6.0))
def test_pcf_integer_order_is_hermite_function(n, z):
    ref = math.exp(-z * z / 2) * np.polynomial.hermite.hermval(z, [0] * n + [1])
    v = float(pcf_D(float(n), z))
    # scale: L2 norm of the Hermite function, sqrt(2^n n! sqrt(pi))
    norm = math.sqrt(2.0 ** n * math.factorial(n) * SQRT_PI)
    assert abs(v - ref) <= 1e-12 * norm


def test_pcf_decays_at_large_argument():
    vals = [abs(float(pcf_D(2.7, z))) for z in (6.0, 10.0, 20.0, 30.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-300 or vals[-1] < 1e-100


def test_pcf_high_order_recurrence_matches_scipy():
    for lam, z in [(150.3, 3.0), (300.0, 8.0), (499.6, 12.0)]:
        p = pcf_pair(lam, z)
        assert p.flag is Flag.ok
        ref = 2 ** mpmath.mpf(lam / 2) * mpmath.pcfd(lam, math.sqrt(2.0) * z)
        ratio = float(mpmath.mpf(p.d) * mpmath.exp(p.log_scale) / ref)
        assert ratio == pytest.approx(1.0, rel=1e-10)


def test_pcf_rejects_non_finite():
    with pytest.raises(ValueError):
        pcf_pair(math.nan, 1.0)


def test_second_derivative_from_equation():
    lam, z = 1.3, 0.8
    h = 1e-4
    fd = (pcf_D(lam, z + h).value - 2 * pcf_D(lam, z).value + pcf_D(lam, z - h).value) / h ** 2
    assert pcf_second_derivative(lam, z).value == pytest.approx(fd, rel=1e-6)


# ------------------------------------------------------------------ randomized invariants (>= 1000 samples each)

_RNG = np.random.default_rng(20260101)
_LAM = _RNG.uniform(-5.0, 10.0, 1000)
_Z = _RNG.uniform(-6.0, 6.0, 1000)


def _ode_residual(lam, z):
    # D'' as the derivative of the exact G, five-point stencil (O(h^4))
    h = 1e-3
    g = [float(pcf_G(lam, z + k * h)) for k in (-2, -1, 1, 2)]
    d2 = (g[0] - 8.0 * g[1] + 8.0 * g[2] - g[3]) / (12.0 * h)
    d = float(pcf_D(lam, z))
    scale = max(abs(d2), abs((2 * lam + 1 - z * z) * d), 1e-300)
    return abs(d2 + (2 * lam + 1 - z * z) * d) / scale


def test_ode_residual_random():
    worst_res = max(_ode_residual(lam, z) for lam, z in zip(_LAM, _Z))
    assert worst_res <= 1e-6


def _well_conditioned(lam, z, d, g):
    # away from a zero of D: |D| is not tiny against the local slope scale
    return abs(d) > 1e-6 * abs(g) / max(1.0, math.sqrt(abs(2 * lam + 1)) + abs(z))


def test_convention_bridge_random():
    # standard-convention oracle: mpmath pcfd (scipy's pbdv is inaccurate for
    # negative arguments at moderate order, so it is used only for z >= 0)
    worst_err = 0.0
    for lam, z in zip(_LAM, _Z):
        d, g = float(pcf_D(lam, z)), float(pcf_G(lam, z))
        if not _well_conditioned(lam, z, d, g):
            continue
        std = float(mpmath.pcfd(lam, math.sqrt(2.0) * z))
        worst_err = max(worst_err, abs(d / std / 2.0 ** (lam / 2.0) - 1.0))
    assert worst_err <= 1e-8


def test_convention_bridge_scipy_positive_z():
    for lam, z in zip(_LAM, np.abs(_Z)):
        d, g = float(pcf_D(lam, z)), float(pcf_G(lam, z))
        if _well_conditioned(lam, z, d, g):
            assert d == pytest.approx(d_trap_oracle(lam, z), rel=1e-8)


# ------------------------------------------------------------------ interior solutions

@given(st.floats(-5.0, 30.0), st.floats(0.0, 5.0))
def test_regular_solutions_satisfy_equation(lam, z):
    h = 1e-4
    for par in ("even", "odd"):
        f0 = regular_solution(par, lam, z)
        fp = regular_solution(par, lam, z + h).df
        fm = regular_solution(par, lam, z - h).df
        d2 = (fp - fm) / (2 * h)
        rhs = (z * z - 2 * lam - 1) * f0.f
        scale = max(abs(d2), abs(rhs), abs(f0.df), 1e-12)
        assert abs(d2 - rhs) / scale < 1e-5


def test_regular_initial_conditions():
    e = regular_even(2.3, 0.0)
    o = regular_odd(2.3, 0.0)
    assert (e.f, e.df) == (1.0, 0.0)
    assert (o.f, o.df) == (0.0, 1.0)
    with pytest.raises(ValueError):
        regular_solution("neither", 1.0, 1.0)
