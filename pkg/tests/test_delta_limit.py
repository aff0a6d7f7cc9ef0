import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parabolic_dimple import delta_limit as dl
from parabolic_dimple.params import TrapParams
from parabolic_dimple.specfun import rgamma


# ------------------------------------------------------------------ sampling

@given(st.floats(1e-3, 2.0))
def test_sampling_exact_values(a):
    assert dl.delta_rep_sample(lambda x: 1.0, a) == pytest.approx(1.0, abs=1e-13)
    assert dl.delta_rep_sample(lambda x: x * x, a) == pytest.approx(a * a / 5.0, rel=1e-12)
    assert dl.delta_rep_sample(lambda x: x ** 3, a) == pytest.approx(0.0, abs=1e-15)


def test_sampling_rejects_bad_width():
    with pytest.raises(ValueError):
        dl.delta_rep_sample(math.cos, 0.0)


def test_sampling_constant_stable():
    a = np.geomspace(1e-3, 1e-1, 9)
    for h in (math.cos, math.exp, lambda x: x * x):
        c = [abs(dl.delta_rep_sample(h, x) - h(0.0)) / x ** 2 for x in a]
        assert max(c) / min(c) < 1.01


# ------------------------------------------------------------------ delta references

def test_delta_bound_energy():
    assert dl.delta_bound_energy(2.0, 1.0, 0.5) == -1.0
    assert dl.delta_bound_energy(0.0) == 0.0
    assert dl.delta_bound_energy(4.0) == 4 * dl.delta_bound_energy(2.0)


def test_sigma_equivalent():
    assert dl.sigma_equivalent(5.0, 0.2, 1.0, 0.5) == pytest.approx(4.0 / 3.0, rel=1e-15)
    U0, a = 7.0, 0.3
    assert dl.delta_bound_energy(dl.sigma_equivalent(U0, a)) == pytest.approx(dl.delta_limit_energy(U0, a), rel=1e-14)


def test_sigma_si_scaling():
    # sigma has units of 1/length: doubling every length doubles 1/sigma
    hbar, m = 1.054571817e-34, 3.8e-26
    s1 = dl.sigma_equivalent(1e-30, 1e-6, hbar, m)
    s2 = dl.sigma_equivalent(1e-30 / 4.0, 2e-6, hbar, m)  # U0 * a halves when energies scale as 1/L^2
    assert s1 / s2 == pytest.approx(2.0, rel=1e-14)


def test_delta_params_from_product():
    d = dl.DeltaParams.from_product(1.5)
    assert d.sigma == pytest.approx(2.0) and d.c == 1.5
    assert d.Lambda == pytest.approx(2.0 * math.sqrt(2.0))


# ------------------------------------------------------------------ free-space well

def test_free_well_params():
    p = dl.FreeWellParams.natural(2.0, 8.0)
    assert p.nu == pytest.approx(math.sqrt(2 * 8 / (0.5 * 4)))
    assert p.gamma_d(-8.0) == -0.5
    with pytest.raises(ValueError):
        p.kappa(0.0)
    with pytest.raises(ValueError):
        dl.FreeWellParams.natural(0.0, 1.0)


@pytest.mark.parametrize("U0", [200.0, 1000.0])
def test_deep_well_approaches_shifted_oscillator(U0):
    p = dl.FreeWellParams.natural(1.0, U0)
    e = dl.well_ground_energy(p).energy
    assert e == pytest.approx(-U0 + 0.5 * p.nu, abs=1e-5 * U0)


def test_narrow_well_single_bound_state():
    p = dl.FreeWellParams.natural(2.0 ** -6, 64.0)
    assert len(dl.well_roots(p, "even")) == 1
    assert not dl.has_odd_bound_state(p)


def test_wide_well_has_odd_state():
    assert dl.has_odd_bound_state(dl.FreeWellParams.natural(1.0, 50.0))


def test_free_well_against_independent_residual():
    import mpmath

    p = dl.FreeWellParams.natural(0.25, 4.0)
    e = dl.well_ground_energy(p).energy

    def mp_res(E):
        lam = p.gamma_d(E)
        b = p.s * p.a
        f = lambda z: mpmath.exp(-z * z / 2) * mpmath.hyp1f1(-lam / 2, 0.5, z * z)
        kappa = math.sqrt(-2 * p.m * E) / p.hbar
        return mpmath.diff(f, b) * p.s + kappa * f(b)

    assert mp_res(e - 1e-9) * mp_res(e + 1e-9) < 0


# ------------------------------------------------------------------ harmonic + delta

def test_harm_delta_zero_strength():
    assert dl.harm_delta_even_roots(0.0, 4) == pytest.approx([0, 2, 4, 6], abs=1e-12)


def test_harm_delta_lambda4_ground():
    lam = dl.harm_delta_even_roots(4.0, 1)[0]
    assert lam < 0
    # Gamma((1-lam)/2) = Gamma(-lam/2) at Lambda = 4
    assert math.gamma((1 - lam) / 2) == pytest.approx(math.gamma(-lam / 2), rel=1e-10)


@pytest.mark.parametrize("Lam", [10.0, 30.0, 100.0])
def test_harm_delta_strong_coupling(Lam):
    lam = dl.harm_delta_even_roots(Lam, 1)[0]
    # energy (lam + 1/2) hbar omega -> delta bound energy -Lambda^2/8 in oscillator units
    assert lam + 0.5 == pytest.approx(-Lam ** 2 / 8.0, rel=2e-3)


@given(st.floats(0.01, 20.0))
def test_harm_delta_interlacing(Lam):
    roots = dl.harm_delta_even_roots(Lam, 4)
    assert roots[0] < 1 < roots[1] < 3 < roots[2] < 5 < roots[3] < 7
    for lam in roots:
        lhs = rgamma(-lam / 2) * 1.0
        rhs = Lam / 4.0 * rgamma((1 - lam) / 2)
        assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-12)


def test_harm_delta_negative_strength():
    with pytest.raises(ValueError):
        dl.harm_delta_even_roots(-1.0, 2)


# ------------------------------------------------------------------ convergence tables

A_SEQ = [2.0 ** -k for k in range(3, 11)]


def test_convergence_zero_coupling():
    t = dl.dimple_to_delta_convergence(0.0, [0.5, 0.25])
    for name in t.columns[2:]:
        assert max(abs(v) for v in t.column(name)) < 1e-12


def test_convergence_orders_reported():
    t = dl.dimple_to_delta_convergence(0.5, A_SEQ[:4])
    orders = t.metadata["observed_order"]
    assert set(orders) == set(t.columns[2:])
    assert orders["odd_gap_0"] == pytest.approx(2.0, abs=0.1)
    assert orders["even_gap_0"] == pytest.approx(1.0, abs=0.1)


def test_observed_order_helper():
    assert dl.observed_order([1, 0.5, 0.25], [1, 0.25, 0.0625]) == pytest.approx(2.0)
    assert dl.observed_order([1, 0.5], [0.0, 1.0]) is None


def test_well_ratio_table():
    t = dl.well_ratio_table(1.0, A_SEQ[:3])
    assert t.columns == ["a", "U0", "E", "E_limit", "relative_error"]
    assert t.metadata["observed_order"] == pytest.approx(1.0, abs=0.1)
