import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parabolic_dimple import scattering as sc
from parabolic_dimple.specfun import Flag, PrecisionPolicy


def test_delta_amplitudes():
    r = sc.delta_amplitudes(1.3, 0.0)
    assert (r.R, r.T) == (0, 1)
    r = sc.delta_amplitudes(1.5, 3.0)
    assert r.transmission == pytest.approx(0.5) and r.reflection == pytest.approx(0.5)
    assert abs(sc.delta_amplitudes(1e8, 2.0).T - 1) < 1e-7
    with pytest.raises(ValueError):
        sc.delta_amplitudes(0.0, 1.0)


@given(st.floats(0.01, 100.0), st.floats(0.0, 100.0))
def test_delta_unitarity(k, sigma):
    assert abs(sc.delta_amplitudes(k, sigma).unitarity_defect) < 1e-14


def test_params_validation_and_scales():
    p = sc.ScatterParams(1.0, 3.0, 10.0)
    assert p.k == 1.0
    assert p.s == pytest.approx(math.sqrt(0.5 * math.sqrt(40.0 / 9.0)))
    assert p.gamma_d == pytest.approx(11.0 / math.sqrt(40.0 / 9.0) - 0.5)
    for bad in (dict(E=0.0, a=1.0, U0=1.0), dict(E=1.0, a=0.0, U0=1.0), dict(E=1.0, a=1.0, U0=-1.0)):
        with pytest.raises(ValueError):
            sc.ScatterParams(**bad)


def test_free_particle():
    for m in sc.ScatterMethod:
        r = sc.parabolic_amplitudes(sc.ScatterParams(2.0, 1.0, 0.0), m)
        assert r.R == 0 and r.T == 1 and r.method is m


def test_f_functions_at_zero_argument_limit():
    # tiny a*s: every Phi -> 1
    p = sc.ScatterParams(1.0, 1e-9, 1e-9)
    _, phis, flag = sc.f_functions(p)
    assert flag is Flag.ok
    assert phis["p13"] == pytest.approx(1.0, abs=1e-12)


def test_weak_well_reflection_vanishes():
    r = sc.parabolic_amplitudes(sc.ScatterParams(2.0, 1.0, 1e-8))
    ls = sc.parabolic_amplitudes(sc.ScatterParams(2.0, 1.0, 1e-8), "linear_solve")
    assert abs(r.R) < 1e-7 and abs(r.R - ls.R) < 1e-12


GRID = [(E, a, U) for E in np.linspace(0.1, 50, 10) for a in np.linspace(0.1, 5, 10) for U in np.linspace(0.1, 20, 10)]


def test_oracle_equivalence_grid():
    worst_diff = 0.0
    worst_defect_ls = 0.0
    for E, a, U in GRID:
        p = sc.ScatterParams(E, a, U)
        cf = sc.parabolic_amplitudes(p, "closed_form")
        ls = sc.parabolic_amplitudes(p, "linear_solve")
        assert cf.method is sc.ScatterMethod.closed_form
        worst_diff = max(worst_diff, abs(cf.R - ls.R), abs(cf.T - ls.T))
        worst_defect_ls = max(worst_defect_ls, abs(ls.unitarity_defect))
    assert worst_diff <= 1e-8
    assert worst_defect_ls <= 1e-10


@given(st.floats(0.1, 50.0), st.floats(0.1, 5.0), st.floats(0.1, 20.0))
def test_left_right_reflection_symmetry(E, a, U):
    p = sc.ScatterParams(E, a, U)
    left = sc.parabolic_amplitudes(p, "linear_solve").R
    right = sc.reflection_from_right(p)
    assert abs(left - right) < 1e-10


def test_degraded_closed_form_falls_back():
    policy = PrecisionPolicy(extended=False)
    p = sc.ScatterParams(900.0, 3.0, 10.0)
    r = sc.parabolic_amplitudes(p, "closed_form", policy)
    assert r.method is sc.ScatterMethod.linear_solve and r.note
    ref = sc.parabolic_amplitudes(p, "linear_solve")
    assert abs(r.T - ref.T) < 1e-12 and r.flag is Flag.ok
    t = sc.sweep("E", [900.0], sc.ScatterParams(1.0, 3.0, 10.0), "closed_form", policy)
    assert t.column("flag") == ["fallback"]


def test_delta_limit_transmission():
    c = 1.0
    gaps = sc.delta_limit_study(c, [2.0 ** -k for k in range(3, 11)]).column("T_gap")
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    p = sc.ScatterParams(1.0, 1e-4, c / 1e-4)
    assert sc.delta_limit_T(p) == pytest.approx(3j * p.k / (3j * p.k + 4 * p.m * c / p.hbar ** 2))


def test_energy_sweep_resonances_reach_unity():
    fixed = sc.ScatterParams(1.0, 3.0, 10.0)
    grid = np.linspace(0.5, 60.0, 240)
    t = sc.sweep("E", grid, fixed)
    maxima, minima = sc.local_extrema(t.column("T2"))
    assert maxima and minima
    for i in maxima[:4]:
        _, peak = sc.refine_peak("E", grid[i - 1], grid[i + 1], fixed)
        assert peak == pytest.approx(1.0, abs=1e-4)
    assert min(t.column("T2")[i] for i in minima) > 0


def test_width_sweep_oscillations_shrink():
    t = sc.sweep("a", np.linspace(0.05, 10.0, 400), sc.ScatterParams(1.0, 3.0, 10.0))
    T2 = t.column("T2")
    _, minima = sc.local_extrema(T2)
    depths = [1.0 - T2[i] for i in minima]
    assert len(depths) > 5
    assert all(b < a for a, b in zip(depths, depths[1:]))


def test_sweep_columns_and_errors():
    t = sc.sweep("U0", [1.0, 2.0], sc.ScatterParams(1.0, 3.0, 10.0))
    assert t.columns == ["x", "T2", "R2", "defect", "flag"]
    assert t.column("flag") == ["ok", "ok"]
    with pytest.raises(ValueError):
        sc.sweep("k", [1.0], sc.ScatterParams(1.0, 3.0, 10.0))
    with pytest.raises(ValueError):
        sc.grid_values(0.0, 1.0, 10)
