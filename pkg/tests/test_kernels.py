import importlib
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parabolic_dimple import _kernels_py, kernels

compiled = pytest.importorskip("parabolic_dimple._kernels")


@given(st.floats(-40.0, 40.0), st.sampled_from([0.5, 1.5, 2.5]), st.floats(0.0, 80.0))
def test_kummer_series_backends_agree(a, b, y):
    p = _kernels_py.kummer_series(a, b, y, 1e-15, 5000)
    c = compiled.kummer_series(a, b, y, 1e-15, 5000)
    assert p[2:] == c[2:]
    assert c[0] == pytest.approx(p[0], rel=1e-13, abs=1e-13 * p[1])
    assert c[1] == pytest.approx(p[1], rel=1e-13)


@given(st.floats(-10.0, 30.0), st.floats(5.0, 40.0))
def test_asymptotic_backends_agree(lam, z):
    p = _kernels_py.pcf_asymptotic(lam, z, 1e-15, 400)
    c = compiled.pcf_asymptotic(lam, z, 1e-15, 400)
    assert p[2] == c[2]
    if p[2]:
        assert c[0] == pytest.approx(p[0], rel=1e-13)
        assert c[1] == pytest.approx(p[1], rel=1e-12, abs=1e-14)


@given(st.integers(0, 200), st.floats(-15.0, 15.0))
def test_ho_psi_backends_agree(n, z):
    assert compiled.ho_psi(n, z) == pytest.approx(_kernels_py.ho_psi(n, z), rel=1e-13, abs=1e-300)
    a = np.asarray(compiled.ho_psi_all(n, z))
    b = np.asarray(_kernels_py.ho_psi_all(n, z))
    assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


def test_ho_psi_normalized_gaussian():
    assert kernels.ho_psi(0, 0.0) == pytest.approx(math.pi ** -0.25, rel=1e-15)


@given(st.floats(0.0, 0.999), st.floats(0.0, 10.0), st.integers(1, 300))
def test_recurrence_backends_agree(l0, z, steps):
    args = (l0, z, 0.7, 1.1, -0.2, 0.4, steps)
    p = _kernels_py.pcf_recur_up(*args)
    c = compiled.pcf_recur_up(*args)
    assert c[2] == pytest.approx(p[2], rel=1e-12, abs=1e-12)
    assert c[0] == pytest.approx(p[0], rel=1e-10, abs=1e-300)
    assert c[1] == pytest.approx(p[1], rel=1e-10, abs=1e-300)


def test_backend_selection_env():
    code = "from parabolic_dimple import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, PARABOLIC_DIMPLE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env["PARABOLIC_DIMPLE_PURE_PYTHON"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"


def test_benchmark_runs():
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "benchmarks"))
    bench = importlib.import_module("bench_kernels")
    rows = bench.run(repeat=1, number=2)
    assert len(rows) == len(bench.CASES)
    assert all(t_py > 0 and t_cy is not None and t_cy > 0 for _, t_py, t_cy in rows)
