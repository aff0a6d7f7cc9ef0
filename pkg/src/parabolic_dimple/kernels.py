"""Backend selection for the numerical kernels.

The compiled extension is preferred; set ``PARABOLIC_DIMPLE_PURE_PYTHON=1``
to force the pure-Python implementation.
"""
import os

from . import _kernels_py

if os.environ.get("PARABOLIC_DIMPLE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

kummer_series = _impl.kummer_series
pcf_asymptotic = _impl.pcf_asymptotic
pcf_recur_up = _impl.pcf_recur_up
ho_psi = _impl.ho_psi
ho_psi_all = _impl.ho_psi_all

__all__ = ["BACKEND", "kummer_series", "pcf_asymptotic", "pcf_recur_up", "ho_psi", "ho_psi_all"]
