"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import importlib
import timeit

from parabolic_dimple import _kernels_py

CASES = {
    "kummer_series(-20.5, 0.5, 30)": lambda k: k.kummer_series(-20.5, 0.5, 30.0, 1e-15, 5000),
    "kummer_series(3.2, 1.5, 80)": lambda k: k.kummer_series(3.2, 1.5, 80.0, 1e-15, 5000),
    "pcf_asymptotic(4.3, 9)": lambda k: k.pcf_asymptotic(4.3, 9.0, 1e-15, 200),
    "ho_psi(60, 3.1)": lambda k: k.ho_psi(60, 3.1),
    "pcf_recur_up(0.3, 6, 400 steps)": lambda k: k.pcf_recur_up(0.3, 6.0, 1.0, 1.0, 0.5, 0.5, 400),
}


def run(repeat: int = 5, number: int = 200) -> list[tuple[str, float, float | None]]:
    try:
        compiled = importlib.import_module("parabolic_dimple._kernels")
    except ImportError:
        compiled = None
    out = []
    for name, fn in CASES.items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), repeat=repeat, number=number)) / number
        t_cy = None
        if compiled is not None:
            t_cy = min(timeit.repeat(lambda: fn(compiled), repeat=repeat, number=number)) / number
        out.append((name, t_py, t_cy))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=200)
    args = ap.parse_args()
    rows = run(args.repeat, args.number)
    print(f"{'kernel':36s} {'python (us)':>12s} {'cython (us)':>12s} {'speedup':>8s}")
    for name, t_py, t_cy in rows:
        if t_cy is None:
            print(f"{name:36s} {t_py * 1e6:12.2f} {'n/a':>12s} {'n/a':>8s}")
        else:
            print(f"{name:36s} {t_py * 1e6:12.2f} {t_cy * 1e6:12.2f} {t_py / t_cy:8.1f}")


if __name__ == "__main__":
    main()
