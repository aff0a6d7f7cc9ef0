"""The zero-width limit of the truncated parabolic well at fixed U0 * a.

Covers the nascent-delta sampling check, bound states of the free-space
well, the delta-potential reference values, the harmonic trap with a delta
dimple, and convergence tables of the dimple spectrum toward it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bound_spectrum import EigenState, Method, Parity, Residuals
from .numerics import QuadSpec, RootSpec, bisect, find_roots, integrate, Root
from .params import TrapParams
from .specfun import DEFAULT_POLICY, PrecisionPolicy, SpecialValue, lgamma_sign, regular_solution
from .table import SweepTable

log = logging.getLogger(__name__)


# ---------------------------------------------------------------- nascent delta

def f_delta(x: float, a: float) -> float:
    """Unit-area parabolic bump (3/(4a))(1 - x^2/a^2) on [-a, a]."""
    if abs(x) > a:
        return 0.0
    return 0.75 / a * (1.0 - (x / a) ** 2)


def delta_rep_sample(h: Callable[[float], float], a: float, quad: QuadSpec = QuadSpec(1e-15, 1e-13)) -> float:
    """Integral of f_delta(x) h(x) over [-a, a]."""
    if a <= 0:
        raise ValueError("a must be positive")
    r = integrate(lambda x: f_delta(x, a) * h(x), -a, a, quad)
    return r.value


def delta_bound_energy(sigma: float, hbar: float = 1.0, m: float = 0.5) -> float:
    """Bound-state energy of the attractive delta well of strength sigma (1/length)."""
    return -(hbar * sigma) ** 2 / (8.0 * m)


def sigma_equivalent(U0: float, a: float, hbar: float = 1.0, m: float = 0.5) -> float:
    """Delta strength with the same zero-width limit as the parabolic well."""
    return 8.0 * m * a * U0 / (3.0 * hbar ** 2)


def delta_limit_energy(U0: float, a: float, hbar: float = 1.0, m: float = 0.5) -> float:
    """-(8/9) m U0^2 a^2 / hbar^2."""
    return -8.0 / 9.0 * m * (U0 * a / hbar) ** 2


@dataclass(frozen=True)
class DeltaParams:
    """Delta coupling ``sigma``, its oscillator-scaled form ``Lambda`` and the fixed product ``c`` = U0 * a."""

    sigma: float
    Lambda: float | None = None
    c: float | None = None

    @classmethod
    def from_product(cls, c: float, params: TrapParams | None = None) -> "DeltaParams":
        base = params or TrapParams.natural(a=1.0, U0=0.0)
        sigma = 8.0 * base.m * c / (3.0 * base.hbar ** 2)
        return cls(sigma, sigma * math.sqrt(base.hbar / (base.m * base.omega)), c)


# ---------------------------------------------------------------- free-space well

@dataclass(frozen=True)
class FreeWellParams:
    """Truncated parabolic well -U0 (1 - x^2/a^2) on |x| <= a, zero outside."""

    hbar: float
    m: float
    a: float
    U0: float

    def __post_init__(self):
        if self.a <= 0 or self.U0 <= 0:
            raise ValueError("a and U0 must be positive")

    @classmethod
    def natural(cls, a: float, U0: float) -> "FreeWellParams":
        return cls(1.0, 0.5, a, U0)

    @property
    def nu(self) -> float:
        return math.sqrt(2.0 * self.U0 / (self.m * self.a ** 2))

    @property
    def s(self) -> float:
        """Inverse length of the interior oscillator, sqrt(m nu / hbar)."""
        return math.sqrt(self.m * self.nu / self.hbar)

    def gamma(self, E: float) -> float:
        return E / (self.hbar * self.nu) - 0.5

    def gamma_d(self, E: float) -> float:
        return (E + self.U0) / (self.hbar * self.nu) - 0.5

    def kappa(self, E: float) -> float:
        if E >= 0:
            raise ValueError("kappa is real only for E < 0")
        return math.sqrt(-2.0 * self.m * E) / self.hbar


def well_residual(E: float, params: FreeWellParams, parity: str = "even",
                  policy: PrecisionPolicy = DEFAULT_POLICY) -> SpecialValue:
    """Normalized log-derivative mismatch at x = a against exp(-kappa x)."""
    b = params.s * params.a
    kappa = math.sqrt(max(-2.0 * params.m * E, 0.0)) / params.hbar
    q = kappa / params.s
    inner = regular_solution(parity, params.gamma_d(E), b, policy)
    num = inner.df + q * inner.f
    den = math.hypot(inner.f, inner.df) * math.sqrt(1.0 + q * q)
    return SpecialValue(num / den, inner.flag)


def _well_spec(steps: int = 400) -> RootSpec:
    return RootSpec(-1.0 + 1e-12, 0.0, steps, root_tolerance=1e-15, residual_tolerance=1e-9)


def well_roots(params: FreeWellParams, parity: str = "even", spec: RootSpec | None = None) -> list[float]:
    """Bound energies of one parity, ascending (scan in E/U0 over (-1, 0))."""
    spec = spec or _well_spec()
    roots = find_roots(lambda t: well_residual(t * params.U0, params, parity), spec)
    return [r.root * params.U0 for r in roots if r.root < 0]


def has_odd_bound_state(params: FreeWellParams, spec: RootSpec | None = None) -> bool:
    return bool(well_roots(params, "odd", spec))


def well_ground_energy(params: FreeWellParams, spec: RootSpec | None = None) -> EigenState:
    """Lowest even bound state of the free-space well.

    The odd equation is searched as well and the outcome is logged; use
    :func:`has_odd_bound_state` to query it directly.
    """
    spec = spec or _well_spec()
    log.debug("odd bound state present: %s", has_odd_bound_state(params, spec))
    roots = find_roots(lambda t: well_residual(t * params.U0, params, "even"), spec)
    roots = [r for r in roots if r.root < 0]
    if not roots:
        raise RuntimeError("no even bound state found")
    r = roots[0]
    E = r.root * params.U0
    return EigenState(0, Parity.even, params.gamma(E), E, Method.analytic, r.residual, r.flag)


# ---------------------------------------------------------------- harmonic trap with a delta dimple

def _harm_delta_residual(lam: float, Lambda: float) -> float:
    """sign-faithful, scale-free form of 1/Gamma(-lam/2) - (Lambda/4)/Gamma((1-lam)/2)."""
    def log_r(x):
        if x <= 0 and x == math.floor(x):
            return None, 0
        lg, sg = lgamma_sign(x)
        return -lg, sg

    l1, s1 = log_r(-0.5 * lam)
    l2, s2 = log_r(0.5 * (1.0 - lam))
    if Lambda > 0 and l2 is not None:
        l2 += math.log(Lambda / 4.0)
    else:
        l2 = None
    logs = [v for v in (l1, l2) if v is not None]
    if not logs:
        return 0.0
    top = max(logs)
    t1 = s1 * math.exp(l1 - top) if l1 is not None else 0.0
    t2 = s2 * math.exp(l2 - top) if l2 is not None else 0.0
    return t1 - t2


def harm_delta_even_roots(Lambda: float, count: int, spec: RootSpec | None = None) -> list[float]:
    """First ``count`` roots of Gamma((1-lam)/2)/Gamma(-lam/2) = Lambda/4, ascending.

    Root j > 0 lies in (2j-1, 2j+1); the ground root lies below 1.
    """
    if Lambda < 0:
        raise ValueError("Lambda must be non-negative")
    tol = spec.root_tolerance if spec else 1e-13
    rspec = RootSpec(-1.0, 1.0, 10, root_tolerance=tol, residual_tolerance=1e-9)

    def f(lam):
        return _harm_delta_residual(lam, Lambda)

    out = []
    lo = min(-1.0, -Lambda ** 2 / 8.0 - 2.0)
    f_hi0 = f(1.0)
    while f(lo) * f_hi0 > 0:
        lo = 2.0 * lo - 1.0
    brackets = [(lo, 1.0)] + [(2 * j - 1.0, 2 * j + 1.0) for j in range(1, count)]
    for a, b in brackets[:count]:
        r = bisect(f, a, b, rspec)
        if not isinstance(r, Root):
            raise RuntimeError(f"harmonic+delta root refinement failed in ({a}, {b})")
        out.append(r.root)
    return out


def lambda_equivalent(c: float, params: TrapParams) -> float:
    """Dimensionless delta strength sigma * sqrt(hbar/(m omega)) for U0 * a = c."""
    return DeltaParams.from_product(c, params).Lambda


def _dimple_roots(params: TrapParams, parity: Parity, lo: float, hi: float, count: int) -> list[float]:
    res = Residuals(params)
    steps = max(10, int(math.ceil((hi - lo) / 0.05)))
    spec = RootSpec(lo, hi, steps, root_tolerance=1e-13, residual_tolerance=1e-7)
    roots = find_roots(lambda lam: res(parity, lam), spec)
    return [r.root for r in roots][:count]


def dimple_to_delta_convergence(c: float, a_sequence: Sequence[float], params_base: TrapParams | None = None,
                                levels: int = 4) -> SweepTable:
    """Gaps between the dimple spectrum at U0 = c/a and its delta limit.

    Even levels are compared with the harmonic+delta roots, odd levels with
    the unshifted oscillator values 2n + 1 (in lam). The search window in
    lam is anchored on the reference roots; in this regime the dimple is far
    too narrow to hold deeper levels of its own.
    """
    base = params_base or TrapParams.natural(a=1.0, U0=0.0)
    Lam = lambda_equivalent(c, base)
    ref_even = harm_delta_even_roots(Lam, levels)
    ref_odd = [2.0 * n + 1.0 for n in range(levels)]
    cols = ["a", "U0"] + [f"even_gap_{i}" for i in range(levels)] + [f"odd_gap_{i}" for i in range(levels)]
    table = SweepTable(cols)
    lo = min(ref_even[0], -0.5) - 1.0
    hi = 2.0 * levels + 0.5
    for a in a_sequence:
        p = TrapParams(base.hbar, base.m, base.omega, float(a), c / float(a), base.unit_preset)
        ev = _dimple_roots(p, Parity.even, lo, hi, levels)
        od = _dimple_roots(p, Parity.odd, 0.0, hi, levels)
        if len(ev) < levels or len(od) < levels:
            raise RuntimeError(f"missing dimple levels at a={a}")
        gaps_e = [e - r for e, r in zip(ev, ref_even)]
        gaps_o = [o - r for o, r in zip(od, ref_odd)]
        table.append(float(a), c / float(a), *gaps_e, *gaps_o)
    table.metadata.update({"c": c, "Lambda": Lam, "reference_even": ref_even, "reference_odd": ref_odd})
    table.metadata["observed_order"] = {name: observed_order(table.column("a"), table.column(name))
                                       for name in cols[2:]}
    return table


def observed_order(a_values: Sequence[float], errors: Sequence[float]) -> float | None:
    """Least-squares slope of log|error| against log a (None if any error vanishes)."""
    e = np.abs(np.asarray(errors, dtype=float))
    if len(e) < 2 or np.any(e == 0):
        return None
    slope = np.polyfit(np.log(np.asarray(a_values, dtype=float)), np.log(e), 1)[0]
    return float(slope)


def well_ratio_table(c: float, a_sequence: Sequence[float], hbar: float = 1.0, m: float = 0.5) -> SweepTable:
    """Free-well ground energy against the delta-limit value at fixed U0 * a = c."""
    t = SweepTable(["a", "U0", "E", "E_limit", "relative_error"])
    for a in a_sequence:
        U0 = c / a
        st = well_ground_energy(FreeWellParams(hbar, m, a, U0))
        El = delta_limit_energy(U0, a, hbar, m)
        t.append(float(a), U0, st.energy, El, st.energy / El - 1.0)
    t.metadata["c"] = c
    t.metadata["observed_order"] = observed_order(t.column("a"), t.column("relative_error"))
    return t
