"""Bound states of the harmonic trap with a truncated parabolic dimple.

Outside the dimple the decaying solution is D_lam(z); inside, the even or
odd regular solution of the steeper oscillator with index lam_d. The
eigenvalue condition is continuity of the logarithmic derivative at |x| = a,
evaluated in a cross-multiplied, normalized form that is bounded and has no
poles:

    r(lam) = (sqrt(omega/omega_d) f G - f' D) / (|(f, f')| |(D, G)|)

where D, G are taken at A and f, f' at B.
"""
from __future__ import annotations

import enum
import math
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .numerics import QuadSpec, Root, RootSpec, find_roots, gaussian_tail_cut, integrate
from .params import DerivedScales, TrapParams, derived_scales
from .specfun import DEFAULT_POLICY, Flag, PrecisionPolicy, SpecialValue, pcf_pair, regular_solution, worst
from .table import SweepTable

SCAN_STEP = 0.05


class Parity(str, enum.Enum):
    even = "even"
    odd = "odd"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.even else -1


class Method(str, enum.Enum):
    analytic = "analytic"
    jwkb = "jwkb"


@dataclass(frozen=True)
class EigenState:
    """One bound level; ``energy`` is in the units of ``TrapParams``."""

    index: int
    parity: Parity
    lam: float
    energy: float
    method: Method = Method.analytic
    residual: float = 0.0
    flag: str = "ok"

    @property
    def epsilon(self) -> float:
        """Energy in units of hbar*omega."""
        return self.lam + 0.5


@dataclass
class Spectrum:
    params: TrapParams
    states: list[EigenState]
    gaps: list = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i) -> EigenState:
        return self.states[i]

    def __iter__(self):
        return iter(self.states)

    def epsilons(self) -> np.ndarray:
        return np.array([s.epsilon for s in self.states])

    def to_table(self) -> SweepTable:
        t = SweepTable(["index", "parity", "lambda", "energy_over_hbar_omega", "residual", "method", "flag"])
        for s in self.states:
            t.append(s.index, s.parity.value, s.lam, s.epsilon, s.residual, s.method.value, s.flag)
        t.metadata["params"] = self.params.as_dict()
        if self.gaps:
            t.metadata["gaps"] = [list(g) for g in self.gaps]
        return t


class Residuals:
    """Even/odd matching residuals for one parameter set.

    Outer function values at A are shared between parities and cached.
    """

    def __init__(self, params: TrapParams, policy: PrecisionPolicy = DEFAULT_POLICY, cache_size: int = 4096):
        self.params = params
        self.scales: DerivedScales = derived_scales(params)
        self.policy = policy
        self._outer: OrderedDict = OrderedDict()
        self._cache_size = cache_size

    def outer(self, lam: float):
        hit = self._outer.get(lam)
        if hit is None:
            hit = pcf_pair(lam, self.scales.A, self.policy)
            self._outer[lam] = hit
            if len(self._outer) > self._cache_size:
                self._outer.popitem(last=False)
        return hit

    def parts(self, parity: Parity, lam: float):
        sc = self.scales
        out = self.outer(lam)
        inner = regular_solution(Parity(parity).value, sc.lam_d(lam), sc.B, self.policy)
        return out, inner

    def __call__(self, parity: Parity, lam: float) -> SpecialValue:
        out, inner = self.parts(parity, lam)
        d, g = out.d, out.g
        f, df = inner.f, inner.df
        num = f * g / math.sqrt(self.scales.ratio) - df * d
        den = math.hypot(f, df) * math.hypot(d, g)
        flag = worst(out.flag, inner.flag)
        if den == 0.0 or not math.isfinite(num):
            return SpecialValue(math.nan, Flag.degraded)
        return SpecialValue(num / den, flag)

    def even(self, lam: float) -> SpecialValue:
        return self(Parity.even, lam)

    def odd(self, lam: float) -> SpecialValue:
        return self(Parity.odd, lam)


def even_residual(lam: float, params: TrapParams, policy: PrecisionPolicy = DEFAULT_POLICY) -> SpecialValue:
    return Residuals(params, policy).even(lam)


def odd_residual(lam: float, params: TrapParams, policy: PrecisionPolicy = DEFAULT_POLICY) -> SpecialValue:
    return Residuals(params, policy).odd(lam)


def _both_sides_finite(res: Residuals, parity: Parity, lam: float) -> bool:
    """The ratio form of the eigenvalue equation needs D(A) != 0 and f(B) != 0."""
    out, inner = res.parts(parity, lam)
    return out.d != 0.0 and inner.f != 0.0


def default_root_spec(lo: float, hi: float, step: float = SCAN_STEP, **kw) -> RootSpec:
    steps = max(10, int(math.ceil((hi - lo) / step)))
    return RootSpec(lo, hi, steps, **kw)


def solve_spectrum(params: TrapParams, e_max: float, spec: RootSpec | None = None,
                   policy: PrecisionPolicy = DEFAULT_POLICY, residuals: Residuals | None = None,
                   root_tolerance: float = 1e-13) -> Spectrum:
    """All bound levels with energy <= e_max (same units as ``params``).

    The default scan starts half a unit below lam = -U0/(hbar omega), the
    lowest value allowed by the bound E >= -U0 + hbar omega / 2 (reached
    when U0 = 0), and ends at the energy cap.
    """
    res = residuals or Residuals(params, policy)
    sc = res.scales
    lam_hi = sc.lam_from_energy(e_max)
    if spec is None:
        lam_lo = -sc.u - 0.5
        if lam_hi <= lam_lo:
            raise ValueError("e_max lies below the potential minimum")
        spec = default_root_spec(lam_lo, lam_hi + 1e-9, root_tolerance=root_tolerance, residual_tolerance=1e-7)
    found: list[tuple[float, Parity, Root]] = []
    gaps = []
    diagnostics = []
    for parity in (Parity.even, Parity.odd):
        roots = find_roots(lambda lam, p=parity: res(p, lam), spec)
        gaps.extend(roots.gaps)
        for r in roots:
            if not _both_sides_finite(res, parity, r.root):
                diagnostics.append(f"excluded point at lam={r.root!r} ({parity.value})")
                continue
            found.append((r.root, parity, r))
    found.sort(key=lambda t: t[0])
    states = []
    for lam, parity, r in found:
        if lam > lam_hi:
            continue
        states.append(EigenState(len(states), parity, lam, sc.energy_from_lam(lam), Method.analytic,
                                 r.residual, r.flag))
    for s0, s1 in zip(states, states[1:]):
        if s0.parity == s1.parity:
            diagnostics.append(f"parity does not alternate at index {s1.index}")
    if states and states[0].parity != Parity.even:
        diagnostics.append("ground state is not even")
    return Spectrum(params, states, gaps, diagnostics)


def lowest_states(params: TrapParams, count: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                  window: float = 2.0, residuals: Residuals | None = None) -> Spectrum:
    """The ``count`` lowest levels, scanning upward in windows of ``window`` in lam."""
    res = residuals or Residuals(params, policy)
    sc = res.scales
    lo = -sc.u - 0.5
    states: list[EigenState] = []
    while len(states) < count:
        hi = lo + window
        spec = default_root_spec(lo, hi, root_tolerance=1e-13, residual_tolerance=1e-7)
        found = []
        for parity in (Parity.even, Parity.odd):
            for r in find_roots(lambda lam, p=parity: res(p, lam), spec):
                if r.root > lo or not states:
                    found.append((r.root, parity, r))
        for lam, parity, r in sorted(found, key=lambda t: t[0]):
            if states and lam <= states[-1].lam + 1e-12:
                continue
            states.append(EigenState(len(states), parity, lam, sc.energy_from_lam(lam), Method.analytic,
                                     r.residual, r.flag))
        lo = hi
    return Spectrum(params, states[:count])


# ---------------------------------------------------------------- eigenfunctions

class PiecewiseWaveFunction:
    """Normalized eigenfunction on the whole line.

    Psi(x) = c1 D_lam(z) for x > a and c2 f(z_d) for |x| <= a, with the
    parity image for x < -a. ``c1`` multiplies D_lam(z) * exp(-log_scale)
    so that very large orders stay representable.
    """

    def __init__(self, params: TrapParams, state: EigenState, policy: PrecisionPolicy = DEFAULT_POLICY,
                 quad: QuadSpec | None = None):
        self.params = params
        self.state = state
        self.policy = policy
        self.scales = sc = derived_scales(params)
        self.parity = Parity(state.parity)
        out = pcf_pair(state.lam, sc.A, policy)
        inner = regular_solution(self.parity.value, sc.lam_d(state.lam), sc.B, policy)
        self.log_scale = out.log_scale
        root_r = math.sqrt(sc.ratio)
        # match the value where it is well conditioned, else the derivative
        if abs(inner.f) >= abs(inner.df) * 1e-3:
            c2 = out.d / inner.f
        else:
            c2 = out.g / (root_r * inner.df)
        self._c1 = 1.0
        self._c2 = c2
        dv = out.d - c2 * inner.f
        dd = out.g - c2 * root_r * inner.df
        self.continuity_value_defect = abs(dv) / max(abs(out.d), abs(out.g), 1e-300)
        self.continuity_derivative_defect = abs(dd) / max(abs(out.g), abs(out.d), 1e-300)
        quad = quad or QuadSpec(abs_tolerance=1e-13, rel_tolerance=1e-11)
        norm2, err, flag = self._norm_squared(quad)
        if flag != Flag.ok:
            raise RuntimeError("normalization quadrature degraded")
        k = 1.0 / math.sqrt(norm2)
        self._c1 *= k
        self._c2 *= k
        self.norm_error = err / norm2
        self.flag = worst(out.flag, inner.flag)

    @property
    def c1(self) -> float:
        """Outer coefficient multiplying D_lam(z) * exp(-log_scale)."""
        return self._c1

    @property
    def c2(self) -> float:
        """Inner coefficient multiplying the regular solution f(z_d)."""
        return self._c2

    def outer_cut(self, tol: float = 1e-14) -> float:
        """z beyond which |Psi|^2 integrates to less than ``tol`` (Gaussian envelope)."""
        lam = self.state.lam
        z_t = max(self.scales.A, math.sqrt(max(2.0 * lam + 1.0, 0.0)) + 1.0)
        v = self._outer_z(z_t) ** 2
        power = 2.0 * max(lam, 0.0)
        amp = v / math.exp(power * math.log(z_t) - z_t * z_t) if v > 0 else 1.0
        return gaussian_tail_cut(z_t, tol, 1.0, power, amp)

    def _outer_z(self, z: float) -> float:
        p = pcf_pair(self.state.lam, z, self.policy)
        return self._c1 * p.d * math.exp(p.log_scale - self.log_scale)

    def _outer_dz(self, z: float) -> float:
        p = pcf_pair(self.state.lam, z, self.policy)
        return self._c1 * p.g * math.exp(p.log_scale - self.log_scale)

    def _inner_x(self, x: float) -> float:
        sc = self.scales
        r = regular_solution(self.parity.value, sc.lam_d(self.state.lam), sc.z_d(x), self.policy)
        return self._c2 * r.f

    def _norm_squared(self, quad: QuadSpec):
        sc = self.scales
        a = self.params.a
        inner = integrate(lambda x: self._inner_x(x) ** 2, 0.0, a, quad)
        cut = self.outer_cut(quad.abs_tolerance)
        outer = integrate(lambda z: self._outer_z(z) ** 2, sc.A, max(cut, sc.A), quad)
        flag = worst(inner.flag, outer.flag)
        return 2.0 * (inner.value + sc.length * outer.value), 2.0 * (inner.error + sc.length * outer.error), flag

    def __call__(self, x):
        if np.ndim(x):
            return np.array([self(float(t)) for t in np.ravel(x)]).reshape(np.shape(x))
        ax = abs(x)
        sgn = 1.0 if (x >= 0 or self.parity is Parity.even) else -1.0
        if ax <= self.params.a:
            return sgn * self._inner_x(ax)
        return sgn * self._outer_z(ax / self.scales.length)

    def derivative(self, x: float) -> float:
        """dPsi/dx (x-units)."""
        ax = abs(x)
        # derivative of an even function is odd and vice versa
        sgn = 1.0 if (x >= 0 or self.parity is Parity.odd) else -1.0
        sc = self.scales
        if ax <= self.params.a:
            r = regular_solution(self.parity.value, sc.lam_d(self.state.lam), sc.z_d(ax), self.policy)
            return sgn * self._c2 * r.df * math.sqrt(sc.ratio) / sc.length
        return sgn * self._outer_dz(ax / sc.length) / sc.length

    def norm(self, quad: QuadSpec | None = None) -> float:
        """Recomputed integral of |Psi|^2 (should be 1)."""
        n2, _, _ = self._norm_squared(quad or QuadSpec(abs_tolerance=1e-13, rel_tolerance=1e-11))
        return n2

    def continuity_ok(self, tol: float = 1e-6) -> bool:
        return self.continuity_value_defect <= tol and self.continuity_derivative_defect <= tol


def eigenfunction(state: EigenState, params: TrapParams, policy: PrecisionPolicy = DEFAULT_POLICY,
                  quad: QuadSpec | None = None) -> PiecewiseWaveFunction:
    return PiecewiseWaveFunction(params, state, policy, quad)
