"""Sudden switch-on of the dimple: overlaps of bare-oscillator eigenstates
with eigenstates of the trap-plus-dimple Hamiltonian.

Overlaps are plain x-space integrals of unit-x-normalized states, so that
probabilities are bounded by one and the basis-completeness sum is
meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bound_spectrum import EigenState, Parity, PiecewiseWaveFunction, eigenfunction, lowest_states, solve_spectrum
from .numerics import QuadSpec, gauss_legendre_panels, gaussian_tail_cut, integrate
from .params import TrapParams
from .specfun import Flag
from .table import SweepTable

DEFAULT_QUAD = QuadSpec(abs_tolerance=1e-12, rel_tolerance=1e-10)


class HoState:
    """Bare-oscillator eigenfunction psi_n(x) with unit x-norm.

    Evaluated through the normalized Hermite-function recurrence, so no
    factorials or powers of two are formed.
    """

    def __init__(self, n: int, params: TrapParams):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        self.params = params
        self.length = math.sqrt(params.hbar / (params.m * params.omega))
        self._amp = self.length ** -0.5

    @property
    def parity(self) -> Parity:
        return Parity.even if self.n % 2 == 0 else Parity.odd

    def __call__(self, x):
        if np.ndim(x):
            return np.array([self(float(t)) for t in np.ravel(x)]).reshape(np.shape(x))
        return self._amp * kernels.ho_psi(self.n, x / self.length)


def ho_eigenfunction(n: int, params: TrapParams) -> HoState:
    return HoState(n, params)


@dataclass(frozen=True)
class TransitionRecord:
    n: int
    target_index: int
    amplitude: float
    probability: float
    flag: Flag = Flag.ok
    check_amplitude: float | None = None

    @property
    def quadrature_agreement(self) -> float | None:
        if self.check_amplitude is None:
            return None
        return abs(self.amplitude - self.check_amplitude)


def _overlap_cut(ho: HoState, wf: PiecewiseWaveFunction, tol: float) -> float:
    """x beyond which the overlap integrand's tail is certified below ``tol``."""
    lam = wf.state.lam
    L = ho.length
    z_t = max(wf.scales.A, math.sqrt(2.0 * max(ho.n, lam, 0.0) + 1.0)) + 1.0
    v = abs(ho(z_t * L) * wf(z_t * L)) * L
    power = ho.n + max(lam, 0.0)
    amp = v / math.exp(power * math.log(z_t) - z_t * z_t) if v > 0 else 1.0
    return gaussian_tail_cut(z_t, tol, 1.0, power, amp) * L


def transition_amplitude(n: int, state: EigenState, params: TrapParams, quad: QuadSpec = DEFAULT_QUAD,
                         wavefunction: PiecewiseWaveFunction | None = None, check: bool = False) -> TransitionRecord:
    """Overlap <psi_n | Psi_state> over the whole line.

    Opposite parities return exactly zero without quadrature. With
    ``check=True`` a second, independent strategy (fixed Gauss-Legendre
    panels over the full line, no symmetry folding) is also evaluated.
    """
    ho = HoState(n, params)
    if ho.parity != Parity(state.parity):
        return TransitionRecord(n, state.index, 0.0, 0.0, Flag.ok, 0.0 if check else None)
    wf = wavefunction or eigenfunction(state, params)
    a = params.a
    cut = max(_overlap_cut(ho, wf, quad.abs_tolerance), 1.01 * a)

    def integrand(x):
        return ho(x) * wf(x)

    r1 = integrate(integrand, 0.0, a, quad)
    r2 = integrate(integrand, a, cut, quad)
    t = 2.0 * (r1.value + r2.value)
    flag = Flag.degraded if Flag.degraded in (r1.flag, r2.flag) else Flag.ok
    t_check = None
    if check:
        panels = max(4, int(math.ceil((cut - a) / (0.5 * ho.length))))
        t_check = (gauss_legendre_panels(integrand, -cut, -a, panels)
                   + gauss_legendre_panels(integrand, -a, a, max(4, int(math.ceil(2 * a / (0.5 * ho.length)))))
                   + gauss_legendre_panels(integrand, a, cut, panels))
    return TransitionRecord(n, state.index, t, t * t, flag, t_check)


def probability_sweep(n: int, target_index: int, U0_grid, params: TrapParams,
                      quad: QuadSpec = DEFAULT_QUAD) -> SweepTable:
    """P(n -> target) as a function of the dimple depth.

    Grid points whose overlap came back degraded are listed under the
    ``degraded`` metadata key.
    """
    table = SweepTable(["U0", "P"])
    degraded = []
    for U0 in U0_grid:
        p = params.with_U0(float(U0))
        spec = lowest_states(p, target_index + 1)
        rec = transition_amplitude(n, spec[target_index], p, quad)
        if rec.flag is not Flag.ok:
            degraded.append(float(U0))
        table.append(float(U0), rec.probability)
    table.metadata.update({"n": n, "target_index": target_index, "params": params.as_dict(),
                           "degraded": degraded})
    return table


def completeness_defect(n: int, params: TrapParams, e_max: float, spectrum=None) -> float:
    """1 - sum of P(n -> k) over all dimple levels with energy <= e_max."""
    spectrum = spectrum or solve_spectrum(params, e_max)
    total = 0.0
    for s in spectrum:
        if s.energy > e_max:
            continue
        total += transition_amplitude(n, s, params).probability
    return 1.0 - total
