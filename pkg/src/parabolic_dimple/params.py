"""Physical inputs, derived scales and named parameter presets.

All solvers work internally in oscillator units: energies in hbar*omega and
lengths in sqrt(hbar/(m*omega)). ``TrapParams`` is the single source of
truth from which every dimensionless number is derived.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, replace

# CODATA 2018
HBAR_SI = 1.054571817e-34  # J s
AMU_SI = 1.66053906660e-27  # kg


class UnitPreset(str, enum.Enum):
    natural = "natural"
    si = "si"


@dataclass(frozen=True)
class TrapParams:
    """Harmonic trap of frequency ``omega`` plus a truncated parabolic dimple.

    The potential is m omega^2 x^2 / 2 - U0 (1 - x^2/a^2) for |x| <= a and
    m omega^2 x^2 / 2 outside.
    """

    hbar: float
    m: float
    omega: float
    a: float
    U0: float
    unit_preset: UnitPreset = UnitPreset.natural

    def __post_init__(self):
        for name in ("hbar", "m", "omega", "a"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.U0 < 0:
            raise ValueError("U0 must be non-negative")
        object.__setattr__(self, "unit_preset", UnitPreset(self.unit_preset))

    @classmethod
    def natural(cls, a: float, U0: float, omega: float = 1.0) -> "TrapParams":
        """hbar = 1 and 2m = 1."""
        return cls(1.0, 0.5, omega, a, U0, UnitPreset.natural)

    @classmethod
    def si(cls, m: float, omega: float, a: float, U0: float, hbar: float = HBAR_SI) -> "TrapParams":
        return cls(hbar, m, omega, a, U0, UnitPreset.si)

    def with_U0(self, U0: float) -> "TrapParams":
        return replace(self, U0=U0)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["unit_preset"] = self.unit_preset.value
        return d


@dataclass(frozen=True)
class DerivedScales:
    """Dimensionless quantities derived from :class:`TrapParams`."""

    omega_d: float
    A: float
    B: float
    u: float
    ratio: float
    length: float
    energy: float

    @property
    def V_a(self) -> float:
        """Trap potential at the dimple edge, in hbar*omega."""
        return 0.5 * self.A * self.A

    def epsilon(self, E: float) -> float:
        return E / self.energy

    def energy_from_epsilon(self, eps: float) -> float:
        return eps * self.energy

    def lam_from_energy(self, E: float) -> float:
        return E / self.energy - 0.5

    def energy_from_lam(self, lam: float) -> float:
        return (lam + 0.5) * self.energy

    def lam_d(self, lam: float) -> float:
        """Interior index (E + U0)/(hbar omega_d) - 1/2 for outer index lam."""
        return (lam + 0.5 + self.u) / self.ratio - 0.5

    def z(self, x):
        return x / self.length

    def z_d(self, x):
        return x * math.sqrt(self.ratio) / self.length


def derived_scales(params: TrapParams) -> DerivedScales:
    w = params.omega
    omega_d = math.sqrt(w * w + 2.0 * params.U0 / (params.m * params.a ** 2))
    length = math.sqrt(params.hbar / (params.m * w))
    energy = params.hbar * w
    A = params.a / length
    ratio = omega_d / w
    return DerivedScales(
        omega_d=omega_d,
        A=A,
        B=A * math.sqrt(ratio),
        u=params.U0 / energy,
        ratio=ratio,
        length=length,
        energy=energy,
    )


TABLE1 = TrapParams.natural(a=3.0, U0=10.0)
TABLE2 = TrapParams.si(m=23 * AMU_SI, omega=2 * math.pi * 20.0, a=11e-6, U0=1e-30)

PRESETS = {
    "table1": {"kind": "spectrum", "params": TABLE1, "e_max": 10.0},
    "table2": {"kind": "spectrum", "params": TABLE2, "e_max": 499.0},
    "fig1": {"kind": "transition", "params": TABLE1.with_U0(0.0), "n": 0, "target": 0, "u0_grid": (0.0, 20.0, 21)},
    "fig2": {"kind": "transition", "params": TABLE1.with_U0(0.0), "n": 2, "target": 0, "u0_grid": (0.0, 20.0, 21)},
    "fig3": {"kind": "scatter", "vary": "E", "grid": (0.5, 1000.0, 2000), "fixed": {"E": 1.0, "a": 3.0, "U0": 10.0}},
    "fig4": {"kind": "scatter", "vary": "a", "grid": (0.05, 10.0, 400), "fixed": {"E": 1.0, "a": 3.0, "U0": 10.0}},
    "fig5": {"kind": "scatter", "vary": "U0", "grid": (0.05, 100.0, 400), "fixed": {"E": 1.0, "a": 3.0, "U0": 10.0}},
}
