"""Semiclassical (JWKB) levels of the trap-plus-dimple potential.

Below the dimple edge energy V(a) = m omega^2 a^2 / 2 the classically allowed
region lies inside the dimple and the levels are those of the shifted
oscillator. Above it the phase integral splits into an inner piece over
[0, a] and an outer piece over [a, x2]; the two closed-form pieces are
added and the quantization condition is solved numerically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .bound_spectrum import Method, solve_spectrum
from .numerics import QuadSpec, Root, RootSpec, bisect, expand_bracket, integrate
from .params import DerivedScales, TrapParams, derived_scales
from .table import SweepTable


class Region(str, enum.Enum):
    inner = "inner"
    outer = "outer"


@dataclass(frozen=True)
class JwkbLevel:
    """A semiclassical level; ``epsilon`` is E/(hbar omega)."""

    n: int
    region: Region
    energy: float
    epsilon: float
    turning_points: tuple[float, float]
    phase_defect: float = 0.0


def n_prime(params: TrapParams) -> int:
    """Number of semiclassical levels below V(a)."""
    sc = derived_scales(params)
    e0 = -sc.u + 0.5 * sc.ratio
    return int(math.floor((sc.V_a - e0) / sc.ratio)) + 1


def phase_inner(eps: float, sc: DerivedScales) -> float:
    """Phase integral (in units of hbar) when the motion stays inside the dimple."""
    return math.pi * (eps + sc.u) / sc.ratio


def phase_outer(eps: float, sc: DerivedScales) -> float:
    """Closed-form phase integral for eps above V(a): inner part plus outer part."""
    A = sc.A
    r = sc.ratio
    R2 = 2.0 * (eps + sc.u) / (r * r)
    X2 = 2.0 * eps
    sa = min(1.0, A / math.sqrt(R2))
    sx = min(1.0, A / math.sqrt(X2))
    inner = 2.0 * (eps + sc.u) / r * math.asin(sa) + A * r * math.sqrt(max(R2 - A * A, 0.0))
    outer = eps * (math.pi - 2.0 * math.asin(sx)) - A * math.sqrt(max(X2 - A * A, 0.0))
    return inner + outer


def phase_outer_quadrature(eps: float, sc: DerivedScales, quad: QuadSpec = QuadSpec(1e-13, 1e-12)) -> float:
    """The same phase integral by direct quadrature (turning point handled by substitution)."""
    A = sc.A
    r2 = sc.ratio ** 2
    X = math.sqrt(2.0 * eps)
    q1 = integrate(lambda z: math.sqrt(max(2.0 * (eps + sc.u) - r2 * z * z, 0.0)), 0.0, A, quad)
    q2 = integrate(lambda z: math.sqrt(max(2.0 * eps - z * z, 0.0)), A, X, quad, singular="hi")
    return 2.0 * (q1.value + q2.value)


def phase(eps: float, sc: DerivedScales) -> float:
    """Phase integral over the allowed region for any eps above the potential minimum."""
    if eps <= sc.V_a:
        return phase_inner(eps, sc)
    return phase_outer(eps, sc)


def jwkb_inner(params: TrapParams, n: int) -> JwkbLevel:
    npr = n_prime(params)
    if not 0 <= n < npr:
        raise ValueError(f"n={n} is not below n'={npr}; use jwkb_outer")
    sc = derived_scales(params)
    eps = -sc.u + (n + 0.5) * sc.ratio
    xt = math.sqrt(2.0 * (eps + sc.u)) / sc.ratio * sc.length
    return JwkbLevel(n, Region.inner, eps * sc.energy, eps, (-xt, xt))


def jwkb_outer(params: TrapParams, n: int, spec: RootSpec | None = None) -> JwkbLevel:
    npr = n_prime(params)
    if n < npr:
        raise ValueError(f"n={n} is below n'={npr}; use jwkb_inner")
    sc = derived_scales(params)
    target = (n + 0.5) * math.pi
    floor_eps = sc.V_a * (1.0 + 1e-15) + 1e-300

    def f(eps):
        return phase_outer(max(eps, floor_eps), sc) - target

    tol = spec.root_tolerance if spec else 1e-12
    rspec = spec or RootSpec(floor_eps, floor_eps + 1.0, 10, root_tolerance=tol, residual_tolerance=1e-9)
    try:
        a, b, fa, fb = expand_bracket(f, n + 0.5, 1.0, lo_limit=floor_eps)
    except ValueError as exc:
        raise ValueError(f"no JWKB root bracketed for n={n}: {exc}") from None
    out = bisect(f, a, b, rspec, fa, fb)
    if not isinstance(out, Root):
        raise ValueError(f"JWKB refinement failed for n={n}: {out}")
    eps = out.root
    defect = abs(phase_outer_quadrature(eps, sc) - phase_outer(eps, sc)) / phase_outer(eps, sc)
    xt = math.sqrt(2.0 * eps) * sc.length
    return JwkbLevel(n, Region.outer, eps * sc.energy, eps, (-xt, xt), defect)


def jwkb_level(params: TrapParams, n: int) -> JwkbLevel:
    return jwkb_inner(params, n) if n < n_prime(params) else jwkb_outer(params, n)


def compare_spectra(params: TrapParams, e_max: float, spectrum=None) -> SweepTable:
    """Rows (n, analytic, jwkb, |difference|) with energies in hbar*omega."""
    spectrum = spectrum or solve_spectrum(params, e_max)
    t = SweepTable(["n", "analytic", "jwkb", "difference"])
    for s in spectrum:
        lv = jwkb_level(params, s.index)
        t.append(s.index, s.epsilon, lv.epsilon, abs(s.epsilon - lv.epsilon))
    t.metadata["params"] = params.as_dict()
    t.metadata["n_prime"] = n_prime(params)
    t.metadata["method"] = Method.analytic.value + "+" + Method.jwkb.value
    return t
