"""Bracketing root finder with a sign scan, and adaptive quadrature.

Both tolerate residual functions that report precision flags: ``f`` may
return a plain float, a ``(value, flag)`` tuple, or any object with
``value`` and ``precision_flag`` attributes (e.g. :class:`SpecialValue`).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .specfun import Flag


@dataclass(frozen=True)
class RootSpec:
    scan_lo: float
    scan_hi: float
    scan_steps: int = 200
    root_tolerance: float = 1e-12
    residual_tolerance: float = 1e-8
    max_subdivisions: int = 6
    refine_minima: bool = False

    def __post_init__(self):
        if not self.scan_lo < self.scan_hi:
            raise ValueError("scan_lo must be below scan_hi")
        if self.scan_steps < 10:
            raise ValueError("scan_steps must be at least 10")
        if self.root_tolerance <= 0 or self.residual_tolerance <= 0:
            raise ValueError("tolerances must be positive")


class Root(NamedTuple):
    """A refined root.

    ``flag`` is ``"ok"`` when |f(root)| <= residual_tolerance, or ``"steep"``
    when the sign change collapsed to the root tolerance while |f| stayed
    large (a genuine root of a very steep but bounded function).
    """

    root: float
    residual: float
    flag: str = "ok"


class Gap(NamedTuple):
    lo: float
    hi: float
    reason: str


class RootList(list):
    """List of :class:`Root` with a ``gaps`` attribute for skipped regions."""

    def __init__(self, roots=(), gaps=()):
        super().__init__(roots)
        self.gaps: list[Gap] = list(gaps)


def evaluate(f: Callable, x: float) -> tuple[float, Flag]:
    """Call ``f`` and normalize its result to ``(value, flag)``."""
    out = f(x)
    if isinstance(out, tuple):
        val, flag = out[0], Flag(out[1])
    elif hasattr(out, "precision_flag"):
        val, flag = out.value, out.precision_flag
    else:
        val, flag = out, Flag.ok
    val = float(val)
    if not math.isfinite(val):
        flag = Flag.degraded if flag == Flag.ok else flag
    return val, flag


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def bisect(f: Callable, a: float, b: float, spec: RootSpec, fa: float | None = None, fb: float | None = None):
    """Refine a sign change on [a, b]. Returns a Root, or a Gap if refinement hit flags or a pole."""
    if fa is None:
        fa, _ = evaluate(f, a)
    if fb is None:
        fb, _ = evaluate(f, b)
    if fa == 0.0:
        return Root(a, 0.0)
    if fb == 0.0:
        return Root(b, 0.0)
    start = max(abs(fa), abs(fb))
    while b - a > spec.root_tolerance:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm, flag = evaluate(f, m)
        if flag != Flag.ok:
            # nudge once before giving up
            m2 = a + 0.37 * (b - a)
            fm, flag = evaluate(f, m2)
            if flag != Flag.ok:
                return Gap(a, b, f"flag:{flag}")
            m = m2
        if fm == 0.0:
            return Root(m, 0.0)
        if _sign(fm) == _sign(fa):
            a, fa = m, fm
        else:
            b, fb = m, fm
    x, r = (a, fa) if abs(fa) <= abs(fb) else (b, fb)
    if abs(r) <= spec.residual_tolerance:
        return Root(x, abs(r))
    if min(abs(fa), abs(fb)) > 10.0 * start:
        return Gap(a, b, "pole")
    return Root(0.5 * (a + b), abs(r), "steep")


def _clean_samples(f: Callable, spec: RootSpec):
    xs = np.linspace(spec.scan_lo, spec.scan_hi, spec.scan_steps + 1)
    h = xs[1] - xs[0]
    pts: list[tuple[float, float]] = []
    gaps: list[Gap] = []
    for x in xs:
        v, flag = evaluate(f, float(x))
        if flag == Flag.ok:
            pts.append((float(x), v))
            continue
        # subdivide around the flagged point looking for clean neighbours
        found = []
        for k in range(1, spec.max_subdivisions + 1):
            for x2 in (x - h / 2**k, x + h / 2**k):
                if spec.scan_lo <= x2 <= spec.scan_hi:
                    v2, f2 = evaluate(f, float(x2))
                    if f2 == Flag.ok:
                        found.append((float(x2), v2))
            if found:
                break
        if found:
            pts.extend(found)
        else:
            gaps.append(Gap(float(x - h), float(x + h), f"flag:{flag}"))
    pts.sort()
    return pts, gaps


def _scan_interval(f, pts, spec, roots, gaps):
    for (x0, v0), (x1, v1) in zip(pts, pts[1:]):
        if _sign(v0) * _sign(v1) < 0 or v1 == 0.0:
            if v1 == 0.0:
                roots.append(Root(x1, 0.0))
                continue
            out = bisect(f, x0, x1, spec, v0, v1)
            (roots if isinstance(out, Root) else gaps).append(out)


def _hidden_pairs(f, pts, spec, depth=2):
    """Look for root pairs hiding between grid points at local |f| minima."""
    extra = []
    for (xa, va), (xm, vm), (xb, vb) in zip(pts, pts[1:], pts[2:]):
        if _sign(va) != _sign(vm) or _sign(vm) != _sign(vb):
            continue
        if abs(vm) < abs(va) and abs(vm) < abs(vb):
            sub = [(float(x), evaluate(f, float(x))[0]) for x in np.linspace(xa, xb, 17)]
            if any(_sign(p[1]) != _sign(vm) for p in sub):
                extra.append(sub)
            elif depth > 1:
                extra.extend(_hidden_pairs(f, sub, spec, depth - 1))
    return extra


def find_roots(f: Callable, spec: RootSpec) -> RootList:
    """All sign changes of ``f`` on the scan grid, refined by bisection, ascending."""
    pts, gaps = _clean_samples(f, spec)
    roots: list[Root] = []
    _scan_interval(f, pts, spec, roots, gaps)
    if spec.refine_minima:
        for sub in _hidden_pairs(f, pts, spec):
            _scan_interval(f, sub, spec, roots, gaps)
    roots.sort(key=lambda r: r.root)
    # merge duplicates coming from the exact-zero shortcut
    merged: list[Root] = []
    for r in roots:
        if merged and abs(r.root - merged[-1].root) <= 2 * spec.root_tolerance:
            continue
        merged.append(r)
    return RootList(merged, gaps)


def expand_bracket(f: Callable, guess: float, width: float, lo_limit: float = -math.inf,
                   hi_limit: float = math.inf, max_expansions: int = 60):
    """Grow [guess - w, guess + w] symmetrically until f changes sign."""
    w = width
    for _ in range(max_expansions):
        a = max(guess - w, lo_limit)
        b = min(guess + w, hi_limit)
        fa, _ = evaluate(f, a)
        fb, _ = evaluate(f, b)
        if _sign(fa) * _sign(fb) <= 0:
            return a, b, fa, fb
        w *= 2.0
    raise ValueError(f"no sign change found around {guess} within width {w}")


# ---------------------------------------------------------------- quadrature

@dataclass(frozen=True)
class QuadSpec:
    abs_tolerance: float = 1e-11
    rel_tolerance: float = 1e-10
    max_depth: int = 40
    tail_cut: float | None = None

    def __post_init__(self):
        if self.abs_tolerance <= 0 or self.rel_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.max_depth <= 60:
            raise ValueError("max_depth must lie in (0, 60]")
        if self.tail_cut is not None and self.tail_cut <= 0:
            raise ValueError("tail_cut must be positive")


class QuadResult(NamedTuple):
    value: float
    error: float
    flag: Flag = Flag.ok


_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes ascending
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG7 = np.zeros(15)
_WG7[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a, b, vectorized):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c + h * _NODES
    if vectorized:
        y = np.asarray(f(x), dtype=float)
    else:
        y = np.array([f(float(t)) for t in x], dtype=float)
    k = h * float(_WK15 @ y)
    g = h * float(_WG7 @ y)
    return k, abs(k - g)


def _adaptive(f, a, b, spec, vectorized):
    k, e = _gk15(f, a, b, vectorized)
    heap = [(-e, a, b, k, 0)]
    total, err = k, e
    flag = Flag.ok
    while err > max(spec.abs_tolerance, spec.rel_tolerance * abs(total)):
        ne, lo, hi, kv, depth = heapq.heappop(heap)
        if depth >= spec.max_depth or not math.isfinite(total):
            heapq.heappush(heap, (ne, lo, hi, kv, depth))
            flag = Flag.degraded
            break
        mid = 0.5 * (lo + hi)
        k1, e1 = _gk15(f, lo, mid, vectorized)
        k2, e2 = _gk15(f, mid, hi, vectorized)
        total += k1 + k2 - kv
        err += e1 + e2 + ne
        heapq.heappush(heap, (-e1, lo, mid, k1, depth + 1))
        heapq.heappush(heap, (-e2, mid, hi, k2, depth + 1))
    # re-sum to shed accumulated rounding from the running updates
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return QuadResult(total, err, flag)


def integrate(f: Callable, lo: float, hi: float, spec: QuadSpec = QuadSpec(), singular: str | None = None,
              vectorized: bool = False) -> QuadResult:
    """Adaptive Gauss-Kronrod (7/15) quadrature of f on [lo, hi].

    ``singular`` in {"lo", "hi", "both"} marks square-root type endpoint
    behaviour; those ends are integrated after the substitution
    x = x_end +/- t^2, which makes the integrand smooth in t.
    """
    if hi == lo:
        return QuadResult(0.0, 0.0)
    if hi < lo:
        r = integrate(f, hi, lo, spec, {"lo": "hi", "hi": "lo"}.get(singular, singular), vectorized)
        return QuadResult(-r.value, r.error, r.flag)
    if singular is None:
        return _adaptive(f, lo, hi, spec, vectorized)
    if singular not in ("lo", "hi", "both"):
        raise ValueError(f"unknown singular end {singular!r}")

    def at_lo(t):
        return f(lo + t * t) * 2.0 * t

    def at_hi(t):
        return f(hi - t * t) * 2.0 * t

    if singular == "lo":
        return _adaptive(at_lo, 0.0, math.sqrt(hi - lo), spec, vectorized)
    if singular == "hi":
        return _adaptive(at_hi, 0.0, math.sqrt(hi - lo), spec, vectorized)
    half = 0.5 * (hi - lo)
    r1 = _adaptive(at_lo, 0.0, math.sqrt(half), spec, vectorized)
    r2 = _adaptive(at_hi, 0.0, math.sqrt(half), spec, vectorized)
    flag = Flag.degraded if Flag.degraded in (r1.flag, r2.flag) else Flag.ok
    return QuadResult(r1.value + r2.value, r1.error + r2.error, flag)


def gaussian_tail_cut(lo: float, tol: float, width: float = 1.0, power: float = 0.0, amplitude: float = 1.0) -> float:
    """Smallest grid point x >= lo certifying a Gaussian-envelope tail below ``tol``.

    The envelope is amplitude * (t/width)^power * exp(-(t/width)^2); beyond
    u = x/width (with 2u^2 > power) its integral is bounded by
    amplitude * width * u^power exp(-u^2) / (2u - power/u).
    """
    u = max(lo / width, math.sqrt(max(power, 0.0)) + 0.5, 0.5)
    while True:
        bound = amplitude * width * math.exp(power * math.log(u) - u * u) / (2.0 * u - power / u)
        if bound <= tol:
            return u * width
        u += 0.25


def integrate_semi_infinite(f: Callable, lo: float, spec: QuadSpec = QuadSpec(), width: float = 1.0,
                            power: float = 0.0, amplitude: float = 1.0, vectorized: bool = False) -> QuadResult:
    """Integral of a Gaussian-decaying f over [lo, inf) via a certified cut."""
    cut = spec.tail_cut
    if cut is None:
        cut = gaussian_tail_cut(lo, spec.abs_tolerance, width, power, amplitude)
    cut = max(cut, lo)
    r = integrate(f, lo, cut, spec, vectorized=vectorized)
    tail = amplitude * width * math.exp(power * math.log(max(cut / width, 1e-300)) - (cut / width) ** 2)
    return QuadResult(r.value, r.error + tail, r.flag)


def gauss_legendre_panels(f: Callable, lo: float, hi: float, panels: int, order: int = 32,
                          vectorized: bool = False) -> float:
    """Fixed composite Gauss-Legendre rule (an independent second quadrature)."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        c, h = 0.5 * (a + b), 0.5 * (b - a)
        pts = c + h * x
        if vectorized:
            y = np.asarray(f(pts), dtype=float)
        else:
            y = np.array([f(float(t)) for t in pts])
        total += h * float(w @ y)
    return total
