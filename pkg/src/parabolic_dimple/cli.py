"""Command-line entry point: ``parabolic-dimple <subcommand> [options]``.

Exit codes: 0 success, 2 usage error, 3 numerical degradation (suppressed
by ``--allow-degraded``).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bound_spectrum import solve_spectrum
from .delta_limit import dimple_to_delta_convergence
from .jwkb import compare_spectra, jwkb_level
from .numerics import QuadSpec
from .params import PRESETS, TrapParams, UnitPreset, derived_scales
from .scattering import ScatterMethod, ScatterParams, delta_limit_study, grid_values, sweep
from .sudden import DEFAULT_QUAD, probability_sweep
from .table import SweepTable

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGRADED = 3

SPECTRUM_PRESETS = ("table1", "table2")
TRANSITION_PRESETS = ("fig1", "fig2")
SCATTER_PRESETS = ("fig3", "fig4", "fig5")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything a subcommand needs, echoed into the output metadata."""

    subcommand: str
    preset: str | None = None
    out: str | None = None
    as_json: bool = False
    tol: float | None = None
    allow_degraded: bool = False
    options: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {"subcommand": self.subcommand, "preset": self.preset, "tol": self.tol,
                "allow_degraded": self.allow_degraded, **self.options}


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:steps, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:steps, got {text!r}") from None


def parse_fixed(text: str) -> dict:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"--fixed is not valid JSON: {exc}") from None
    if not isinstance(d, dict) or not set(d) <= {"E", "a", "U0", "hbar", "m"}:
        raise argparse.ArgumentTypeError("--fixed must be an object with keys among E, a, U0, hbar, m")
    return d


# ---------------------------------------------------------------- parameter resolution

def trap_params(args, preset: str | None) -> TrapParams:
    """Preset values first, then explicit overrides."""
    base = PRESETS[preset]["params"] if preset else None
    units = args.units or (base.unit_preset.value if base else "natural")
    vals = {k: getattr(args, k) for k in ("hbar", "m", "omega", "a", "u0")}
    if units == UnitPreset.si.value:
        if base is None or base.unit_preset is not UnitPreset.si:
            missing = [k for k in ("m", "omega", "a", "u0") if vals[k] is None]
            if missing:
                raise UsageError("SI units need explicit " + ", ".join("--" + k.replace("_", "-") for k in missing))
            base = TrapParams.si(vals["m"], vals["omega"], vals["a"], vals["u0"])
    elif base is None:
        base = TrapParams.natural(a=3.0, U0=10.0)
    fields = {"hbar": base.hbar, "m": base.m, "omega": base.omega, "a": base.a, "U0": base.U0}
    for key, name in (("hbar", "hbar"), ("m", "m"), ("omega", "omega"), ("a", "a"), ("u0", "U0")):
        if vals[key] is not None:
            fields[name] = vals[key]
    try:
        return TrapParams(fields["hbar"], fields["m"], fields["omega"], fields["a"], fields["U0"], units)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_preset(cfg: RunConfig, allowed) -> None:
    if cfg.preset is not None and cfg.preset not in allowed:
        raise UsageError(f"preset {cfg.preset!r} does not apply to {cfg.subcommand}; choose from {', '.join(allowed)}")


# ---------------------------------------------------------------- subcommands

def cmd_spectrum(cfg: RunConfig, args) -> tuple[SweepTable, bool]:
    _check_preset(cfg, SPECTRUM_PRESETS)
    params = trap_params(args, cfg.preset)
    sc = derived_scales(params)
    e_max = args.e_max if args.e_max is not None else (PRESETS[cfg.preset]["e_max"] if cfg.preset else 10.0)
    method = args.method or ("both" if cfg.subcommand == "jwkb" else "analytic")
    cfg.options.update({"e_max": e_max, "method": method, "params": params.as_dict()})
    tol = cfg.tol if cfg.tol is not None else 1e-13
    spectrum = solve_spectrum(params, sc.energy_from_epsilon(e_max), root_tolerance=tol)
    degraded = bool(spectrum.gaps) or any(s.flag not in ("ok", "steep") for s in spectrum)
    if method == "analytic":
        table = spectrum.to_table()
    elif method == "both":
        table = compare_spectra(params, sc.energy_from_epsilon(e_max), spectrum)
    else:
        table = SweepTable(["n", "region", "jwkb"])
        for s in spectrum:
            lv = jwkb_level(params, s.index)
            table.append(lv.n, lv.region.value, lv.epsilon)
        table.metadata["params"] = params.as_dict()
    if spectrum.diagnostics:
        table.metadata["diagnostics"] = spectrum.diagnostics
    return table, degraded


def cmd_transitions(cfg: RunConfig, args) -> tuple[SweepTable, bool]:
    _check_preset(cfg, TRANSITION_PRESETS)
    preset = PRESETS[cfg.preset] if cfg.preset else {}
    params = trap_params(args, cfg.preset)
    n = args.n if args.n is not None else preset.get("n", 0)
    target = args.target if args.target is not None else preset.get("target", 0)
    lo, hi, steps = args.u0_grid or preset.get("u0_grid", (0.0, 20.0, 21))
    if steps < 1 or lo < 0 or hi < lo:
        raise UsageError("--u0-grid needs 0 <= lo <= hi and steps >= 1")
    quad = QuadSpec(cfg.tol, DEFAULT_QUAD.rel_tolerance) if cfg.tol else DEFAULT_QUAD
    cfg.options.update({"n": n, "target": target, "u0_grid": [lo, hi, steps], "params": params.as_dict()})
    table = probability_sweep(n, target, np.linspace(lo, hi, steps), params, quad)
    return table, bool(table.metadata.get("degraded"))


def cmd_scatter(cfg: RunConfig, args) -> tuple[SweepTable, bool]:
    _check_preset(cfg, SCATTER_PRESETS)
    preset = PRESETS[cfg.preset] if cfg.preset else {}
    vary = args.vary or preset.get("vary")
    if vary is None:
        raise UsageError("--vary is required without a figure preset")
    lo, hi, steps = args.grid or preset.get("grid", (0.5, 100.0, 200))
    fixed = dict(preset.get("fixed", {"E": 1.0, "a": 3.0, "U0": 10.0}))
    fixed.update(args.fixed or {})
    method = args.method or ScatterMethod.closed_form.value
    if method not in (m.value for m in ScatterMethod):
        raise UsageError(f"scatter --method must be closed_form or linear_solve, got {method!r}")
    try:
        base = ScatterParams(**fixed)
        grid = grid_values(lo, hi, steps)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    cfg.options.update({"vary": vary, "grid": [lo, hi, steps], "fixed": fixed, "method": method})
    table = sweep(vary, grid, base, method)
    return table, any(f == "degraded" for f in table.column("flag"))


def cmd_figures(cfg: RunConfig, args) -> tuple[SweepTable, bool]:
    if cfg.preset not in TRANSITION_PRESETS + SCATTER_PRESETS:
        raise UsageError("figures needs --preset fig1..fig5")
    if cfg.preset in TRANSITION_PRESETS:
        return cmd_transitions(cfg, args)
    return cmd_scatter(cfg, args)


def cmd_delta_limit(cfg: RunConfig, args) -> tuple[SweepTable, bool]:
    if cfg.preset is not None:
        raise UsageError("delta-limit takes no preset")
    if args.c < 0 or args.a_start <= 0 or args.halvings < 0:
        raise UsageError("need --c >= 0, --a-start > 0 and --halvings >= 0")
    a_seq = [args.a_start / 2 ** i for i in range(args.halvings + 1)]
    cfg.options.update({"c": args.c, "a_start": args.a_start, "halvings": args.halvings, "energy": args.energy})
    gaps = dimple_to_delta_convergence(args.c, a_seq)
    scat = delta_limit_study(args.c, a_seq, E=args.energy)
    table = SweepTable(gaps.columns + ["T_gap"], metadata=dict(gaps.metadata))
    for row, t_gap in zip(gaps.rows, scat.column("T_gap")):
        table.append(*row, t_gap)
    return table, False


COMMANDS = {
    "spectrum": cmd_spectrum,
    "jwkb": cmd_spectrum,
    "transitions": cmd_transitions,
    "figures": cmd_figures,
    "delta-limit": cmd_delta_limit,
    "scatter": cmd_scatter,
}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set")
    g.add_argument("--out", help="output path (default: stdout)")
    g.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    g.add_argument("--tol", type=float, help="root tolerance (spectrum, jwkb) or absolute quadrature tolerance (transitions)")
    g.add_argument("--allow-degraded", action="store_true", help="exit 0 even if some rows are degraded")

    trap = argparse.ArgumentParser(add_help=False)
    t = trap.add_argument_group("trap parameters")
    t.add_argument("--units", choices=[u.value for u in UnitPreset])
    t.add_argument("--hbar", type=float)
    t.add_argument("--m", type=float, help="mass")
    t.add_argument("--omega", type=float, help="trap angular frequency")
    t.add_argument("--a", type=float, help="dimple half-width")
    t.add_argument("--u0", type=float, help="dimple depth")

    p = argparse.ArgumentParser(prog="parabolic-dimple",
                                description="Harmonic trap with a truncated parabolic dimple: spectra, "
                                            "transitions, scattering and the delta limit.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    for name, default_help in (("spectrum", "bound levels (analytic by default)"),
                               ("jwkb", "bound levels with the semiclassical comparison")):
        s = sub.add_parser(name, parents=[common, trap], help=default_help)
        s.add_argument("--e-max", type=float, help="energy cap in units of hbar*omega")
        s.add_argument("--method", choices=["analytic", "jwkb", "both"])

    s = sub.add_parser("transitions", parents=[common, trap], help="sudden-switch probabilities against U0")
    s.add_argument("--n", type=int, help="initial oscillator level")
    s.add_argument("--target", type=int, help="index of the dimple level")
    s.add_argument("--u0-grid", type=parse_grid, help="lo:hi:steps")

    s = sub.add_parser("figures", parents=[common, trap], help="data behind the figure presets")
    s.add_argument("--n", type=int)
    s.add_argument("--target", type=int)
    s.add_argument("--u0-grid", type=parse_grid)
    s.add_argument("--vary", choices=["E", "a", "U0"])
    s.add_argument("--grid", type=parse_grid)
    s.add_argument("--fixed", type=parse_fixed)
    s.add_argument("--method")

    s = sub.add_parser("delta-limit", parents=[common], help="convergence toward the delta potential")
    s.add_argument("--c", type=float, default=1.0, help="fixed product U0*a")
    s.add_argument("--a-start", type=float, default=0.125)
    s.add_argument("--halvings", type=int, default=7)
    s.add_argument("--energy", type=float, default=1.0, help="scattering energy for the transmission column")

    s = sub.add_parser("scatter", parents=[common], help="reflection and transmission sweeps")
    s.add_argument("--vary", choices=["E", "a", "U0"])
    s.add_argument("--grid", type=parse_grid, help="lo:hi:steps")
    s.add_argument("--fixed", type=parse_fixed, help='JSON, e.g. \'{"E": 1, "a": 3, "U0": 10}\'')
    s.add_argument("--method", choices=[m.value for m in ScatterMethod])
    return p


def emit(table: SweepTable, cfg: RunConfig) -> None:
    text = table.to_json() + "\n" if cfg.as_json else table.to_csv()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.subcommand, args.preset, args.out, args.json, args.tol, args.allow_degraded)
    try:
        table, degraded = COMMANDS[args.subcommand](cfg, args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    table.stamp(config=cfg.echo())
    emit(table, cfg)
    if degraded and not cfg.allow_degraded:
        print("numerical degradation in output rows (use --allow-degraded to accept)", file=sys.stderr)
        return EXIT_DEGRADED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
