"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 numerical failure or a residual
above tolerance.  ``VORTEXSTREETS_TOL`` overrides the default residual
tolerance.
"""
from __future__ import annotations

import argparse
import ast
import math
import operator
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import io as vio
from .asymptotics import curve_adherence, sample_curve
from .configuration import RationalWave, VortexConfiguration
from .dynamics import Grid, flow_field, integrate
from .elliptic import hermite_street, lattice_new, solve_hermite, stieltjes_elliptic_residual
from .equilibrium import check_equilibrium, stieltjes_report
from .errors import NumericalError, ValidationError
from .plotting import emit_gnuplot
from .rootfind import DEFAULT_TOL as ROOT_TOL
from .streets import build_critical, build_street
from .trigpoly import ExpPolynomial, StreetSpec
from .whittaker_hill import WHSpec, wh_street

RESIDUAL_TOL = 1e-9
ENV_TOL = "VORTEXSTREETS_TOL"
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
           ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi, "e": math.e, "j": 1j, "i": 1j}


def parse_number(text: str) -> complex:
    """Arithmetic on numbers, ``pi``, ``e`` and ``j``/``i``: ``"pi/2"``, ``"0.3+0.1j"``."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return node.value
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError
    try:
        return complex(ev(ast.parse(text.strip(), mode="eval")))
    except (ValueError, SyntaxError, ZeroDivisionError, TypeError) as exc:
        raise ValidationError(f"cli: cannot parse number {text!r}") from exc


def parse_real(text: str) -> float:
    z = parse_number(text)
    if z.imag != 0:
        raise ValidationError(f"cli: expected a real number, got {text!r}")
    return z.real


def parse_list(text: str | None, conv: Callable[[str], Any]) -> list:
    if text is None or text.strip() == "":
        return []
    return [conv(part) for part in text.split(",")]


def parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ValidationError(f"cli: expected an integer, got {text!r}") from exc


def default_tol() -> float:
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return RESIDUAL_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise ValidationError(f"cli: {ENV_TOL}={raw!r} is not a number") from exc
    if not tol > 0:
        raise ValidationError(f"cli: {ENV_TOL} must be positive")
    return tol


@dataclass
class RunConfig:
    """Validated parameters of one CLI invocation, recorded into output provenance."""

    command: str
    tol: float
    root_tol: float = ROOT_TOL
    params: dict[str, Any] = field(default_factory=dict)

    def record(self) -> dict:
        return asdict(self)


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cli: cannot read {path}: {exc}") from exc


def _log(msg: str):
    print(msg, file=sys.stderr)


def _with_run(config: VortexConfiguration, run: RunConfig) -> VortexConfiguration:
    return config.replace(provenance=dict(config.provenance, run=run.record()))


def _emit_config(config: VortexConfiguration, run: RunConfig, out: str | None) -> int:
    report = check_equilibrium(config)
    tols = {"residual": run.tol, "root": run.root_tol}
    _write(out, vio.config_to_json(_with_run(config, run), report, tols))
    _log(f"{run.command}: {config.n} vortices, {report.equation_kind} residual {report.max_residual:.3e}")
    if report.max_residual > run.tol:
        _log(f"{run.command}: residual {report.max_residual:.3e} exceeds tolerance {run.tol:.1e}")
        return EXIT_NUMERICAL
    return EXIT_OK


# -- street ---------------------------------------------------------------------

def street_spec_from_args(args) -> StreetSpec:
    k = parse_list(args.k, parse_int)
    phi = parse_list(args.phi, parse_number)
    return StreetSpec(tuple(k), tuple(phi) if phi else (), parse_number(args.kappa))


def build_from_spec(spec: StreetSpec, critical: int | None, root_tol: float):
    if critical is not None:
        return build_critical(spec, critical, root_tol)
    return build_street(spec, root_tol)


def cmd_street(args) -> int:
    spec = street_spec_from_args(args)
    run = RunConfig("street", args.tol, args.root_tol,
                    {"k": list(spec.k), "phi": list(spec.phi), "kappa": spec.kappa, "critical": args.critical})
    config, _ = build_from_spec(spec, args.critical, args.root_tol)
    return _emit_config(config, run, args.out)


# -- verify ---------------------------------------------------------------------

def wave_from_provenance(prov: dict) -> RationalWave | None:
    """Rebuild the trigonometric or Whittaker-Hill wave recorded in a provenance block."""
    kind = prov.get("construction")
    if kind == "street":
        spec = StreetSpec(tuple(prov["k"]), tuple(vio.complex_from_json(p) for p in prov["phi"]),
                          vio.complex_from_json(prov["kappa"]))
        crit = prov.get("critical")
        return (build_critical(spec, crit) if crit else build_street(spec))[1]
    if kind == "whittaker_hill":
        from .whittaker_hill import wh_wave
        return wh_wave(WHSpec(prov["s"], vio.complex_from_json(prov["alpha"]), tuple(prov["J"]), tuple(prov["I"])))
    return None


def cmd_verify(args) -> int:
    config = vio.config_from_json(_read(args.input))
    report = check_equilibrium(config)
    _write(args.out, vio.residuals_to_csv(config, report))
    _log(f"verify: {report.equation_kind} residual {report.max_residual:.3e}")
    status = EXIT_OK if report.max_residual <= args.tol else EXIT_NUMERICAL
    if args.stieltjes:
        wave = wave_from_provenance(config.provenance)
        if wave is None:
            raise ValidationError("cli: --stieltjes needs a street or whittaker_hill provenance")
        residues = stieltjes_report(config, wave)
        worst = max((abs(r) for rs in residues.values() for r in rs), default=0.0)
        _log(f"verify: generalized Stieltjes residues max {worst:.3e}")
        if worst > args.stieltjes_tol:
            status = EXIT_NUMERICAL
    if status != EXIT_OK:
        _log("verify: tolerance exceeded")
    return status


# -- simulate -------------------------------------------------------------------

def cmd_simulate(args) -> int:
    if args.input:
        config = vio.config_from_json(_read(args.input))
    elif args.k:
        config, _ = build_from_spec(street_spec_from_args(args), args.critical, args.root_tol)
    else:
        raise ValidationError("cli: simulate needs --in or --k")
    traj = integrate(config, args.T, args.dt, record_every=args.every)
    _write(args.out, vio.trajectory_to_csv(traj))
    err = traj.rigid_motion_error(config.velocity)
    _log(f"simulate: rigid-motion error {err:.3e} (velocity {config.velocity:.6g}), "
         f"shape drift {traj.shape_drift():.3e}")
    if err > args.max_error:
        _log(f"simulate: error exceeds {args.max_error:.1e}")
        return EXIT_NUMERICAL
    return EXIT_OK


# -- curve ----------------------------------------------------------------------

def cmd_curve(args) -> int:
    kappa = parse_real(args.kappa)
    sample = sample_curve(args.m, args.n, kappa, args.samples)
    _write(args.out, vio.curve_to_csv(sample))
    if args.adherence:
        config, _ = build_street(StreetSpec((args.m, args.n), (), kappa))
        which = "equilibrium" if kappa == 0 else "moving"
        _log(f"curve: adherence {curve_adherence(config, which, args.m, args.n, kappa):.4e}")
    return EXIT_OK


# -- wh -------------------------------------------------------------------------

def cmd_wh(args) -> int:
    spec = WHSpec(args.s, parse_number(args.alpha), tuple(parse_list(args.J, parse_int)),
                  tuple(parse_list(args.I, parse_int)))
    run = RunConfig("wh", args.tol, args.root_tol,
                    {"s": spec.s, "alpha": spec.alpha, "J": list(spec.J), "I": list(spec.I)})
    config, _ = wh_street(spec, args.root_tol)
    return _emit_config(config, run, args.out)


# -- elliptic -------------------------------------------------------------------

def cmd_elliptic(args) -> int:
    lat = lattice_new(parse_number(args.omega1), parse_number(args.omega2))
    a_points = parse_list(args.a, parse_number) or [lat.omega1 / 2 + lat.omega2 / 3]
    if args.solve:
        a_points = solve_hermite(a_points, lat)
    config, wave = hermite_street(a_points, lat)
    stil = stieltjes_elliptic_residual(wave)
    config = config.replace(provenance=dict(config.provenance, lattice_report={
        "eta1": lat.eta1, "eta2": lat.eta2, "a": lat.a, "b": lat.b,
        "legendre_defect": abs(lat.legendre_defect()), "linear_defect": lat.linear_defect(),
        "stieltjes_max": float(np.max(np.abs(stil))),
    }))
    _log(f"elliptic: eta1={lat.eta1:.12g} eta2={lat.eta2:.12g} a={lat.a:.12g} b={lat.b:.12g} "
         f"legendre defect {abs(lat.legendre_defect()):.2e}")
    run = RunConfig("elliptic", args.tol, params={"omega1": lat.omega1, "omega2": lat.omega2,
                                                  "a": list(a_points), "solve": args.solve})
    return _emit_config(config, run, args.out)


# -- plot -----------------------------------------------------------------------

def cmd_plot(args) -> int:
    configs = [(Path(p).stem, vio.config_from_json(_read(p))) for p in args.config or []]
    curves = [(Path(p).stem, vio.curve_from_csv(_read(p))) for p in args.curve or []]
    _write(args.out, emit_gnuplot(configs, curves, periods=args.periods, title=args.title or "",
                                  output=args.png))
    return EXIT_OK


# -- figures --------------------------------------------------------------------

def figure_datasets() -> list[dict]:
    """Named datasets: street parameters, optional curve overlay, optional WH data."""
    return [
        {"name": "karman_slow", "k": (1,), "kappa": 0.5},
        {"name": "karman_fast", "k": (1,), "kappa": 1.5},
        {"name": "street_7_8_kappa4", "k": (7, 8), "kappa": 4.0, "curve": (7, 8, 4.0)},
        {"name": "street_7_8_kappa7.4", "k": (7, 8), "kappa": 7.4, "curve": (7, 8, 7.4)},
        {"name": "street_1_2_phase_kappa8", "k": (1, 2), "phi": (0.0, math.pi / 2), "kappa": 8.0},
        {"name": "street_10_12_kappa0", "k": (10, 12), "kappa": 0.0, "curve": (10, 12, 0.0)},
        {"name": "wh_s5_J45_I4", "wh": (5, 1.5, (4, 5), (4,))},
        {"name": "wh_s5_J15_I1", "wh": (5, 1.5, (1, 5), (1,))},
    ]


def _background_field() -> str:
    wave = RationalWave(ExpPolynomial.constant(1), ExpPolynomial.constant(1), alpha=1.0)
    grid = Grid(0.0, math.pi, -1.0, 1.0, 41, 21)
    w, flags = flow_field(wave, grid)
    return vio.field_to_csv(grid.points(), w, flags)


def cmd_figures(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for ds in figure_datasets():
        name = ds["name"]
        if "wh" in ds:
            s, alpha, J, I = ds["wh"]
            spec = WHSpec(s, alpha, J, I)
            run = RunConfig("figures", args.tol, args.root_tol, {"dataset": name})
            config, _ = wh_street(spec, args.root_tol)
        else:
            spec = StreetSpec(ds["k"], ds.get("phi", ()), ds["kappa"])
            run = RunConfig("figures", args.tol, args.root_tol, {"dataset": name})
            config, _ = build_street(spec, args.root_tol)
        code = _emit_config(config, run, str(outdir / f"{name}.json"))
        status = max(status, code)
        curves = []
        if "curve" in ds:
            m, n, kappa = ds["curve"]
            sample = sample_curve(m, n, kappa, 400)
            _write(str(outdir / f"{name}_curve.csv"), vio.curve_to_csv(sample))
            curves.append((f"{name}_curve", sample))
        script = emit_gnuplot([(name, config)], curves, periods=args.periods, title=name,
                              output=f"{name}.png")
        _write(str(outdir / f"{name}.gp"), script)
    _write(str(outdir / "background_flow_field.csv"), _background_field())
    _log(f"figures: wrote {len(figure_datasets())} datasets to {outdir}")
    return status


# -- parser ---------------------------------------------------------------------

def _add_street_args(p, required: bool = True):
    p.add_argument("--k", required=required, help="comma-separated wavenumbers, e.g. 7,8")
    p.add_argument("--phi", default=None, help="comma-separated phases (numbers or expressions like pi/2)")
    p.add_argument("--kappa", default="0", help="spectral parameter (complex allowed)")
    p.add_argument("--critical", type=int, default=None, help="build the critical equilibrium kappa = k_j")


def build_parser() -> argparse.ArgumentParser:
    tol = default_tol()
    parser = argparse.ArgumentParser(prog="vortexstreets", description="Periodic point-vortex equilibria from Wronskians.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_help="output file (default stdout)"):
        p.add_argument("--tol", type=float, default=tol, help=f"residual tolerance (default {tol:g}, env {ENV_TOL})")
        p.add_argument("--root-tol", type=float, default=ROOT_TOL, help="root residual tolerance")
        p.add_argument("--out", default=None, help=out_help)

    p = sub.add_parser("street", help="build a trigonometric street and write JSON")
    _add_street_args(p)
    common(p)
    p.set_defaults(func=cmd_street)

    p = sub.add_parser("verify", help="recompute residuals of a configuration JSON (CSV table)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--stieltjes", action="store_true", help="also check generalized Stieltjes residues")
    p.add_argument("--stieltjes-tol", type=float, default=1e-8)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="RK4 integration, trajectory CSV")
    p.add_argument("--in", dest="input", default=None)
    _add_street_args(p, required=False)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--every", type=int, default=1, help="record every N steps")
    p.add_argument("--max-error", type=float, default=1e-6)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("curve", help="asymptotic curve samples (CSV)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kappa", default="0")
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--adherence", action="store_true", help="also report adherence of the (m, n) street")
    common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("wh", help="Whittaker-Hill background-flow equilibrium (JSON)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--J", required=True)
    p.add_argument("--I", default="")
    common(p)
    p.set_defaults(func=cmd_wh)

    p = sub.add_parser("elliptic", help="lattice constants and Hermite street (JSON)")
    p.add_argument("--omega1", default="pi/2")
    p.add_argument("--omega2", default="pi/2*j")
    p.add_argument("--a", default=None, help="comma-separated Hermite points (default omega1/2 + omega2/3)")
    p.add_argument("--solve", action="store_true", help="solve the Stieltjes conditions starting from --a")
    common(p)
    p.set_defaults(func=cmd_elliptic)

    p = sub.add_parser("plot", help="gnuplot script for configurations and curves")
    p.add_argument("--config", action="append", help="configuration JSON (repeatable)")
    p.add_argument("--curve", action="append", help="curve CSV (repeatable)")
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--title", default=None)
    p.add_argument("--png", default=None, help="png path written by the script")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("figures", help="regenerate every figure dataset")
    p.add_argument("--outdir", default="figures")
    p.add_argument("--periods", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if getattr(args, "tol", 1.0) <= 0:
            raise ValidationError("cli: --tol must be positive")
        return args.func(args)
    except ValidationError as exc:
        _log(f"error: {exc}")
        return EXIT_INVALID
    except NumericalError as exc:
        _log(f"error: {exc}")
        return EXIT_NUMERICAL
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
