"""Command-line entry point.

Exit status: 0 on success, 1 when input fails validation (or a design fails
the ``feasibility`` gate), 2 when a solver step fails.
"""
import argparse
import sys
from math import degrees, tan
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (active_interval, contact_loss_check, max_pressure_angle,
                       pressure_profile, sweep)
from .core import pressure_angle
from .errors import (ClosureFailure, ConfigError, DegeneratePolyline,
                     DegenerateSpeedError, DomainError, NoRootInBracket,
                     PreconditionError, SingularityError, SlideOCamError,
                     ValidationError)
from .export import (BASELINE, apply_overrides, build_config, load_raw,
                     write_pressure_csv, write_profile_csv, write_profile_svg,
                     write_raster_csv, write_raster_svg, write_sweep_csv)
from .feasibility import check_feasibility, rasterize_region
from .geometry import generate_assembly, is_convex_polyline, solve_extended_angle

EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 1, 2
SOLVER_ERRORS = (NoRootInBracket, ClosureFailure, SingularityError,
                 DegenerateSpeedError, DomainError, DegeneratePolyline)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(sub):
    sub.add_argument("--config", type=Path, help="TOML design file (default: baseline design)")
    sub.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE", help="override a config value (repeatable)")
    sub.add_argument("--samples", type=int, help="segments per lobe")
    sub.add_argument("--svg", type=Path, help="write SVG here")
    sub.add_argument("--csv", type=Path, help="write CSV here")


def build_parser():
    parser = _Parser(prog="slideocam", description="Slide-o-Cam cam synthesis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_ in (("profile", "generate cam profiles"),
                        ("pitch", "generate pitch curves"),
                        ("pressure", "pressure-angle distribution over the active interval"),
                        ("delta", "solve the extended angle")):
        _common(subs.add_parser(name, help=help_))

    feas = subs.add_parser("feasibility", help="check design constraints")
    _common(feas)
    feas.add_argument("--require-convex", action="store_true",
                      help="treat eta >= 1/pi as a hard constraint")

    region = subs.add_parser("region", help="rasterize the feasible (eta, a4) region")
    _common(region)
    region.add_argument("--resolution", type=int, help="cells per axis")

    sw = subs.add_parser("sweep", help="sweep one design parameter")
    _common(sw)
    sw.add_argument("--param", required=True,
                    choices=["eta", "e", "a4", "p", "b", "n", "m"])
    sw.add_argument("--values", required=True, help="comma-separated values")
    return parser


def _load(args):
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ValidationError("--config", str(exc)) from None
        raw = load_raw(text)
    else:
        raw = dict(BASELINE)
    overrides = list(args.overrides)
    if args.samples is not None:
        overrides.append(f"solver.samples={args.samples}")
    if getattr(args, "resolution", None) is not None:
        overrides.append(f"region.resolution={args.resolution}")
    return build_config(apply_overrides(raw, overrides))


def _write(path, text, out):
    path.write_text(text, newline="\n")
    out.append(str(path))


def _fmt_deg(rad):
    return f"{degrees(rad):.4f} deg (tan = {tan(rad):.6g})" if abs(rad) < np.pi / 2 \
        else f"{degrees(rad):.4f} deg (tan = inf)"


def _summary(cfg, ext=None, warn=True):
    params = cfg.params
    lines = [f"design: p={params.p:g} n={params.n} m={params.m} e={params.e:g} "
             f"a4={params.a4:g} b={params.b:g} eta={params.eta:.6g}"]
    rep = check_feasibility(params)
    lines.append(
        "feasibility: " + ("feasible" if rep.feasible else "INFEASIBLE")
        + f" | roller spacing {'ok' if rep.roller_spacing_ok else 'FAIL'}"
        + f" ({rep.roller_spacing_margin:+.4g} mm)"
        + f" | shaft clearance {'ok' if rep.shaft_clearance_ok else 'FAIL'}"
        + f" ({rep.shaft_clearance_margin:+.4g} mm)"
        + f" | eta > 1/(2pi) {'ok' if rep.eta_lower_ok else 'FAIL'}"
        + f" | convex pitch curve {'yes' if rep.convexity_ok else 'no'}")
    warnings = [f"warning: {v}" for v in rep.violations()] if warn else []
    if ext is not None:
        lines.append(f"extended angle: {ext.delta:.12g} rad ({degrees(ext.delta):.6f} deg), "
                     f"residual {ext.residual:.3g} mm")
        top = max_pressure_angle(params, ext)
        iv = top.interval
        lines.append(f"active interval: [{iv.psi_lo:.6f}, {iv.psi_hi:.6f}] rad"
                     + (" (extrapolated for m >= 4)" if iv.extrapolated else ""))
        lines.append(f"max |mu|: {_fmt_deg(top.value)} at psi = {top.psi:.6f} rad")
        if top.at_pole:
            warnings.append("warning: a single cam meets the 90 deg pole; "
                            "use at least two conjugate cams")
        elif top.exceeds_guideline:
            warnings.append("warning: max |mu| exceeds the 30 deg high-speed guideline")
        if params.n >= 2:
            loss = contact_loss_check(params, delta=ext)
            if loss.exceeds:
                warnings.append(f"warning: |mu| exceeds 20 deg on the active interval "
                                f"({loss.status}); contact may be lost")
    return lines + warnings


def _cmd_profile(cfg, args, out, pitch=False):
    ext = solve_extended_angle(cfg.params, cfg.delta_tol)
    asm = generate_assembly(cfg.params, cfg.samples, delta=ext, closure_tol=cfg.closure_tol)
    svg = args.svg or (Path(cfg.svg) if cfg.svg else None)
    csv_path = args.csv or (Path(cfg.csv) if cfg.csv else None)
    if svg:
        _write(svg, write_profile_svg(asm, pitch_overlay=pitch or cfg.pitch_overlay), out)
    if csv_path:
        _write(csv_path, write_profile_csv(asm, curve="pitch" if pitch else "profile"), out)
    lines = _summary(cfg, ext)
    lines.append(f"cams: {len(asm.cams)}, points per cam: {len(asm.cams[0])}, "
                 f"phase offsets: {', '.join(f'{o:.6f}' for o in asm.phase_offsets)} rad")
    lines.append(f"cam profile convex: {'yes' if is_convex_polyline(asm.cams[0]) else 'no'}")
    return EXIT_OK, lines


def _cmd_pressure(cfg, args, out):
    ext = solve_extended_angle(cfg.params, cfg.delta_tol)
    iv = active_interval(cfg.params, ext)
    table = pressure_profile(cfg.params, iv, cfg.pressure_samples)
    if args.csv:
        _write(args.csv, write_pressure_csv(table, cfg.params), out)
    lines = _summary(cfg, ext)
    if cfg.psi is not None:
        lines.append(f"mu(psi = {cfg.psi:.6f} rad): {_fmt_deg(pressure_angle(cfg.params, cfg.psi))}")
    return EXIT_OK, lines


def _cmd_feasibility(cfg, args, out):
    rep = check_feasibility(cfg.params)
    lines = _summary(cfg, warn=False)
    gate = rep.feasible and (rep.convexity_ok or not (args.require_convex or cfg.require_convex))
    for v in rep.violations():
        lines.append(f"error: infeasible design, {v}")
    if rep.feasible and not gate:
        lines.append("error: convexity required: need eta >= 1/pi "
                     f"(margin {rep.convexity_margin:.6g})")
    if rep.single_block:
        lines.append("note: a4 = eta*p - b, cam and shaft would share a point")
    return (EXIT_OK if gate else EXIT_INVALID), lines


def _cmd_region(cfg, args, out):
    p = cfg.params
    raster = rasterize_region(p.p, p.b, p.n, cfg.eta_range, cfg.a4_range, cfg.resolution)
    if args.csv:
        _write(args.csv, write_raster_csv(raster), out)
    if args.svg:
        _write(args.svg, write_raster_svg(raster), out)
    frac = raster.cells.mean()
    return EXIT_OK, [f"region: p={p.p:g} b={p.b:g} n={p.n}, {raster.cells.shape[1]}x"
                     f"{raster.cells.shape[0]} cells, {100 * frac:.2f}% feasible",
                     f"max feasible a4 (cell centres): {raster.max_feasible_a4:.6g} mm"]


def _parse_values(text, param):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError("--values", f"not a comma-separated number list: {text!r}") from None
    if not vals:
        raise ValidationError("--values", "empty list")
    if param in ("n", "m"):
        if any(not v.is_integer() for v in vals):
            raise ValidationError("--values", f"{param} takes integers")
        vals = [int(v) for v in vals]
    return vals


def _cmd_sweep(cfg, args, out, stdout):
    values = _parse_values(args.values, args.param)
    try:
        result = sweep(cfg.params, args.param, values)
    except ValueError as exc:
        if isinstance(exc, SlideOCamError):
            raise
        raise ValidationError(args.param, str(exc)) from None
    text = write_sweep_csv(result, cfg.params)
    if args.csv:
        _write(args.csv, text, out)
    else:
        stdout.write(text)
    lines = [f"sweep over {args.param}: {len(result)} points"]
    for v, mu, w in zip(result.values, result.max_abs_pressure_angle, result.warnings):
        lines.append(f"  {args.param}={v:<10g} max|mu|={mu:9.4f} deg  {' '.join(w)}")
    return EXIT_OK, lines


def _cmd_delta(cfg, args, out):
    ext = solve_extended_angle(cfg.params, cfg.delta_tol)
    return EXIT_OK, [f"delta: {ext.delta!r}",
                     f"delta_deg: {degrees(ext.delta)!r}",
                     f"residual_mm: {ext.residual!r}",
                     f"iterations: {ext.iterations}",
                     f"bracket: [{ext.bracket[0]!r}, {ext.bracket[1]!r}]"]


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    written = []
    try:
        cfg = _load(args)
        cmd = args.command
        if cmd == "profile":
            code, lines = _cmd_profile(cfg, args, written)
        elif cmd == "pitch":
            code, lines = _cmd_profile(cfg, args, written, pitch=True)
        elif cmd == "pressure":
            code, lines = _cmd_pressure(cfg, args, written)
        elif cmd == "feasibility":
            code, lines = _cmd_feasibility(cfg, args, written)
        elif cmd == "region":
            code, lines = _cmd_region(cfg, args, written)
        elif cmd == "sweep":
            code, lines = _cmd_sweep(cfg, args, written, stdout)
        else:
            code, lines = _cmd_delta(cfg, args, written)
    except (ValidationError, ConfigError, PreconditionError) as exc:
        stderr.write(f"slideocam: error in {exc.module}: {exc}\n")
        return EXIT_INVALID
    except SOLVER_ERRORS as exc:
        stderr.write(f"slideocam: error in {exc.module}: {exc}\n")
        return EXIT_SOLVER
    except OSError as exc:
        stderr.write(f"slideocam: error in export-io: {exc}\n")
        return EXIT_INVALID
    target = stderr if args.command == "sweep" and not args.csv else stdout
    for line in lines:
        target.write(line + "\n")
    for path in written:
        target.write(f"wrote {path}\n")
    return code


def main(argv=None):
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
