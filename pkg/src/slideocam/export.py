"""Config parsing and text/SVG writers.

Configs are TOML. Design parameters sit at the top level; ``[solver]``,
``[analysis]``, ``[region]`` and ``[output]`` hold run settings. Lengths are
millimetres and angles radians unless the key carries a ``_deg`` suffix.
Floats in CSV output use 17 significant digits so they re-parse exactly.
"""
import csv
import io
import re
from dataclasses import dataclass, field
from math import pi, radians

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .core import ETA_CONVEX, ETA_MIN, DesignParams
from .errors import ConfigError, ValidationError
from .feasibility import check_feasibility
from .geometry import CLOSURE_TOL, DEFAULT_SAMPLES, DELTA_TOL, MIN_SAMPLES

#: Baseline two-cam design, used when no config file is given.
BASELINE = {"p": 50.0, "n": 1, "m": 2, "e": 9.0, "a4": 10.0, "b": 4.25}

DESIGN_KEYS = {"p", "n", "m", "e", "eta", "a4", "b"}
SECTIONS = {
    "solver": {"samples", "delta_tol", "closure_tol"},
    "analysis": {"pressure_samples", "psi", "psi_deg"},
    "region": {"resolution", "eta_min", "eta_max", "a4_min", "a4_max"},
    "output": {"svg", "csv", "pitch_overlay", "require_convex"},
}


@dataclass
class DesignConfig:
    params: DesignParams
    samples: int = DEFAULT_SAMPLES
    delta_tol: float = DELTA_TOL
    closure_tol: float = CLOSURE_TOL
    pressure_samples: int = 721
    psi: float = None
    resolution: int = 200
    eta_range: tuple = None
    a4_range: tuple = None
    svg: str = None
    csv: str = None
    pitch_overlay: bool = False
    require_convex: bool = False
    source: dict = field(default_factory=dict, repr=False)


def _decode_error(exc):
    line = getattr(exc, "lineno", None)
    col = getattr(exc, "colno", None)
    msg = str(exc)
    if line is None:
        m = re.search(r"line (\d+), column (\d+)", msg)
        if m:
            line, col = int(m.group(1)), int(m.group(2))
    msg = re.sub(r"\s*\(at line \d+, column \d+\)", "", msg)
    return ConfigError(f"config parse error: {msg}", line, col)


def load_raw(text):
    """Parse config text into a plain nested dict (no validation)."""
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise _decode_error(exc) from None


def _override_value(text):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text  # bare strings such as file paths


def apply_overrides(raw, overrides):
    """Apply ``key=value`` strings; dotted keys address sections."""
    raw = {k: (dict(v) if isinstance(v, dict) else v) for k, v in raw.items()}
    for item in overrides or ():
        if "=" not in item:
            raise ValidationError(item, "override must look like key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        value = _override_value(value)
        if "." in key:
            section, sub = key.split(".", 1)
            raw.setdefault(section, {})[sub] = value
        else:
            raw[key] = value
            if key == "eta":
                raw.pop("e", None)
            elif key == "e":
                raw.pop("eta", None)
    return raw


def _get(section, key, default, kind, name):
    if key not in section:
        return default
    value = section[key]
    if kind is bool:
        if not isinstance(value, bool):
            raise ValidationError(name, f"expected true/false, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ValidationError(name, f"expected a string, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(name, f"expected a number, got {value!r}")
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ValidationError(name, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def build_config(raw):
    """Validate a raw dict and apply defaults."""
    unknown = set(raw) - DESIGN_KEYS - set(SECTIONS)
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown key")
    for name, allowed in SECTIONS.items():
        sec = raw.get(name, {})
        if not isinstance(sec, dict):
            raise ValidationError(name, "expected a table")
        extra = set(sec) - allowed
        if extra:
            raise ValidationError(f"{name}.{sorted(extra)[0]}", "unknown key")

    if "e" in raw and "eta" in raw:
        raise ValidationError("eta", "give either e or eta, not both")
    for key in ("p", "n", "a4"):
        if key not in raw:
            raise ValidationError(key, "missing required design parameter")
    if "e" not in raw and "eta" not in raw:
        raise ValidationError("e", "missing required design parameter (or eta)")

    p = _get(raw, "p", None, float, "p")
    design = {
        "p": p,
        "n": _get(raw, "n", None, int, "n"),
        "m": _get(raw, "m", 2, int, "m"),
        "a4": _get(raw, "a4", None, float, "a4"),
        "b": _get(raw, "b", 4.25, float, "b"),
    }
    if "eta" in raw:
        eta = _get(raw, "eta", None, float, "eta")
        if eta <= 0:
            raise ValidationError("eta", f"must be > 0, got {eta!r}")
        design["e"] = eta * p if p > 0 else eta
    else:
        design["e"] = _get(raw, "e", None, float, "e")
    params = DesignParams(**design)

    solver = raw.get("solver", {})
    analysis = raw.get("analysis", {})
    region = raw.get("region", {})
    output = raw.get("output", {})

    samples = _get(solver, "samples", DEFAULT_SAMPLES, int, "solver.samples")
    if samples < MIN_SAMPLES:
        raise ValidationError("solver.samples", f"must be >= {MIN_SAMPLES}, got {samples}")
    delta_tol = _get(solver, "delta_tol", DELTA_TOL, float, "solver.delta_tol")
    closure_tol = _get(solver, "closure_tol", CLOSURE_TOL, float, "solver.closure_tol")
    for name, v in (("solver.delta_tol", delta_tol), ("solver.closure_tol", closure_tol)):
        if not v > 0:
            raise ValidationError(name, f"must be > 0, got {v!r}")

    if "psi" in analysis and "psi_deg" in analysis:
        raise ValidationError("analysis.psi_deg", "give either psi or psi_deg")
    psi = _get(analysis, "psi", None, float, "analysis.psi")
    if "psi_deg" in analysis:
        psi = radians(_get(analysis, "psi_deg", None, float, "analysis.psi_deg"))
    pressure_samples = _get(analysis, "pressure_samples", 721, int, "analysis.pressure_samples")
    if pressure_samples < 2:
        raise ValidationError("analysis.pressure_samples", "must be >= 2")

    resolution = _get(region, "resolution", 200, int, "region.resolution")
    if resolution < 2:
        raise ValidationError("region.resolution", "must be >= 2")
    eta_range = a4_range = None
    if {"eta_min", "eta_max"} & set(region):
        eta_range = (_get(region, "eta_min", 0.9 * ETA_MIN, float, "region.eta_min"),
                     _get(region, "eta_max", 0.5, float, "region.eta_max"))
    if {"a4_min", "a4_max"} & set(region):
        a4_range = (_get(region, "a4_min", 0.0, float, "region.a4_min"),
                    _get(region, "a4_max", params.p / 2, float, "region.a4_max"))
    for name, rng in (("region.eta_min", eta_range), ("region.a4_min", a4_range)):
        if rng is not None and not (0 <= rng[0] < rng[1]):
            raise ValidationError(name, f"range must satisfy 0 <= min < max, got {rng}")

    return DesignConfig(
        params=params, samples=samples, delta_tol=delta_tol, closure_tol=closure_tol,
        pressure_samples=pressure_samples, psi=psi, resolution=resolution,
        eta_range=eta_range, a4_range=a4_range,
        svg=_get(output, "svg", None, str, "output.svg"),
        csv=_get(output, "csv", None, str, "output.csv"),
        pitch_overlay=_get(output, "pitch_overlay", False, bool, "output.pitch_overlay"),
        require_convex=_get(output, "require_convex", False, bool, "output.require_convex"),
        source=raw,
    )


def parse_config(text, overrides=None):
    """Parse and validate config text; ``overrides`` are ``key=value``
    strings applied before validation."""
    return build_config(apply_overrides(load_raw(text), overrides))


# -- text output ------------------------------------------------------------

def fmt(x):
    """Shortest text guaranteed to re-parse to the same float64."""
    return format(float(x), ".17g")


def _echo_lines(params, extra=None):
    lines = [f"# slideocam {__version__}",
             "# " + " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}"
                             for k, v in params.as_dict().items())]
    lines.append(f"# eta={fmt(params.eta)}")
    for k, v in (extra or {}).items():
        lines.append(f"# {k}={fmt(v) if isinstance(v, float) else v}")
    return lines


def _profile_extra(assembly):
    extra = {}
    if assembly.extended is not None:
        extra["delta"] = assembly.extended.delta
        extra["delta_residual"] = assembly.extended.residual
        extra["delta_iterations"] = assembly.extended.iterations
    elif "delta" in assembly.metadata:
        extra["delta"] = assembly.metadata["delta"]
    rep = check_feasibility(assembly.params)
    extra["feasible"] = str(rep.feasible).lower()
    extra["convex_eta"] = str(rep.convexity_ok).lower()
    extra["samples_per_lobe"] = assembly.samples
    extra["phase_offsets"] = " ".join(fmt(o) for o in assembly.phase_offsets)
    return extra


PROFILE_HEADER = "cam_index,lobe_index,psi_rad,u_mm,v_mm"


def write_profile_csv(assembly, curve="profile"):
    """One row per point of every cam. ``curve="pitch"`` writes roller
    centres instead of contact points."""
    if not assembly.cams:
        raise ValueError("assembly has no cams")
    extra = _profile_extra(assembly)
    extra["curve"] = curve
    out = _echo_lines(assembly.params, extra)
    out.append(PROFILE_HEADER)
    for k, cam in enumerate(assembly.cams):
        pts = cam.points if curve == "profile" else cam.pitch
        for lobe, psi, (u, v) in zip(cam.lobe_index, cam.psi_values, pts):
            out.append(f"{k},{lobe},{fmt(psi)},{fmt(u)},{fmt(v)}")
    return "\n".join(out) + "\n"


def _split_comments(text):
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
        elif line.strip():
            body.append(line)
    return meta, body


def read_profile_csv(text):
    """Inverse of :func:`write_profile_csv`; returns (meta, columns)."""
    meta, body = _split_comments(text)
    if not body or body[0] != PROFILE_HEADER:
        raise ConfigError("not a profile CSV: header row missing", 1, 1)
    rows = list(csv.reader(body[1:]))
    cols = {
        "cam_index": np.array([int(r[0]) for r in rows], dtype=int),
        "lobe_index": np.array([int(r[1]) for r in rows], dtype=int),
        "psi_rad": np.array([float(r[2]) for r in rows]),
        "u_mm": np.array([float(r[3]) for r in rows]),
        "v_mm": np.array([float(r[4]) for r in rows]),
    }
    return meta, cols


def write_raster_csv(raster):
    """0/1 matrix: first row holds eta values, first column a4 values (mm)."""
    out = [f"# slideocam {__version__}",
           f"# p={fmt(raster.p)} b={fmt(raster.b)} n={raster.n}",
           f"# max_feasible_a4={fmt(raster.max_feasible_a4)}"]
    out.append("a4_mm\\eta," + ",".join(fmt(x) for x in raster.eta_axis))
    for a4, row in zip(raster.a4_axis, raster.cells):
        out.append(fmt(a4) + "," + ",".join("1" if c else "0" for c in row))
    return "\n".join(out) + "\n"


def read_raster_csv(text):
    meta, body = _split_comments(text)
    head = body[0].split(",")
    eta = np.array([float(x) for x in head[1:]])
    a4, cells = [], []
    for line in body[1:]:
        parts = line.split(",")
        a4.append(float(parts[0]))
        cells.append([c == "1" for c in parts[1:]])
    return meta, eta, np.array(a4), np.array(cells, dtype=bool)


def write_sweep_csv(result, params=None):
    buf = io.StringIO()
    if params is not None:
        buf.write("\n".join(_echo_lines(params, {"swept": result.swept_parameter})) + "\n")
    cols = ["value", "delta", "psi_lo", "psi_hi", "interval_length",
            "max_abs_mu_deg", "tan_mu", "feasible", "warnings"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in result.rows():
        w.writerow([_cell(row[c]) for c in cols])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    return v


def write_pressure_csv(table, params=None):
    buf = io.StringIO()
    if params is not None:
        iv = table.interval
        buf.write("\n".join(_echo_lines(params, {"psi_lo": iv.psi_lo, "psi_hi": iv.psi_hi}))
                  + "\n")
    buf.write("psi_rad,mu_rad,mu_deg,is_max\n")
    imax = table.argmax
    for i, (q, mu) in enumerate(zip(table.psi, table.mu)):
        buf.write(f"{fmt(q)},{fmt(mu)},{fmt(np.degrees(mu))},{int(i == imax)}\n")
    return buf.getvalue()


# -- SVG --------------------------------------------------------------------

def _num(x):
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


def _path(points, close):
    # SVG y grows downward; flip v so the drawing matches the u-v axes
    cmds = [f"M{_num(points[0][0])},{_num(-points[0][1])}"]
    cmds += [f"L{_num(u)},{_num(-v)}" for u, v in points[1:]]
    if close:
        cmds.append("Z")
    return " ".join(cmds)


def _bounds(arrays):
    allp = np.vstack(arrays)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    return lo, hi


def write_profile_svg(assembly, pitch_overlay=False, axes=True):
    """Cam profiles in red, optional pitch curves in blue; units are mm."""
    if not assembly.cams:
        raise ValueError("assembly has no cams")
    geoms = [c.points for c in assembly.cams]
    if pitch_overlay:
        geoms += [c.pitch for c in assembly.cams]
    lo, hi = _bounds(geoms)
    if axes:
        lo, hi = np.minimum(lo, 0.0), np.maximum(hi, 0.0)
    span = hi - lo
    pad = 0.05 * np.where(span > 0, span, 1.0)
    x0, x1 = lo[0] - pad[0], hi[0] + pad[0]
    # flipped y: svg rows run from -v_max to -v_min
    y0, y1 = -(hi[1] + pad[1]), -(lo[1] - pad[1])
    w, h = x1 - x0, y1 - y0
    sw = _num(0.004 * max(w, h))

    extra = _profile_extra(assembly)
    echo = " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}"
                    for k, v in assembly.params.as_dict().items())
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_num(w)}mm" height="{_num(h)}mm" '
        f'viewBox="{_num(x0)} {_num(y0)} {_num(w)} {_num(h)}">',
        f"<!-- slideocam {__version__} {echo} -->",
        "<!-- " + " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}"
                           for k, v in extra.items()) + " -->",
    ]
    if axes:
        lines.append(f'<line x1="{_num(x0)}" y1="0.0000" x2="{_num(x1)}" y2="0.0000" '
                     f'stroke="gray" stroke-width="{sw}"/>')
        lines.append(f'<line x1="0.0000" y1="{_num(y0)}" x2="0.0000" y2="{_num(y1)}" '
                     f'stroke="gray" stroke-width="{sw}"/>')
    for cam in assembly.cams:
        lines.append(f'<path d="{_path(cam.points, cam.closed)}" fill="none" '
                     f'stroke="red" stroke-width="{sw}"/>')
    if pitch_overlay:
        for cam in assembly.cams:
            lines.append(f'<path d="{_path(cam.pitch, cam.closed)}" fill="none" '
                         f'stroke="blue" stroke-width="{sw}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_raster_svg(raster, size=100.0):
    """Feasible cells as one filled path on a ``size`` x ``size`` canvas;
    eta runs left to right, a4 bottom to top. Guide lines mark
    eta = 1/(2 pi) and eta = 1/pi."""
    n_a4, n_eta = raster.cells.shape
    cw, ch = size / n_eta, size / n_a4
    eta_lo = raster.eta_axis[0] - 0.5 * (raster.eta_axis[1] - raster.eta_axis[0])
    eta_hi = raster.eta_axis[-1] + 0.5 * (raster.eta_axis[1] - raster.eta_axis[0])
    cmds = []
    for i in range(n_a4):
        row = raster.cells[i]
        y = size - (i + 1) * ch
        j = 0
        while j < n_eta:
            if row[j]:
                k = j
                while k < n_eta and row[k]:
                    k += 1
                cmds.append(f"M{_num(j * cw)},{_num(y)} h{_num((k - j) * cw)} "
                            f"v{_num(ch)} h{_num(-(k - j) * cw)} Z")
                j = k
            else:
                j += 1
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_num(size)}mm" height="{_num(size)}mm" '
        f'viewBox="0.0000 0.0000 {_num(size)} {_num(size)}">',
        f"<!-- slideocam {__version__} p={fmt(raster.p)} b={fmt(raster.b)} n={raster.n} "
        f"eta=[{fmt(eta_lo)}, {fmt(eta_hi)}] cells={n_eta}x{n_a4} -->",
    ]
    if cmds:
        lines.append(f'<path d="{" ".join(cmds)}" fill="lightgreen" stroke="none"/>')
    for guide in (ETA_MIN, ETA_CONVEX):
        if eta_lo <= guide <= eta_hi:
            x = (guide - eta_lo) / (eta_hi - eta_lo) * size
            lines.append(f'<line x1="{_num(x)}" y1="0.0000" x2="{_num(x)}" '
                         f'y2="{_num(size)}" stroke="black" stroke-width="0.3"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def degrees_str(rad):
    return f"{rad * 180.0 / pi:.4f}"
