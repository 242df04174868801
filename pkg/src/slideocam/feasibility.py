"""Design constraints and the feasible (eta, a4) region."""
from dataclasses import dataclass
from math import pi

import numpy as np

from ._validation import check_samples, check_scalar
from .core import ETA_CONVEX, ETA_MIN, DesignParams, _offset_term

DEFAULT_B = 4.25
DEFAULT_RESOLUTION = 200


def constraint_margins(p, n, e, a4, b):
    """Signed margins of the four conditions; works elementwise on arrays.

    Returns (roller spacing, shaft clearance, eta lower bound, convexity).
    The first and third must be > 0, the second and fourth >= 0.
    """
    eta = e / p
    # eta * p is written as e so a4 = eta*p - b can be hit exactly
    return (p / (2 * n) - a4,
            e - b - a4,
            eta - ETA_MIN,
            eta - ETA_CONVEX)


@dataclass(frozen=True)
class FeasibilityReport:
    roller_spacing_ok: bool
    roller_spacing_margin: float
    shaft_clearance_ok: bool
    shaft_clearance_margin: float
    eta_lower_ok: bool
    eta_lower_margin: float
    convexity_ok: bool
    convexity_margin: float

    @property
    def feasible(self):
        return self.roller_spacing_ok and self.shaft_clearance_ok and self.eta_lower_ok

    @property
    def single_block(self):
        """Roller touches the shaft: cam and shaft would be one piece."""
        return self.shaft_clearance_margin == 0.0

    def violations(self):
        out = []
        if not self.roller_spacing_ok:
            out.append(f"roller interference: need a4 < p/(2n) "
                       f"(margin {self.roller_spacing_margin:.6g} mm)")
        if not self.shaft_clearance_ok:
            out.append(f"shaft clearance: need a4 <= eta*p - b "
                       f"(margin {self.shaft_clearance_margin:.6g} mm)")
        if not self.eta_lower_ok:
            out.append(f"home configuration: need eta > 1/(2*pi) "
                       f"(margin {self.eta_lower_margin:.6g})")
        return out

    def as_dict(self):
        return {
            "feasible": self.feasible,
            "roller_spacing_ok": self.roller_spacing_ok,
            "roller_spacing_margin": self.roller_spacing_margin,
            "shaft_clearance_ok": self.shaft_clearance_ok,
            "shaft_clearance_margin": self.shaft_clearance_margin,
            "eta_lower_ok": self.eta_lower_ok,
            "eta_lower_margin": self.eta_lower_margin,
            "convexity_ok": self.convexity_ok,
            "convexity_margin": self.convexity_margin,
        }


def check_feasibility(params):
    """Evaluate all constraints. Convexity is reported but does not gate
    ``feasible``."""
    r, s, t, c = (float(x) for x in constraint_margins(
        params.p, params.n, params.e, params.a4, params.b))
    return FeasibilityReport(
        roller_spacing_ok=r > 0, roller_spacing_margin=r,
        shaft_clearance_ok=s >= 0, shaft_clearance_margin=s,
        eta_lower_ok=t > 0, eta_lower_margin=t,
        convexity_ok=c >= 0, convexity_margin=c,
    )


def constraint_terms(params):
    """The factors (A, B) of v_c(0) = A * B.

    A exceeds p/(2n) - a4, so it is positive whenever rollers do not
    interfere; v_c(0) <= 0 then reduces to B <= 0, i.e. eta > 1/(2 pi).
    """
    k = _offset_term(params)
    n, p = params.n, params.p
    a = p / (2 * n * pi) * np.sqrt((n * k) ** 2 + pi ** 2) - params.a4
    b = np.sin(np.arctan(-pi / (n * k)))
    if params.a4 < p / (2 * n) and not a > 0:
        raise ArithmeticError(f"A = {a!r} should be positive when a4 < p/(2n)")
    return float(a), float(b)


def constraint_B_term(params):
    return constraint_terms(params)[1]


def max_feasible_a4(p, b, n, eta):
    """Supremum of feasible a4 at fixed eta and whether it is attained.

    The roller-spacing bound is strict, the shaft bound is not. Returns
    (nan, False) when no positive a4 is feasible.
    """
    if eta <= ETA_MIN:
        return float("nan"), False
    spacing = p / (2 * n)
    shaft = eta * p - b
    if shaft <= 0:
        return float("nan"), False
    if shaft < spacing:
        return shaft, True
    return spacing, False


@dataclass
class RegionRaster:
    """Feasibility verdicts on cell centres; ``cells[i, j]`` is a4_axis[i],
    eta_axis[j]."""

    eta_axis: np.ndarray
    a4_axis: np.ndarray
    n: int
    p: float
    b: float
    cells: np.ndarray

    @property
    def max_feasible_a4(self):
        rows = np.any(self.cells, axis=1)
        return float(self.a4_axis[rows].max()) if rows.any() else float("nan")

    def max_feasible_a4_by_eta(self):
        out = np.full(self.eta_axis.size, np.nan)
        for j in range(self.eta_axis.size):
            col = self.cells[:, j]
            if col.any():
                out[j] = self.a4_axis[col].max()
        return out


def _centres(lo, hi, count):
    step = (hi - lo) / count
    return lo + (np.arange(count) + 0.5) * step


def default_ranges(p):
    return (0.9 * ETA_MIN, 0.5), (0.0, p / 2)


def rasterize_region(p, b=DEFAULT_B, n=1, eta_range=None, a4_range=None,
                     resolution=DEFAULT_RESOLUTION):
    """Rasterize the feasible design region for one lobe count.

    ``resolution`` is an int or an (eta cells, a4 cells) pair. Cells are
    judged at their centres with the same arithmetic as
    :func:`check_feasibility`, so both always agree.
    """
    p = check_scalar(p, "p", min_val=0.0, include_min=False)
    b = check_scalar(b, "b", min_val=0.0)
    n = check_scalar(n, "n", kind=int, min_val=1)
    d_eta, d_a4 = default_ranges(p)
    eta_range = eta_range or d_eta
    a4_range = a4_range or d_a4
    if np.ndim(resolution) == 0:
        resolution = (resolution, resolution)
    n_eta = check_samples(resolution[0], 2, "resolution")
    n_a4 = check_samples(resolution[1], 2, "resolution")
    for name, (lo, hi) in (("eta_range", eta_range), ("a4_range", a4_range)):
        if not (0 <= lo < hi):
            raise ValueError(f"{name} must satisfy 0 <= lo < hi, got {(lo, hi)}")

    eta_axis = _centres(*eta_range, n_eta)
    a4_axis = _centres(*a4_range, n_a4)
    e = eta_axis * p
    r, s, t, _ = constraint_margins(p, n, e[None, :], a4_axis[:, None], b)
    cells = (r > 0) & (s >= 0) & (t > 0)
    return RegionRaster(eta_axis=eta_axis, a4_axis=a4_axis, n=n, p=p, b=b, cells=cells)


def cell_params(raster, i, j, m=1):
    """DesignParams at the centre of cell (i, j)."""
    return DesignParams(p=raster.p, n=raster.n, m=m, e=float(raster.eta_axis[j] * raster.p),
                        a4=float(raster.a4_axis[i]), b=raster.b)
