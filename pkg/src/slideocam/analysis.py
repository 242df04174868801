"""Active intervals, pressure-angle distributions and parameter sweeps."""
from dataclasses import dataclass, field
from math import degrees, pi, radians

import numpy as np

from ._validation import check_samples
from .core import pressure_angle, tan_pressure_angle
from .errors import NoRootInBracket, PreconditionError, SingularityError
from .feasibility import check_feasibility
from .geometry import ExtendedAngle, solve_extended_angle

HIGH_SPEED_LIMIT_DEG = 30.0
CONTACT_LOSS_DEG = 20.0
CROSSCHECK_SAMPLES = 10_000


@dataclass(frozen=True)
class ActiveInterval:
    psi_lo: float
    psi_hi: float
    m: int
    n: int
    extrapolated: bool = False

    @property
    def length(self):
        return self.psi_hi - self.psi_lo

    def contains(self, psi):
        return self.psi_lo <= psi <= self.psi_hi


def _delta(params, delta):
    if delta is None:
        return solve_extended_angle(params).delta
    return delta.delta if isinstance(delta, ExtendedAngle) else float(delta)


def active_interval(params, delta=None):
    """Cam angles over which the cam set drives the follower to the right.

    One cam drives from pi/n. With m >= 2 the conjugate cam with the smaller
    pressure angle takes over, leaving a window of width 2*pi/(n*m) that
    ends where contact is lost; m >= 4 extends the pattern and is flagged.
    """
    d = _delta(params, delta)
    if d >= 0:
        raise PreconditionError(f"extended angle must be negative, got {d!r}")
    n, m = params.n, params.m
    hi = 2 * pi / n - d
    if m == 1:
        lo = pi / n
    elif m == 2:
        lo = pi / n - d
    elif m == 3:
        lo = 4 * pi / (3 * n) - d
    else:
        lo = 2 * pi / n - 2 * pi / (n * m) - d
    return ActiveInterval(psi_lo=lo, psi_hi=hi, m=m, n=n, extrapolated=m >= 4)


@dataclass
class PressureTable:
    psi: np.ndarray
    mu: np.ndarray
    interval: ActiveInterval

    @property
    def argmax(self):
        return int(np.argmax(np.abs(self.mu)))

    @property
    def psi_at_max(self):
        return float(self.psi[self.argmax])

    @property
    def max_abs(self):
        return float(np.abs(self.mu[self.argmax]))


def pressure_profile(params, interval, samples=721):
    """mu sampled uniformly over the interval, endpoints included."""
    samples = check_samples(samples, 2)
    psi = np.linspace(interval.psi_lo, interval.psi_hi, samples)
    return PressureTable(psi=psi, mu=np.asarray(pressure_angle(params, psi)), interval=interval)


def pressure_envelope(params, samples=2001, delta=None):
    """Effective mu over one period [0, 2*pi/n) with all m cams present.

    At each shaft angle every cam whose lobe is on its driving branch is a
    candidate and the one with the smallest |mu| is taken as the driver.
    Angles where no cam drives come back as nan.
    """
    samples = check_samples(samples, 2)
    d = _delta(params, delta)
    n = params.n
    period = 2 * pi / n
    psi = np.linspace(0.0, period, samples, endpoint=False)
    best = np.full(psi.shape, np.nan)
    for k in range(params.m):
        local = psi + k * params.beta
        # shift into the driving branch [pi/n, 2pi/n - delta]
        local = np.mod(local - pi / n, period) + pi / n
        drive = local <= period - d
        mu = np.asarray(pressure_angle(params, local))
        take = drive & (np.isnan(best) | (np.abs(mu) < np.abs(best)))
        best = np.where(take, mu, best)
    return psi, best


@dataclass(frozen=True)
class PressureExtremum:
    """Largest |mu| over the active interval, radians."""

    value: float
    psi: float
    tan_mu: float
    interval: ActiveInterval
    grid_max: float
    at_pole: bool

    @property
    def degrees(self):
        return degrees(self.value)

    @property
    def exceeds_guideline(self):
        return self.degrees > HIGH_SPEED_LIMIT_DEG

    @property
    def not_recommended(self):
        return self.at_pole or self.exceeds_guideline

    @property
    def extrapolated(self):
        return self.interval.extrapolated


def max_pressure_angle(params, delta=None, *, crosscheck=CROSSCHECK_SAMPLES):
    """Largest |mu| over the active interval.

    |tan mu| falls monotonically once psi > pi/n, so the maximum is read at
    the left end; a uniform grid of ``crosscheck`` points is kept for
    comparison. With one cam the interval starts on the pole and the result
    is exactly 90 degrees.
    """
    iv = active_interval(params, delta)
    if params.m == 1:
        return PressureExtremum(value=pi / 2, psi=iv.psi_lo, tan_mu=float("inf"),
                                interval=iv, grid_max=pi / 2, at_pole=True)
    value = abs(float(pressure_angle(params, iv.psi_lo)))
    grid_max = value
    if crosscheck:
        grid = np.linspace(iv.psi_lo, iv.psi_hi, crosscheck)
        grid_max = float(np.max(np.abs(pressure_angle(params, grid))))
    return PressureExtremum(value=value, psi=iv.psi_lo,
                            tan_mu=float(tan_pressure_angle(params, iv.psi_lo)),
                            interval=iv, grid_max=grid_max, at_pole=False)


SWEEPABLE = {
    "eta": "-", "e": "mm", "a4": "mm", "p": "mm", "b": "mm", "n": "lobes", "m": "cams",
}


@dataclass
class SweepResult:
    swept_parameter: str
    unit: str
    values: list
    max_abs_pressure_angle: list = field(default_factory=list)   # degrees
    tan_mu: list = field(default_factory=list)
    interval_length: list = field(default_factory=list)          # radians
    psi_lo: list = field(default_factory=list)
    psi_hi: list = field(default_factory=list)
    delta: list = field(default_factory=list)
    feasible: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.values)

    def rows(self):
        for i in range(len(self.values)):
            yield {
                "value": self.values[i],
                "delta": self.delta[i],
                "psi_lo": self.psi_lo[i],
                "psi_hi": self.psi_hi[i],
                "interval_length": self.interval_length[i],
                "max_abs_mu_deg": self.max_abs_pressure_angle[i],
                "tan_mu": self.tan_mu[i],
                "feasible": self.feasible[i],
                "warnings": ";".join(self.warnings[i]),
            }


def _with_value(params, name, value):
    if name == "eta":
        # keep e untouched when the value is the current eta, so a
        # singleton sweep reproduces the direct computation exactly
        if value == params.eta:
            return params
        return params.replace(e=value * params.p)
    if name in ("n", "m"):
        return params.replace(**{name: int(value)})
    return params.replace(**{name: float(value)})


def sweep(params, parameter, values):
    """Max |mu| and active interval for each value of one parameter.

    Infeasible designs stay in the result with a flag; designs whose
    profile cannot close get nan entries and a ``no-root`` warning.
    """
    if parameter not in SWEEPABLE:
        raise ValueError(f"cannot sweep {parameter!r}; choose from {sorted(SWEEPABLE)}")
    values = list(values)
    if not values:
        raise ValueError("values must be non-empty")
    out = SweepResult(swept_parameter=parameter, unit=SWEEPABLE[parameter], values=values)
    nan = float("nan")
    for v in values:
        point = _with_value(params, parameter, v)
        flags = []
        report = check_feasibility(point)
        if not report.feasible:
            flags.append("infeasible")
        if not report.convexity_ok:
            flags.append("non-convex")
        try:
            ext = solve_extended_angle(point)
        except (NoRootInBracket, SingularityError):
            flags.append("no-root")
            for lst in (out.max_abs_pressure_angle, out.tan_mu, out.interval_length,
                        out.psi_lo, out.psi_hi, out.delta):
                lst.append(nan)
        else:
            ext_max = max_pressure_angle(point, ext)
            iv = ext_max.interval
            if ext_max.at_pole:
                flags.append("pole")
            if ext_max.exceeds_guideline:
                flags.append("above-30deg")
            if point.n >= 2 and ext_max.degrees > CONTACT_LOSS_DEG:
                flags.append("above-20deg")
            if iv.extrapolated:
                flags.append("extrapolated")
            out.max_abs_pressure_angle.append(ext_max.degrees)
            out.tan_mu.append(ext_max.tan_mu)
            out.interval_length.append(iv.length)
            out.psi_lo.append(iv.psi_lo)
            out.psi_hi.append(iv.psi_hi)
            out.delta.append(ext.delta)
        out.feasible.append(report.feasible)
        out.warnings.append(flags)
    return out


@dataclass(frozen=True)
class ContactLossReport:
    threshold_deg: float
    max_abs_deg: float
    min_abs_deg: float
    crossing_psi: float      # |mu| = threshold on the driving branch psi > pi/n
    crossing_in_interval: bool
    interval: ActiveInterval

    @property
    def exceeds(self):
        return self.max_abs_deg > self.threshold_deg

    @property
    def status(self):
        if self.min_abs_deg > self.threshold_deg:
            return "exceeds threshold everywhere"
        if self.exceeds:
            return "exceeds threshold on part of the interval"
        return "below threshold"


def contact_loss_check(params, threshold_deg=CONTACT_LOSS_DEG, delta=None, *,
                       xtol=1e-13):
    """Compare |mu| on the active interval with the contact-loss threshold
    for cams with two or more lobes.

    ``crossing_psi`` is found by bisection on the driving branch between
    pi/n and the end of contact; it is nan if |mu| stays above the
    threshold up to loss of contact.
    """
    if params.n < 2:
        raise PreconditionError("contact-loss check applies to cams with n >= 2 lobes")
    d = _delta(params, delta)
    iv = active_interval(params, d)
    ends = np.abs(pressure_angle(params, np.array([iv.psi_lo, iv.psi_hi])))
    hi_abs, lo_abs = (degrees(x) for x in ends)
    thr = radians(threshold_deg)

    def excess(q):
        return abs(float(pressure_angle(params, q))) - thr

    a, b = pi / params.n, iv.psi_hi
    crossing = float("nan")
    if excess(b) <= 0:
        a = np.nextafter(a, b)
        while b - a > xtol:
            mid = 0.5 * (a + b)
            if excess(mid) > 0:
                a = mid
            else:
                b = mid
            if 0.5 * (a + b) in (a, b):
                break
        crossing = float(0.5 * (a + b))
    inside = bool(np.isfinite(crossing) and iv.contains(crossing))
    return ContactLossReport(threshold_deg=threshold_deg, max_abs_deg=hi_abs,
                             min_abs_deg=lo_abs, crossing_psi=crossing,
                             crossing_in_interval=inside, interval=iv)

