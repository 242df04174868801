"""Closed-form kinematics of a Slide-o-Cam lobe.

All angles are radians and all lengths millimetres. Functions taking ``psi``
accept scalars or numpy arrays and broadcast; the ``*_point`` variants return
a single :class:`PlanePoint`.
"""
from dataclasses import dataclass, replace
from enum import Enum
from math import pi

import numpy as np

from ._validation import check_angles, check_scalar
from .errors import (DegenerateSpeedError, DomainError, FrameMismatchError,
                     SingularityError)

TWO_PI = 2.0 * pi

#: Directed angle from cam axis to follower translation (ccw positive).
ALPHA1 = -pi / 2

#: Lower bound of eta: below it the home configuration cannot be reached.
ETA_MIN = 1.0 / TWO_PI

#: Convexity bound on eta for the pitch curve.
ETA_CONVEX = 1.0 / pi

SINGULARITY_TOL = 1e-9
FD_STEP = 1e-5
FD_STEP_2ND = 1e-4
SPEED_TOL = 1e-12


@dataclass(frozen=True)
class DesignParams:
    """One transmission design.

    Parameters
    ----------
    p : float
        Pitch, follower travel per cam turn (mm).
    n : int
        Lobes per cam.
    m : int
        Number of conjugate cams on the shaft.
    e : float
        Offset between cam axis and the line of roller centres (mm).
    a4 : float
        Roller radius (mm).
    b : float
        Camshaft radius (mm).
    """

    p: float
    n: int
    m: int
    e: float
    a4: float
    b: float = 4.25

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "p", check_scalar(self.p, "p", min_val=0.0, include_min=False))
        set_(self, "n", check_scalar(self.n, "n", kind=int, min_val=1))
        set_(self, "m", check_scalar(self.m, "m", kind=int, min_val=1))
        set_(self, "e", check_scalar(self.e, "e", min_val=0.0, include_min=False))
        set_(self, "a4", check_scalar(self.a4, "a4", min_val=0.0, include_min=False))
        set_(self, "b", check_scalar(self.b, "b", min_val=0.0))

    @classmethod
    def from_eta(cls, p, n, m, eta, a4, b=4.25):
        return cls(p=p, n=n, m=m, e=eta * p, a4=a4, b=b)

    @property
    def eta(self):
        return self.e / self.p

    @property
    def lead(self):
        """s'(psi): follower travel per radian of cam rotation."""
        return self.p / TWO_PI

    @property
    def beta(self):
        """Phase between adjacent conjugate cams."""
        return TWO_PI / (self.n * self.m)

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return {"p": self.p, "n": self.n, "m": self.m, "e": self.e,
                "a4": self.a4, "b": self.b}


class Frame(Enum):
    FIXED = "fixed"  # x-y, attached to the machine frame
    CAM = "cam"      # u-v, rotates with the cam by psi


@dataclass(frozen=True)
class PlanePoint:
    """2-D point tagged with the frame it is expressed in.

    In the fixed frame ``u`` and ``v`` hold x and y.
    """

    u: float
    v: float
    frame: Frame

    def _same_frame(self, other):
        if self.frame is not other.frame:
            raise FrameMismatchError(
                f"cannot combine {self.frame.value} and {other.frame.value} points; "
                "rotate one of them first")

    def __sub__(self, other):
        self._same_frame(other)
        return PlanePoint(self.u - other.u, self.v - other.v, self.frame)

    def __add__(self, other):
        self._same_frame(other)
        return PlanePoint(self.u + other.u, self.v + other.v, self.frame)

    def norm(self):
        return float(np.hypot(self.u, self.v))

    def distance(self, other):
        return (self - other).norm()

    def to_fixed(self, psi):
        """Express a cam-frame point in the fixed frame at cam angle ``psi``."""
        if self.frame is Frame.FIXED:
            return self
        u, v = rotate_xy(np.array([self.u, self.v]), psi)
        return PlanePoint(float(u), float(v), Frame.FIXED)

    def to_cam(self, psi):
        """Express a fixed-frame point in the cam frame at cam angle ``psi``."""
        if self.frame is Frame.CAM:
            return self
        u, v = rotate_xy(np.array([self.u, self.v]), -psi)
        return PlanePoint(float(u), float(v), Frame.CAM)

    def as_array(self):
        return np.array([self.u, self.v])


@dataclass(frozen=True)
class ProfileCoefficients:
    b2: np.ndarray
    b3: np.ndarray
    delta: np.ndarray


def rotate_xy(xy, angle):
    """Rotate points of shape (..., 2) counter-clockwise by ``angle``."""
    xy = np.asarray(xy, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([c * xy[..., 0] - s * xy[..., 1],
                     s * xy[..., 0] + c * xy[..., 1]], axis=-1)


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def _offset_term(params):
    """2*pi*eta - 1, guarded against the singular value."""
    eta = params.eta
    if abs(eta - ETA_MIN) < SINGULARITY_TOL:
        raise SingularityError(
            f"eta = {eta!r} is within {SINGULARITY_TOL} of 1/(2*pi); "
            "profile coefficients are undefined")
    return TWO_PI * eta - 1.0


def displacement(params, psi):
    """Follower displacement s(psi); the roller sits at s(0) = -p/(2n)."""
    psi = check_angles(psi)
    return _out(params.p / TWO_PI * psi - params.p / (2 * params.n))


def displacement_derivatives(params):
    """(s', s''); the motion law is affine so both are constants."""
    return params.p / TWO_PI, 0.0


def profile_coefficients(params, psi):
    k = _offset_term(params)
    if k <= 0:
        raise DomainError(
            f"eta = {params.eta!r} < 1/(2*pi): the principal arctan branch "
            "does not describe this geometry")
    psi = check_angles(psi)
    n = params.n
    b2 = params.p / TWO_PI
    b3 = b2 * np.sqrt(k * k + (psi - pi / n) ** 2)
    delta = np.arctan((n * psi - pi) / (n * k))
    return ProfileCoefficients(b2=b2, b3=_out(b3), delta=_out(delta))


def cam_profile_xy(params, psi):
    """Contact point C in the cam frame, shape ``psi.shape + (2,)``."""
    psi = check_angles(psi)
    c = profile_coefficients(params, psi)
    r = np.asarray(c.b3) - params.a4
    phase = np.asarray(c.delta) - psi
    u = c.b2 * np.cos(psi) + r * np.cos(phase)
    v = -c.b2 * np.sin(psi) + r * np.sin(phase)
    return np.stack([u, v], axis=-1)


def cam_profile_point(params, psi, *, strict=False, delta=None):
    """Contact point C at a single cam angle.

    With ``strict=True`` the angle must lie in the lobe domain
    ``[delta, 2*pi/n - delta]``; ``delta`` is solved for when omitted.
    """
    psi = float(check_angles(psi))
    if strict:
        if delta is None:
            from .geometry import solve_extended_angle
            delta = solve_extended_angle(params).delta
        hi = TWO_PI / params.n - delta
        if not (delta <= psi <= hi):
            raise DomainError(f"psi = {psi!r} outside lobe domain [{delta!r}, {hi!r}]")
    u, v = cam_profile_xy(params, psi)
    return PlanePoint(float(u), float(v), Frame.CAM)


def pitch_xy(params, psi):
    """Roller centre O2 in the cam frame: (e, s) rotated by -psi."""
    psi = check_angles(psi)
    s = params.p / TWO_PI * psi - params.p / (2 * params.n)
    e = params.e
    u = e * np.cos(psi) + s * np.sin(psi)
    v = -e * np.sin(psi) + s * np.cos(psi)
    return np.stack([u, v], axis=-1)


def pitch_point(params, psi):
    u, v = pitch_xy(params, float(check_angles(psi)))
    return PlanePoint(float(u), float(v), Frame.CAM)


def pitch_derivatives(params, psi):
    """Analytic (u', v', u'', v'') of the pitch curve."""
    psi = check_angles(psi)
    s = displacement(params, psi)
    ds, _ = displacement_derivatives(params)
    e = params.e
    c, sn = np.cos(psi), np.sin(psi)
    du = (ds - e) * sn + s * c
    dv = (ds - e) * c - s * sn
    d2u = (2 * ds - e) * c - s * sn
    d2v = -(2 * ds - e) * sn - s * c
    return tuple(_out(x) for x in (du, dv, d2u, d2v))


def tan_pressure_angle(params, psi, form="lobe"):
    """tan(mu) from either the motion law or the reduced n-lobe expression.

    ``form="motion"`` evaluates (s' - e)/s; ``form="lobe"`` evaluates
    (n - 2 n pi eta)/(n psi - pi). Both are infinite at psi = pi/n.
    """
    psi = check_angles(psi)
    n = params.n
    with np.errstate(divide="ignore", invalid="ignore"):
        if form == "motion":
            s = params.p / TWO_PI * psi - params.p / (2 * n)
            t = (params.p / TWO_PI - params.e) / s
        elif form == "lobe":
            t = (n - 2 * n * pi * params.eta) / (n * psi - pi)
        else:
            raise ValueError(f"unknown form {form!r}")
    return _out(t)


def pressure_angle(params, psi):
    """Pressure angle mu in radians.

    At the pole psi = pi/n the one-sided limit from psi > pi/n (the driving
    side) is returned: copysign(pi/2, n - 2 n pi eta), i.e. -pi/2 for every
    design with eta > 1/(2 pi).
    """
    psi = check_angles(psi)
    n = params.n
    num = n - 2 * n * pi * params.eta
    den = n * psi - pi
    pole = np.abs(den) <= 8 * np.finfo(float).eps * pi
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.arctan(num / np.where(pole, 1.0, den))
    mu = np.where(pole, np.copysign(pi / 2, num), mu)
    return _out(mu)


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def _second(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def curvature_parametric(u, v, psi, h=FD_STEP, *, derivatives=None, h2=FD_STEP_2ND):
    """Signed curvature (v'u'' - u'v'') / (u'^2 + v'^2)^(3/2).

    Positive values mark convexity for curves traversed clockwise, which is
    how the cam frame sees the pitch curve. ``derivatives`` may supply
    analytic ``(du, dv, d2u, d2v)`` callables; otherwise first derivatives use
    central differences with step ``h`` and second derivatives with ``h2``
    (a larger step keeps rounding error below 1e-7 relative at mm scale).
    """
    if derivatives is not None:
        du, dv, d2u, d2v = (f(psi) for f in derivatives)
    else:
        if h <= 0 or h2 <= 0:
            raise ValueError("finite-difference steps must be positive")
        du, dv = _central(u, psi, h), _central(v, psi, h)
        d2u, d2v = _second(u, psi, h2), _second(v, psi, h2)
    speed2 = du * du + dv * dv
    if np.any(np.asarray(speed2) < SPEED_TOL):
        raise DegenerateSpeedError(f"curve speed vanishes near psi = {psi!r}")
    return (dv * d2u - du * d2v) / speed2 ** 1.5


def curvature_numerator(params, psi):
    """Bracket (n psi - pi)^2 + 2 n^2 (2 pi eta - 1)(pi eta - 1).

    Its sign is the sign of the pitch-curve curvature.
    """
    psi = check_angles(psi)
    n, eta = params.n, params.eta
    return _out((n * psi - pi) ** 2 + 2 * n * n * (TWO_PI * eta - 1) * (pi * eta - 1))


def curvature_pitch(params, psi):
    """Closed-form pitch-curve curvature, same convention as
    :func:`curvature_parametric`:

        (2 pi n / p) * [(n psi - pi)^2 + 2 n^2 (2 pi eta - 1)(pi eta - 1)]
                     / [(n psi - pi)^2 + n^2 (2 pi eta - 1)^2]^(3/2)
    """
    k = _offset_term(params)
    psi = check_angles(psi)
    n = params.n
    x = n * psi - pi
    num = x * x + 2 * n * n * k * (pi * params.eta - 1)
    den = (x * x + n * n * k * k) ** 1.5
    return _out(TWO_PI * n / params.p * num / den)


def is_sign_constant_curvature(params):
    """True when the pitch curve has no inflection, i.e. the curvature
    bracket cannot go negative."""
    eta = params.eta
    return (TWO_PI * eta - 1) * (pi * eta - 1) >= 0


def contact_distance(params, psi):
    """|C - O2|; equals a4 identically."""
    return np.linalg.norm(cam_profile_xy(params, psi) - pitch_xy(params, psi), axis=-1)


def pitch_radius(params, psi):
    """sqrt(e^2 + s^2), the exact norm of the pitch point."""
    s = displacement(params, psi)
    return np.sqrt(params.e ** 2 + np.asarray(s) ** 2)


__all__ = [
    "ALPHA1", "ETA_MIN", "ETA_CONVEX", "DesignParams", "Frame", "PlanePoint",
    "ProfileCoefficients", "rotate_xy", "displacement", "displacement_derivatives",
    "profile_coefficients", "cam_profile_xy", "cam_profile_point", "pitch_xy",
    "pitch_point", "pitch_derivatives", "tan_pressure_angle", "pressure_angle",
    "curvature_parametric", "curvature_numerator", "curvature_pitch",
    "is_sign_constant_curvature", "contact_distance", "pitch_radius",
]
