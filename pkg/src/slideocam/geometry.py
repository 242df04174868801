"""Extended angle, closed multi-lobe profiles and conjugate-cam assemblies."""
from dataclasses import dataclass, field
from math import pi

import numpy as np

from ._validation import check_samples, check_scalar
from .core import (ETA_MIN, TWO_PI, Frame, PlanePoint, _offset_term,
                   cam_profile_xy, pitch_xy, rotate_xy)
from .errors import ClosureFailure, DegeneratePolyline, NoRootInBracket

DELTA_TOL = 1e-10        # mm, residual |v_c(delta)|
DELTA_XTOL = 1e-12       # rad
DELTA_MAX_ITER = 200
BRACKET_LO_PAD = 1e-6
BRACKET_HI = -1e-12
CLOSURE_TOL = 1e-6       # mm
DEFAULT_SAMPLES = 720
MIN_SAMPLES = 16


@dataclass(frozen=True)
class ExtendedAngle:
    delta: float
    residual: float
    iterations: int
    bracket: tuple

    def __float__(self):
        return self.delta


def _vc(params, psi):
    return float(cam_profile_xy(params, psi)[1])


def solve_extended_angle(params, tol=DELTA_TOL, *, xtol=DELTA_XTOL,
                         max_iter=DELTA_MAX_ITER):
    """Root of v_c on (-pi/n, 0) by bisection.

    Raises :class:`NoRootInBracket` when v_c keeps one sign on the bracket,
    which happens for eta <= 1/(2 pi) and other degenerate designs.
    """
    tol = check_scalar(tol, "tol", min_val=0.0, include_min=False)
    _offset_term(params)
    if params.eta <= ETA_MIN:
        raise NoRootInBracket(
            f"eta = {params.eta!r} <= 1/(2*pi): the profile cannot close")

    lo, hi = -pi / params.n + BRACKET_LO_PAD, BRACKET_HI
    f_lo, f_hi = _vc(params, lo), _vc(params, hi)
    if f_lo == 0.0:
        return ExtendedAngle(lo, f_lo, 0, (lo, lo))
    if f_hi == 0.0:
        return ExtendedAngle(hi, f_hi, 0, (hi, hi))
    if (f_lo > 0) == (f_hi > 0):
        raise NoRootInBracket(
            f"v_c has the same sign at psi = {lo:.6g} ({f_lo:.3g} mm) and "
            f"psi = {hi:.3g} ({f_hi:.3g} mm); no extended angle for {params}")

    it = 0
    mid, f_mid = lo, f_lo
    while it < max_iter:
        it += 1
        mid = 0.5 * (lo + hi)
        f_mid = _vc(params, mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= xtol and abs(f_mid) <= tol:
            break
        if 0.5 * (lo + hi) in (lo, hi):  # bracket at float resolution
            break

    if abs(f_mid) > tol:
        raise NoRootInBracket(
            f"bisection stopped after {it} iterations with residual {f_mid:.3g} mm > {tol:g}")
    return ExtendedAngle(mid, f_mid, it, (lo, hi))


@dataclass
class CamProfile:
    """Sampled cam profile in the cam (u-v) frame.

    ``psi_values`` holds the cam angle at which each point is the contact
    point; lobe ``k`` is the canonical lobe rotated by ``-2*pi*k/n``.
    """

    points: np.ndarray
    psi_values: np.ndarray
    lobe_index: np.ndarray
    closed: bool
    n: int
    pitch: np.ndarray = None
    frame: Frame = Frame.CAM

    def __len__(self):
        return len(self.points)

    def plane_points(self):
        return [PlanePoint(float(u), float(v), self.frame) for u, v in self.points]

    @property
    def closure_gap(self):
        return float(np.linalg.norm(self.points[-1] - self.points[0]))

    def rotated(self, angle):
        return CamProfile(
            points=rotate_xy(self.points, angle),
            psi_values=self.psi_values.copy(),
            lobe_index=self.lobe_index.copy(),
            closed=self.closed,
            n=self.n,
            pitch=None if self.pitch is None else rotate_xy(self.pitch, angle),
            frame=self.frame,
        )


@dataclass
class CamAssembly:
    cams: list
    phase_offsets: list
    params: object = None
    extended: ExtendedAngle = None
    samples: int = DEFAULT_SAMPLES
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.cams)


def _delta_value(delta):
    return delta.delta if isinstance(delta, ExtendedAngle) else float(delta)


def generate_lobe(params, delta, samples=DEFAULT_SAMPLES):
    """Canonical lobe on [delta, 2*pi/n - delta].

    ``samples`` is the number of segments, so the lobe has ``samples + 1``
    points and an even count puts a point exactly on psi = pi/n.
    """
    samples = check_samples(samples, MIN_SAMPLES)
    d = _delta_value(delta)
    psi = np.linspace(d, TWO_PI / params.n - d, samples + 1)
    points = cam_profile_xy(params, psi)
    # a single lobe is a closed curve only when it is the whole cam
    closed = params.n == 1 and float(np.linalg.norm(points[-1] - points[0])) <= CLOSURE_TOL
    return CamProfile(points=points, psi_values=psi,
                      lobe_index=np.zeros(psi.size, dtype=int), closed=closed,
                      n=params.n, pitch=pitch_xy(params, psi))


def generate_cam(params, samples=DEFAULT_SAMPLES, *, delta=None,
                 closure_tol=CLOSURE_TOL, check=True):
    """All n lobes as one closed polyline (first point repeated at the end).

    Shared endpoints between consecutive lobes appear once. With
    ``check=True`` a junction or closure gap above ``closure_tol`` raises
    :class:`ClosureFailure`; otherwise it only clears ``closed``.
    """
    if delta is None:
        delta = solve_extended_angle(params)
    lobe = generate_lobe(params, delta, samples)
    n = params.n
    pts, pitch, psi, idx = [], [], [], []
    worst = 0.0
    for k in range(n):
        rot = -TWO_PI * k / n
        lp = rotate_xy(lobe.points, rot)
        if k:
            worst = max(worst, float(np.linalg.norm(lp[0] - pts[-1][-1])))
            lp = lp[1:]
        pts.append(lp)
        pp = rotate_xy(lobe.pitch, rot)
        pitch.append(pp if k == 0 else pp[1:])
        q = lobe.psi_values + TWO_PI * k / n
        psi.append(q if k == 0 else q[1:])
        idx.append(np.full(len(lp), k, dtype=int))
    points = np.vstack(pts)
    worst = max(worst, float(np.linalg.norm(points[-1] - points[0])))
    closed = worst <= closure_tol
    if check and not closed:
        raise ClosureFailure(
            f"profile gap {worst:.3g} mm exceeds closure tolerance {closure_tol:g} mm")
    return CamProfile(points=points, psi_values=np.concatenate(psi),
                      lobe_index=np.concatenate(idx), closed=closed, n=n,
                      pitch=np.vstack(pitch))


def generate_assembly(params, samples=DEFAULT_SAMPLES, *, delta=None,
                      closure_tol=CLOSURE_TOL):
    """m copies of the cam, copy k turned counter-clockwise by k * beta."""
    if delta is None:
        delta = solve_extended_angle(params)
    base = generate_cam(params, samples, delta=delta, closure_tol=closure_tol)
    offsets = [k * params.beta for k in range(params.m)]
    cams = [base if k == 0 else base.rotated(off) for k, off in enumerate(offsets)]
    extended = delta if isinstance(delta, ExtendedAngle) else None
    return CamAssembly(cams=cams, phase_offsets=offsets, params=params,
                       extended=extended, samples=samples,
                       metadata={"delta": _delta_value(delta)})


def _open_points(profile, closure_tol=CLOSURE_TOL):
    pts = profile.points if isinstance(profile, CamProfile) else np.asarray(profile, float)
    if len(pts) > 1 and np.linalg.norm(pts[-1] - pts[0]) <= closure_tol:
        pts = pts[:-1]
    return pts


def is_convex_polyline(profile, tol=1e-9):
    """Cross-product convexity test on a closed polyline.

    The turn at every vertex must have one sign (|sin| below ``tol`` counts
    as straight) and the turns must sum to a single revolution, which rules
    out self-overlapping spirals.
    """
    pts = _open_points(profile)
    if len(pts) < 3:
        raise DegeneratePolyline("need at least 3 distinct points")
    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.linalg.norm(edges, axis=1)
    scale = max(float(np.max(np.abs(pts))), 1.0)
    if np.any(lengths <= 1e-12 * scale):
        raise DegeneratePolyline("polyline has repeated consecutive points")
    nxt = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
    dot = np.einsum("ij,ij->i", edges, nxt)
    sin_turn = cross / (lengths * np.roll(lengths, -1))
    if np.any(sin_turn > tol) and np.any(sin_turn < -tol):
        return False
    total = float(np.sum(np.arctan2(cross, dot)))
    return abs(abs(total) - TWO_PI) < 1e-6


def symmetry_error(profile, n=None):
    """Largest matched-sample distance between the profile and its rotation
    by 2*pi/n. Zero for an exactly n-fold symmetric sampling."""
    n = profile.n if n is None else n
    pts = _open_points(profile)
    if len(pts) % n:
        raise DegeneratePolyline(f"{len(pts)} points cannot split into {n} lobes")
    shift = len(pts) // n
    moved = rotate_xy(pts, -TWO_PI / n)
    return float(np.max(np.linalg.norm(moved - np.roll(pts, -shift, axis=0), axis=1)))
