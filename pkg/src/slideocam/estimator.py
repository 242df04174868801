"""Estimator-style wrapper so a design composes with sklearn tooling.

``fit`` solves the design (extended angle, feasibility, active interval,
profiles); ``transform`` maps cam angles to contact points and ``predict``
maps them to pressure angles. Hyper-parameters are the design parameters, so
``get_params``/``set_params``/``clone`` work as usual.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_column
from .analysis import active_interval, max_pressure_angle
from .core import DesignParams, cam_profile_xy, pitch_xy, pressure_angle
from .feasibility import check_feasibility
from .geometry import (CLOSURE_TOL, DEFAULT_SAMPLES, DELTA_TOL, generate_assembly,
                       solve_extended_angle)


class SlideOCam(TransformerMixin, BaseEstimator):
    """Slide-o-Cam design.

    Parameters
    ----------
    p, n, m, e, a4, b
        Pitch (mm), lobes per cam, conjugate cams, offset (mm), roller
        radius (mm) and shaft radius (mm).
    samples : int
        Segments per lobe for the generated profiles.
    tol : float
        Residual tolerance (mm) for the extended angle.

    Attributes
    ----------
    params_ : DesignParams
    extended_angle_ : ExtendedAngle
    delta_ : float
    feasibility_ : FeasibilityReport
    active_interval_ : ActiveInterval
    pressure_extremum_ : PressureExtremum
    assembly_ : CamAssembly
    """

    def __init__(self, p=50.0, n=1, m=2, e=9.0, a4=10.0, b=4.25,
                 samples=DEFAULT_SAMPLES, tol=DELTA_TOL):
        self.p = p
        self.n = n
        self.m = m
        self.e = e
        self.a4 = a4
        self.b = b
        self.samples = samples
        self.tol = tol

    @classmethod
    def from_params(cls, params, **kwargs):
        return cls(**params.as_dict(), **kwargs)

    def fit(self, X=None, y=None):
        """Solve the design. ``X`` and ``y`` are ignored."""
        params = DesignParams(p=self.p, n=self.n, m=self.m, e=self.e, a4=self.a4, b=self.b)
        ext = solve_extended_angle(params, self.tol)
        self.params_ = params
        self.extended_angle_ = ext
        self.delta_ = ext.delta
        self.feasibility_ = check_feasibility(params)
        self.active_interval_ = active_interval(params, ext)
        self.pressure_extremum_ = max_pressure_angle(params, ext)
        self.assembly_ = generate_assembly(params, self.samples, delta=ext,
                                           closure_tol=CLOSURE_TOL)
        return self

    def transform(self, X):
        """Contact points (u, v) in mm for cam angles ``X``; shape (k, 2)."""
        check_is_fitted(self, "params_")
        return cam_profile_xy(self.params_, as_column(X))

    def pitch(self, X):
        """Roller centres (u, v) in mm; shape (k, 2)."""
        check_is_fitted(self, "params_")
        return pitch_xy(self.params_, as_column(X))

    def predict(self, X):
        """Pressure angle (rad) at each cam angle in ``X``."""
        check_is_fitted(self, "params_")
        return np.atleast_1d(pressure_angle(self.params_, as_column(X)))

    def score(self, X=None, y=None):
        """Negative max |mu| over the active interval, in degrees."""
        check_is_fitted(self, "params_")
        return -self.pressure_extremum_.degrees

    @property
    def eta(self):
        return self.e / self.p
