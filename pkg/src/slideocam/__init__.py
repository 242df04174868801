"""Slide-o-Cam cam synthesis: profiles, pressure angle, feasibility, sweeps."""
__version__ = "0.1.0"

from .core import (DesignParams, Frame, PlanePoint, cam_profile_point,
                   cam_profile_xy, curvature_parametric, curvature_pitch,
                   displacement, displacement_derivatives, pitch_point, pitch_xy,
                   pressure_angle, profile_coefficients, tan_pressure_angle)
from .geometry import (CamAssembly, CamProfile, ExtendedAngle, generate_assembly,
                       generate_cam, generate_lobe, is_convex_polyline,
                       solve_extended_angle)
from .feasibility import (FeasibilityReport, RegionRaster, check_feasibility,
                          constraint_B_term, constraint_terms, rasterize_region)
from .analysis import (ActiveInterval, SweepResult, active_interval,
                       contact_loss_check, max_pressure_angle, pressure_profile,
                       sweep)
from .estimator import SlideOCam

__all__ = [
    "__version__", "DesignParams", "Frame", "PlanePoint", "cam_profile_point",
    "cam_profile_xy", "curvature_parametric", "curvature_pitch", "displacement",
    "displacement_derivatives", "pitch_point", "pitch_xy", "pressure_angle",
    "profile_coefficients", "tan_pressure_angle", "CamAssembly", "CamProfile",
    "ExtendedAngle", "generate_assembly", "generate_cam", "generate_lobe",
    "is_convex_polyline", "solve_extended_angle", "FeasibilityReport",
    "RegionRaster", "check_feasibility", "constraint_B_term", "constraint_terms",
    "rasterize_region", "ActiveInterval", "SweepResult", "active_interval",
    "contact_loss_check", "max_pressure_angle", "pressure_profile", "sweep",
    "SlideOCam",
]
