"""Small-volume solids of revolution with bounded mean curvature.

Builds the nodoid/torus/disk shell family indexed by (h, beta), measures
area, volume and curvature norms, certifies the small-volume bound and the
L^p comparison with the ball, and exports watertight meshes.
"""
__version__ = "0.1.0"

from .quadrature import DEFAULT_TOL, DomainError, QuadratureError, Tolerance, capital_R, integrate, nodary_integral
from .profile import ArcId, ClosedProfile, ProfileParams, build_arc, build_closed_profile, check_c1
from .curvature import arc_summary, principal_curvatures, sup_abs_H
from .measures import MeasureSet, ball_reference, lp_norm_H, measure, rescale_to_unit_volume, surface_area, volume
from .certify import asymptotics_sweep, certify_corollary, certify_theorem, select_h

__all__ = [
    "DEFAULT_TOL", "DomainError", "QuadratureError", "Tolerance", "capital_R", "integrate",
    "nodary_integral", "ArcId", "ClosedProfile", "ProfileParams", "build_arc",
    "build_closed_profile", "check_c1", "arc_summary", "principal_curvatures", "sup_abs_H",
    "MeasureSet", "ball_reference", "lp_norm_H", "measure", "rescale_to_unit_volume",
    "surface_area", "volume", "asymptotics_sweep", "certify_corollary", "certify_theorem",
    "select_h",
]
