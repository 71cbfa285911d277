"""Principal and mean curvature of the surface swept by the profile.

For a meridian (x(t), y(t)) rotated about the y-axis, with the arc traversed
in direction ``sigma`` so that the planar normal sigma*(y', -x')/|g'| is the
outward normal of the solid,

    k_meridian = sigma * (x' y'' - y' x'') / |g'|^3
    k_parallel = sigma * y' / (x |g'|)
    H = (k_meridian + k_parallel) / 2

With this convention a round sphere has H = 1/r > 0.
"""
from __future__ import annotations

from dataclasses import dataclass
import io
import math

import numpy as np

from .profile import ArcId, ClosedProfile, build_closed_profile
from .quadrature import DomainError

__all__ = [
    "CurvatureSample",
    "ArcCurvatureSummary",
    "curvature_arrays",
    "principal_curvatures",
    "arc_summary",
    "sup_abs_H",
    "inf_H",
    "sup_H",
    "golden_section_max",
    "curvature_csv",
]

BRACKET_SAMPLES = 1024
GOLDEN_TOL = 1e-12


@dataclass(frozen=True)
class CurvatureSample:
    arc: ArcId
    t: float
    x: float
    k_meridian: float
    k_parallel: float
    H: float


@dataclass(frozen=True)
class ArcCurvatureSummary:
    arc: ArcId
    H_min: float
    H_max: float
    argmin: float
    argmax: float


def _profile(obj) -> ClosedProfile:
    if isinstance(obj, ClosedProfile):
        return obj
    return build_closed_profile(obj)


def curvature_arrays(profile, arc_id, t):
    """Vectorised (x, k_meridian, k_parallel, H) on one arc.

    Flat arcs (gamma4, gamma5) return their exact value 0 everywhere,
    including the axis endpoint where the parallel curvature is defined by
    continuity.
    """
    profile = _profile(profile)
    arc = profile.arc(arc_id)
    sigma = profile.direction(arc_id)
    t = np.asarray(t, dtype=float)
    x = np.asarray(arc.x(t), dtype=float)
    dx, dy = arc.d1(t)
    ddx, ddy = arc.d2(t)
    speed = np.hypot(dx, dy)
    k_mer = sigma * (dx * ddy - dy * ddx) / speed**3
    flat = np.all(np.asarray(dy) == 0.0) and np.all(np.asarray(ddy) == 0.0)
    if flat:
        k_par = np.zeros(np.shape(t))
        k_mer = np.zeros(np.shape(t))
    else:
        if np.any(x <= 0.0):
            raise DomainError(f"{arc_id} touches the axis; parallel curvature undefined")
        k_par = sigma * dy / (x * speed)
    H = 0.5 * (k_mer + k_par)
    return x, k_mer, k_par, H


def principal_curvatures(params, arc_id, t) -> CurvatureSample:
    if arc_id is ArcId.AXIS:
        raise DomainError("the axis segment sweeps no surface")
    profile = _profile(params)
    arc = profile.arc(arc_id)
    if not arc.t0 <= t <= arc.t1:
        raise DomainError(f"t={t} outside [{arc.t0}, {arc.t1}] for {arc_id}")
    x, km, kp, H = curvature_arrays(profile, arc_id, float(t))
    return CurvatureSample(arc_id, float(t), float(x), float(km), float(kp), float(H))


def golden_section_max(f, lo, hi, tol=GOLDEN_TOL):
    """Maximise a unimodal scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def _refine(profile, arc_id, ts, values, sign):
    """Polish the best sample of sign*H by golden section on its bracket."""
    i = int(np.argmax(sign * values))
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    g = lambda t: sign * float(curvature_arrays(profile, arc_id, t)[3])
    t, v = golden_section_max(g, lo, hi)
    if v < sign * values[i]:
        return ts[i], values[i]
    return t, sign * v


def arc_summary(params, arc_id, n_samples=BRACKET_SAMPLES) -> ArcCurvatureSummary:
    """Extrema of H over the open arc: bracket scan then golden section."""
    if n_samples < 64:
        raise DomainError("n_samples must be >= 64")
    profile = _profile(params)
    arc = profile.arc(arc_id)
    # open arc: junction parameters carry no curvature value
    ts = np.linspace(arc.t0, arc.t1, n_samples + 2)[1:-1]
    H = curvature_arrays(profile, arc_id, ts)[3]
    tmax, hmax = _refine(profile, arc_id, ts, H, 1.0)
    tmin, hmin = _refine(profile, arc_id, ts, H, -1.0)
    return ArcCurvatureSummary(arc_id, hmin, hmax, tmin, tmax)


def _summaries(params):
    profile = _profile(params)
    return [arc_summary(profile, arc.id) for arc, _ in profile.material]


def sup_abs_H(params) -> float:
    """Essential supremum of |H| over the surface."""
    return max(max(abs(s.H_min), abs(s.H_max)) for s in _summaries(params))


def sup_H(params) -> float:
    return max(s.H_max for s in _summaries(params))


def inf_H(params) -> float:
    return min(s.H_min for s in _summaries(params))


def curvature_csv(params, n_per_arc=64) -> str:
    """CSV text with columns arc,t,x,H,k_meridian,k_parallel (open arcs only)."""
    profile = _profile(params)
    out = io.StringIO()
    out.write("arc,t,x,H,k_meridian,k_parallel\n")
    for arc, d in profile.material:
        ts = np.linspace(arc.t0, arc.t1, n_per_arc + 2)[1:-1]
        if d < 0:
            ts = ts[::-1]
        x, km, kp, H = curvature_arrays(profile, arc.id, ts)
        for row in zip(ts, x, H, km, kp):
            out.write(arc.id.value + "," + ",".join(f"{v:.17g}" for v in row) + "\n")
    return out.getvalue()
