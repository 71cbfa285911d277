"""Area, volume and curvature norms of the solid of revolution.

All quantities are line integrals over the meridian profile:

    S = 2 pi sum_arcs int x |g'| dt
    V = pi * closed int x^2 dy
    ||H||_p^p = 2 pi sum_arcs int |H|^p x |g'| dt
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .curvature import curvature_arrays, sup_abs_H
from .profile import ClosedProfile, build_closed_profile, signed_volume
from .quadrature import DEFAULT_TOL, DomainError, integrate

__all__ = [
    "MeasureSet",
    "surface_area",
    "volume",
    "lp_norm_H",
    "willmore",
    "measure",
    "rescale_to_unit_volume",
    "ball_reference",
]


def _profile(obj) -> ClosedProfile:
    if isinstance(obj, ClosedProfile):
        return obj
    return build_closed_profile(obj)


def _tol(obj, tol):
    if tol is not None:
        return tol
    params = getattr(obj, "params", obj)
    return getattr(params, "tol", DEFAULT_TOL)


def _surface_integral(profile, weight, tol):
    """2 pi * sum over material arcs of int weight(arc, t) * x |g'| dt."""
    parts = []
    for arc, _ in profile.material:
        def f(t, arc=arc):
            dx, dy = arc.d1(t)
            return weight(arc, t) * arc.x(t) * np.hypot(dx, dy)
        parts.append(integrate(f, arc.t0, arc.t1, tol, arc.breakpoints))
    return 2.0 * math.pi * math.fsum(parts)


def surface_area(params, tol=None) -> float:
    profile = _profile(params)
    return _surface_integral(profile, lambda arc, t: 1.0, _tol(params, tol))


def volume(params, tol=None) -> float:
    profile = _profile(params)
    return signed_volume(profile.arcs, _tol(params, tol))


def lp_norm_H(params, p, tol=None) -> float:
    """(int |H|^p dS)^(1/p); ``p = inf`` gives the essential supremum."""
    p = float(p)
    if not p > 0:
        raise DomainError(f"p must be > 0, got {p}")
    profile = _profile(params)
    if math.isinf(p):
        return sup_abs_H(profile)

    # for large p, |H|^p over/underflows; factor out the supremum
    scale = sup_abs_H(profile) if p > 64.0 else 1.0

    def weight(arc, t):
        H = curvature_arrays(profile, arc.id, t)[3]
        return np.abs(H / scale) ** p

    return scale * _surface_integral(profile, weight, _tol(params, tol)) ** (1.0 / p)


def willmore(params, tol=None) -> float:
    """Willmore energy int H^2 dS."""
    profile = _profile(params)
    return _surface_integral(
        profile, lambda arc, t: curvature_arrays(profile, arc.id, t)[3] ** 2,
        _tol(params, tol))


def _pkey(p):
    return "inf" if math.isinf(p) else repr(float(p))


@dataclass(frozen=True)
class MeasureSet:
    area: float
    volume: float
    willmore: float
    lp_norms: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.area > 0:
            raise DomainError(f"area must be positive, got {self.area}")
        if not self.volume > 0:
            raise DomainError(f"volume must be positive, got {self.volume}")

    def norm(self, p):
        return self.lp_norms[_pkey(float(p))]

    def as_dict(self):
        return {"area": self.area, "volume": self.volume, "willmore": self.willmore,
                "lp_norms": dict(self.lp_norms)}


def measure(params, ps=(2.0, 3.0, math.inf), tol=None) -> MeasureSet:
    profile = _profile(params)
    norms = {_pkey(float(p)): lp_norm_H(profile, p, tol) for p in ps}
    norms.setdefault("inf", sup_abs_H(profile))
    return MeasureSet(surface_area(profile, tol), volume(profile, tol),
                      willmore(profile, tol), norms)


def rescale_to_unit_volume(m: MeasureSet) -> MeasureSet:
    """Apply the dilation by lam = V^(-1/3) exactly, via scaling laws."""
    if not m.volume > 0:
        raise DomainError("volume must be positive")
    lam = m.volume ** (-1.0 / 3.0)
    norms = {}
    for key, value in m.lp_norms.items():
        if key == "inf":
            norms[key] = value / lam
        else:
            norms[key] = value * lam ** (2.0 / float(key) - 1.0)
    return replace(m, area=m.area * lam**2, volume=1.0, lp_norms=norms)


def ball_reference(p) -> float:
    """||H||_p of the unit-volume ball (radius (3/(4 pi))^(1/3))."""
    p = float(p)
    if not p > 0:
        raise DomainError(f"p must be > 0, got {p}")
    if math.isinf(p):
        return (4.0 * math.pi / 3.0) ** (1.0 / 3.0)
    return (4.0 * math.pi * (4.0 * math.pi / 3.0) ** ((p - 2.0) / 3.0)) ** (1.0 / p)
