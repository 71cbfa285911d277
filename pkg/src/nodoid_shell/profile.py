"""Meridian profile of the nodoid shell.

The profile is the closed planar curve made of

* ``GAMMA1``: a nodary arc (generates a nodoid piece with H = h),
* ``GAMMA2``/``GAMMA3``: concentric half circles of radii 1/h and R centred
  at (sqrt(beta)/(2h), R),
* ``GAMMA4``/``GAMMA5``: horizontal segments at heights R + 1/h and 2R,
* ``AXIS``: the piece of the rotation axis x = 0 closing the loop.

Rotating it about the y-axis gives the boundary of a solid ball.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import enum
import functools
import io
import math
from typing import Callable

import numpy as np

from .quadrature import (
    DEFAULT_TOL,
    DomainError,
    Tolerance,
    capital_R,
    integrate,
    nodary_breakpoints,
    nodary_integral_cumulative,
)

__all__ = [
    "ArcId",
    "ProfileParams",
    "ProfileArc",
    "JunctionReport",
    "ClosedProfile",
    "ConstructionError",
    "build_arc",
    "build_closed_profile",
    "check_c1",
    "semicircle_profile",
    "chain_arcs",
    "signed_volume",
    "polyline",
    "self_intersections",
    "profile_csv",
]


class ConstructionError(RuntimeError):
    pass


class ArcId(enum.Enum):
    GAMMA1 = "gamma1"
    GAMMA2 = "gamma2"
    GAMMA3 = "gamma3"
    GAMMA4 = "gamma4"
    GAMMA5 = "gamma5"
    AXIS = "axis"


MATERIAL_ARCS = (ArcId.GAMMA1, ArcId.GAMMA2, ArcId.GAMMA3, ArcId.GAMMA4, ArcId.GAMMA5)

# beta above this is accepted but outside the proof regime.
CERTIFIED_BETA_MAX = 1.0


@dataclass(frozen=True)
class ProfileParams:
    """One member (h, beta) of the family, with derived radius R."""

    h: float
    beta: float
    tol: Tolerance = DEFAULT_TOL
    R: float = field(init=False)

    def __post_init__(self):
        h, beta = float(self.h), float(self.beta)
        if not (math.isfinite(h) and h > 0):
            raise DomainError(f"h must be a positive number, got {self.h}")
        if not (math.isfinite(beta) and beta > 0):
            raise DomainError(f"beta must be a positive number, got {self.beta}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "beta", beta)
        R = capital_R(h, beta, self.tol)
        # F(pi; beta) rounds to 2 once beta is below ~1e-16.
        if not R <= 1.0 / h:
            raise ConstructionError(f"R={R} exceeds 1/h={1.0 / h}")
        object.__setattr__(self, "R", R)

    @property
    def a(self):
        """Distance of the torus centre circle from the axis, sqrt(beta)/(2h)."""
        return math.sqrt(self.beta) / (2.0 * self.h)

    @property
    def in_proof_regime(self):
        return 0.0 < self.beta <= CERTIFIED_BETA_MAX

    def scaled(self, lam):
        """Parameters of the same solid dilated by ``lam`` (h -> h/lam)."""
        return ProfileParams(self.h / lam, self.beta, self.tol)


@dataclass(frozen=True)
class ProfileArc:
    """Parametric arc with closed-form position and derivatives.

    ``eval``, ``d1`` and ``d2`` take a scalar or an array of parameters and
    return an ``(x, y)`` pair of the same shape. ``arclength(t)`` is the
    length of the arc from ``t0`` to ``t``.
    """

    id: ArcId | None
    t0: float
    t1: float
    eval: Callable
    d1: Callable
    d2: Callable
    arclength: Callable
    breakpoints: tuple = ()
    xfun: Callable | None = None

    def x(self, t):
        """Distance to the axis; cheaper than ``eval`` for the nodary arc."""
        if self.xfun is not None:
            return self.xfun(t)
        return self.eval(t)[0]

    @property
    def length(self):
        return float(self.arclength(self.t1))

    def point(self, t):
        x, y = self.eval(t)
        return np.array([float(x), float(y)])

    def tangent(self, t):
        dx, dy = self.d1(t)
        return np.array([float(dx), float(dy)])

    def speed(self, t):
        dx, dy = self.d1(t)
        return np.hypot(dx, dy)

    def t_at_arclength(self, s):
        """Invert ``arclength`` by vectorised bisection."""
        s = np.asarray(s, dtype=float)
        lo = np.full(s.shape, self.t0)
        hi = np.full(s.shape, self.t1)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = self.arclength(mid) < s
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)


def _nodary_arc(p: ProfileParams) -> ProfileArc:
    h, beta, tol = p.h, p.beta, p.tol
    k = 1.0 / (2.0 * h)
    c = math.sqrt(1.0 + beta)

    def sq(t):
        sn = np.sin(t)
        return sn, np.sqrt(beta + sn * sn)

    def gap(sn, root):
        # sqrt(beta + sin^2) - sin, free of cancellation for sin >= 0
        return beta / (root + sn)

    def eval_(t):
        t_arr = np.asarray(t, dtype=float)
        sn, root = sq(t_arr)
        x = k * gap(sn, root)
        flat = np.atleast_1d(t_arr).ravel()
        order = np.argsort(flat, kind="stable")
        F_sorted = nodary_integral_cumulative(flat[order], beta, tol)
        F = np.empty_like(F_sorted)
        F[order] = F_sorted
        y = k * (np.cos(t_arr) - 1.0 + F.reshape(t_arr.shape))
        return x, y

    def slope(sn, root):
        # sin/sqrt(beta + sin^2) - 1, without cancellation
        return -gap(sn, root) / root

    def d1(t):
        t = np.asarray(t, dtype=float)
        sn, root = sq(t)
        m = slope(sn, root)
        return k * m * np.cos(t), k * m * sn

    def d2(t):
        t = np.asarray(t, dtype=float)
        sn, root = sq(t)
        cs = np.cos(t)
        m = slope(sn, root)
        dm = beta * cs / root**3
        return k * (dm * cs - m * sn), k * (dm * sn + m * cs)

    def arclength(t):
        t = np.asarray(t, dtype=float)
        return k * (t - math.asin(1.0 / c) + np.arcsin(np.cos(t) / c))

    def xfun(t):
        sn, root = sq(np.asarray(t, dtype=float))
        return k * gap(sn, root)

    return ProfileArc(ArcId.GAMMA1, 0.0, math.pi, eval_, d1, d2, arclength,
                      breakpoints=nodary_breakpoints(beta), xfun=xfun)


def _circle_arc(arc_id, cx, cy, r, t0=-0.5 * math.pi, t1=0.5 * math.pi) -> ProfileArc:
    def eval_(t):
        t = np.asarray(t, dtype=float)
        return r * np.cos(t) + cx, r * np.sin(t) + cy

    def d1(t):
        t = np.asarray(t, dtype=float)
        return -r * np.sin(t), r * np.cos(t)

    def d2(t):
        t = np.asarray(t, dtype=float)
        return -r * np.cos(t), -r * np.sin(t)

    def arclength(t):
        return r * (np.asarray(t, dtype=float) - t0)

    return ProfileArc(arc_id, t0, t1, eval_, d1, d2, arclength)


def _segment_arc(arc_id, p0, p1) -> ProfileArc:
    (x0, y0), (x1, y1) = p0, p1
    dx, dy = x1 - x0, y1 - y0
    L = math.hypot(dx, dy)

    def eval_(t):
        t = np.asarray(t, dtype=float)
        return x0 + t * dx, y0 + t * dy

    def d1(t):
        t = np.asarray(t, dtype=float)
        return np.full(t.shape, dx)[()], np.full(t.shape, dy)[()]

    def d2(t):
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape)[()], np.zeros(t.shape)[()]

    def arclength(t):
        return L * np.asarray(t, dtype=float)

    return ProfileArc(arc_id, 0.0, 1.0, eval_, d1, d2, arclength)


def build_arc(params: ProfileParams, arc_id: ArcId) -> ProfileArc:
    h, R, a = params.h, params.R, params.a
    if arc_id is ArcId.GAMMA1:
        return _nodary_arc(params)
    if arc_id is ArcId.GAMMA2:
        return _circle_arc(arc_id, a, R, 1.0 / h)
    if arc_id is ArcId.GAMMA3:
        return _circle_arc(arc_id, a, R, R)
    if arc_id is ArcId.GAMMA4:
        return _segment_arc(arc_id, (0.0, R + 1.0 / h), (a, R + 1.0 / h))
    if arc_id is ArcId.GAMMA5:
        return _segment_arc(arc_id, (0.0, 2.0 * R), (a, 2.0 * R))
    if arc_id is ArcId.AXIS:
        return _segment_arc(arc_id, (0.0, R + 1.0 / h), (0.0, 2.0 * R))
    raise DomainError(f"unknown arc {arc_id!r}")


@dataclass(frozen=True)
class JunctionReport:
    arc_a: ArcId | None
    arc_b: ArcId | None
    position_gap: float
    tangent_angle_gap: float
    # At the axis the gap is measured against the normal to the axis.
    axis: bool = False

    def ok(self, tol):
        return self.position_gap <= tol and self.tangent_angle_gap <= tol


def _line_angle(u, v):
    """Angle between the lines spanned by u and v, in [0, pi/2]."""
    cross = abs(u[0] * v[1] - u[1] * v[0])
    dot = abs(u[0] * v[0] + u[1] * v[1])
    return math.atan2(cross, dot)


def _ends(arc, direction):
    if direction > 0:
        return arc.t0, arc.t1
    return arc.t1, arc.t0


@dataclass(frozen=True)
class ClosedProfile:
    """Oriented closed loop of arcs; the meridian region lies on the left."""

    params: ProfileParams | None
    arcs: tuple  # of (ProfileArc, direction)
    junctions: tuple = ()

    def arc(self, arc_id) -> ProfileArc:
        for arc, _ in self.arcs:
            if arc.id is arc_id:
                return arc
        raise KeyError(arc_id)

    def direction(self, arc_id) -> int:
        for arc, d in self.arcs:
            if arc.id is arc_id:
                return d
        raise KeyError(arc_id)

    @property
    def material(self):
        """Arcs that sweep surface (everything except pieces of the axis)."""
        return tuple((arc, d) for arc, d in self.arcs if arc.id is not ArcId.AXIS)

    def axis_points(self, tol=1e-14):
        pts = []
        for arc, d in self.arcs:
            for t in _ends(arc, d)[:1]:
                p = arc.point(t)
                if abs(p[0]) <= tol:
                    pts.append(p)
        return pts

    def chain_from_axis(self):
        """Material arcs in traversal order, starting right after the axis."""
        arcs = list(self.arcs)
        k = next(i for i, (arc, _) in enumerate(arcs) if arc.id is ArcId.AXIS)
        rotated = arcs[k + 1:] + arcs[:k]
        return tuple(rotated)


def chain_arcs(arcs, tol):
    """Order and direct ``arcs`` into a loop by matching endpoints.

    The first arc keeps its parametric direction. Raises ConstructionError
    if some endpoint has no partner within ``tol``.
    """
    remaining = list(arcs)
    first = remaining.pop(0)
    loop = [(first, 1)]
    start = first.point(first.t0)
    cur = first.point(first.t1)
    while remaining:
        best = None
        for i, arc in enumerate(remaining):
            for d in (1, -1):
                s, _ = _ends(arc, d)
                g = float(np.hypot(*(arc.point(s) - cur)))
                if best is None or g < best[0]:
                    best = (g, i, d)
        g, i, d = best
        if g > tol:
            raise ConstructionError(f"no arc continues the loop at {cur} (gap {g:.3e})")
        arc = remaining.pop(i)
        loop.append((arc, d))
        cur = arc.point(_ends(arc, d)[1])
    g = float(np.hypot(*(cur - start)))
    if g > tol:
        raise ConstructionError(f"loop does not close (gap {g:.3e})")
    return loop


def signed_volume(arcs, tol=DEFAULT_TOL):
    """pi * closed integral of x^2 dy over the oriented loop."""
    total = []
    for arc, d in arcs:
        if arc.id is ArcId.AXIS:
            continue
        total.append(d * integrate(lambda t, arc=arc: arc.x(t) ** 2 * arc.d1(t)[1],
                                   arc.t0, arc.t1, tol, arc.breakpoints))
    return math.pi * math.fsum(total)


def _junction(arc_a, da, arc_b, db):
    ta = _ends(arc_a, da)[1]
    tb = _ends(arc_b, db)[0]
    gap = float(np.hypot(*(arc_a.point(ta) - arc_b.point(tb))))
    if ArcId.AXIS in (arc_a.id, arc_b.id):
        other, t = (arc_b, tb) if arc_a.id is ArcId.AXIS else (arc_a, ta)
        angle = _line_angle(other.tangent(t), (1.0, 0.0))
        return JunctionReport(arc_a.id, arc_b.id, gap, angle, axis=True)
    angle = _line_angle(arc_a.tangent(ta), arc_b.tangent(tb))
    return JunctionReport(arc_a.id, arc_b.id, gap, angle)


def _junctions(loop):
    n = len(loop)
    return tuple(_junction(*loop[i], *loop[(i + 1) % n]) for i in range(n))


def _orient(arcs, tol):
    loop = chain_arcs(arcs, tol)
    if signed_volume(loop) < 0:
        loop = [(arc, -d) for arc, d in reversed(loop)]
    return tuple(loop)


@functools.lru_cache(maxsize=256)
def build_closed_profile(params: ProfileParams) -> ClosedProfile:
    """Assemble the oriented loop gamma5, gamma3, gamma1, gamma2, gamma4, axis.

    The traversal is chosen so the enclosed signed volume is positive,
    which puts the meridian region on the left of every arc.
    """
    tol = params.tol
    gap_tol = 100.0 * max(tol.abs_tol, tol.rel_tol) * max(1.0, 1.0 / params.h)
    arcs = [build_arc(params, i) for i in
            (ArcId.GAMMA5, ArcId.GAMMA3, ArcId.GAMMA1, ArcId.GAMMA2, ArcId.GAMMA4, ArcId.AXIS)]
    loop = _orient(arcs, gap_tol)
    k = next(i for i, (arc, _) in enumerate(loop) if arc.id is ArcId.AXIS)
    loop = loop[k:] + loop[:k]
    return ClosedProfile(params, loop, _junctions(loop))


def semicircle_profile(r) -> ClosedProfile:
    """Right half of a circle of radius ``r`` closed by its diameter.

    Rotated about the axis it gives the sphere of radius ``r``; used as a
    reference fixture by the measure and mesh code.
    """
    r = float(r)
    if not r > 0:
        raise DomainError("radius must be positive")
    circle = _circle_arc(None, 0.0, 0.0, r)
    axis = _segment_arc(ArcId.AXIS, (0.0, r), (0.0, -r))
    loop = _orient([circle, axis], 1e-12 * r)
    k = next(i for i, (arc, _) in enumerate(loop) if arc.id is ArcId.AXIS)
    loop = loop[k:] + loop[:k]
    return ClosedProfile(None, loop, _junctions(loop))


def check_c1(profile: ClosedProfile, tol=1e-10):
    """Junction diagnostics; ``tol`` is informational (see JunctionReport.ok)."""
    return list(profile.junctions)


def polyline(profile: ClosedProfile, n_points=2000):
    """Closed polygon through ~n_points profile points spaced by arclength.

    Junction points are always vertices. Returns (points, arc_ids).
    """
    total = sum(arc.length for arc, _ in profile.arcs)
    pts, ids = [], []
    for arc, d in profile.arcs:
        m = max(2, int(round(n_points * arc.length / total)))
        s = np.linspace(0.0, arc.length, m + 1)[:-1]
        if d < 0:
            s = arc.length - s
        t = arc.t_at_arclength(s)
        t[0] = _ends(arc, d)[0]
        x, y = arc.eval(t)
        pts.append(np.column_stack([x, y]))
        ids.extend([arc.id] * m)
    return np.vstack(pts), ids


def self_intersections(profile: ClosedProfile, n_points=2000):
    """Brute-force list of crossing pairs (i, j) of non-adjacent polygon edges."""
    P, _ = polyline(profile, n_points)
    Q = np.roll(P, -1, axis=0)
    n = len(P)
    hits = []
    for i in range(n - 2):
        a, b = P[i], Q[i]
        c, d = P[i + 2:], Q[i + 2:]
        if i == 0:
            c, d = c[:-1], d[:-1]  # last edge shares P[0]
        d1 = _orient2d(c, d, a)
        d2 = _orient2d(c, d, b)
        d3 = _orient2d(a, b, c)
        d4 = _orient2d(a, b, d)
        cross = (d1 * d2 < 0) & (d3 * d4 < 0)
        for j in np.nonzero(cross)[0]:
            hits.append((i, i + 2 + int(j)))
    return hits


def _orient2d(p, q, r):
    p, q, r = np.asarray(p), np.asarray(q), np.asarray(r)
    return ((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1])
            - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))


def profile_csv(profile: ClosedProfile, n_per_arc=64) -> str:
    """CSV text with columns arc,t,x,y,dx,dy in traversal order."""
    out = io.StringIO()
    out.write("arc,t,x,y,dx,dy\n")
    for arc, d in profile.arcs:
        t = np.linspace(arc.t0, arc.t1, n_per_arc + 1)
        if d < 0:
            t = t[::-1]
        x, y = arc.eval(t)
        dx, dy = arc.d1(t)
        name = arc.id.value if arc.id is not None else "arc"
        for row in zip(t, x, y, dx, dy):
            out.write(name + "," + ",".join(f"{v:.17g}" for v in row) + "\n")
    return out.getvalue()
