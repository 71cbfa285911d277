"""Adaptive Gauss-Kronrod quadrature and the nodary integral.

The nodary integral

    F(t; beta) = int_0^t sin(s)^2 / sqrt(beta + sin(s)^2) ds

gives the ordinate of the nodoid generating arc and the inner torus radius
R(h, beta) = F(pi; beta) / (2 h).
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "QuadratureError",
    "DomainError",
    "integrate",
    "nodary_integrand",
    "nodary_breakpoints",
    "nodary_integral",
    "nodary_integral_cumulative",
    "capital_R",
]


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class QuadratureError(RuntimeError):
    """Subdivision budget exhausted before the tolerance was met."""

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error!r})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_subdivisions: int = 10**6

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")
        if not self.rel_tol >= 0:
            raise DomainError(f"rel_tol must be >= 0, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")

    def tightened(self, factor):
        return Tolerance(self.abs_tol / factor, self.rel_tol / factor, self.max_subdivisions)

    def as_dict(self):
        return {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol,
                "max_subdivisions": self.max_subdivisions}


DEFAULT_TOL = Tolerance()

# 7-point Gauss / 15-point Kronrod nodes on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 nodes, ascending
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _eval(f, x):
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    return y


def _gk15(f, a, b):
    """Kronrod estimate and |K - G| for each interval [a_i, b_i]."""
    c = 0.5 * (a + b)
    r = 0.5 * (b - a)
    x = c[:, None] + r[:, None] * _NODES[None, :]
    y = _eval(f, x)
    if not np.all(np.isfinite(y)):
        raise DomainError("integrand is not finite on the integration interval")
    k = r * (y @ _KWEIGHTS)
    g = r * (y @ _GWEIGHTS)
    return k, np.abs(k - g)


def integrate(f, a, b, tol=DEFAULT_TOL, breakpoints=()):
    """Integrate ``f`` over ``[a, b]`` to ``max(abs_tol, rel_tol*|Q|)``.

    ``f`` is called with numpy arrays of abscissae. Intervals are bisected
    level by level; an interval is accepted once its Gauss-Kronrod error
    estimate is below its length-proportional share of the tolerance, so
    the accepted errors sum to at most the global target.

    ``breakpoints`` inside ``(a, b)`` split the interval before subdividing
    (use them for kinks and extrema of the integrand).
    """
    a = float(a)
    b = float(b)
    if not a <= b:
        raise DomainError(f"need a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    cuts = sorted({a, b, *(float(p) for p in breakpoints if a < p < b)})
    lo = np.array(cuts[:-1])
    hi = np.array(cuts[1:])
    span = b - a
    total_acc = 0.0
    err_acc = 0.0
    subdivisions = 0
    while True:
        k, e = _gk15(f, lo, hi)
        estimate = total_acc + math.fsum(k)
        target = max(tol.abs_tol, tol.rel_tol * abs(estimate))
        share = target * (hi - lo) / span
        # Roundoff floor: no estimate can beat a few ulps of the local value.
        floor = 50 * np.finfo(float).eps * np.abs(k)
        done = e <= np.maximum(share, floor)
        total_acc += math.fsum(k[done])
        err_acc += math.fsum(e[done])
        if done.all():
            return total_acc
        lo, hi = lo[~done], hi[~done]
        subdivisions += lo.size
        if subdivisions > tol.max_subdivisions:
            raise QuadratureError("subdivision budget exhausted",
                                  estimate, err_acc + math.fsum(e[~done]))
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]


def nodary_integrand(s, beta):
    sn = np.sin(s)
    return sn * sn / np.sqrt(beta + sn * sn)


def nodary_breakpoints(beta):
    """Split points for the nodary integrand on [0, pi].

    Besides the maximum at pi/2, the integrand bends on the scale sqrt(beta)
    next to both endpoints (a kink in the beta -> 0 limit); a geometric
    ladder of cuts there stops the error estimate from being fooled.
    """
    pts = [0.5 * math.pi]
    scale = math.sqrt(beta)
    while 0.0 < scale < 0.5 * math.pi:
        pts.extend((scale, math.pi - scale))
        scale *= 8.0
    return tuple(sorted(pts))


def _check_nodary_args(t, beta):
    if not 0.0 <= t <= math.pi:
        raise DomainError(f"t must lie in [0, pi], got {t}")
    if not beta >= 0.0:
        raise DomainError(f"beta must be >= 0, got {beta}")


def nodary_integral(t, beta, tol=DEFAULT_TOL):
    """F(t; beta) by direct adaptive quadrature."""
    t = float(t)
    beta = float(beta)
    _check_nodary_args(t, beta)
    if beta == 0.0:
        # |sin s| = sin s on [0, pi]; closed form keeps the limit exact.
        return 1.0 - math.cos(t)
    return integrate(lambda s: nodary_integrand(s, beta), 0.0, t, tol,
                     breakpoints=nodary_breakpoints(beta))


def nodary_integral_cumulative(ts, beta, tol=DEFAULT_TOL):
    """F at each of the ascending parameters ``ts`` by summing panel integrals."""
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 1:
        raise DomainError("ts must be one-dimensional")
    if ts.size == 0:
        return ts.copy()
    if np.any(np.diff(ts) < 0):
        raise DomainError("ts must be ascending")
    _check_nodary_args(ts[0], beta)
    _check_nodary_args(ts[-1], beta)
    if beta == 0.0:
        return 1.0 - np.cos(ts)
    out = np.empty_like(ts)
    acc = nodary_integral(ts[0], beta, tol)
    out[0] = acc
    f = lambda s: nodary_integrand(s, beta)
    cuts = nodary_breakpoints(beta)
    for i in range(1, ts.size):
        acc += integrate(f, ts[i - 1], ts[i], tol, breakpoints=cuts)
        out[i] = acc
    return out


def capital_R(h, beta, tol=DEFAULT_TOL):
    """Inner torus radius R(h, beta) = F(pi; beta) / (2h)."""
    if not h > 0:
        raise DomainError(f"h must be > 0, got {h}")
    if not beta >= 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    return nodary_integral(math.pi, beta, tol) / (2.0 * h)
