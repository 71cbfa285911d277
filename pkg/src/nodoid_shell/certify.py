"""Parameter selection and numerical certificates.

A theorem certificate is a member of the family with

    sup |H| <= 1,   |S - 8 pi| <= eps,   V <= eps.

A corollary certificate rescales such a member to unit volume and checks
that its L^p curvature norm is strictly below the unit-volume ball's.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
import math

import numpy as np

from .curvature import inf_H, sup_abs_H
from .measures import (
    ball_reference,
    measure,
    rescale_to_unit_volume,
    surface_area,
    volume,
)
from .profile import ProfileParams
from .quadrature import DEFAULT_TOL, DomainError, Tolerance

__all__ = [
    "CERT_TOL",
    "TheoremCertificate",
    "CorollaryCertificate",
    "SweepRow",
    "SweepResult",
    "select_h",
    "certify_theorem",
    "certify_corollary",
    "corollary_majorant",
    "default_epsilon_schedule",
    "asymptotics_sweep",
    "fit_order",
]

CERT_TOL = 1e-9
BETA_START = 0.5
BETA_SHRINK = 0.25
MAX_ITERS = 60
MAJORANT_TOL = 1e-6


def select_h(epsilon) -> float:
    """Geometric mean of the admissible window (sqrt(8pi/(eps+8pi)), 1)."""
    epsilon = float(epsilon)
    if not epsilon > 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    lower = math.sqrt(8.0 * math.pi / (epsilon + 8.0 * math.pi))
    return math.sqrt(lower)


def _params_dict(p: ProfileParams):
    return {"h": p.h, "beta": p.beta, "R": p.R}


@dataclass
class TheoremCertificate:
    epsilon: float
    params: ProfileParams
    sup_abs_H: float
    area: float
    volume: float
    clauses: dict
    iterations: int
    cert_tol: float
    tol: Tolerance
    trajectory: list = field(default_factory=list)

    @property
    def passed(self):
        return all(self.clauses.values())

    def as_dict(self):
        return {
            "kind": "theorem",
            "epsilon": self.epsilon,
            "params": _params_dict(self.params),
            "in_proof_regime": self.params.in_proof_regime,
            "sup_abs_H": self.sup_abs_H,
            "area": self.area,
            "area_gap": abs(self.area - 8.0 * math.pi),
            "volume": self.volume,
            "clauses": dict(self.clauses),
            "passed": self.passed,
            "iterations": self.iterations,
            "tolerances": {"cert_tol": self.cert_tol, **self.tol.as_dict()},
            "trajectory": list(self.trajectory),
        }


def _theorem_clauses(epsilon, sup, area, vol, cert_tol):
    return {
        "sup_abs_H_le_1": sup <= 1.0 + cert_tol,
        "area_within_eps": abs(area - 8.0 * math.pi) <= epsilon,
        "volume_le_eps": vol <= epsilon,
    }


def certify_theorem(epsilon, beta_shrink=BETA_SHRINK, max_iters=MAX_ITERS,
                    tol: Tolerance = DEFAULT_TOL, beta_start=BETA_START,
                    cert_tol=CERT_TOL) -> TheoremCertificate:
    """Shrink beta geometrically from ``beta_start`` until all clauses hold.

    On exhaustion the returned certificate fails and carries the whole
    trajectory of measured values.
    """
    epsilon = float(epsilon)
    if not epsilon > 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    if not 0.0 < beta_shrink < 1.0:
        raise DomainError("beta_shrink must lie in (0, 1)")
    if max_iters < 1:
        raise DomainError("max_iters must be >= 1")
    h = select_h(epsilon)
    beta = float(beta_start)
    trajectory = []
    for it in range(1, max_iters + 1):
        params = ProfileParams(h, beta, tol)
        sup = sup_abs_H(params)
        area = surface_area(params)
        vol = volume(params)
        clauses = _theorem_clauses(epsilon, sup, area, vol, cert_tol)
        trajectory.append({"beta": beta, "sup_abs_H": sup, "area": area, "volume": vol})
        if all(clauses.values()) or it == max_iters:
            return TheoremCertificate(epsilon, params, sup, area, vol, clauses, it,
                                      cert_tol, tol, trajectory)
        beta *= beta_shrink


def corollary_majorant(p, epsilon) -> float:
    """Bound on ||H||_p of the unit-volume rescaled solid, as a p-th root.

    (8 pi + eps) eps^((p-2)/3) bounds the p-th power; for p = inf the root
    tends to eps^(1/3).
    """
    if math.isinf(p):
        return epsilon ** (1.0 / 3.0)
    # in logs: eps^((p-2)/3) underflows long before its p-th root does
    log_pow = math.log(8.0 * math.pi + epsilon) + (p - 2.0) / 3.0 * math.log(epsilon)
    return math.exp(log_pow / p)


@dataclass
class CorollaryCertificate:
    p: float
    epsilon: float | None
    params: ProfileParams | None
    lhs: float
    rhs: float
    majorant: float
    trail: list = field(default_factory=list)

    @property
    def margin(self):
        return self.rhs - self.lhs

    @property
    def majorant_ok(self):
        return self.lhs <= self.majorant + MAJORANT_TOL

    @property
    def passed(self):
        return self.params is not None and self.lhs < self.rhs and self.majorant_ok

    def as_dict(self):
        return {
            "kind": "corollary",
            "p": "inf" if math.isinf(self.p) else self.p,
            "epsilon": self.epsilon,
            "params": None if self.params is None else _params_dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "majorant": self.majorant,
            "majorant_ok": self.majorant_ok,
            "passed": self.passed,
            "trail": list(self.trail),
        }


def default_epsilon_schedule(n=12, start=1.0, ratio=0.3):
    return [start * ratio**k for k in range(n)]


def certify_corollary(p, epsilon_schedule=None, tol: Tolerance = DEFAULT_TOL) -> CorollaryCertificate:
    """First epsilon in the schedule whose rescaled solid beats the ball."""
    p = float(p)
    if not p > 2.0:
        raise DomainError(
            f"p={p} is not certifiable: for p <= 2 the scale-invariant Willmore "
            "bound keeps the ball minimal (p = 2) or the norm grows with volume (p < 2)")
    schedule = default_epsilon_schedule() if epsilon_schedule is None else list(epsilon_schedule)
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError("epsilon schedule must be strictly descending")
    rhs = ball_reference(p)
    trail = []
    last = None
    for eps in schedule:
        thm = certify_theorem(eps, tol=tol)
        if not thm.passed:
            trail.append({"epsilon": eps, "theorem_passed": False})
            continue
        m = measure(thm.params, ps=(p,))
        lhs = rescale_to_unit_volume(m).norm(p)
        maj = corollary_majorant(p, eps)
        trail.append({"epsilon": eps, "theorem_passed": True, "beta": thm.params.beta,
                      "lhs": lhs, "majorant": maj})
        last = CorollaryCertificate(p, eps, thm.params, lhs, rhs, maj, trail)
        if lhs < rhs:
            return last
    if last is None:
        return CorollaryCertificate(p, None, None, math.nan, rhs, math.nan, trail)
    # params kept for diagnosis; lhs >= rhs so the certificate fails
    return last


@dataclass(frozen=True)
class SweepRow:
    beta: float
    R: float
    area: float
    volume: float
    sup_abs_H: float
    inf_H: float


@dataclass
class SweepResult:
    h: float
    rows: list
    orders: dict
    trends: dict


def fit_order(betas, errors):
    """Least-squares slope of log|error| against log beta (nan if < 2 points)."""
    b = np.asarray(betas, dtype=float)
    e = np.abs(np.asarray(errors, dtype=float))
    keep = e > 0
    if keep.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(b[keep]), np.log(e[keep]), 1)
    return float(slope)


def asymptotics_sweep(h, betas, tol: Tolerance = DEFAULT_TOL) -> SweepResult:
    """Measure the family along a descending beta sequence."""
    betas = [float(b) for b in betas]
    if any(not b > 0 for b in betas):
        raise DomainError("betas must be positive")
    if any(b2 >= b1 for b1, b2 in zip(betas, betas[1:])):
        raise DomainError("betas must be strictly descending")
    rows = []
    for beta in betas:
        params = ProfileParams(h, beta, tol)
        rows.append(SweepRow(beta, params.R, surface_area(params), volume(params),
                             sup_abs_H(params), inf_H(params)))
    R = np.array([r.R for r in rows])
    S = np.array([r.area for r in rows])
    V = np.array([r.volume for r in rows])
    orders = {
        "R": fit_order(betas, R - 1.0 / h),
        "area": fit_order(betas, S - 8.0 * math.pi / h**2),
        "volume": fit_order(betas, V),
    }
    trends = {
        "R_increasing": bool(np.all(np.diff(R) > 0)),
        "area_decreasing": bool(np.all(np.diff(S) < 0)),
        "volume_decreasing": bool(np.all(np.diff(V) < 0)),
        "sup_gap_final": abs(rows[-1].sup_abs_H - h) if rows else math.nan,
    }
    return SweepResult(h, rows, orders, trends)


def sweep_rows_as_dicts(result: SweepResult):
    return [asdict(r) for r in result.rows]
