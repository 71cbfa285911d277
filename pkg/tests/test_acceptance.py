"""Acceptance gate: ten criteria at their stated tolerances.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.
"""
import json
import math
import time

import numpy as np
import pytest

from nodoid_shell.certify import asymptotics_sweep, fit_order
from nodoid_shell.cli import main
from nodoid_shell.curvature import curvature_arrays
from nodoid_shell.measures import ball_reference, surface_area, volume, willmore
from nodoid_shell.mesh import (
    discrete_mean_curvature,
    discrete_measures,
    euler_characteristic,
    is_watertight,
    tessellate,
)
from nodoid_shell.profile import ArcId, ProfileParams, build_closed_profile, semicircle_profile

from conftest import GRID, record


def _run_json(tmp_path, argv, name):
    out = tmp_path / name
    start = time.perf_counter()
    code = main(argv + ["--json", str(out)])
    elapsed = time.perf_counter() - start
    return code, json.loads(out.read_text()) if out.exists() else None, elapsed


@pytest.mark.parametrize("eps", [0.1, 1.0, 0.01])
def test_c01_theorem(tmp_path, eps):
    code, report, elapsed = _run_json(tmp_path, ["theorem", "--epsilon", repr(eps)], "t.json")
    cert = report["certificate"]
    ok = (code == 0 and cert["passed"]
          and cert["sup_abs_H"] <= 1 + 1e-9
          and abs(cert["area"] - 8 * math.pi) <= eps
          and cert["volume"] <= eps
          and elapsed < 10.0)
    record(1, ok, f"eps={eps:g} beta={cert['params']['beta']:.3g} sup|H|={cert['sup_abs_H']:.12f} "
                  f"|S-8pi|={cert['area_gap']:.3g} V={cert['volume']:.3g} t={elapsed:.2f}s")
    assert ok


def test_c02_nodoid_cmc():
    worst = 0.0
    for h, beta in GRID:
        cp = build_closed_profile(ProfileParams(h, beta))
        arc = cp.arc(ArcId.GAMMA1)
        t = np.linspace(arc.t0, arc.t1, 10_000)
        H = curvature_arrays(cp, ArcId.GAMMA1, t)[3]
        worst = max(worst, float(np.max(np.abs(H - h))))
    ok = worst <= 1e-9
    record(2, ok, f"max |H - h| on gamma1 over grid = {worst:.3e}")
    assert ok


def test_c03_bands():
    failures = []
    for h, beta in GRID:
        p = ProfileParams(h, beta)
        cp = build_closed_profile(p)
        sb = math.sqrt(beta)
        samples = {}
        for aid, _ in ((a.id, d) for a, d in cp.material):
            arc = cp.arc(aid)
            samples[aid] = curvature_arrays(cp, aid, np.linspace(arc.t0, arc.t1, 4001))[3]
        H2, H3 = samples[ArcId.GAMMA2], samples[ArcId.GAMMA3]
        if not (np.all(H2 > 0) and H2.max() <= h * (1 - sb / (4 + 2 * sb)) + 1e-9):
            failures.append(("gamma2", h, beta))
        lo3 = -(1 / p.R) * (1 - sb / (4 * h * p.R + 2 * sb)) - 1e-9
        if not (np.all(H3 < 0) and H3.min() >= lo3):
            failures.append(("gamma3", h, beta))
        for flat in (ArcId.GAMMA4, ArcId.GAMMA5):
            if np.abs(samples[flat]).max() > 1e-12:
                failures.append((flat.value, h, beta))
        allH = np.concatenate(list(samples.values()))
        if allH.min() < -1 / p.R - 1e-9 or allH.max() > h + 1e-9:
            failures.append(("global", h, beta))
    ok = not failures
    record(3, ok, f"{len(GRID)} parameter pairs, violations: {failures or 'none'}")
    assert ok


def test_c04_limits():
    betas = [10.0**-k for k in range(1, 7)]
    res = asymptotics_sweep(1.0, betas)
    last = res.rows[-1]
    dR, dS, V = abs(last.R - 1), abs(last.area - 8 * math.pi), last.volume
    dH = abs(last.sup_abs_H - 1)
    trends = res.trends
    ok = (trends["R_increasing"] and trends["area_decreasing"] and trends["volume_decreasing"]
          and dR <= 1e-2 and dS <= 5e-2 and V <= 5e-2 and dH <= 1e-6)
    record(4, ok, f"beta=1e-6: |R-1|={dR:.3e} |S-8pi|={dS:.3e} V={V:.3e} |sup|H|-1|={dH:.3e}; "
                  f"orders R={res.orders['R']:.3f} S={res.orders['area']:.3f} V={res.orders['volume']:.3f}")
    assert ok


def test_c05_corollary(tmp_path):
    lines, ok = [], True
    for p in ("3", "inf"):
        code, report, _ = _run_json(tmp_path, ["corollary", "--p", p], f"c{p}.json")
        cert = report["certificate"]
        pf, eps = float(p), cert["epsilon"]
        beats = cert["lhs"] < cert["rhs"] and cert["rhs"] == pytest.approx(ball_reference(pf))
        root_ok = cert["lhs"] <= cert["majorant"] + 1e-6
        power_ok = math.isinf(pf) or (
            cert["lhs"] ** pf <= (8 * math.pi + eps) * eps ** ((pf - 2) / 3) + 1e-6)
        ok &= code == 0 and cert["passed"] and beats and root_ok and power_ok
        lines.append(f"p={p}: eps={eps:g} |H|_p={cert['lhs']:.6f} ball={cert['rhs']:.6f} "
                     f"majorant={cert['majorant']:.6f}")
    refused = main(["corollary", "--p", "2"])
    ok &= refused == 2
    record(5, ok, "; ".join(lines) + f"; p=2 exit {refused}")
    assert ok


def test_c06_sphere():
    worst = 0.0
    for r in (0.25, 1.0, 3.0):
        cp = semicircle_profile(r)
        worst = max(worst, abs(surface_area(cp) / (4 * math.pi * r**2) - 1),
                    abs(volume(cp) / (4 * math.pi * r**3 / 3) - 1))
    ball = abs(ball_reference(2) - math.sqrt(4 * math.pi))
    ok = worst <= 1e-9 and ball <= 4 * np.finfo(float).eps * math.sqrt(4 * math.pi)
    record(6, ok, f"max relative error {worst:.2e}; |ball_reference(2) - sqrt(4pi)| = {ball:.1e}")
    assert ok


def test_c07_junctions():
    pos = ang = 0.0
    for h, beta in GRID:
        for j in build_closed_profile(ProfileParams(h, beta)).junctions:
            pos, ang = max(pos, j.position_gap), max(ang, j.tangent_angle_gap)
    ok = pos <= 1e-10 and ang <= 1e-10
    record(7, ok, f"max position gap {pos:.2e}, max tangent-line angle gap {ang:.2e}")
    assert ok


def test_c08_willmore_invariance():
    worst = 0.0
    for beta in (1e-3, 0.5):
        p = ProfileParams(1.0, beta)
        w0 = willmore(p)
        for lam in (0.5, 2.0, 10.0):
            worst = max(worst, abs(willmore(p.scaled(lam)) / w0 - 1))
    ok = worst <= 1e-10
    record(8, ok, f"max relative change under dilation {worst:.2e}")
    assert ok


@pytest.fixture(scope="module")
def mesh_ladder():
    p = ProfileParams(1.0, 0.5)
    return p, {n: tessellate(p, n, n) for n in (64, 128, 256, 512)}


def test_c09_mesh(mesh_ladder):
    p, meshes = mesh_ladder
    S, V = surface_area(p), volume(p)
    ns = np.array(sorted(meshes))
    ea, ev = [], []
    for n in ns:
        a, v = discrete_measures(meshes[n])
        ea.append(abs(a - S) / S)
        ev.append(abs(v - V) / V)
    oa, ov = fit_order(1.0 / ns, ea), fit_order(1.0 / ns, ev)
    fine = meshes[512]
    Hd, flagged = discrete_mean_curvature(fine)
    keep = ~flagged & np.isfinite(fine.vertex_H) & (np.abs(fine.vertex_H) > 1e-12)
    med = float(np.median(np.abs(Hd[keep] - fine.vertex_H[keep]) / np.abs(fine.vertex_H[keep])))
    sphere = tessellate(semicircle_profile(1.0), 64, 64)
    closed = all(is_watertight(m) and euler_characteristic(m) == 2
                 for m in [*meshes.values(), sphere])
    ok = (1.8 <= oa <= 2.2 and 1.8 <= ov <= 2.2 and ea[-1] <= 1e-3 and ev[-1] <= 1e-3
          and med <= 0.02 and closed)
    record(9, ok, f"order area={oa:.3f} volume={ov:.3f}; 512x512 rel err area={ea[-1]:.2e} "
                  f"volume={ev[-1]:.2e}; median H err={med:.2e}; watertight chi=2: {closed}")
    assert ok


def test_c10_determinism(tmp_path):
    runs = [
        ["build", "--h", "1", "--beta", "0.1", "--json", str(tmp_path / "b.json"),
         "--profile-csv", str(tmp_path / "p.csv"), "--curvature-csv", str(tmp_path / "k.csv"),
         "--mesh-out", str(tmp_path / "m.stl"), "--format", "stl", "--n-profile", "64"],
        ["theorem", "--epsilon", "0.1", "--json", str(tmp_path / "t.json")],
        ["corollary", "--p", "3", "--json", str(tmp_path / "c.json")],
        ["sweep", "--steps", "4", "--csv", str(tmp_path / "s.csv")],
    ]
    names = ["b.json", "p.csv", "k.csv", "m.stl", "t.json", "c.json", "s.csv"]

    def snapshot():
        for argv in runs:
            assert main(argv) == 0
        return {n: (tmp_path / n).read_bytes() for n in names}

    first, second = snapshot(), snapshot()
    differ = [n for n in names if first[n] != second[n]]
    ok = not differ
    record(10, ok, f"{len(names)} output files compared, differing: {differ or 'none'}")
    assert ok
