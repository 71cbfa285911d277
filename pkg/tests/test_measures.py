import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nodoid_shell.measures import (
    MeasureSet,
    ball_reference,
    lp_norm_H,
    measure,
    rescale_to_unit_volume,
    surface_area,
    volume,
    willmore,
)
from nodoid_shell.profile import ProfileParams, semicircle_profile
from nodoid_shell.quadrature import DomainError


@pytest.mark.parametrize("r", [0.3, 1.0, 7.5])
def test_sphere_fixture(r):
    cp = semicircle_profile(r)
    assert surface_area(cp) == pytest.approx(4 * math.pi * r**2, rel=1e-12)
    assert volume(cp) == pytest.approx(4 * math.pi * r**3 / 3, rel=1e-12)
    assert willmore(cp) == pytest.approx(4 * math.pi, rel=1e-12)
    for p in (1.0, 2.0, 3.5):
        expect = (4 * math.pi * r**2) ** (1 / p) / r
        assert lp_norm_H(cp, p) == pytest.approx(expect, rel=1e-12)


def test_ball_reference():
    assert ball_reference(2) == pytest.approx(math.sqrt(4 * math.pi), rel=1e-15)
    r = (3 / (4 * math.pi)) ** (1 / 3)
    cp = semicircle_profile(r)
    for p in (2.5, 3.0, 10.0):
        assert ball_reference(p) == pytest.approx(lp_norm_H(cp, p), rel=1e-12)
    assert ball_reference(math.inf) == pytest.approx(1 / r, rel=1e-15)
    with pytest.raises(DomainError):
        ball_reference(0.0)


def test_holder_chain():
    p = ProfileParams(1.0, 0.1)
    S = surface_area(p)
    avg = [lp_norm_H(p, q) / S ** (1 / q) for q in (1.0, 2.0, 3.0, 6.0)]
    assert all(x <= y * (1 + 1e-12) for x, y in zip(avg, avg[1:]))
    assert avg[-1] <= lp_norm_H(p, math.inf) * (1 + 1e-12)
    assert lp_norm_H(p, 2.0) ** 2 == pytest.approx(willmore(p), rel=1e-12)


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_scale_laws(lam):
    p = ProfileParams(1.0, 0.1)
    q = p.scaled(lam)
    assert surface_area(q) == pytest.approx(lam**2 * surface_area(p), rel=1e-10)
    assert volume(q) == pytest.approx(lam**3 * volume(p), rel=1e-10)
    assert willmore(q) == pytest.approx(willmore(p), rel=1e-10)
    for r in (3.0, 5.0):
        assert lp_norm_H(q, r) == pytest.approx(lam ** (2 / r - 1) * lp_norm_H(p, r), rel=1e-10)
    assert lp_norm_H(q, math.inf) == pytest.approx(lp_norm_H(p, math.inf) / lam, rel=1e-10)


@settings(max_examples=15, deadline=None)
@given(h=st.floats(0.3, 3.0), beta=st.floats(1e-4, 1.0))
def test_rescale_matches_direct_dilation(h, beta):
    p = ProfileParams(h, beta)
    m = measure(p, ps=(3.0, math.inf))
    u = rescale_to_unit_volume(m)
    q = p.scaled(m.volume ** (-1 / 3))
    assert u.volume == 1.0
    assert volume(q) == pytest.approx(1.0, rel=1e-10)
    assert u.area == pytest.approx(surface_area(q), rel=1e-10)
    assert u.norm(3) == pytest.approx(lp_norm_H(q, 3.0), rel=1e-9)
    assert u.norm(math.inf) == pytest.approx(lp_norm_H(q, math.inf), rel=1e-9)


def test_area_and_volume_limits():
    # S -> 8 pi and V -> 0 as beta -> 0 at h = 1
    S = [surface_area(ProfileParams(1.0, b)) for b in (1e-2, 1e-4, 1e-6)]
    V = [volume(ProfileParams(1.0, b)) for b in (1e-2, 1e-4, 1e-6)]
    assert all(s > 8 * math.pi for s in S)
    assert np.all(np.diff(S) < 0) and np.all(np.diff(V) < 0)
    assert abs(S[-1] - 8 * math.pi) < 0.05
    assert V[-1] < 1e-4


def test_measure_set():
    m = measure(ProfileParams(1.0, 0.5))
    assert set(m.lp_norms) == {"2.0", "3.0", "inf"}
    assert m.norm(2) == m.lp_norms["2.0"]
    d = m.as_dict()
    assert d["area"] == m.area and d["lp_norms"]["inf"] == m.norm(math.inf)
    with pytest.raises(DomainError):
        MeasureSet(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        lp_norm_H(ProfileParams(1.0, 0.5), -1.0)


def test_tighter_tolerance_is_stable():
    p = ProfileParams(1.0, 1e-3)
    loose = measure(p)
    from nodoid_shell.quadrature import Tolerance
    tight = measure(ProfileParams(1.0, 1e-3, Tolerance(1e-13, 1e-13)))
    assert tight.area == pytest.approx(loose.area, rel=1e-11)
    assert tight.volume == pytest.approx(loose.volume, rel=1e-10)
    assert tight.norm(3) == pytest.approx(loose.norm(3), rel=1e-10)


def test_large_p_tends_to_sup():
    p = ProfileParams(1.0, 0.5)
    sup = lp_norm_H(p, math.inf)
    big = lp_norm_H(p, 2000.0)
    assert math.isfinite(big)
    assert big == pytest.approx(sup, rel=5e-3)
    sph = semicircle_profile(0.01)
    assert lp_norm_H(sph, 500.0) == pytest.approx((4 * math.pi * 1e-4) ** (1 / 500) * 100, rel=1e-12)
