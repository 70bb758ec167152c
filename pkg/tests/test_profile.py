"""Volumes, perimeters, profile of balls, and competitor bookkeeping."""

import io
import math

import numpy as np
import pytest

from hyperiso.density import make_density
from hyperiso.errors import (
    BracketError,
    DomainError,
    RangeError,
    VolumeMismatch,
)
from hyperiso.profile import (
    AnnulusUnion,
    CapSymmetricProfile,
    F_inverse,
    T_MAX,
    annuli_perimeter,
    annuli_volume,
    ball_perimeter,
    ball_radius,
    ball_volume,
    cap_perimeter,
    cap_volume,
    dump_profile_csv,
    g_kernel,
    match_annuli_volume,
    match_cap_volume,
    profile_I,
    profile_J,
    uniqueness_thresholds,
    verify_ball_minimality,
    volume_F,
)

ZERO = make_density([(0.0, 0.0)])
R03 = make_density([(0.0, 0.0), (0.3, 0.0), (0.9, 2.0)])
BUMP = make_density([(0.0, 0.0), (0.25, 0.0), (0.6, 1.0)])
POS = make_density([(0.0, 0.5)])


def test_unweighted_profile_closed_form():
    for v in (0.01, 0.5, 3.0, 20.0, 50.0):
        iv = profile_I(ZERO, v)
        assert abs(iv - math.sqrt(v * v + 4.0 * math.pi * v)) < 1e-10 * (1.0 + iv)


def test_volume_F_values():
    assert volume_F(ZERO, 0.0) == 0.0
    # unweighted cumulative integral is zeta - 2 in closed form
    assert abs(volume_F(ZERO, 0.5) - (2.0 / (1.0 - 0.25) - 2.0)) < 1e-12
    assert abs(volume_F(R03, 0.6) - 1.309579450887185) < 1e-12
    assert abs(volume_F(R03, 0.85) - 18.325290005836539) < 2e-11
    assert abs(volume_F(BUMP, 0.5) - 0.7182266766327932) < 1e-12
    assert abs(volume_F(POS, 0.5) - 0.97606774342516972) < 1e-12


def test_F_inverse_roundtrip():
    for spec in (ZERO, R03, POS):
        for s in (0.0, 0.1, 1.0, 17.0):
            t = F_inverse(spec, s)
            assert abs(volume_F(spec, t) - s) < 1e-11 * (1.0 + s)


def test_profile_values_from_reference():
    assert abs(ball_radius(R03, 3.0) - 0.43613767172125346) < 1e-12
    assert abs(profile_I(R03, 3.0) - 7.2810512311593777) < 1e-11
    assert abs(ball_radius(POS, 2.0) - 0.33405568851399197) < 1e-12
    assert abs(profile_I(POS, 2.0) - 6.6878247752331643) < 1e-11


def test_profile_consistency():
    assert profile_J(ZERO, 0.0) == 0.0
    assert profile_I(ZERO, 0.0) == 0.0
    v = 4.2
    r = ball_radius(R03, v)
    assert abs(ball_volume(R03, r) - v) < 1e-10
    assert abs(profile_I(R03, v) - ball_perimeter(R03, r)) < 1e-12


def test_low_volume_identity_below_threshold():
    R, v0 = uniqueness_thresholds(R03)
    assert R == 0.3
    assert abs(v0 - 1.2428278629585995) < 1e-12
    for v in np.linspace(0.05, v0, 7):
        iv = profile_I(R03, v)
        assert abs(iv * iv - (v * v + 4.0 * math.pi * v)) < 1e-9


def test_uniqueness_thresholds_sentinel():
    R, v0 = uniqueness_thresholds(ZERO)
    assert R == 1.0
    assert v0 == math.inf


def test_scaling_covariance():
    for scale in (0.25, 3.5):
        for v in (0.7, 5.0):
            lhs = profile_I(R03, scale * v, weight_scale=scale)
            rhs = scale * profile_I(R03, v)
            assert abs(lhs - rhs) < 1e-10 * (1.0 + rhs)


def test_range_errors():
    with pytest.raises(RangeError):
        volume_F(ZERO, 0.9995)
    with pytest.raises(RangeError):
        F_inverse(ZERO, 1e9)
    with pytest.raises(RangeError):
        profile_I(ZERO, 2.0 * math.pi * 1e9)
    with pytest.raises(DomainError):
        volume_F(ZERO, -0.1)
    with pytest.raises(DomainError):
        F_inverse(ZERO, -1.0)
    with pytest.raises(DomainError):
        profile_I(ZERO, 3.0, weight_scale=0.0)


def test_annuli_values():
    au = AnnulusUnion((0.5, 0.3, 0.2, 0.0))
    assert abs(annuli_volume(ZERO, au) - 3.4695611174260903) < 1e-12
    assert abs(annuli_perimeter(ZERO, au) - 15.138333830759608) < 1e-12
    v = annuli_volume(ZERO, au)
    assert abs(profile_I(ZERO, v) - 7.459064634275626) < 1e-11


def test_annuli_validation():
    with pytest.raises(DomainError):
        AnnulusUnion((0.5, 0.3, 0.2))
    with pytest.raises(DomainError):
        AnnulusUnion((0.3, 0.5))
    with pytest.raises(DomainError):
        AnnulusUnion((0.5, 0.5))
    with pytest.raises(DomainError):
        AnnulusUnion((1.2, 0.5))
    with pytest.raises(RangeError):
        annuli_volume(ZERO, AnnulusUnion((0.9999, 0.5)))


def test_cap_matches_annulus():
    au = AnnulusUnion((0.5, 0.2))
    cap = CapSymmetricProfile(((0.2, math.pi), (0.5, math.pi)))
    assert abs(cap_volume(ZERO, cap) - annuli_volume(ZERO, au)) < 1e-12
    assert abs(cap_volume(ZERO, cap) - 3.6651914291880921) < 1e-12
    assert abs(cap_perimeter(ZERO, cap) - annuli_perimeter(ZERO, au)) < 1e-12
    assert abs(cap_perimeter(ZERO, cap) - 10.995574287564276) < 1e-12


def test_cap_slope_case():
    cap = CapSymmetricProfile(((0.0, math.pi), (0.5, 0.0)))
    assert abs(cap_volume(ZERO, cap) - 1.2391985665336377) < 1e-12
    assert abs(cap_perimeter(ZERO, cap) - 4.4055083227888233) < 1e-11
    v = cap_volume(ZERO, cap)
    assert abs(profile_I(ZERO, v) - 4.1361626586902186) < 1e-11


def test_cap_empty_profile():
    cap = CapSymmetricProfile(((0.1, 0.0), (0.4, 0.0)))
    assert cap_volume(ZERO, cap) == 0.0
    assert cap_perimeter(ZERO, cap) == 0.0


def test_cap_validation():
    with pytest.raises(DomainError):
        CapSymmetricProfile(((0.1, 1.0),))
    with pytest.raises(DomainError):
        CapSymmetricProfile(((0.1, 1.0), (0.1, 0.5)))
    with pytest.raises(DomainError):
        CapSymmetricProfile(((0.1, -0.5), (0.3, 0.5)))
    with pytest.raises(DomainError):
        CapSymmetricProfile(((0.1, 3.5), (0.3, 0.5)))
    with pytest.raises(DomainError):
        CapSymmetricProfile(((0.1, 1.0), (1.0, 0.5)))


def test_match_annuli_volume():
    au = match_annuli_volume(R03, (0.5, 0.3, 0.2, 0.0), 3.0)
    assert abs(annuli_volume(R03, au) - 3.0) < 1e-9 * 4.0
    assert au.radii[1:] == (0.3, 0.2, 0.0)
    # the unweighted disc tops out near 2 * pi * 998.5 inside the radial cap
    with pytest.raises(BracketError):
        match_annuli_volume(ZERO, (0.5, 0.3), 1e7)


def test_match_cap_volume():
    cap = match_cap_volume(R03, ((0.1, 2.0), (0.4, 1.0), (0.6, 0.2)), 3.0)
    assert abs(cap_volume(R03, cap) - 3.0) < 1e-9 * 4.0
    angles = tuple(a for _, a in cap.samples)
    assert angles == (2.0, 1.0, 0.2)
    with pytest.raises(DomainError):
        match_cap_volume(R03, ((0.1, 0.0), (0.4, 0.0)), 1.0)
    with pytest.raises(BracketError):
        match_cap_volume(R03, ((0.1, 0.1), (0.12, 0.05)), 1e9)


def test_verify_ball_minimality():
    v = 3.0
    ball = AnnulusUnion((ball_radius(R03, v), 0.0))
    au = match_annuli_volume(R03, (0.5, 0.3, 0.2, 0.0), v)
    cap = match_cap_volume(R03, ((0.1, 2.0), (0.4, 1.0), (0.6, 0.2)), v)
    rep = verify_ball_minimality(R03, v, [ball, au, cap])
    assert rep.passed
    assert [c.verdict for c in rep.checks] == ["pass"] * 3
    assert abs(rep.checks[0].slack) < 1e-10
    assert rep.checks[1].slack > 0.0
    assert rep.checks[2].slack > 0.0
    assert rep.checks[0].name == "competitor[0]:annuli"
    assert rep.checks[2].name == "competitor[2]:cap"


def test_verify_ball_minimality_volume_mismatch():
    with pytest.raises(VolumeMismatch):
        verify_ball_minimality(R03, 3.0, [AnnulusUnion((0.2, 0.1))])


def test_alternating_sum_bound():
    # perimeter superadditivity of the ball profile along annulus unions,
    # expressed through the cumulative parameter
    rng = np.random.default_rng(42)
    for spec in (ZERO, R03):
        for _ in range(25):
            k = int(rng.integers(1, 4))
            s = np.sort(rng.uniform(0.0, 5.0, size=2 * k))[::-1]
            lhs = sum(profile_J(spec, float(x)) for x in s)
            alt = sum((-1) ** h * float(x) for h, x in enumerate(s))
            assert lhs - profile_J(spec, alt) >= -1e-10


def test_dump_profile_csv():
    out = io.StringIO()
    dump_profile_csv(out, R03, [0.5, 3.0])
    lines = out.getvalue().strip().split("\n")
    assert lines[0] == "v,r,I_v"
    assert len(lines) == 3
    row = lines[2].split(",")
    assert float(row[0]) == 3.0
    assert abs(float(row[1]) - 0.43613767172125346) < 1e-10
    assert abs(float(row[2]) - 7.2810512311593777) < 1e-10
    # 12 significant digits requested
    assert len(row[1].replace(".", "").lstrip("0")) >= 11


def test_g_kernel_matches_perimeter():
    t = 0.37
    assert abs(ball_perimeter(R03, t) - 2.0 * math.pi * g_kernel(R03, t)) < 1e-14
    assert T_MAX == 0.999
