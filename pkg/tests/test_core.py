from math import atan, cos, degrees, pi, sin, sqrt

import numpy as np
import pytest

import oracles
from conftest import random_designs
from slideocam import DesignParams
from slideocam.core import (ETA_MIN, Frame, PlanePoint, cam_profile_point,
                            cam_profile_xy, contact_distance, curvature_numerator,
                            curvature_parametric, curvature_pitch, displacement,
                            displacement_derivatives, is_sign_constant_curvature,
                            pitch_derivatives, pitch_point, pitch_radius, pitch_xy,
                            pressure_angle, profile_coefficients, tan_pressure_angle)
from slideocam.errors import (DegenerateSpeedError, DomainError, FrameMismatchError,
                              SingularityError, ValidationError)


def P(**kw):
    base = dict(p=50.0, n=1, m=2, e=9.0, a4=4.0, b=4.25)
    base.update(kw)
    return DesignParams(**base)


class TestDesignParams:
    def test_eta(self):
        assert P(e=9.0).eta == pytest.approx(0.18)

    @pytest.mark.parametrize("field,value", [
        ("p", -1.0), ("p", 0.0), ("n", 0), ("m", 0), ("e", 0.0), ("a4", -2.0), ("b", -0.1),
        ("n", 1.5), ("p", float("nan")), ("n", True),
    ])
    def test_rejects(self, field, value):
        with pytest.raises(ValidationError) as info:
            P(**{field: value})
        assert info.value.field == field

    def test_integral_float_accepted(self):
        assert P(n=2.0).n == 2 and isinstance(P(n=2.0).n, int)

    def test_from_eta(self):
        d = DesignParams.from_eta(p=50, n=1, m=2, eta=0.4, a4=10)
        assert d.e == pytest.approx(20.0)

    def test_beta(self):
        assert P(n=1, m=2).beta == pytest.approx(pi)
        assert P(n=2, m=2).beta == pytest.approx(pi / 2)


class TestDisplacement:
    def test_home(self):
        assert displacement(P(), 0.0) == -25.0

    def test_full_turn(self):
        assert displacement(P(), 2 * pi) == pytest.approx(25.0, abs=1e-12)

    def test_zero_crossing(self):
        assert displacement(P(n=4), pi / 4) == pytest.approx(0.0, abs=1e-12)

    def test_periodic_advance(self, rng):
        psi = rng.uniform(-10, 10, 1000)
        d = P()
        adv = displacement(d, psi + 2 * pi) - displacement(d, psi)
        np.testing.assert_allclose(adv, d.p, rtol=0, atol=1e-12)

    def test_derivatives(self):
        assert displacement_derivatives(P()) == (pytest.approx(7.957747154594767), 0.0)
        assert displacement_derivatives(P(p=2 * pi)) == (pytest.approx(1.0), 0.0)
        assert displacement_derivatives(P(p=100))[0] == 2 * displacement_derivatives(P())[0]


class TestProfileCoefficients:
    def test_at_mid_lobe(self):
        c = profile_coefficients(P(), pi)
        assert c.delta == 0.0
        assert c.b2 == pytest.approx(50 / (2 * pi))
        assert c.b3 == pytest.approx(9 - 50 / (2 * pi))
        assert c.b3 == pytest.approx(1.0422528454, rel=1e-9)

    def test_unreduced_form_at_zero(self):
        d = P()
        s, ds = oracles.motion(d.p, d.n, 0.0)
        c = profile_coefficients(d, 0.0)
        assert c.b3 == pytest.approx(sqrt((d.e - ds) ** 2 + s ** 2), rel=1e-14)
        assert c.delta == pytest.approx(atan(s / (d.e - ds)), rel=1e-14)

    def test_two_lobes_mid(self):
        assert profile_coefficients(P(n=2, e=16), pi / 2).delta == 0.0

    def test_singularity(self):
        with pytest.raises(SingularityError):
            profile_coefficients(P(e=50 * ETA_MIN), 0.3)
        with pytest.raises(SingularityError):
            profile_coefficients(P(e=50 * (ETA_MIN + 5e-10)), 0.3)

    def test_below_singularity_is_domain_error(self):
        with pytest.raises(DomainError):
            profile_coefficients(P(e=5.0), 0.3)


class TestProfileAndPitch:
    def test_mid_lobe_point(self):
        c = cam_profile_point(P(), pi)
        assert (c.u, c.v) == (pytest.approx(-5.0, abs=1e-12), pytest.approx(0.0, abs=1e-12))
        assert c.frame is Frame.CAM

    def test_matches_unreduced_oracle(self, rng):
        for d in random_designs(rng, 5):
            for q in rng.uniform(-1, 2 * pi, 20):
                ref = oracles.contact_point(d.p, d.n, d.e, d.a4, q)
                np.testing.assert_allclose(cam_profile_xy(d, q), ref, rtol=0, atol=1e-10 * d.p)

    def test_contact_distance_large_roller(self):
        d = P(a4=10.0)
        c = cam_profile_point(d, 3 * pi / 2)
        o2 = pitch_point(d, 3 * pi / 2)
        assert c.distance(o2) == pytest.approx(10.0, abs=1e-12)

    def test_pitch_home(self):
        o2 = pitch_point(P(), 0.0)
        assert (o2.u, o2.v) == (9.0, -25.0)

    def test_pitch_half_turn(self):
        o2 = pitch_point(P(), pi)
        assert o2.u == pytest.approx(-9.0, abs=1e-12)
        assert o2.v == pytest.approx(0.0, abs=1e-12)

    def test_pitch_two_lobes(self):
        o2 = pitch_point(P(n=2), pi / 2)
        assert o2.u == pytest.approx(0.0, abs=1e-12)
        assert o2.v == pytest.approx(-9.0, abs=1e-12)

    def test_pitch_matches_oracle_and_norm(self, rng):
        d = P(n=3, e=20.0)
        psi = rng.uniform(-4, 8, 200)
        xy = pitch_xy(d, psi)
        ref = np.array([oracles.pitch_xy(d.p, d.n, d.e, q) for q in psi])
        np.testing.assert_allclose(xy, ref, atol=1e-12)
        np.testing.assert_allclose(np.linalg.norm(xy, axis=1), pitch_radius(d, psi), rtol=1e-14)

    def test_contact_distance_identity_vectorised(self, rng):
        for d in random_designs(rng, 10):
            psi = rng.uniform(-pi / d.n, 3 * pi / d.n, 500)
            np.testing.assert_allclose(contact_distance(d, psi), d.a4, rtol=0, atol=1e-9 * d.p)

    def test_strict_domain(self):
        d = P()
        with pytest.raises(DomainError):
            cam_profile_point(d, -1.5, strict=True)
        assert cam_profile_point(d, pi, strict=True).frame is Frame.CAM


class TestPlanePoint:
    def test_frame_mismatch(self):
        a = PlanePoint(1.0, 2.0, Frame.CAM)
        b = PlanePoint(1.0, 2.0, Frame.FIXED)
        with pytest.raises(FrameMismatchError):
            a - b

    def test_rotation_roundtrip(self):
        # roller centre is (e, s) in the fixed frame at every psi
        d = P()
        for q in (0.0, 0.7, pi, 5.0):
            fixed = pitch_point(d, q).to_fixed(q)
            assert fixed.frame is Frame.FIXED
            assert fixed.u == pytest.approx(d.e, abs=1e-12)
            assert fixed.v == pytest.approx(displacement(d, q), abs=1e-12)
            back = fixed.to_cam(q)
            assert back.distance(pitch_point(d, q)) < 1e-12


class TestPressureAngle:
    def test_home_value(self):
        d = P()
        t = tan_pressure_angle(d, 0.0, "motion")
        assert t == pytest.approx(oracles.tan_pressure_motion(50, 1, 9, 0.0), rel=1e-14)
        assert t == pytest.approx(0.041690, abs=5e-7)
        assert degrees(pressure_angle(d, 0.0)) == pytest.approx(2.38729, abs=1e-5)

    def test_antisymmetric(self):
        d = P()
        assert degrees(pressure_angle(d, 2 * pi)) == pytest.approx(-2.38729, abs=1e-5)
        t = np.linspace(1e-3, 3, 50)
        np.testing.assert_allclose(tan_pressure_angle(d, pi + t), -tan_pressure_angle(d, pi - t),
                                   rtol=1e-12)

    def test_forms_agree(self, rng):
        for d in random_designs(rng, 5):
            psi = rng.uniform(-3, 9, 1000)
            a = tan_pressure_angle(d, psi, "motion")
            b = tan_pressure_angle(d, psi, "lobe")
            np.testing.assert_allclose(a, b, rtol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_pole_convention(self, n):
        d = P(n=n)
        assert pressure_angle(d, pi / n) == -pi / 2
        right = pressure_angle(d, pi / n + 1e-9)
        assert right < 0 and abs(right) > radians_(89.99)

    def test_bad_form(self):
        with pytest.raises(ValueError):
            tan_pressure_angle(P(), 0.0, "other")


def radians_(deg):
    return deg * pi / 180


class TestCurvature:
    @pytest.mark.parametrize("R", [1.0, 7.5, 30.0])
    def test_circle(self, R):
        k = curvature_parametric(lambda t: R * np.cos(t), lambda t: R * np.sin(t), 0.4)
        assert abs(k) == pytest.approx(1 / R, rel=1e-7)

    def test_line(self):
        assert curvature_parametric(lambda t: t, lambda t: 0.0 * t, 0.3) == pytest.approx(0.0, abs=1e-9)

    def test_cusp(self):
        with pytest.raises(DegenerateSpeedError):
            curvature_parametric(lambda t: t ** 3, lambda t: t ** 2, 0.0)

    def test_analytic_derivatives(self):
        d = P(e=20.0)
        derivs = [lambda t, i=i: pitch_derivatives(d, t)[i] for i in range(4)]
        for q in (0.3, pi, 4.0):
            k = curvature_parametric(None, None, q, derivatives=derivs)
            assert k == pytest.approx(curvature_pitch(d, q), rel=1e-12)

    @pytest.mark.parametrize("n,e", [(1, 20.0), (2, 20.0), (3, 30.0), (1, 9.0)])
    def test_closed_form_vs_finite_differences(self, n, e):
        d = P(n=n, e=e)
        u = lambda t: pitch_xy(d, t)[..., 0]
        v = lambda t: pitch_xy(d, t)[..., 1]
        for q in (pi / n, 0.3, 1.0, 2 * pi / n + 0.4):
            assert curvature_parametric(u, v, q) == pytest.approx(curvature_pitch(d, q), rel=1e-6)

    def test_zero_at_convexity_bound(self):
        d = P(e=50 / pi)
        assert curvature_pitch(d, pi) == pytest.approx(0.0, abs=1e-15)

    def test_sign_change_inside_convexity_gap(self):
        d = P(e=9.0)
        psi = np.linspace(0, 2 * pi, 10_001)
        num = curvature_numerator(d, psi)
        assert num.min() < 0 < num.max()
        # locate a root by bisection between the mid-lobe and the lobe end
        lo, hi = pi, 2 * pi
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            lo, hi = (lo, mid) if curvature_numerator(d, mid) > 0 else (mid, hi)
        assert abs(curvature_pitch(d, lo)) < 1e-9
        assert not is_sign_constant_curvature(d)

    def test_sign_constant_above_bound(self):
        d = P(e=20.0)
        k = curvature_pitch(d, np.linspace(0, 2 * pi, 10_001))
        assert np.all(k > 0)
        assert is_sign_constant_curvature(d)

    @pytest.mark.parametrize("eta", [0.17, 0.2, 0.25, 0.3, 0.318, 0.319, 0.4, 0.8, 2.0])
    def test_sign_constancy_iff_bracket(self, eta):
        d = P(e=50 * eta)
        psi = np.linspace(0, 2 * pi, 10_001)
        num = curvature_numerator(d, psi)
        constant = bool(np.all(num >= 0) or np.all(num <= 0))
        assert constant == is_sign_constant_curvature(d)
