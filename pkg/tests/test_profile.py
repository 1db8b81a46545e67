import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import catenoid
from catenoid import build_profile, embed, eval_at_arclength, make_spec, \
    max_axis_height
from catenoid.profile import safe_arclength_limit

from conftest import AXIS_HEIGHT_ORACLE


class TestMakeSpec:
    def test_axis_height_n3_matches_oracle(self):
        spec = make_spec(3, 1.0)
        assert spec.a == 1.0
        assert abs(spec.S - AXIS_HEIGHT_ORACLE[3]) < 1e-12

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_axis_height_oracle(self, n):
        spec = make_spec(n, 1.0)
        assert abs(spec.S - AXIS_HEIGHT_ORACLE[n]) < 1e-12

    def test_scaling_law(self):
        assert make_spec(3, 2.0).S == pytest.approx(2.0 * make_spec(3, 1.0).S,
                                                    rel=1e-13)

    def test_rejects_low_dimension(self):
        with pytest.raises(ValueError):
            make_spec(2, 1.0)

    def test_rejects_bad_waist(self):
        with pytest.raises(ValueError):
            make_spec(3, 0.0)
        with pytest.raises(ValueError):
            make_spec(3, -1.0)

    @given(n=st.integers(3, 7),
           log_phi0=st.floats(-2.0, 2.0, allow_nan=False))
    @settings(max_examples=25, deadline=None)
    def test_first_integral_constant(self, n, log_phi0):
        phi0 = 10.0 ** log_phi0
        spec = make_spec(n, phi0)
        assert spec.a * phi0 ** (2 * (n - 1)) == pytest.approx(1.0, rel=1e-12)
        assert 0.0 < spec.S < math.inf


class TestMaxAxisHeight:
    def test_strategies_cross_checked(self):
        spec = make_spec(4, 1.0)
        val = max_axis_height(spec, tol=1e-8)
        assert abs(val - AXIS_HEIGHT_ORACLE[4]) < 1e-8

    def test_half_waist_scaling(self):
        spec = make_spec(3, 0.5)
        assert max_axis_height(spec) == pytest.approx(
            0.5 * AXIS_HEIGHT_ORACLE[3], rel=1e-12)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            max_axis_height(make_spec(3, 1.0), tol=0.0)


class TestBuildProfile:
    def test_waist_point(self, spec3, profile3):
        p = eval_at_arclength(profile3, 0.0)
        assert p.phi == 1.0
        assert p.dphi_ds == 0.0
        assert p.d2phi_ds2 == pytest.approx(2.0, rel=1e-14)

    def test_first_integral_on_grid(self, spec3, profile3):
        lhs = profile3.dphi_ds ** 2
        rhs = spec3.a * profile3.phi ** 4 - 1.0
        assert np.max(np.abs(lhs - rhs) / (1.0 + lhs)) < 1e-9

    def test_profile_equation_on_grid(self, spec3, profile3):
        resid = profile3.d2phi_ds2 * profile3.phi \
            - 2.0 * (1.0 + profile3.dphi_ds ** 2)
        assert np.max(np.abs(resid) / (1.0 + profile3.dphi_ds ** 2)) < 1e-9

    def test_grid_increasing_from_zero(self, profile3):
        assert profile3.r[0] == 0.0
        assert np.all(np.diff(profile3.r) > 0)

    def test_asymptotically_conical(self, spec3):
        profile = build_profile(spec3, r_max=100.0, num_points=501)
        p = eval_at_arclength(profile, 100.0)
        assert abs(p.phi / 100.0 - 1.0) < 0.02

    def test_axis_coordinate_bounded_by_S(self, spec3):
        profile = build_profile(spec3, r_max=200.0, num_points=401)
        p = eval_at_arclength(profile, 200.0)
        assert p.s < spec3.S
        assert spec3.S - p.s < 2e-2

    def test_overflow_guard(self, spec3):
        with pytest.raises(ValueError, match="safe r_max"):
            build_profile(spec3, r_max=1e80)
        assert safe_arclength_limit(3, 1.0) > 1e70

    def test_rejects_bad_args(self, spec3):
        with pytest.raises(ValueError):
            build_profile(spec3, r_max=-1.0)
        with pytest.raises(ValueError):
            build_profile(spec3, r_max=1.0, tol=0.0)

    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_scaling_covariance(self, c):
        base = build_profile(make_spec(3, 1.0), r_max=6.0, num_points=301)
        scaled = build_profile(make_spec(3, c), r_max=6.0 * c, num_points=301)
        for r in (0.5, 1.5, 4.0):
            p = eval_at_arclength(base, r)
            q = eval_at_arclength(scaled, c * r)
            assert q.phi == pytest.approx(c * p.phi, rel=1e-11)
            assert q.s == pytest.approx(c * p.s, rel=1e-11)
            assert q.dphi_ds == pytest.approx(p.dphi_ds, rel=1e-11)


class TestEvalAtArclength:
    def test_mirror_symmetry_bit_identical(self, profile3):
        for r in (0.25, 1.0, 7.5):
            pos = eval_at_arclength(profile3, r)
            neg = eval_at_arclength(profile3, -r)
            assert pos.phi == neg.phi
            assert pos.s == -neg.s
            assert pos.dphi_ds == -neg.dphi_ds
            assert pos.d2phi_ds2 == neg.d2phi_ds2

    def test_out_of_range(self, profile3):
        with pytest.raises(ValueError):
            eval_at_arclength(profile3, profile3.r_max * 1.5)

    @given(r=st.floats(-12.0, 12.0, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_invariants_anywhere(self, profile3, r):
        p = eval_at_arclength(profile3, r)
        one = 1.0 + p.dphi_ds ** 2
        assert p.phi >= 1.0
        assert abs(p.dphi_ds ** 2 - (p.phi ** 4 - 1.0)) < 1e-8 * one
        assert abs(p.d2phi_ds2 * p.phi - 2.0 * one) < 1e-8 * one
        assert math.copysign(1.0, p.s) == math.copysign(1.0, r) or p.s == 0.0

    def test_midpoint_invariants_within_tol(self, profile3):
        h = profile3.grid_step
        for i in (10, 500, 1800):
            r = profile3.r[i] + 0.5 * h
            p = eval_at_arclength(profile3, r)
            resid = abs(p.dphi_ds ** 2 - (p.phi ** 4 - 1.0))
            assert resid < 10.0 * profile3.tol * (1.0 + p.dphi_ds ** 2)


class TestEmbed:
    def test_waist_axes(self, spec3, profile3):
        p = eval_at_arclength(profile3, 0.0)
        position, normal = embed(spec3, p, np.array([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(position, [1.0, 0.0, 0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(normal, [1.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_normal_unit_and_orthogonal(self, spec3, profile3):
        rng = np.random.default_rng(7)
        for r in (-3.0, 0.5, 2.0):
            p = eval_at_arclength(profile3, r)
            omega = rng.standard_normal(3)
            omega /= np.linalg.norm(omega)
            position, normal = embed(spec3, p, omega)
            assert abs(np.linalg.norm(normal) - 1.0) < 1e-12
            # tangent along the profile: d(position)/ds = (phi' omega, 1)
            tangent_s = np.concatenate([p.dphi_ds * omega, [1.0]])
            assert abs(normal @ tangent_s) < 1e-10
            # sphere tangent directions
            for v in np.eye(3) - np.outer(omega, omega):
                assert abs(normal @ np.concatenate([v, [0.0]])) < 1e-10

    def test_finite_difference_normal(self, spec3, profile3):
        omega = np.array([1.0, 0.0, 0.0])
        h = 1e-4
        r = 1.25
        pts = [eval_at_arclength(profile3, r + dr) for dr in (-h, 0.0, h)]
        pos = [embed(spec3, p, omega)[0] for p in pts]
        tangent_r = (pos[2] - pos[0]) / (2 * h)
        tangents = [tangent_r]
        for v in ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]):
            tangents.append(np.concatenate([pts[1].phi * np.asarray(v), [0.0]]))
        # unit kernel vector of the tangent matrix
        _, _, vt = np.linalg.svd(np.stack(tangents))
        fd_normal = vt[-1]
        normal = embed(spec3, pts[1], omega)[1]
        if fd_normal @ normal < 0:
            fd_normal = -fd_normal
        np.testing.assert_allclose(fd_normal, normal, atol=1e-6)

    def test_rejects_non_unit_omega(self, spec3, profile3):
        p = eval_at_arclength(profile3, 1.0)
        with pytest.raises(ValueError):
            embed(spec3, p, np.array([1.0, 1.0, 0.0]))
        with pytest.raises(ValueError):
            embed(spec3, p, np.array([1.0, 0.0]))
