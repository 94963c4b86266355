import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodrive.controller import (
    STEER_LIMIT,
    BlendedCommand,
    ControllerCommand,
    ControllerConfig,
    RawUserInput,
    SafetyBoundConfig,
    UserCommand,
    VehicleSnapshot,
    alpha_input,
    arc_length_rate,
    assist_step,
    blend,
    cap_area,
    controller_command,
    evaluate_monitors,
    gamma_input,
    incircle_radius,
    projection_angle,
    rolling_rate,
)
from geodrive.geometry import ArcLengthInputs

# Independent oracles.  The incircle radius of an isosceles triangle with
# equal legs R/cos(u) and base 2R tan(u) simplifies symbolically to
# R sin(u)/(1 + sin(u)); the projection angle of the under-cap area
# simplifies to a closed form that does not contain the wheel radius.


def oracle_incircle(angle: float, cfg: ControllerConfig) -> float:
    s = math.sin(abs(angle))
    return cfg.R_v / cfg.mu_r + cfg.R_v * s / (1.0 + s)


def oracle_zeta(dpsi: float) -> float:
    u = abs(dpsi)
    return 2.0 * math.atan(math.sqrt(u / math.pi - u * u / (4.0 * math.pi**2)))


class TestIncircleRadius:
    def test_zero_steering_is_friction_floor(self, cfg):
        # Degenerate triangle: the incircle term vanishes exactly.
        assert incircle_radius(0.0, cfg) == pytest.approx(1.33, rel=1e-12)

    def test_quarter_pi_against_closed_form(self, cfg):
        got = incircle_radius(math.pi / 4.0, cfg)
        assert got == pytest.approx(oracle_incircle(math.pi / 4.0, cfg), rel=1e-9)
        assert got == pytest.approx(1.3851, abs=5e-5)

    def test_even_in_steering_angle(self, cfg):
        assert incircle_radius(-math.pi / 4.0, cfg) == incircle_radius(math.pi / 4.0, cfg)

    def test_closed_form_agreement_on_grid(self, cfg):
        for k in range(200):
            angle = (k / 200.0) * STEER_LIMIT
            assert incircle_radius(angle, cfg) == pytest.approx(
                oracle_incircle(angle, cfg), rel=1e-9
            )

    def test_domain_error(self, cfg):
        with pytest.raises(ValueError):
            incircle_radius(math.pi / 2.0, cfg)

    @given(st.floats(min_value=0.0, max_value=float(STEER_LIMIT)))
    @settings(max_examples=200, deadline=None)
    def test_bounded_by_half_wheel_radius(self, angle):
        cfg = ControllerConfig()
        r = incircle_radius(angle, cfg)
        floor = cfg.R_v / cfg.mu_r
        assert floor <= r <= floor + cfg.R_v / 2.0 + 1e-12


class TestGammaInput:
    def test_reciprocal_at_zero(self, cfg):
        assert gamma_input(0.0, cfg) == pytest.approx(1.0 / 1.33, rel=1e-9)

    def test_reciprocal_at_quarter_pi(self, cfg):
        expected = 1.0 / oracle_incircle(math.pi / 4.0, cfg)
        assert gamma_input(math.pi / 4.0, cfg) == pytest.approx(expected, rel=1e-9)
        assert gamma_input(math.pi / 4.0, cfg) == pytest.approx(0.7220, abs=5e-5)

    def test_larger_steering_smaller_curvature(self, cfg):
        values = [gamma_input(a, cfg) for a in (0.0, 0.4, 0.9, 1.3)]
        assert values == sorted(values, reverse=True)


class TestCapArea:
    def test_zero_error(self):
        assert cap_area(1.0, 1.0, 0.133) == 0.0

    def test_quarter_pi(self):
        assert cap_area(math.pi / 4.0, 0.0, 0.133) == pytest.approx(
            0.133**2 * math.pi / 4.0, rel=1e-12
        )
        assert cap_area(math.pi / 4.0, 0.0, 0.133) == pytest.approx(0.01389, abs=5e-6)

    def test_sign_insensitive(self):
        assert cap_area(-math.pi / 4.0, 0.0, 0.133) == cap_area(math.pi / 4.0, 0.0, 0.133)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            cap_area(math.pi / 2.0, 0.0, 0.133)


class TestProjectionAngle:
    def test_zero_area(self):
        assert projection_angle(0.0, 0.133) == 0.0

    def test_limit_value(self):
        # |heading error| -> pi/2 limit: zeta = 2 atan(sqrt(7)/4), radius-free.
        s_c = 0.133**2 * math.pi / 2.0
        expected = 2.0 * math.atan(math.sqrt(7.0) / 4.0)
        assert projection_angle(s_c, 0.133) == pytest.approx(expected, rel=1e-9)
        assert projection_angle(s_c, 0.133) == pytest.approx(1.1687, abs=5e-5)

    def test_mid_value_against_closed_form(self):
        s_c = 0.133**2 * math.pi / 4.0
        assert projection_angle(s_c, 0.133) == pytest.approx(
            oracle_zeta(math.pi / 4.0), rel=1e-9
        )

    def test_independent_of_wheel_radius(self):
        angles = [projection_angle(r * r * 1.1, r) for r in (0.05, 0.133, 0.7)]
        assert angles[0] == pytest.approx(angles[1], rel=1e-12)
        assert angles[1] == pytest.approx(angles[2], rel=1e-12)

    def test_monotone_in_area(self):
        values = [projection_angle(0.133**2 * u, 0.133) for u in (0.0, 0.3, 0.8, 1.5)]
        assert values == sorted(values)
        assert values[0] < values[-1]

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            projection_angle(-1e-9, 0.133)
        with pytest.raises(ValueError):
            projection_angle(4.1 * math.pi * 0.133**2, 0.133)

    @given(st.floats(min_value=-float(STEER_LIMIT), max_value=float(STEER_LIMIT)))
    @settings(max_examples=300, deadline=None)
    def test_tangent_stays_bounded(self, dpsi):
        zeta = projection_angle(0.133**2 * abs(dpsi), 0.133)
        assert zeta < 1.169
        assert math.tan(zeta) < 2.37


class TestAlphaInput:
    def test_zero_heading_error(self, cfg):
        assert alpha_input(0.5, 0.5, 0.5, cfg) == 0.0

    def test_positive_error_composition(self, cfg):
        dpsi = math.pi / 4.0
        got = alpha_input(dpsi, 0.0, dpsi, cfg)
        expected = math.tan(oracle_zeta(dpsi)) / oracle_incircle(dpsi, cfg)
        assert got == pytest.approx(expected, rel=1e-9)
        assert got > 0.0

    def test_odd_symmetry(self, cfg):
        plus = alpha_input(0.6, 0.0, 0.6, cfg)
        minus = alpha_input(-0.6, 0.0, -0.6, cfg)
        assert minus == -plus


class TestArcLengthRate:
    def test_passthrough_below_comfort_speed(self, cfg):
        assert arc_length_rate(2.5, cfg.v_c, cfg) == 2.5
        assert arc_length_rate(2.5, 0.0, cfg) == 2.5

    def test_continuous_at_knee(self, cfg):
        below = arc_length_rate(1.0, cfg.v_c, cfg)
        above = arc_length_rate(1.0, cfg.v_c + 1e-13, cfg)
        assert above == pytest.approx(below, abs=1e-12)

    def test_exponential_decay_above(self, cfg):
        # v_c = 3*(1-0.38) = 1.86; one unit above with T=2 gives e^-0.5.
        assert arc_length_rate(1.0, 2.86, cfg) == pytest.approx(math.exp(-0.5), rel=1e-9)

    def test_nonincreasing_in_previous_speed(self, cfg):
        values = [arc_length_rate(2.0, v, cfg) for v in (0.0, 1.0, 1.86, 2.5, 3.5, 6.0)]
        assert values == sorted(values, reverse=True)

    def test_rejects_negative_request(self, cfg):
        with pytest.raises(ValueError):
            arc_length_rate(-0.1, 0.0, cfg)


class TestRollingRate:
    def test_division(self, cfg):
        assert rolling_rate(1.0, cfg) == pytest.approx(0.04, rel=1e-12)
        assert rolling_rate(2.5, cfg) == pytest.approx(0.1, rel=1e-12)

    def test_zero(self, cfg):
        assert rolling_rate(0.0, cfg) == 0.0


class TestControllerCommand:
    def test_stationary_gets_no_correction(self, cfg):
        out = controller_command(ArcLengthInputs(0.4, 0.7, 0.0), cfg)
        assert (out.u_v_c, out.u_omega_c) == (0.0, 0.0)

    def test_speed_channel(self, cfg):
        out = controller_command(ArcLengthInputs(0.0, 0.7519, 0.04), cfg)
        assert out.u_v_c == pytest.approx(0.0440, abs=5e-5)
        assert out.u_omega_c == 0.0

    def test_both_channels(self, cfg):
        out = controller_command(ArcLengthInputs(0.5, 0.722, 0.1), cfg)
        assert out.u_v_c == pytest.approx(0.1096, abs=5e-5)
        assert out.u_omega_c == pytest.approx(0.05, rel=1e-12)


class TestBlend:
    def test_pure_manual_is_identity(self):
        user = UserCommand(1.3, -0.4)
        out = blend(user, ControllerCommand(99.0, 99.0), 1)
        assert (out.u_v, out.u_omega) == (1.3, -0.4)

    def test_two_way_split(self):
        out = blend(UserCommand(1.0, 0.0), ControllerCommand(0.5, 0.2), 2)
        assert (out.u_v, out.u_omega) == (0.75, 0.1)

    def test_agreement_is_fixed_point(self):
        for n in (1, 2, 5, 40):
            out = blend(UserCommand(0.8, 0.1), ControllerCommand(0.8, 0.1), n)
            assert out.u_v == pytest.approx(0.8, rel=1e-12)
            assert out.u_omega == pytest.approx(0.1, rel=1e-12)

    def test_affine_identity(self):
        user, ctrl = UserCommand(1.7, -0.9), ControllerCommand(0.3, 0.2)
        for n in (2, 3, 7):
            out = blend(user, ctrl, n)
            assert out.u_v - ctrl.u_v_c == pytest.approx((user.u_v_u - ctrl.u_v_c) / n, rel=1e-12)
            assert out.u_omega - ctrl.u_omega_c == pytest.approx(
                (user.u_omega_u - ctrl.u_omega_c) / n, rel=1e-12
            )

    def test_rejects_bad_level(self):
        with pytest.raises(ValueError):
            blend(UserCommand(0.0, 0.0), ControllerCommand(0.0, 0.0), 0)


class TestEvaluateMonitors:
    def test_all_zero_is_vacuously_stable(self, cfg, bounds):
        report = evaluate_monitors(
            UserCommand(0.0, 0.0), ControllerCommand(0.0, 0.0),
            VehicleSnapshot(v_v=0.0, psi=0.0), cfg, bounds,
        )
        assert report.stability_ok
        assert report.sides["stability_lhs"] == 0.0
        assert report.sides["stability_rhs"] == 0.0

    def test_pure_manual_has_zero_controller_share(self, bounds):
        cfg = ControllerConfig(n=1)
        report = evaluate_monitors(
            UserCommand(2.0, 0.3), ControllerCommand(0.5, 0.5),
            VehicleSnapshot(v_v=1.0, psi=0.2), cfg, bounds,
        )
        assert report.sides["stability_lhs"] == 0.0
        assert report.stability_ok

    def test_velocity_flag_is_literal(self, cfg, bounds):
        # A forward command at standstill trips the velocity check; it is
        # reported, never enforced.
        report = evaluate_monitors(
            UserCommand(1.0, 0.0), ControllerCommand(0.0, 0.0),
            VehicleSnapshot(v_v=0.0, psi=0.0), cfg, bounds,
        )
        assert not report.velocity_ok
        assert report.sides["velocity_lhs"] > report.sides["velocity_rhs"]

    def test_steering_flag_compares_integral_to_heading(self, cfg, bounds):
        ok = evaluate_monitors(
            UserCommand(0.0, 0.0), ControllerCommand(0.0, 0.0),
            VehicleSnapshot(v_v=0.0, psi=1.0, omega_integral=0.5), cfg, bounds,
        )
        bad = evaluate_monitors(
            UserCommand(0.0, 0.0), ControllerCommand(0.0, 0.0),
            VehicleSnapshot(v_v=0.0, psi=0.2, omega_integral=0.5), cfg, bounds,
        )
        assert ok.steering_ok and not bad.steering_ok

    def test_flags_property_mirrors_fields(self, cfg, bounds):
        report = evaluate_monitors(
            UserCommand(1.0, 0.1), ControllerCommand(0.01, 0.01),
            VehicleSnapshot(v_v=2.0, psi=1.0, omega_integral=0.1), cfg, bounds,
        )
        flags = report.flags
        assert flags.velocity_ok == report.velocity_ok
        assert flags.steering_ok == report.steering_ok
        assert flags.stability_ok == report.stability_ok


class TestAssistStep:
    def test_rest_with_zero_input(self, cfg, bounds):
        res = assist_step(
            RawUserInput(0.0, 0.7), VehicleSnapshot(v_v=0.0, psi=0.7), 0.0, cfg, bounds
        )
        assert (res.blended.u_v, res.blended.u_omega) == (0.0, 0.0)
        assert not res.degraded

    def test_pure_manual_passthrough_is_exact(self, bounds):
        cfg = ControllerConfig(n=1)
        raw = RawUserInput(1.0, 0.25)
        res = assist_step(raw, VehicleSnapshot(v_v=0.5, psi=0.0), 0.5, cfg, bounds)
        assert res.blended.u_v == cfg.c * 1.0
        assert res.blended.u_omega == cfg.c * 0.25

    def test_golden_composition(self, cfg, bounds):
        # Full pipeline at a quarter-pi heading error from rest, n=3.
        dpsi = math.pi / 4.0
        res = assist_step(
            RawUserInput(1.0, dpsi), VehicleSnapshot(v_v=0.0, psi=0.0), 0.0, cfg, bounds
        )
        delta = 1.0 / cfg.lambda_t
        gamma = 1.0 / oracle_incircle(dpsi, cfg)
        alpha = math.tan(oracle_zeta(dpsi)) / oracle_incircle(dpsi, cfg)
        u_v_c = delta * (1.0 + cfg.R_v * gamma)
        u_omega_c = delta * alpha
        assert res.arc.delta == pytest.approx(delta, rel=1e-12)
        assert res.arc.gamma_s == pytest.approx(gamma, rel=1e-9)
        assert res.arc.alpha_s == pytest.approx(alpha, rel=1e-9)
        assert res.ctrl.u_v_c == pytest.approx(u_v_c, rel=1e-9)
        assert res.ctrl.u_omega_c == pytest.approx(u_omega_c, rel=1e-9)
        assert res.blended.u_v == pytest.approx((1.0 + 2.0 * u_v_c) / 3.0, rel=1e-9)
        assert res.blended.u_omega == pytest.approx((dpsi + 2.0 * u_omega_c) / 3.0, rel=1e-9)

    def test_speed_request_clamped_to_ceiling(self, cfg, bounds):
        res = assist_step(
            RawUserInput(99.0, 0.0), VehicleSnapshot(v_v=0.0, psi=0.0), 0.0, cfg, bounds
        )
        assert res.user.u_v_u == cfg.c * cfg.v_m

    def test_steering_request_clamped(self, cfg, bounds):
        raw = RawUserInput(0.0, STEER_LIMIT + 0.001)
        res = assist_step(raw, VehicleSnapshot(v_v=0.0, psi=0.0), 0.0, cfg, bounds)
        assert res.user.u_omega_u == cfg.c * STEER_LIMIT
        assert not res.degraded

    def test_degraded_mode_zeroes_correction(self, cfg, bounds):
        raw = RawUserInput(1.0, math.pi / 2.0)
        res = assist_step(raw, VehicleSnapshot(v_v=0.0, psi=0.0), 0.0, cfg, bounds)
        assert res.degraded
        assert (res.ctrl.u_v_c, res.ctrl.u_omega_c) == (0.0, 0.0)
        assert (res.arc.alpha_s, res.arc.gamma_s, res.arc.delta) == (0.0, 0.0, 0.0)
        # Blend collapses to user/n when the correction is zeroed.
        assert res.blended.u_v == pytest.approx(res.user.u_v_u / cfg.n, rel=1e-12)
        assert res.blended.u_omega == pytest.approx(res.user.u_omega_u / cfg.n, rel=1e-12)

    def test_deterministic(self, cfg, bounds):
        raw = RawUserInput(1.7, 0.3)
        state = VehicleSnapshot(v_v=1.1, psi=-0.2, omega_integral=0.4)
        assert assist_step(raw, state, 1.1, cfg, bounds) == assist_step(
            raw, state, 1.1, cfg, bounds
        )

    def test_moderation_uses_previous_speed(self, cfg, bounds):
        fast = assist_step(
            RawUserInput(1.0, 0.0), VehicleSnapshot(v_v=3.0, psi=0.0), 3.0, cfg, bounds
        )
        slow = assist_step(
            RawUserInput(1.0, 0.0), VehicleSnapshot(v_v=0.0, psi=0.0), 0.0, cfg, bounds
        )
        assert fast.arc.delta < slow.arc.delta


class TestControllerConfig:
    def test_comfort_speed(self, cfg):
        assert cfg.v_c == pytest.approx(3.0 * 0.62, rel=1e-12)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n": 0},
            {"n": 1.5},
            {"mu_r": 0.0},
            {"mu_r": 1.5},
            {"T": 0.0},
            {"sigma": 0.0},
            {"sigma": 1.0},
            {"v_m": -1.0},
            {"lambda_t": 0.0},
            {"R_v": 0.0},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ControllerConfig(**kwargs)

    def test_valid_variants(self):
        assert replace(ControllerConfig(), n=1).n == 1
        assert ControllerConfig(n=10, mu_r=1.0, sigma=0.5).v_c == pytest.approx(1.5)


class TestSafetyBoundConfig:
    def test_rejects_nonpositive(self):
        for kwargs in ({"a_rho": 0.0}, {"b_rho": -1.0}, {"tau": 0.0}):
            with pytest.raises(ValueError):
                SafetyBoundConfig(**kwargs)
