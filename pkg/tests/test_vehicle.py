import math

import numpy as np
import pytest

from geodrive.controller import BlendedCommand
from geodrive.vehicle import (
    Pose,
    VehicleParams,
    WheelCommand,
    step,
    unicycle_derivative,
    wheel_decompose,
    wheel_mix,
)


class TestWheelMixing:
    def test_equal_wheels_drive_straight(self, params):
        out = wheel_mix(WheelCommand(2.0, 2.0), params)
        assert (out.u_v, out.u_omega) == (2.0, 0.0)

    def test_differential_pair(self, params):
        # (1, 0) wheels at separation 0.5: forward 0.5, turn rate 2.
        out = wheel_mix(WheelCommand(1.0, 0.0), params)
        assert out.u_v == pytest.approx(0.5, rel=1e-12)
        assert out.u_omega == pytest.approx(2.0, rel=1e-12)

    def test_opposite_wheels_spin_in_place(self, params):
        out = wheel_mix(WheelCommand(1.0, -1.0), params)
        assert out.u_v == 0.0
        assert out.u_omega == pytest.approx(4.0, rel=1e-12)

    def test_decompose_example(self, params):
        out = wheel_decompose(0.5, 2.0, params)
        assert out.u_r == pytest.approx(1.0, rel=1e-12)
        assert out.u_l == pytest.approx(0.0, abs=1e-12)

    def test_round_trip(self, params):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            u_r, u_l = rng.uniform(-3.0, 3.0, size=2)
            mixed = wheel_mix(WheelCommand(u_r, u_l), params)
            back = wheel_decompose(mixed.u_v, mixed.u_omega, params)
            assert back.u_r == pytest.approx(u_r, abs=1e-12)
            assert back.u_l == pytest.approx(u_l, abs=1e-12)

    def test_round_trip_other_separation(self):
        params = VehicleParams(wheel_separation=0.31)
        mixed = wheel_mix(WheelCommand(1.2, -0.4), params)
        back = wheel_decompose(mixed.u_v, mixed.u_omega, params)
        assert back.u_r == pytest.approx(1.2, abs=1e-12)
        assert back.u_l == pytest.approx(-0.4, abs=1e-12)


class TestUnicycleDerivative:
    def test_heading_aligned(self):
        dx, dy, dpsi = unicycle_derivative(Pose(0.0, 0.0, 0.0), BlendedCommand(2.0, 0.5))
        assert (dx, dy, dpsi) == (2.0, 0.0, 0.5)

    def test_quarter_turn_heading(self):
        dx, dy, dpsi = unicycle_derivative(
            Pose(1.0, -2.0, math.pi / 2.0), BlendedCommand(1.5, -0.2)
        )
        assert dx == pytest.approx(0.0, abs=1e-12)
        assert dy == pytest.approx(1.5, rel=1e-12)
        assert dpsi == -0.2

    def test_position_invariant(self):
        cmd = BlendedCommand(1.0, 0.3)
        a = unicycle_derivative(Pose(0.0, 0.0, 0.4), cmd)
        b = unicycle_derivative(Pose(100.0, -50.0, 0.4), cmd)
        assert a == b


class TestStep:
    def test_straight_line(self):
        pose = step(Pose(0.0, 0.0, 0.0), BlendedCommand(2.0, 0.0), 0.5)
        assert pose.x == pytest.approx(1.0, rel=1e-12)
        assert pose.y == pytest.approx(0.0, abs=1e-15)
        assert pose.psi == 0.0

    def test_straight_line_along_heading(self):
        psi = 2.0 * math.pi / 3.0
        pose = step(Pose(1.0, 1.0, psi), BlendedCommand(1.0, 0.0), 1.0)
        assert pose.x == pytest.approx(1.0 + math.cos(psi), rel=1e-12)
        assert pose.y == pytest.approx(1.0 + math.sin(psi), rel=1e-12)

    def test_spin_in_place(self):
        pose = step(Pose(3.0, 4.0, 0.1), BlendedCommand(0.0, 2.0), 0.25)
        assert (pose.x, pose.y) == (3.0, 4.0)
        assert pose.psi == pytest.approx(0.6, rel=1e-12)

    def test_quarter_arc(self):
        # Unit speed and unit turn rate for pi/2 seconds traces a quarter of
        # the unit circle centered at (0, 1).
        pose = step(Pose(0.0, 0.0, 0.0), BlendedCommand(1.0, 1.0), math.pi / 2.0)
        assert pose.x == pytest.approx(1.0, rel=1e-12)
        assert pose.y == pytest.approx(1.0, rel=1e-12)
        assert pose.psi == pytest.approx(math.pi / 2.0, rel=1e-12)

    def test_full_circle_returns_home(self):
        pose = Pose(0.5, -0.5, 0.3)
        out = step(pose, BlendedCommand(1.0, 1.0), 2.0 * math.pi)
        assert out.x == pytest.approx(pose.x, abs=1e-12)
        assert out.y == pytest.approx(pose.y, abs=1e-12)
        assert out.psi == pytest.approx(pose.psi + 2.0 * math.pi, rel=1e-12)

    def test_exact_under_subdivision(self):
        # The arc update is exact, so two half steps equal one full step.
        cmd = BlendedCommand(1.3, 0.7)
        whole = step(Pose(0.0, 0.0, 0.2), cmd, 0.04)
        halved = step(step(Pose(0.0, 0.0, 0.2), cmd, 0.02), cmd, 0.02)
        assert halved.x == pytest.approx(whole.x, abs=1e-12)
        assert halved.y == pytest.approx(whole.y, abs=1e-12)
        assert halved.psi == pytest.approx(whole.psi, abs=1e-15)

    def test_turning_radius_is_constant(self):
        # Center of the turn sits at distance v/omega to the left.
        v, omega = 1.8, 0.9
        pose = Pose(0.0, 0.0, 0.0)
        center = (0.0, v / omega)
        for _ in range(50):
            pose = step(pose, BlendedCommand(v, omega), 0.05)
            r = math.hypot(pose.x - center[0], pose.y - center[1])
            assert r == pytest.approx(v / omega, rel=1e-12)

    def test_zero_dt_is_identity(self):
        pose = Pose(1.0, 2.0, 3.0)
        assert step(pose, BlendedCommand(1.0, 1.0), 0.0) == pose

    def test_negative_dt_rejected(self):
        with pytest.raises(ValueError):
            step(Pose(0.0, 0.0, 0.0), BlendedCommand(1.0, 0.0), -0.01)


class TestVehicleParams:
    def test_defaults(self, params):
        assert params.wheel_separation == 0.5
        assert params.wheel_radius == 0.133
        assert params.v_max == 3.0

    def test_rejects_nonpositive(self):
        for kwargs in (
            {"wheel_separation": 0.0},
            {"wheel_radius": -0.1},
            {"v_max": 0.0},
        ):
            with pytest.raises(ValueError):
                VehicleParams(**kwargs)
