"""Differential-drive plant: wheel mixing and pose integration.

The vehicle is a unicycle driven by a blended (u_v, u_omega) pair.  Poses
are integrated with the exact arc step, so a constant command over one
tick lands exactly on the circular arc (or straight line) it describes;
the integrator is what makes record/replay bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .controller import BlendedCommand

__all__ = [
    "Pose",
    "VehicleParams",
    "WheelCommand",
    "step",
    "unicycle_derivative",
    "wheel_decompose",
    "wheel_mix",
]


@dataclass(frozen=True)
class VehicleParams:
    """Physical constants of the platform."""

    wheel_separation: float = 0.5   # l, distance between drive wheels (m)
    wheel_radius: float = 0.133     # R_v, drive and virtual wheel radius (m)
    v_max: float = 3.0              # hard speed ceiling of the plant (m/s)

    def __post_init__(self) -> None:
        if self.wheel_separation <= 0.0:
            raise ValueError("wheel separation must be positive")
        if self.wheel_radius <= 0.0:
            raise ValueError("wheel radius must be positive")
        if self.v_max <= 0.0:
            raise ValueError("v_max must be positive")


@dataclass(frozen=True)
class WheelCommand:
    """Per-wheel rate pair (right, left)."""

    u_r: float
    u_l: float


@dataclass(frozen=True)
class Pose:
    """Planar pose; psi is unwrapped (accumulates across full turns)."""

    x: float
    y: float
    psi: float


def wheel_mix(w: WheelCommand, p: VehicleParams) -> BlendedCommand:
    """Collapse per-wheel rates into body (u_v, u_omega).

    Mean of the wheels forward, difference over the separation for turn
    rate; rates are taken in linear units, already scaled by wheel radius.
    """
    return BlendedCommand(
        u_v=(w.u_r + w.u_l) / 2.0,
        u_omega=(w.u_r - w.u_l) / p.wheel_separation,
    )


def wheel_decompose(u_v: float, u_omega: float, p: VehicleParams) -> WheelCommand:
    """Split a body command back into per-wheel rates; inverse of wheel_mix."""
    half_span = u_omega * p.wheel_separation / 2.0
    return WheelCommand(u_r=u_v + half_span, u_l=u_v - half_span)


def unicycle_derivative(pose: Pose, cmd: BlendedCommand) -> tuple[float, float, float]:
    """Continuous-time pose derivative (dx, dy, dpsi)."""
    return (
        cmd.u_v * math.cos(pose.psi),
        cmd.u_v * math.sin(pose.psi),
        cmd.u_omega,
    )


def step(pose: Pose, cmd: BlendedCommand, dt: float) -> Pose:
    """Advance one tick along the exact arc the constant command traces.

    Written in half-angle form: the chord of a circular arc of turn h has
    length u_v*dt*sin(h)/h and points along the mean heading psi + h.  The
    h -> 0 limit recovers the straight-line step exactly, so the same
    branch handles arcs and near-straight motion without loss.
    """
    if dt < 0.0:
        raise ValueError("dt must be non-negative")
    half = cmd.u_omega * dt / 2.0
    chord_scale = 1.0 if half == 0.0 else math.sin(half) / half
    chord = cmd.u_v * dt * chord_scale
    return Pose(
        x=pose.x + chord * math.cos(pose.psi + half),
        y=pose.y + chord * math.sin(pose.psi + half),
        psi=pose.psi + cmd.u_omega * dt,
    )
