"""Contact-frame geometry of a virtual wheel rolling on the ground plane.

The vehicle body is abstracted as a thin disk that rolls without slipping.
Steering is expressed through curvature offsets of the contact path instead
of torques, which keeps everything kinematic: a single arc-length rate
``delta`` converts the curvature picture into time-domain velocities.

All vector quantities are given in the right-handed contact frame
``(tangent, lateral, normal)`` where ``tangent`` points along the heading,
``normal`` is the plane normal and ``lateral = normal x tangent``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PLANE",
    "ArcLengthInputs",
    "DarbouxBasis",
    "SurfaceCurvatures",
    "VirtualWheel",
    "basis_from_heading",
    "compose_curvatures",
    "contact_angular_velocity",
    "contact_linear_velocity",
]

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class DarbouxBasis:
    """Orthonormal frame at the wheel-ground contact point.

    Attributes
    ----------
    tangent : ndarray, shape (3,)
        Unit vector along the direction of travel.
    lateral : ndarray, shape (3,)
        Unit vector ``normal x tangent``, pointing to the vehicle's left.
    normal : ndarray, shape (3,)
        Unit normal of the ground plane.
    """

    tangent: np.ndarray
    lateral: np.ndarray
    normal: np.ndarray

    def __post_init__(self) -> None:
        for name in ("tangent", "lateral", "normal"):
            vec = np.asarray(getattr(self, name), dtype=float)
            if vec.shape != (3,):
                raise ValueError(f"{name} must be a 3-vector")
            if abs(float(np.linalg.norm(vec)) - 1.0) > _UNIT_TOL:
                raise ValueError(f"{name} must have unit length")
            object.__setattr__(self, name, vec)
        residual = np.cross(self.normal, self.tangent) - self.lateral
        if float(np.max(np.abs(residual))) > _UNIT_TOL:
            raise ValueError("frame is not right-handed: lateral != normal x tangent")


@dataclass(frozen=True)
class SurfaceCurvatures:
    """Geodesic curvature, normal curvature and geodesic torsion (all 1/m)."""

    k_g: float
    k_n: float
    tau_g: float


@dataclass(frozen=True)
class ArcLengthInputs:
    """Steering inputs parameterized by contact arc length.

    ``alpha_s`` bends the heading (curvature about the plane normal),
    ``gamma_s`` tightens the effective rolling circle (curvature about the
    lateral axis), and ``delta`` is the arc-length rate ``ds/dt`` that
    carries both into the time domain.
    """

    alpha_s: float
    gamma_s: float
    delta: float

    def __post_init__(self) -> None:
        if self.delta < 0.0:
            raise ValueError("arc-length rate delta must be non-negative")


@dataclass(frozen=True)
class VirtualWheel:
    """Rolling-disk stand-in for the vehicle: radius plus accumulated roll angle."""

    radius: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError("wheel radius must be positive")

    def curvatures(self) -> SurfaceCurvatures:
        # The rim is a planar circle: no geodesic curvature or torsion along
        # its own contact curve, normal curvature 1/radius.
        return SurfaceCurvatures(k_g=0.0, k_n=1.0 / self.radius, tau_g=0.0)

    def rolled(self, delta: float, dt: float) -> "VirtualWheel":
        """Wheel after one tick of rolling at arc-length rate ``delta``."""
        return VirtualWheel(self.radius, self.theta + delta * dt / self.radius)


#: Curvature set of the flat ground plane.
PLANE = SurfaceCurvatures(k_g=0.0, k_n=0.0, tau_g=0.0)


def basis_from_heading(psi: float) -> DarbouxBasis:
    """Contact frame of a wheel standing upright on the xy plane at heading ``psi``."""
    c, s = math.cos(psi), math.sin(psi)
    return DarbouxBasis(
        tangent=np.array([c, s, 0.0]),
        lateral=np.array([-s, c, 0.0]),
        normal=np.array([0.0, 0.0, 1.0]),
    )


def compose_curvatures(
    wheel: SurfaceCurvatures,
    plane: SurfaceCurvatures,
    inputs: ArcLengthInputs,
) -> SurfaceCurvatures:
    """Relative curvature set between the wheel curve and the surface curve.

    Componentwise difference of the two contact curves, with the steering
    inputs entering as offsets on the geodesic and normal channels.  Note
    the sign convention here: both offsets are subtracted, whereas the
    velocity field of the steered wheel (:func:`contact_angular_velocity`)
    adds ``gamma_s`` on the lateral axis.
    """
    return SurfaceCurvatures(
        k_g=wheel.k_g - plane.k_g - inputs.alpha_s,
        k_n=wheel.k_n - plane.k_n - inputs.gamma_s,
        tau_g=wheel.tau_g - plane.tau_g,
    )


def contact_angular_velocity(inputs: ArcLengthInputs, wheel: VirtualWheel) -> np.ndarray:
    """Angular velocity of the rolling wheel, in contact-frame components.

    The tangent component is exactly zero: rolling without slipping leaves
    no spin about the direction of travel.
    """
    return np.array(
        [
            0.0,
            inputs.delta * (1.0 / wheel.radius + inputs.gamma_s),
            inputs.delta * inputs.alpha_s,
        ]
    )


def contact_linear_velocity(inputs: ArcLengthInputs, wheel: VirtualWheel) -> np.ndarray:
    """Velocity of the wheel center, in contact-frame components.

    Equals ``contact_angular_velocity x (radius * normal)``; rolling contact
    leaves only the tangent component nonzero.
    """
    return np.array(
        [
            inputs.delta * (1.0 + wheel.radius * inputs.gamma_s),
            0.0,
            0.0,
        ]
    )
