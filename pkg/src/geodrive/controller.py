"""Assist-as-needed driving controller.

Maps a raw joystick pair (desired speed, desired heading) plus the current
vehicle state to a corrective command, then blends correction and user
input with a reliance level ``n`` (``n = 1`` is pure manual driving).  The
correction needs no reference trajectory: it is derived per tick from the
steering geometry of a virtual rolling wheel.

The pipeline per tick:

* the relative steering angle picks a turning radius through the incircle
  of a contact triangle (:func:`incircle_radius`),
* the heading error is converted to an under-cap area and from there to a
  projection angle that shapes the turn command (:func:`cap_area`,
  :func:`projection_angle`),
* the speed channel is moderated above a comfort speed ``v_c``
  (:func:`arc_length_rate`) and normalized into the rolling rate ``delta``
  (:func:`rolling_rate`).

Three runtime monitors are evaluated per tick.  They are diagnostics only
and never clamp the command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import ArcLengthInputs

__all__ = [
    "STEER_LIMIT",
    "AssistResult",
    "BlendedCommand",
    "ControllerCommand",
    "ControllerConfig",
    "MonitorFlags",
    "MonitorReport",
    "RawUserInput",
    "SafetyBoundConfig",
    "UserCommand",
    "VehicleSnapshot",
    "alpha_input",
    "arc_length_rate",
    "assist_step",
    "blend",
    "cap_area",
    "controller_command",
    "evaluate_monitors",
    "gamma_input",
    "incircle_radius",
    "rolling_rate",
]

#: Steering requests are kept strictly inside the open domain (-pi/2, pi/2).
STEER_LIMIT = 0.999 * (math.pi / 2.0)


@dataclass(frozen=True)
class RawUserInput:
    """Joystick pair: desired speed (m/s) and desired absolute heading (rad)."""

    v_cmd: float
    psi_cmd: float


@dataclass(frozen=True)
class UserCommand:
    """User input mapped to plant units through the linear ratio ``c``."""

    u_v_u: float
    u_omega_u: float


@dataclass(frozen=True)
class ControllerCommand:
    """Corrective command derived from the virtual-wheel geometry."""

    u_v_c: float
    u_omega_c: float


@dataclass(frozen=True)
class BlendedCommand:
    """Final (u_v, u_omega) sent to the plant."""

    u_v: float
    u_omega: float


@dataclass(frozen=True)
class ControllerConfig:
    """Tunable parameters of the assist controller.

    Field names double as configuration-file keys, so the few that are
    conventionally capitalized stay that way.
    """

    n: int = 3               # reliance level; 1 disables assistance
    mu_r: float = 0.1        # singularity scaler for the turning-radius floor
    T: float = 2.0           # decay time of the speed moderation (s)
    sigma: float = 0.38      # comfort ratio; v_c = v_m * (1 - sigma)
    v_m: float = 3.0         # speed ceiling (m/s)
    lambda_t: float = 25.0   # rolling-rate normalizer
    R_v: float = 0.133       # virtual wheel radius (m)
    c: float = 1.0           # joystick-to-command linear ratio

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("reliance level n must be an integer >= 1")
        if not 0.0 < self.mu_r <= 1.0:
            raise ValueError("mu_r must lie in (0, 1]")
        if self.T <= 0.0:
            raise ValueError("time scale T must be positive")
        if not 0.0 < self.sigma < 1.0:
            raise ValueError("sigma must lie in (0, 1)")
        if self.v_m <= 0.0:
            raise ValueError("speed ceiling v_m must be positive")
        if self.lambda_t <= 0.0:
            raise ValueError("lambda_t must be positive")
        if self.R_v <= 0.0:
            raise ValueError("wheel radius R_v must be positive")

    @property
    def v_c(self) -> float:
        """Comfort speed above which the correction starts backing off."""
        return self.v_m * (1.0 - self.sigma)


@dataclass(frozen=True)
class SafetyBoundConfig:
    """Constants of the stability-margin monitor.

    The defaults are sized so the margin holds with a comfortable factor
    across the entire admissible input domain (see the stability sweep in
    the acceptance suite); they are deliberately loose, not identified from
    hardware.
    """

    a_rho: float = 1.0   # gain
    b_rho: float = 1.0   # rate (1/s)
    tau: float = 1.0     # interval (s)

    def __post_init__(self) -> None:
        if self.a_rho <= 0.0 or self.b_rho <= 0.0 or self.tau <= 0.0:
            raise ValueError("safety bound constants must all be positive")


@dataclass(frozen=True)
class VehicleSnapshot:
    """What the controller can measure at the start of a tick."""

    v_v: float                    # measured speed over the last tick (m/s)
    psi: float                    # unwrapped heading (rad)
    omega_integral: float = 0.0   # accumulated integral of blended u_omega (rad)


@dataclass(frozen=True)
class MonitorFlags:
    """Per-tick pass flags of the three runtime monitors."""

    velocity_ok: bool
    steering_ok: bool
    stability_ok: bool


@dataclass(frozen=True)
class MonitorReport:
    """Monitor flags plus the evaluated sides of each inequality.

    Diagnostic only: producing this report never mutates any command.
    """

    velocity_ok: bool
    steering_ok: bool
    stability_ok: bool
    sides: dict

    @property
    def flags(self) -> MonitorFlags:
        return MonitorFlags(self.velocity_ok, self.steering_ok, self.stability_ok)


@dataclass(frozen=True)
class AssistResult:
    """Everything one controller tick produces."""

    user: UserCommand
    ctrl: ControllerCommand
    blended: BlendedCommand
    arc: ArcLengthInputs
    monitors: MonitorReport
    degraded: bool


def incircle_radius(psi_cmd_rel: float, cfg: ControllerConfig) -> float:
    """Turning radius assigned to a relative steering request.

    The request spans an isosceles contact triangle with equal legs
    ``R_v / cos|psi|`` and base ``2 R_v tan|psi|``; the assigned radius is
    the friction floor ``R_v / mu_r`` plus that triangle's incircle radius.
    Even in the steering angle: direction is carried by :func:`alpha_input`.
    """
    angle = abs(psi_cmd_rel)
    if angle >= math.pi / 2.0:
        raise ValueError("steering angle out of domain: |angle| must be < pi/2")
    leg = cfg.R_v / math.cos(angle)
    base = 2.0 * cfg.R_v * math.tan(angle)
    semi = (2.0 * leg + base) / 2.0
    return cfg.R_v / cfg.mu_r + math.sqrt((semi - leg) ** 2 * (semi - base) / semi)


def gamma_input(psi_cmd_rel: float, cfg: ControllerConfig) -> float:
    """Rolling-circle curvature for a steering request: 1 / incircle_radius."""
    return 1.0 / incircle_radius(psi_cmd_rel, cfg)


def cap_area(psi_cmd: float, psi_vehicle: float, r_v: float) -> float:
    """Under-cap area encoding the heading error, ``R_v^2 |psi_cmd - psi|``."""
    dpsi = psi_cmd - psi_vehicle
    if abs(dpsi) >= math.pi / 2.0:
        raise ValueError("heading error out of domain: |error| must be < pi/2")
    return r_v * r_v * abs(dpsi)


def projection_angle(s_c: float, r_v: float) -> float:
    """Turn-shaping angle of an under-cap area on a sphere of radius ``r_v``.

    Monotone increasing from 0; stays below 1.169 rad on the admissible
    heading-error domain, so its tangent is bounded.
    """
    if s_c < 0.0:
        raise ValueError("cap area must be non-negative")
    h_c = s_c / (2.0 * math.pi * r_v)
    radicand = s_c / math.pi - h_c * h_c
    if radicand < 0.0:
        raise ValueError("cap area out of domain: chord radical is negative")
    a_c = 2.0 * math.sqrt(radicand)
    return 2.0 * math.atan(a_c / (2.0 * r_v))


def alpha_input(
    psi_cmd: float, psi_vehicle: float, psi_cmd_rel: float, cfg: ControllerConfig
) -> float:
    """Signed heading-correction curvature.

    Magnitude ``tan(projection_angle) / incircle_radius``; the sign of the
    heading error is restored here since the area construction discards it.
    """
    zeta = projection_angle(cap_area(psi_cmd, psi_vehicle, cfg.R_v), cfg.R_v)
    magnitude = math.tan(zeta) / incircle_radius(psi_cmd_rel, cfg)
    return magnitude if psi_cmd >= psi_vehicle else -magnitude


def arc_length_rate(v_cmd_in: float, v_prev: float, cfg: ControllerConfig) -> float:
    """Speed request moderated by how fast the vehicle already moves.

    Passes the request through below the comfort speed ``v_c`` and decays
    it exponentially above; continuous at the knee and nonincreasing in
    ``v_prev``.
    """
    if v_cmd_in < 0.0:
        raise ValueError("speed request must be non-negative")
    if v_prev <= cfg.v_c:
        return v_cmd_in
    return v_cmd_in * math.exp(-(v_prev - cfg.v_c) / cfg.T)


def rolling_rate(lambda_s: float, cfg: ControllerConfig) -> float:
    """Arc-length rate of the virtual wheel: the moderated speed over ``lambda_t``."""
    return lambda_s / cfg.lambda_t


def controller_command(inputs: ArcLengthInputs, cfg: ControllerConfig) -> ControllerCommand:
    """Corrective velocity pair carried by the rolling rate."""
    return ControllerCommand(
        u_v_c=inputs.delta * (1.0 + cfg.R_v * inputs.gamma_s),
        u_omega_c=inputs.delta * inputs.alpha_s,
    )


def blend(user: UserCommand, ctrl: ControllerCommand, n: int) -> BlendedCommand:
    """Weighted mix of user and controller commands at reliance level ``n``."""
    if n < 1:
        raise ValueError("reliance level n must be >= 1")
    return BlendedCommand(
        u_v=(user.u_v_u + (n - 1) * ctrl.u_v_c) / n,
        u_omega=(user.u_omega_u + (n - 1) * ctrl.u_omega_c) / n,
    )


def evaluate_monitors(
    user: UserCommand,
    ctrl: ControllerCommand,
    state: VehicleSnapshot,
    cfg: ControllerConfig,
    bounds: SafetyBoundConfig,
) -> MonitorReport:
    """Evaluate the three runtime inequalities against the current state.

    velocity: |blended speed command| <= |measured speed|.  Read literally
    this fails at standstill with any forward request; it is logged as
    stated, never enforced.

    steering: |accumulated integral of blended u_omega| <= |heading|.

    stability: the controller share of the blend stays inside a margin
    proportional to the user input.  With no user input both sides vanish
    and the flag reports vacuously true.
    """
    m = 1.0 / cfg.n
    blended_v = m * (user.u_v_u + (cfg.n - 1) * ctrl.u_v_c)
    velocity_lhs, velocity_rhs = abs(blended_v), abs(state.v_v)
    steering_lhs, steering_rhs = abs(state.omega_integral), abs(state.psi)

    stability_lhs = (1.0 - m) ** 2 * (ctrl.u_v_c**2 + ctrl.u_omega_c**2)
    user_norm_sq = user.u_v_u**2 + user.u_omega_u**2
    decay = 1.0 - math.exp(-bounds.b_rho * bounds.tau)
    stability_rhs = bounds.a_rho**2 * user_norm_sq * decay**2

    return MonitorReport(
        velocity_ok=velocity_lhs <= velocity_rhs,
        steering_ok=steering_lhs <= steering_rhs,
        stability_ok=True if user_norm_sq == 0.0 else stability_lhs < stability_rhs,
        sides={
            "velocity_lhs": velocity_lhs,
            "velocity_rhs": velocity_rhs,
            "steering_lhs": steering_lhs,
            "steering_rhs": steering_rhs,
            "stability_lhs": stability_lhs,
            "stability_rhs": stability_rhs,
        },
    )


def _clamp(value: float, low: float, high: float) -> float:
    return low if value < low else high if value > high else value


def assist_step(
    raw: RawUserInput,
    state: VehicleSnapshot,
    v_prev: float,
    cfg: ControllerConfig,
    bounds: SafetyBoundConfig,
) -> AssistResult:
    """One controller tick: clamp, correct, blend, monitor.

    Pure function of its arguments.  When the heading error leaves the
    admissible domain the correction is zeroed for the tick and the result
    is flagged degraded instead of raising; a live loop must not halt.

    With ``n = 1`` the blended output equals the mapped user command
    exactly: the user speed request scaled by ``c`` and a turn rate
    proportional (again through ``c``) to the clamped heading error.
    """
    v_cmd = _clamp(raw.v_cmd, 0.0, cfg.v_m)
    dpsi = raw.psi_cmd - state.psi
    rel = _clamp(dpsi, -STEER_LIMIT, STEER_LIMIT)
    user = UserCommand(u_v_u=cfg.c * v_cmd, u_omega_u=cfg.c * rel)

    degraded = abs(dpsi) >= math.pi / 2.0
    if degraded:
        arc = ArcLengthInputs(alpha_s=0.0, gamma_s=0.0, delta=0.0)
        ctrl = ControllerCommand(u_v_c=0.0, u_omega_c=0.0)
    else:
        delta = rolling_rate(arc_length_rate(user.u_v_u, v_prev, cfg), cfg)
        arc = ArcLengthInputs(
            alpha_s=alpha_input(raw.psi_cmd, state.psi, rel, cfg),
            gamma_s=gamma_input(rel, cfg),
            delta=delta,
        )
        ctrl = controller_command(arc, cfg)

    return AssistResult(
        user=user,
        ctrl=ctrl,
        blended=blend(user, ctrl, cfg.n),
        arc=arc,
        monitors=evaluate_monitors(user, ctrl, state, cfg, bounds),
        degraded=degraded,
    )
