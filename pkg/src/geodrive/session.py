"""Interactive driving session: live joystick in, state records out.

A session wraps one closed-loop engine behind a small message-shaped API.
Joystick input is a normalized pair held between updates (zero-order
hold), so a lossy input stream degrades to "keep doing that" rather than
stopping the vehicle.  Simulated time advances exactly dt per tick no
matter what the wall clock does; the transport layer owns pacing.
"""

from __future__ import annotations

from dataclasses import replace

from .config import ConfigError, coerce_value
from .controller import STEER_LIMIT, ControllerConfig, RawUserInput, SafetyBoundConfig
from .routes import Route
from .simulation import ClosedLoopEngine
from .telemetry import RunHeader, SimRecord, record_to_dict
from .vehicle import VehicleParams

__all__ = ["Session", "tick"]

_CONTROLLER_FIELDS = frozenset(
    ("n", "mu_r", "T", "sigma", "v_m", "lambda_t", "R_v", "c")
)


def _clamp_unit(value: float) -> float:
    value = float(value)
    return -1.0 if value < -1.0 else 1.0 if value > 1.0 else value


class Session:
    """One driver, one vehicle, one route."""

    def __init__(
        self,
        cfg: ControllerConfig,
        bounds: SafetyBoundConfig,
        params: VehicleParams,
        route: Route,
        dt: float = 0.02,
    ) -> None:
        self.cfg = cfg
        self.bounds = bounds
        self.params = params
        self.route = route
        self.dt = dt
        self.recording = False
        self._records: list[SimRecord] = []
        self._v_norm = 0.0
        self._steer_norm = 0.0
        self._engine = self._fresh_engine(tick_index=0)

    def _fresh_engine(self, tick_index: int) -> ClosedLoopEngine:
        engine = ClosedLoopEngine(
            self.cfg, self.bounds, self.params, self.dt, pose=self.route.start_pose()
        )
        engine.tick_index = tick_index
        return engine

    @property
    def pose(self):
        return self._engine.pose

    @property
    def tick_index(self) -> int:
        return self._engine.tick_index

    def apply_input(self, v_norm: float, steer_norm: float) -> None:
        """Update the held joystick sample; values clamp to [-1, 1]."""
        self._v_norm = _clamp_unit(v_norm)
        self._steer_norm = _clamp_unit(steer_norm)

    def set_config(self, partial: dict) -> ControllerConfig:
        """Apply a partial controller-config update; returns the new config.

        The plant ceiling tracks v_m: the speed knob means "this vehicle's
        maximum", not "scale commands and let the plant saturate".
        """
        unknown = sorted(set(partial) - _CONTROLLER_FIELDS)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        coerced = {k: coerce_value(k, v) for k, v in partial.items()}
        try:
            cfg = replace(self.cfg, **coerced)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        self.cfg = cfg
        if "v_m" in coerced:
            self.params = replace(self.params, v_max=cfg.v_m)
            self._engine.params = self.params
        self._engine.cfg = cfg
        return cfg

    def reset(self, route: Route | None = None) -> None:
        """Return to the route start at rest; optionally switch routes.

        The tick counter carries over so record times stay strictly
        increasing across resets.
        """
        if route is not None:
            self.route = route
        self._engine = self._fresh_engine(tick_index=self._engine.tick_index)
        self._v_norm = 0.0
        self._steer_norm = 0.0

    def begin_recording(self) -> None:
        self.recording = True
        self._records = []

    def end_recording(self) -> list[SimRecord]:
        self.recording = False
        records, self._records = self._records, []
        return records

    def make_header(self) -> RunHeader:
        """Header for saving a live recording; live runs have no seed."""
        return RunHeader(
            route_kind=self.route.kind,
            route_scale=self.route.scale,
            seed=0,
            dt=self.dt,
            controller=self.cfg,
            bounds=self.bounds,
            vehicle=self.params,
        )

    def step(self) -> SimRecord:
        """Advance one tick from the held joystick sample."""
        raw = RawUserInput(
            v_cmd=max(0.0, self._v_norm) * self.cfg.v_m,
            psi_cmd=self._engine.pose.psi + self._steer_norm * STEER_LIMIT,
        )
        record = self._engine.advance(raw)
        if self.recording:
            self._records.append(record)
        return record


def tick(session: Session, latest_input: dict | None = None) -> tuple[Session, dict]:
    """Advance one tick; a fresh input message applies before the step,
    otherwise the previously held input keeps driving."""
    if latest_input is not None:
        session.apply_input(
            latest_input.get("v_norm", 0.0), latest_input.get("steer_norm", 0.0)
        )
    record = session.step()
    return session, {
        "type": "state",
        "tick": session.tick_index - 1,
        "record": record_to_dict(record),
    }
