"""Run logs: one JSON object per line, header first.

The format is append-friendly and streamable: line 1 is the run header
(config snapshot, route, seed, dt, schema version), every further line is
one tick record.  Numbers are serialized with Python's shortest
round-trip repr, so write -> read reproduces every float bit-exactly;
that property is what makes log replay a meaningful determinism check.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass

from .controller import (
    BlendedCommand,
    ControllerCommand,
    ControllerConfig,
    MonitorFlags,
    RawUserInput,
    SafetyBoundConfig,
    UserCommand,
)
from .geometry import ArcLengthInputs
from .metrics import TrajectoryMetrics, compute_metrics
from .routes import Route
from .vehicle import Pose, VehicleParams

__all__ = [
    "SCHEMA_VERSION",
    "RunHeader",
    "RunSummary",
    "SimRecord",
    "TelemetryError",
    "read_log",
    "summarize",
    "write_log",
]

SCHEMA_VERSION = 1


class TelemetryError(Exception):
    """Malformed or incompatible log content."""


@dataclass(frozen=True)
class SimRecord:
    """Everything one tick produced, with the pose as of the tick start."""

    t: float
    pose: Pose
    v_v: float          # speed measured over the previous tick (m/s)
    psi_dot: float      # heading rate measured over the previous tick (rad/s)
    raw: RawUserInput
    user_cmd: UserCommand
    ctrl_cmd: ControllerCommand
    blended: BlendedCommand
    arc_inputs: ArcLengthInputs
    monitors: MonitorFlags
    degraded: bool


@dataclass(frozen=True)
class RunHeader:
    """Run provenance: everything a replay needs except the inputs."""

    route_kind: str
    route_scale: float
    seed: int
    dt: float
    controller: ControllerConfig
    bounds: SafetyBoundConfig
    vehicle: VehicleParams
    schema_version: int = SCHEMA_VERSION


@dataclass(frozen=True)
class RunSummary:
    """Metrics plus per-monitor violation tallies for one log."""

    metrics: TrajectoryMetrics
    velocity_violations: int
    steering_violations: int
    stability_violations: int
    degraded_ticks: int

    def as_dict(self) -> dict:
        out = dict(self.metrics.as_dict())
        out.update(
            velocity_violations=self.velocity_violations,
            steering_violations=self.steering_violations,
            stability_violations=self.stability_violations,
            degraded_ticks=self.degraded_ticks,
        )
        return out


def _dumps(obj: dict) -> str:
    # allow_nan=False: a non-finite value in a log is a bug, not data.
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def header_to_dict(header: RunHeader) -> dict:
    return {
        "schema_version": header.schema_version,
        "route_kind": header.route_kind,
        "route_scale": header.route_scale,
        "seed": header.seed,
        "dt": header.dt,
        "config": {
            "controller": asdict(header.controller),
            "bounds": asdict(header.bounds),
            "vehicle": asdict(header.vehicle),
        },
    }


def header_from_dict(data: dict) -> RunHeader:
    version = data["schema_version"]
    if version != SCHEMA_VERSION:
        raise TelemetryError(
            f"log schema version {version} does not match reader version {SCHEMA_VERSION}"
        )
    cfg = data["config"]
    return RunHeader(
        route_kind=data["route_kind"],
        route_scale=data["route_scale"],
        seed=data["seed"],
        dt=data["dt"],
        controller=ControllerConfig(**cfg["controller"]),
        bounds=SafetyBoundConfig(**cfg["bounds"]),
        vehicle=VehicleParams(**cfg["vehicle"]),
        schema_version=version,
    )


def record_to_dict(record: SimRecord) -> dict:
    return asdict(record)


def record_from_dict(data: dict) -> SimRecord:
    return SimRecord(
        t=data["t"],
        pose=Pose(**data["pose"]),
        v_v=data["v_v"],
        psi_dot=data["psi_dot"],
        raw=RawUserInput(**data["raw"]),
        user_cmd=UserCommand(**data["user_cmd"]),
        ctrl_cmd=ControllerCommand(**data["ctrl_cmd"]),
        blended=BlendedCommand(**data["blended"]),
        arc_inputs=ArcLengthInputs(**data["arc_inputs"]),
        monitors=MonitorFlags(**data["monitors"]),
        degraded=data["degraded"],
    )


def write_log(header: RunHeader, records, sink) -> int:
    """Write header plus records to a path or text stream; returns bytes."""
    lines = [_dumps(header_to_dict(header))]
    lines.extend(_dumps(record_to_dict(r)) for r in records)
    text = "\n".join(lines) + "\n"
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sink.write(text)
    return len(text.encode("utf-8"))


def read_log(source) -> tuple[RunHeader, list[SimRecord]]:
    """Parse a log back into (header, records); errors name the line."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8", newline="\n") as fh:
            return read_log(fh)

    header: RunHeader | None = None
    records: list[SimRecord] = []
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TelemetryError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        if header is None:
            try:
                header = header_from_dict(data)
            except (KeyError, TypeError, ValueError) as exc:
                raise TelemetryError(f"line {lineno}: malformed header ({exc})") from exc
            continue
        try:
            records.append(record_from_dict(data))
        except (KeyError, TypeError, ValueError) as exc:
            raise TelemetryError(f"line {lineno}: malformed record ({exc})") from exc
    if header is None:
        raise TelemetryError("log is empty: missing header line")
    return header, records


def summarize(records, route: Route, v_max: float = 3.0) -> RunSummary:
    """Metrics plus how often each runtime monitor tripped."""
    records = list(records)
    return RunSummary(
        metrics=compute_metrics(records, route, v_max=v_max),
        velocity_violations=sum(not r.monitors.velocity_ok for r in records),
        steering_violations=sum(not r.monitors.steering_ok for r in records),
        stability_violations=sum(not r.monitors.stability_ok for r in records),
        degraded_ticks=sum(r.degraded for r in records),
    )
