"""Trajectory quality metrics computed from a run log.

smoothness is the mean squared discrete change of the heading rate (a
rad^2/s^4 jerk proxy on the heading channel): invariant under rigid
transforms of the trajectory, zero for any constant-rate run.  effort
counts full push-to-release joystick cycles on the speed channel using a
two-threshold latch.  cross_track_rms measures distance to the reference
polyline, and path_length is the travelled arc length.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import shapely
from shapely.geometry import LineString

from .routes import Route

__all__ = ["TrajectoryMetrics", "compute_metrics", "effort_transitions"]

#: Speed-channel latch thresholds as fractions of the speed ceiling: a cycle
#: is counted when the request rises above the first and then falls below
#: the second ("high value to as low as zero").
EFFORT_HIGH_FRAC = 0.8
EFFORT_LOW_FRAC = 0.05


@dataclass(frozen=True)
class TrajectoryMetrics:
    smoothness: float       # mean squared heading-rate change (rad^2/s^4)
    effort_count: int       # completed high-to-zero speed request cycles
    cross_track_rms: float  # rms distance to the reference polyline (m)
    path_length: float      # travelled distance (m)

    def __post_init__(self) -> None:
        if min(self.smoothness, self.effort_count, self.cross_track_rms, self.path_length) < 0:
            raise ValueError("metrics must be non-negative")

    def as_dict(self) -> dict:
        return asdict(self)


def effort_transitions(v_cmds, v_max: float) -> int:
    """Count latched high-to-low cycles of the raw speed request."""
    high = EFFORT_HIGH_FRAC * v_max
    low = EFFORT_LOW_FRAC * v_max
    armed = False
    count = 0
    for v in v_cmds:
        if not armed and v > high:
            armed = True
        elif armed and v < low:
            count += 1
            armed = False
    return count


def _route_line(route: Route) -> LineString:
    pts = route.points
    if route.closed:
        pts = np.vstack([pts, pts[:1]])
    return LineString(pts)


def compute_metrics(log, route: Route, v_max: float = 3.0) -> TrajectoryMetrics:
    """Metrics for a recorded run; needs at least two records.

    ``v_max`` scales the effort thresholds; pass the run's configured speed
    ceiling (the log summary tool reads it from the log header).
    """
    records = list(log)
    if len(records) < 2:
        raise ValueError("metrics need at least 2 records")

    t = np.array([r.t for r in records])
    x = np.array([r.pose.x for r in records])
    y = np.array([r.pose.y for r in records])
    psi = np.array([r.pose.psi for r in records])

    steps = np.diff(t)
    if np.any(steps <= 0.0):
        raise ValueError("record times must be strictly increasing")

    rate = np.diff(psi) / steps
    if len(rate) >= 2:
        jerk = np.diff(rate) / steps[1:]
        smoothness = float(np.mean(jerk**2))
    else:
        smoothness = 0.0

    line = _route_line(route)
    # shapely's point-to-line distance is the perpendicular distance to the
    # nearest polyline segment, which is the cross-track definition here.
    shortest = shapely.distance(shapely.points(np.column_stack([x, y])), line)
    cross_track_rms = float(np.sqrt(np.mean(shortest**2)))

    return TrajectoryMetrics(
        smoothness=smoothness,
        effort_count=effort_transitions((r.raw.v_cmd for r in records), v_max),
        cross_track_rms=cross_track_rms,
        path_length=float(np.hypot(np.diff(x), np.diff(y)).sum()),
    )
