"""Reference routes as densely sampled polylines.

Two built-in shapes: a self-intersecting figure-eight (Gerono lemniscate,
x = a sin t, y = a sin t cos t) and a rectangular spiral whose sides shrink
geometrically, giving a long run of sharp right-angle corners.  Routes only
guide the scripted driver and the metrics; the plant never sees them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .vehicle import Pose

__all__ = ["MAX_SPACING", "Route", "custom_route", "make_route"]

#: Upper bound on the distance between consecutive polyline samples (m).
MAX_SPACING = 0.05

_KIND_ALIASES = {
    "figure8": "figure8",
    "figure-eight": "figure8",
    "spiral": "spiral",
    "sharp-spiral": "spiral",
}


@dataclass(frozen=True, eq=False)
class Route:
    """Sampled route polyline.

    ``points`` is an (N, 2) float array with N >= 2; ``closed`` marks that
    the last sample connects back to the first; ``scale`` is the size
    parameter the polyline was generated from.
    """

    kind: str
    points: np.ndarray
    closed: bool
    scale: float = 1.0

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("route polyline must be an (N, 2) array with N >= 2")
        if not np.all(np.isfinite(pts)):
            raise ValueError("route polyline must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def length(self) -> float:
        """Total polyline length, including the closing segment if closed."""
        segs = np.diff(self.points, axis=0)
        total = float(np.hypot(segs[:, 0], segs[:, 1]).sum())
        if self.closed:
            total += float(np.hypot(*(self.points[0] - self.points[-1])))
        return total

    def start_pose(self) -> Pose:
        """First sample, heading along the first segment."""
        (x0, y0), (x1, y1) = self.points[0], self.points[1]
        return Pose(x=float(x0), y=float(y0), psi=math.atan2(y1 - y0, x1 - x0))


def _densify(vertices: np.ndarray, max_spacing: float) -> np.ndarray:
    """Insert evenly spaced points so no segment exceeds max_spacing."""
    out = [vertices[0]]
    for a, b in zip(vertices[:-1], vertices[1:]):
        length = float(np.hypot(*(b - a)))
        pieces = max(1, math.ceil(length / max_spacing))
        for i in range(1, pieces + 1):
            out.append(a + (b - a) * (i / pieces))
    return np.asarray(out)


def _figure_eight(scale: float) -> np.ndarray:
    # Parametric speed is at most scale*sqrt(2), so this sample count keeps
    # consecutive arc length (hence chord length) within MAX_SPACING.
    n = math.ceil(2.0 * math.pi * scale * math.sqrt(2.0) / MAX_SPACING)
    t = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return np.column_stack([scale * np.sin(t), scale * np.sin(t) * np.cos(t)])


def _square_spiral(scale: float, turns: int = 4) -> np.ndarray:
    # 4*turns + 1 legs with a right-angle corner between each pair; side
    # length shrinks by 0.8 every half loop (every two legs).
    directions = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))
    corners = [(0.0, 0.0)]
    x = y = 0.0
    for leg in range(4 * turns + 1):
        dx, dy = directions[leg % 4]
        side = scale * 0.8 ** (leg // 2)
        x += dx * side
        y += dy * side
        corners.append((x, y))
    return _densify(np.asarray(corners), MAX_SPACING)


def make_route(kind: str, scale: float) -> Route:
    """Build a built-in route; kind is ``figure8`` or ``spiral``."""
    if scale <= 0.0:
        raise ValueError("route scale must be positive")
    canonical = _KIND_ALIASES.get(kind)
    if canonical is None:
        raise ValueError(f"unknown route kind {kind!r}; expected figure8 or spiral")
    if canonical == "figure8":
        return Route(kind="figure8", points=_figure_eight(scale), closed=True, scale=scale)
    return Route(kind="spiral", points=_square_spiral(scale), closed=False, scale=scale)


def custom_route(waypoints, closed: bool = False) -> Route:
    """Route through user waypoints, resampled to the spacing contract."""
    vertices = np.asarray(waypoints, dtype=float)
    if vertices.ndim != 2 or vertices.shape[1] != 2 or vertices.shape[0] < 2:
        raise ValueError("waypoints must be an (N, 2) array with N >= 2")
    if closed:
        # Densify the wrap-around edge too, then drop the duplicated start.
        points = _densify(np.vstack([vertices, vertices[:1]]), MAX_SPACING)[:-1]
    else:
        points = _densify(vertices, MAX_SPACING)
    return Route(kind="custom", points=points, closed=closed)
