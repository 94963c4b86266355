"""Scripted stand-in for a human driver.

Pure pursuit with human-like impairments: the driver sees a delayed pose,
adds fresh Gaussian noise to both joystick channels every tick, and panics
(releases the stick) whenever the speed it perceives exceeds its comfort
threshold, re-engaging only after slowing well below it.  The result is
the characteristic full-throttle / full-release oscillation of an
unassisted nervous driver, and a shaky heading command throughout.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .controller import STEER_LIMIT, RawUserInput
from .routes import Route
from .vehicle import Pose

__all__ = ["ScriptedDriver", "drive_tick"]

#: Vertices scanned ahead of the current progress point when re-localizing.
#: Bounded so the tracker cannot jump across the figure-eight intersection.
_PROGRESS_WINDOW = 60


def _wrap_pi(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


@dataclass
class ScriptedDriver:
    """Configuration plus per-run tracking state.

    The constructor arguments fully determine behavior; call :meth:`reset`
    (the closed-loop runner does) before reusing an instance so repeated
    runs are identical.
    """

    lookahead: float = 1.2       # aim distance along the route (m)
    delay_ticks: int = 6         # reaction delay of the perceived pose
    noise_std: float = 0.0       # std-dev of per-tick joystick noise
    seed: int = 0                # rng seed the runner uses for this driver
    target_speed: float = 3.0    # cruise speed request (m/s)
    comfort_speed: float = 2.0   # perceived speed that triggers release
    tick_dt: float = 0.02        # tick period for perceived-speed estimates

    _history: deque = field(init=False, repr=False)
    _progress: int = field(default=0, init=False, repr=False)
    _panic: bool = field(default=False, init=False, repr=False)
    _done: bool = field(default=False, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.lookahead <= 0.0:
            raise ValueError("lookahead must be positive")
        if self.delay_ticks < 0:
            raise ValueError("delay_ticks must be non-negative")
        if self.noise_std < 0.0:
            raise ValueError("noise_std must be non-negative")
        if self.target_speed < 0.0:
            raise ValueError("target_speed must be non-negative")
        if self.comfort_speed <= 0.0:
            raise ValueError("comfort_speed must be positive")
        if self.tick_dt <= 0.0:
            raise ValueError("tick_dt must be positive")
        self.reset()

    def reset(self) -> None:
        """Clear all per-run state; a fresh run must start from here."""
        self._history = deque(maxlen=self.delay_ticks + 1)
        self._progress = 0
        self._panic = False
        self._done = False

    def _perceive(self, pose: Pose) -> tuple[float, float, float, float]:
        """Delayed (x, y, psi, speed); speed from the two oldest samples."""
        self._history.append((pose.x, pose.y, pose.psi))
        x, y, psi = self._history[0]
        if len(self._history) >= 2:
            x1, y1, _ = self._history[1]
            speed = math.hypot(x1 - x, y1 - y) / self.tick_dt
        else:
            speed = 0.0
        return x, y, psi, speed

    def _track(self, x: float, y: float, route: Route) -> int:
        """Advance the progress vertex to the nearest point in a short
        forward window; never moves backward along the route."""
        n = len(route.points)
        if route.closed:
            idx = np.arange(self._progress, self._progress + _PROGRESS_WINDOW + 1) % n
        else:
            idx = np.arange(self._progress, min(self._progress + _PROGRESS_WINDOW, n - 1) + 1)
        window = route.points[idx]
        d = np.hypot(window[:, 0] - x, window[:, 1] - y)
        self._progress = int(idx[int(np.argmin(d))])
        return self._progress

    def _aim_point(self, route: Route) -> tuple[float, float]:
        """Walk forward from the progress vertex until lookahead is covered."""
        pts = route.points
        n = len(pts)
        i = self._progress
        travelled = 0.0
        for _ in range(n):
            if travelled >= self.lookahead:
                break
            nxt = i + 1
            if nxt >= n:
                if not route.closed:
                    break
                nxt = 0
            travelled += float(np.hypot(*(pts[nxt] - pts[i])))
            i = nxt
        return float(pts[i][0]), float(pts[i][1])


def drive_tick(
    driver: ScriptedDriver, pose: Pose, route: Route, rng: np.random.Generator
) -> RawUserInput:
    """One joystick sample: aim at the lookahead point seen through the
    driver's delay, with fresh noise on both channels.

    Exactly two rng draws per tick regardless of branch, so the random
    stream stays aligned across configurations sharing a seed.
    """
    px, py, ppsi, pspeed = driver._perceive(pose)
    progress = driver._track(px, py, route)

    if not route.closed:
        end = route.points[-1]
        if progress >= len(route.points) - 1 or math.hypot(end[0] - px, end[1] - py) < driver.lookahead / 2.0:
            driver._done = True

    tx, ty = driver._aim_point(route)
    heading_err = _wrap_pi(math.atan2(ty - py, tx - px) - ppsi)

    if driver._panic:
        if pspeed < 0.6 * driver.comfort_speed:
            driver._panic = False
    elif pspeed > driver.comfort_speed:
        driver._panic = True

    v_noise = float(rng.normal(0.0, driver.noise_std))
    s_noise = float(rng.normal(0.0, driver.noise_std))
    profile = 0.0 if (driver._panic or driver._done) else driver.target_speed

    v_cmd = max(0.0, profile + v_noise)
    rel = heading_err + s_noise
    rel = -STEER_LIMIT if rel < -STEER_LIMIT else STEER_LIMIT if rel > STEER_LIMIT else rel
    return RawUserInput(v_cmd=v_cmd, psi_cmd=pose.psi + rel)
