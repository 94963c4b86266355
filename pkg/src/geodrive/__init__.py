"""geodrive: differential-drive simulation with an assist-as-needed
geometric driving controller.

The controller derives its correction from the rolling geometry of a
virtual wheel under the vehicle, so it needs no reference trajectory or
desired state: joystick input and correction are blended per tick at a
configurable reliance level.
"""

from .config import CONFIG_KEYS, ENV_PREFIX, ConfigError, load_config
from .controller import (
    STEER_LIMIT,
    AssistResult,
    BlendedCommand,
    ControllerCommand,
    ControllerConfig,
    MonitorFlags,
    MonitorReport,
    RawUserInput,
    SafetyBoundConfig,
    UserCommand,
    VehicleSnapshot,
    assist_step,
    blend,
    evaluate_monitors,
)
from .driver import ScriptedDriver, drive_tick
from .geometry import (
    PLANE,
    ArcLengthInputs,
    DarbouxBasis,
    SurfaceCurvatures,
    VirtualWheel,
    basis_from_heading,
    compose_curvatures,
    contact_angular_velocity,
    contact_linear_velocity,
)
from .metrics import TrajectoryMetrics, compute_metrics
from .routes import MAX_SPACING, Route, custom_route, make_route
from .simulation import ClosedLoopEngine, replay_log, run_closed_loop
from .telemetry import (
    SCHEMA_VERSION,
    RunHeader,
    RunSummary,
    SimRecord,
    TelemetryError,
    read_log,
    summarize,
    write_log,
)
from .vehicle import (
    Pose,
    VehicleParams,
    WheelCommand,
    step,
    unicycle_derivative,
    wheel_decompose,
    wheel_mix,
)

__version__ = "0.1.0"

__all__ = [
    "CONFIG_KEYS",
    "ENV_PREFIX",
    "MAX_SPACING",
    "PLANE",
    "SCHEMA_VERSION",
    "STEER_LIMIT",
    "ArcLengthInputs",
    "AssistResult",
    "BlendedCommand",
    "ClosedLoopEngine",
    "ConfigError",
    "ControllerCommand",
    "ControllerConfig",
    "DarbouxBasis",
    "MonitorFlags",
    "MonitorReport",
    "Pose",
    "RawUserInput",
    "Route",
    "RunHeader",
    "RunSummary",
    "SafetyBoundConfig",
    "ScriptedDriver",
    "SimRecord",
    "SurfaceCurvatures",
    "TelemetryError",
    "TrajectoryMetrics",
    "UserCommand",
    "VehicleParams",
    "VehicleSnapshot",
    "VirtualWheel",
    "WheelCommand",
    "assist_step",
    "basis_from_heading",
    "blend",
    "compose_curvatures",
    "compute_metrics",
    "contact_angular_velocity",
    "contact_linear_velocity",
    "custom_route",
    "drive_tick",
    "evaluate_monitors",
    "load_config",
    "make_route",
    "read_log",
    "replay_log",
    "run_closed_loop",
    "step",
    "summarize",
    "unicycle_derivative",
    "wheel_decompose",
    "wheel_mix",
    "write_log",
]
