import pytest

from geodrive.controller import ControllerConfig, SafetyBoundConfig
from geodrive.vehicle import VehicleParams


@pytest.fixture(scope="session")
def cfg() -> ControllerConfig:
    return ControllerConfig()


@pytest.fixture(scope="session")
def bounds() -> SafetyBoundConfig:
    return SafetyBoundConfig()


@pytest.fixture(scope="session")
def params() -> VehicleParams:
    return VehicleParams()
