import pytest

from feeddrive.core.parameters import AxisParameters, MachineProfile
from feeddrive.io.profiles import load_profile


@pytest.fixture(scope="session")
def profile() -> MachineProfile:
    return load_profile("mikron_ucp710")


@pytest.fixture(scope="session")
def x_axis(profile: MachineProfile) -> AxisParameters:
    return profile.axis("X")


@pytest.fixture(scope="session")
def x_no_delays(x_axis: AxisParameters) -> AxisParameters:
    return x_axis.model_copy(update={"alpha": 0.0, "beta": 0.0, "gamma": 0.0})
