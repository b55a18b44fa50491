import numpy as np
import pytest

from fenopt import data_path
from fenopt.building import load_building
from fenopt.catalog import load_catalog
from fenopt.encoding import Encoder, Scenario
from fenopt.fitness import FitnessConfig
from fenopt.search.problems import FenestrationProblem
from fenopt.sim.engine import SimulatorSettings, prepare_context
from fenopt.sim.weather import HOURS_PER_YEAR, WeatherSeries, parse_epw


@pytest.fixture(scope="session")
def catalog():
    return load_catalog(data_path("catalog.json"))


@pytest.fixture(scope="session")
def building():
    return load_building(data_path("building.json"))


@pytest.fixture(scope="session")
def madrid_weather():
    return parse_epw(data_path("weather/madrid.epw"))


@pytest.fixture(scope="session")
def encoder(building, catalog):
    return Encoder(building, catalog, Scenario.S1)


@pytest.fixture(scope="session")
def madrid_problem(building, catalog, madrid_weather):
    return FenestrationProblem(building, catalog, madrid_weather,
                               FitnessConfig.for_location("madrid"))


def constant_weather(temp_c, dni=0.0, dhi=0.0, ghi=0.0, latitude=40.0):
    n = HOURS_PER_YEAR
    return WeatherSeries(
        name="synthetic", latitude=latitude, longitude=0.0, utc_offset=0.0,
        drybulb_c=np.full(n, float(temp_c)),
        dni_w_m2=np.full(n, float(dni)),
        dhi_w_m2=np.full(n, float(dhi)),
        ghi_w_m2=np.full(n, float(ghi)),
    )


ZERO_SCHEDULES = {"occupancy": [0.0] * 24, "lighting": [0.0] * 24,
                  "equipment": [0.0] * 24}


def quiet_settings(**overrides):
    """Simulator settings with every optional flow silenced."""
    base = dict(mech_vent_m3_s=0.0, free_cooling_ach=0.0,
                infiltration_enabled=False, schedules=ZERO_SCHEDULES)
    base.update(overrides)
    return SimulatorSettings(**base)


@pytest.fixture()
def tmp_campaign_config(tmp_path):
    def make(**overrides):
        config = {
            "location": "madrid", "scenario": "S1", "runs": 1, "budget": 120,
            "seed": 3, "top_k": 3, "output_dir": str(tmp_path / "campaign"),
        }
        config.update(overrides)
        return config
    return make
