"""Built-in hourly thermal evaluator and its supporting models."""

from .weather import WeatherSeries, parse_epw
from .solar import incident_irradiance, solar_position, sunlit_fraction
from .blinds import SC_PROGRAMS, ShadingControlProgram, blind_state
from .engine import (SimulationResult, SimulatorSettings, prepare_context,
                     simulate, simulate_batch)
from .external import external_evaluate

__all__ = [
    "WeatherSeries", "parse_epw", "solar_position", "incident_irradiance",
    "sunlit_fraction", "ShadingControlProgram", "SC_PROGRAMS", "blind_state",
    "SimulationResult", "SimulatorSettings", "prepare_context", "simulate",
    "simulate_batch", "external_evaluate",
]
