"""Campaign run configuration: JSON schema, validation, problem assembly.

A run config names the location preset (normalization tables, regulatory
limits), the design scenario, the input files (weather EPW, geometry
JSON, catalog JSON; ``bundled:`` references resolve into the package
data), the algorithm and its options, and the campaign shape (runs,
budget, seeds, output directory).
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field

from . import data_path
from .building import load_building
from .catalog import load_catalog
from .encoding import Scenario
from .errors import ConfigError
from .fitness import FitnessConfig, Location
from .search.ga import GAConfig
from .search.hybrid import HybridConfig
from .search.problems import FenestrationProblem
from .sim.engine import SimulatorSettings
from .sim.weather import parse_epw

ALGORITHMS = ("hybrid", "shade", "de", "ga")
BUNDLED_WEATHER = {
    Location.LEON: "weather/leon.epw",
    Location.MADRID: "weather/madrid.epw",
    Location.SEVILLA: "weather/sevilla.epw",
}


@dataclass
class RunConfig:
    location: str = "madrid"
    scenario: str = "S1"
    weather: str | None = None
    geometry: str | None = None
    catalog: str | None = None
    algorithm: str = "hybrid"
    runs: int = 15
    budget: int = 2000
    seed: int = 42
    seeds: list | None = None
    top_k: int = 10
    parallel: int = 1
    output_dir: str = "campaign_out"
    evaluator: dict = field(default_factory=lambda: {"type": "builtin"})
    hybrid: dict = field(default_factory=dict)
    ga: dict = field(default_factory=dict)
    simulator: dict = field(default_factory=dict)
    count_cache_hits: bool = False

    def validate(self) -> "RunConfig":
        try:
            Location(self.location)
        except ValueError:
            raise ConfigError(f"unknown location {self.location!r}")
        try:
            Scenario(self.scenario)
        except ValueError:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; "
                              f"expected one of {ALGORITHMS}")
        if self.runs < 1 or self.budget < 1:
            raise ConfigError("runs and budget must be positive")
        if self.seeds is not None:
            if len(self.seeds) != self.runs:
                raise ConfigError("seeds list must match the run count")
            if len(set(self.seeds)) != len(self.seeds):
                raise ConfigError("seeds must be unique per run")
        ev_type = self.evaluator.get("type", "builtin")
        if ev_type not in ("builtin", "external"):
            raise ConfigError(f"unknown evaluator type {ev_type!r}")
        if ev_type == "external" and not self.evaluator.get("command"):
            raise ConfigError("external evaluator needs a 'command'")
        for name in ("weather", "geometry", "catalog"):
            path = getattr(self, name)
            if path and not str(path).startswith("bundled:") \
                    and not os.path.exists(path):
                raise ConfigError(f"{name} file does not exist: {path}")
        return self

    def run_seeds(self) -> list:
        if self.seeds is not None:
            return list(self.seeds)
        return [self.seed + i for i in range(self.runs)]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**raw).validate()

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed config JSON {path}: {exc}") from exc
        return cls.from_dict(raw)


def resolve_input(path, default_name: str):
    """Resolve a config path: None -> bundled default, 'bundled:x' -> data."""
    if path is None:
        return data_path(default_name)
    path = str(path)
    if path.startswith("bundled:"):
        return data_path(path[len("bundled:"):])
    return path


def build_problem(config: RunConfig) -> FenestrationProblem:
    config.validate()
    location = Location(config.location)
    weather_path = resolve_input(config.weather,
                                 BUNDLED_WEATHER[location])
    geometry_path = resolve_input(config.geometry, "building.json")
    catalog_path = resolve_input(config.catalog, "catalog.json")

    building = load_building(geometry_path)
    catalog = load_catalog(catalog_path)
    weather = parse_epw(weather_path)
    fitness_config = FitnessConfig.for_location(location)
    settings = SimulatorSettings(**config.simulator) if config.simulator \
        else SimulatorSettings()

    external_command = None
    timeout = 120.0
    if config.evaluator.get("type") == "external":
        external_command = config.evaluator["command"]
        timeout = float(config.evaluator.get("timeout_s", 120.0))
    return FenestrationProblem(
        building, catalog, weather, fitness_config,
        scenario=Scenario(config.scenario), settings=settings,
        count_cache_hits=config.count_cache_hits,
        external_command=external_command, external_timeout_s=timeout,
        weather_path=str(weather_path),
    )


def hybrid_config(config: RunConfig) -> HybridConfig:
    return HybridConfig(**config.hybrid) if config.hybrid else HybridConfig()


def ga_config(config: RunConfig) -> GAConfig:
    return GAConfig(**config.ga) if config.ga else GAConfig()
