"""Escape hatch to an external (EnergyPlus-class) evaluator process.

Protocol: one JSON request object on the child's standard input, one
JSON response line on its standard output.

    request:  {"schema_version": 1, "weather_path": ..., "building": {...},
               "design": {...}}
    response: {"edh": ..., "edc": ..., "nct": ..., "q_sol_jul": ...}

All numbers SI as in the built-in evaluator.  A fresh process is spawned
per evaluation and owns exactly one in-flight request.
"""

from __future__ import annotations

import json
import subprocess

from ..errors import EvaluatorTimeout, ProtocolError, SpawnError
from .engine import SimulationResult

SCHEMA_VERSION = 1
DEFAULT_TIMEOUT_S = 120.0


def building_payload(building) -> dict:
    return {
        "zone_floor_area_m2": building.zone_floor_area_m2,
        "ceiling_height_m": building.ceiling_height_m,
        "wall_u_w_m2k": building.wall_u_w_m2k,
        "n50_ach": building.n50_ach,
        "facades": [
            {"name": f.name, "azimuth_deg": f.azimuth_deg,
             "width_m": f.width_m, "height_m": f.height_m}
            for f in building.facades
        ],
    }


def external_evaluate(design, building, weather_path, command,
                      timeout_s: float = DEFAULT_TIMEOUT_S) -> SimulationResult:
    """Run one design through an external evaluator command."""
    request = {
        "schema_version": SCHEMA_VERSION,
        "weather_path": str(weather_path),
        "building": building_payload(building),
        "design": design.to_dict(),
    }
    if isinstance(command, str):
        command = [command]
    try:
        proc = subprocess.Popen(
            list(command), stdin=subprocess.PIPE, stdout=subprocess.PIPE,
            text=True)
    except OSError as exc:
        raise SpawnError(f"cannot start evaluator {command!r}: {exc}") from exc
    try:
        out, _ = proc.communicate(json.dumps(request) + "\n", timeout=timeout_s)
    except subprocess.TimeoutExpired as exc:
        proc.kill()
        proc.wait()
        raise EvaluatorTimeout(
            f"evaluator did not answer within {timeout_s} s") from exc

    line = next((ln for ln in out.splitlines() if ln.strip()), "")
    if not line:
        raise ProtocolError("evaluator produced no response line")
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"malformed evaluator response: {exc}") from exc
    try:
        metrics = {k: float(payload[k]) for k in ("edh", "edc", "nct", "q_sol_jul")}
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"evaluator response missing metric: {exc}") from exc
    if any(v < 0 for v in metrics.values()):
        raise ProtocolError(f"evaluator metrics must be nonnegative: {metrics}")
    return SimulationResult(
        edh=metrics["edh"], edc=metrics["edc"], nct=metrics["nct"],
        q_sol_jul=metrics["q_sol_jul"],
        energy_heat_kwh=metrics["edh"] * building.zone_floor_area_m2,
        energy_cool_kwh=metrics["edc"] * building.zone_floor_area_m2,
        energy_solar_kwh=0.0, energy_internal_kwh=0.0,
        energy_envelope_kwh=0.0, energy_ventilation_kwh=0.0,
        storage_delta_kwh=0.0,
    )
