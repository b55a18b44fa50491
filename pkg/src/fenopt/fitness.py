"""Scalar fitness: weighted, normalized quality terms with satisfaction
regions, plus heavily weighted regulatory penalties.

Structure: F = sum_i w_i * N(alpha_i * f_i) + alpha_p * sum_j p_j, where
alpha_i is 1 normally and alpha_s (= 1/1000) once a quality target is
met, N clamps min-max normalized values to [0, 1], and alpha_p = 1000
keeps any non-compliant design above every compliant one.  Penalties are
linear past their regulatory limit and exactly zero on the compliant
side; there is no reward for margin.

Per-location constants: the energy-demand satisfaction targets set the
normalization windows (min = target - 5, max = target + 50) so one
kWh/m2 of heating equals one of cooling; the comfort-hours metric uses a
fixed 388/938 window around its 438 h target.  The two material-cost
terms (total window area, total fixed-shading panel area) normalize over
the search-space extremes and never satisfy out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import IncompleteResult

ALPHA_P = 1000.0
ALPHA_S = 1.0 / 1000.0

ZONE_AREA_M2 = 60.0
ENERGY_RANGE_KWH_M2 = 50.0

NCT_RANGE_HOURS = 500.0
NCT_SATISFACTION = 438.0
NCT_MIN, NCT_MAX = 388.0, 938.0
ALPHA_NCT_HOURS_PER_KWH = 6.0
ALPHA_SHADING_PER_KWH = 20.0
ALPHA_WINDOW_PER_KWH = 60.0

WINDOW_AREA_RANGE = (3.0, 17.57)
SHADING_AREA_RANGE = (0.0, 44.27)

SOLAR_LIMIT_KWH_M2 = 2.0
SOLAR_DENOM = 3.5 - SOLAR_LIMIT_KWH_M2
WINDOW_U_CEILING = 5.5
K_CEILING = 0.9
RWF_MIN = 0.12


class Location(str, Enum):
    LEON = "leon"
    MADRID = "madrid"
    SEVILLA = "sevilla"


EDH_SATISFACTION = {Location.LEON: 46.0, Location.MADRID: 30.0, Location.SEVILLA: 12.0}
EDC_SATISFACTION = {Location.LEON: 10.0, Location.MADRID: 15.0, Location.SEVILLA: 20.0}
WINDOW_U_LIMIT = {Location.LEON: 1.8, Location.MADRID: 1.8, Location.SEVILLA: 2.3}
K_MAX = {Location.LEON: 0.54, Location.MADRID: 0.59, Location.SEVILLA: 0.69}


@dataclass(frozen=True)
class QualitySpec:
    metric: str
    vmin: float
    vmax: float
    satisfaction: float   # -inf for cost metrics: never satisfied out
    weight: float
    alpha_v: float = 0.0  # real-world units per kWh; informs the weight only

    def __post_init__(self):
        if not self.vmin < self.vmax:
            raise ValueError(f"{self.metric}: min must be < max")
        if math.isfinite(self.satisfaction) and not self.vmin < self.satisfaction <= self.vmax:
            raise ValueError(f"{self.metric}: satisfaction outside (min, max]")


def weight_from_real_world(alpha_v: float, range_v: float,
                           area: float = ZONE_AREA_M2,
                           range_e: float = ENERGY_RANGE_KWH_M2) -> float:
    """Weight of a quality term from its real-world kWh equivalence."""
    if alpha_v <= 0 or range_v <= 0 or area <= 0 or range_e <= 0:
        raise ValueError("weight inputs must be positive")
    return alpha_v * range_v / (area * range_e)


def normalize(value: float, spec: QualitySpec) -> float:
    """Min-max normalize into [0, 1], clamped at both ends."""
    x = (value - spec.vmin) / (spec.vmax - spec.vmin)
    return min(1.0, max(0.0, x))


def satisfaction_multiplier(value: float, spec: QualitySpec,
                            alpha_s: float = ALPHA_S) -> float:
    """alpha_s once the quality target is met, 1 otherwise."""
    return alpha_s if value <= spec.satisfaction else 1.0


def penalty_solar(q_sol_jul: float) -> float:
    """July solar-gain penalty; zero at the 2 kWh/m2 acceptance limit."""
    return max(0.0, (q_sol_jul - SOLAR_LIMIT_KWH_M2) / SOLAR_DENOM)


def penalty_window_u(u_w: float, location: Location) -> float:
    """Window U-value penalty against the regional limit."""
    x_lim = WINDOW_U_LIMIT[Location(location)]
    return max(0.0, (u_w - x_lim) / (WINDOW_U_CEILING - x_lim))


def penalty_k(k: float, location: Location) -> float:
    """Envelope mean-U penalty against the regional K limit."""
    k_max = K_MAX[Location(location)]
    return max(0.0, (k - k_max) / (K_CEILING - k_max))


def penalty_min_glazing(r_wf: float) -> float:
    """Daylight floor: penalize a room's window-to-floor ratio under 0.12."""
    return max(0.0, (RWF_MIN - r_wf) / RWF_MIN)


@dataclass(frozen=True)
class FitnessConfig:
    location: Location
    qualities: tuple
    alpha_p: float = ALPHA_P
    alpha_s: float = ALPHA_S

    @classmethod
    def for_location(cls, location) -> "FitnessConfig":
        loc = Location(location)
        edh_sat = EDH_SATISFACTION[loc]
        edc_sat = EDC_SATISFACTION[loc]
        qualities = (
            QualitySpec("edh", edh_sat - 5.0, edh_sat + 50.0, edh_sat, 1.0),
            QualitySpec("edc", edc_sat - 5.0, edc_sat + 50.0, edc_sat, 1.0),
            QualitySpec("nct", NCT_MIN, NCT_MAX, NCT_SATISFACTION,
                        weight_from_real_world(ALPHA_NCT_HOURS_PER_KWH, NCT_RANGE_HOURS),
                        alpha_v=ALPHA_NCT_HOURS_PER_KWH),
            QualitySpec("shading_cost", *SHADING_AREA_RANGE, float("-inf"),
                        weight_from_real_world(
                            ALPHA_SHADING_PER_KWH,
                            SHADING_AREA_RANGE[1] - SHADING_AREA_RANGE[0]),
                        alpha_v=ALPHA_SHADING_PER_KWH),
            QualitySpec("window_cost", *WINDOW_AREA_RANGE, float("-inf"),
                        weight_from_real_world(
                            ALPHA_WINDOW_PER_KWH,
                            WINDOW_AREA_RANGE[1] - WINDOW_AREA_RANGE[0]),
                        alpha_v=ALPHA_WINDOW_PER_KWH),
        )
        return cls(location=loc, qualities=qualities)

    def quality(self, metric: str) -> QualitySpec:
        for q in self.qualities:
            if q.metric == metric:
                return q
        raise KeyError(metric)

    def to_dict(self) -> dict:
        return {
            "location": self.location.value,
            "alpha_p": self.alpha_p,
            "alpha_s": self.alpha_s,
            "qualities": [
                {"metric": q.metric, "min": q.vmin, "max": q.vmax,
                 "satisfaction": q.satisfaction, "weight": q.weight,
                 "alpha_v": q.alpha_v}
                for q in self.qualities
            ],
            "window_u_limit": WINDOW_U_LIMIT[self.location],
            "k_max": K_MAX[self.location],
            "q_sol_limit": SOLAR_LIMIT_KWH_M2,
            "rwf_min": RWF_MIN,
        }


@dataclass(frozen=True)
class FitnessBreakdown:
    """Every intermediate of one fitness evaluation, enough to replay F."""

    raw: dict           # metric -> raw value
    multipliers: dict   # metric -> satisfaction multiplier applied
    normalized: dict    # metric -> N(alpha * value)
    weighted: dict      # metric -> weight * normalized
    satisfied: dict     # metric -> bool
    penalties: dict     # penalty kind -> value
    penalty_total: float
    quality_total: float
    total: float

    def recompute_total(self, alpha_p: float = ALPHA_P) -> float:
        return sum(self.weighted.values()) + alpha_p * sum(self.penalties.values())

    def to_dict(self) -> dict:
        return {
            "raw": dict(self.raw),
            "multipliers": dict(self.multipliers),
            "normalized": dict(self.normalized),
            "weighted": dict(self.weighted),
            "satisfied": dict(self.satisfied),
            "penalties": dict(self.penalties),
            "penalty_total": self.penalty_total,
            "quality_total": self.quality_total,
            "total": self.total,
        }


def total_fitness(result, design, config: FitnessConfig) -> FitnessBreakdown:
    """Score one evaluated design.

    ``result`` must expose edh/edc/nct/q_sol_jul; ``design`` must expose
    the envelope metrics a canonical design carries (per-window U-values,
    K, per-room window-to-floor ratios, total window and shading areas).
    """
    for attr in ("edh", "edc", "nct", "q_sol_jul"):
        if getattr(result, attr, None) is None:
            raise IncompleteResult(f"simulation result missing {attr}")

    raw = {
        "edh": float(result.edh),
        "edc": float(result.edc),
        "nct": float(result.nct),
        "shading_cost": float(design.shading_area_total),
        "window_cost": float(design.window_area_total),
    }
    multipliers, normalized, weighted, satisfied = {}, {}, {}, {}
    quality_total = 0.0
    for spec in config.qualities:
        value = raw[spec.metric]
        mult = satisfaction_multiplier(value, spec, config.alpha_s)
        norm = normalize(mult * value, spec)
        term = spec.weight * norm
        multipliers[spec.metric] = mult
        normalized[spec.metric] = norm
        weighted[spec.metric] = term
        satisfied[spec.metric] = mult != 1.0
        quality_total += term

    penalties = {
        "solar": penalty_solar(float(result.q_sol_jul)),
        "window_u": sum(penalty_window_u(u, config.location)
                        for u in design.u_w_by_slot.values()),
        "k": penalty_k(design.k_value, config.location),
        "rwf": sum(penalty_min_glazing(r) for r in design.rwf_by_room.values()),
    }
    penalty_total = sum(penalties.values())
    total = quality_total + config.alpha_p * penalty_total
    return FitnessBreakdown(
        raw=raw, multipliers=multipliers, normalized=normalized,
        weighted=weighted, satisfied=satisfied, penalties=penalties,
        penalty_total=penalty_total, quality_total=quality_total, total=total,
    )
