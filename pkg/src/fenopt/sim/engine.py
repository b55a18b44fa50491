"""Single-node hourly thermal model of the dwelling.

One thermal mass (internal partitions plus zone air) exchanges heat with
outdoor air through the exposed envelope (opaque walls at the wall
U-value, windows at their assembled U-values) and through ventilation
(constant mechanical supply, n50-derived infiltration, and a free-cooling
airflow of up to 4 ach that engages whenever the zone would drift past
the cooling setpoint while outdoor air is cooler).  Solar gains enter per
window as incident irradiance x sunlit fraction x blind multiplier x
SHGC x glass area; internal gains follow 24 h schedules.  An ideal HVAC
clamps the node into the 22-25 C band each sub-step and the clamping
energy integrates into the annual heating/cooling demands.

Integration is explicit Euler with 6 sub-steps per hour; blind and
free-cooling decisions that depend on zone temperature are frozen at the
start of each hour/sub-step respectively.  The implementation evaluates
whole batches of designs at once (vectorized across designs), which is
what makes optimization campaigns affordable; a single design is just a
batch of one.  Identical inputs produce bit-identical results.

Comfort accounting: an hour counts against the comfort budget when the
end-of-hour node temperature leaves the seasonal band (20.5-25.5 C in
Nov-Apr at winter clothing, 23.0-28.0 C in May-Oct at summer clothing).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..building import BuildingModel
from ..errors import NumericalError
from .blinds import (RADIATION_THRESHOLD_W_M2, SC_PROGRAMS, SCHEDULE1_MONTHS,
                     TEMPERATURE_THRESHOLD_C, schedule_months, slat_multiplier)
from .solar import incident_irradiance, solar_position, sunlit_fraction
from .weather import (HOURS_PER_YEAR, WeatherSeries, day_of_year_of_hour,
                      hour_of_day_of_hour, month_of_hour)

AIR_VOLUMETRIC_HEAT = 1.2 * 1005.0   # J/m3K
SECONDS_PER_HOUR = 3600.0
J_PER_KWH = 3.6e6
TEMP_GUARD_LOW = -50.0
TEMP_GUARD_HIGH = 80.0

WINTER_BAND = (20.5, 25.5)   # Nov-Apr, 1.0 clo
SUMMER_BAND = (23.0, 28.0)   # May-Oct, 0.5 clo
WINTER_MONTHS = (11, 12, 1, 2, 3, 4)


def _default_schedules() -> dict:
    with resources.files("fenopt.data").joinpath("schedules.json").open() as fh:
        return json.load(fh)


@dataclass(frozen=True)
class SimulatorSettings:
    substeps_per_hour: int = 6
    heat_setpoint_c: float = 22.0
    cool_setpoint_c: float = 25.0
    hvac_enabled: bool = True
    mech_vent_m3_s: float = 0.024
    free_cooling_ach: float = 4.0
    infiltration_enabled: bool = True
    occupants: int = 4
    occupant_w: float = 117.0
    lighting_equipment_w_m2: float = 4.4
    schedules: dict | None = None
    schedule1_months: tuple = SCHEDULE1_MONTHS
    initial_temp_c: float = 22.0
    retain_traces: bool = False

    def gain_schedules(self) -> dict:
        return self.schedules if self.schedules is not None else _default_schedules()


@dataclass(frozen=True)
class SimulationResult:
    edh: float          # kWh/m2 year
    edc: float          # kWh/m2 year
    nct: float          # hours/year outside the comfort band
    q_sol_jul: float    # kWh/m2 of July window gains
    energy_heat_kwh: float
    energy_cool_kwh: float
    energy_solar_kwh: float
    energy_internal_kwh: float
    energy_envelope_kwh: float
    energy_ventilation_kwh: float
    storage_delta_kwh: float
    zone_temp_trace: np.ndarray | None = None

    def __post_init__(self):
        for name in ("edh", "edc", "nct", "q_sol_jul"):
            if getattr(self, name) < 0:
                raise NumericalError(f"{name} came out negative")

    def balance_residual(self) -> float:
        """Relative annual energy-balance error; ~0 for a sound run."""
        lhs = (self.energy_heat_kwh - self.energy_cool_kwh
               + self.energy_solar_kwh + self.energy_internal_kwh
               - self.energy_envelope_kwh - self.energy_ventilation_kwh)
        scale = max(1.0, abs(self.energy_heat_kwh) + abs(self.energy_cool_kwh)
                    + abs(self.energy_solar_kwh) + abs(self.energy_internal_kwh)
                    + abs(self.energy_envelope_kwh)
                    + abs(self.energy_ventilation_kwh))
        return abs(lhs - self.storage_delta_kwh) / scale

    def to_dict(self) -> dict:
        return {"edh": self.edh, "edc": self.edc, "nct": self.nct,
                "q_sol_jul": self.q_sol_jul}


class SimContext:
    """Weather- and building-dependent precomputation shared by all designs."""

    def __init__(self, building: BuildingModel, weather: WeatherSeries,
                 settings: SimulatorSettings):
        self.building = building
        self.weather = weather
        self.settings = settings

        self.month = month_of_hour()
        self.hour_of_day = hour_of_day_of_hour()
        day = day_of_year_of_hour()
        # Mid-hour apparent solar time from longitude and UTC offset.
        solar_hour = (self.hour_of_day + 0.5
                      + (weather.longitude - 15.0 * weather.utc_offset) / 15.0)
        self.sun_alt, self.sun_az = solar_position(weather.latitude, day, solar_hour)

        self.facades = {}
        for fac in building.facades:
            direct, diffuse = incident_irradiance(
                weather.dni_w_m2, weather.dhi_w_m2, weather.ghi_w_m2,
                self.sun_alt, self.sun_az, fac.azimuth_deg)
            sun_front = (self.sun_alt > 0) & (direct > 0)
            rel = (self.sun_az - fac.azimuth_deg + 180.0) % 360.0 - 180.0
            incident = direct + diffuse * (self.sun_alt > 0)
            radiation_trigger = incident > RADIATION_THRESHOLD_W_M2
            month_masks = {}
            for program in SC_PROGRAMS:
                months = schedule_months(program, settings.schedule1_months)
                month_masks[program.id] = np.isin(self.month, months)
            self.facades[fac.name] = {
                "direct": direct, "diffuse": diffuse, "incident": incident,
                "sun_front": sun_front, "rel_az": rel,
                "radiation_trigger": radiation_trigger,
                "month_masks": month_masks,
            }

        sched = settings.gain_schedules()
        occ = np.asarray(sched["occupancy"])[self.hour_of_day]
        light = np.asarray(sched["lighting"])[self.hour_of_day]
        equip = np.asarray(sched["equipment"])[self.hour_of_day]
        le_peak = settings.lighting_equipment_w_m2 * building.zone_floor_area_m2
        self.internal_gains_w = (settings.occupants * settings.occupant_w * occ
                                 + 0.5 * le_peak * light + 0.5 * le_peak * equip)

        winter = np.isin(self.month, WINTER_MONTHS)
        self.comfort_lo = np.where(winter, WINTER_BAND[0], SUMMER_BAND[0])
        self.comfort_hi = np.where(winter, WINTER_BAND[1], SUMMER_BAND[1])
        self.july_mask = self.month == 7

        volume = building.volume_m3
        self.capacitance_j_k = (building.internal_capacitance_kj_m2k * 1e3
                                * building.internal_mass_area_m2
                                + volume * AIR_VOLUMETRIC_HEAT)
        infil_ach = building.n50_ach / 20.0 if settings.infiltration_enabled else 0.0
        self.ua_vent_base = (settings.mech_vent_m3_s * AIR_VOLUMETRIC_HEAT
                             + infil_ach * volume * AIR_VOLUMETRIC_HEAT
                             / SECONDS_PER_HOUR)
        self.ua_free_cool = (settings.free_cooling_ach * volume
                             * AIR_VOLUMETRIC_HEAT / SECONDS_PER_HOUR)


def prepare_context(building: BuildingModel, weather: WeatherSeries,
                    settings: SimulatorSettings | None = None) -> SimContext:
    return SimContext(building, weather, settings or SimulatorSettings())


def _design_gain_matrices(ctx: SimContext, designs) -> tuple:
    """Hourly solar gains per design: (SOL, DELTA56, trigger56).

    SOL is the (8760, K) gain matrix with temperature-triggered blinds
    treated as retracted; DELTA56 is the reduction to apply in hours when
    they do activate (zone above the temperature threshold and radiation
    trigger satisfied).
    """
    n = len(designs)
    sol = np.zeros((HOURS_PER_YEAR, n))
    delta56 = np.zeros((HOURS_PER_YEAR, n))
    any56 = False

    for fac in ctx.building.facades:
        fdat = ctx.facades[fac.name]
        incident = fdat["incident"]
        sun_front = fdat["sun_front"]
        rel = fdat["rel_az"]
        alt = ctx.sun_alt

        shgc = np.array([d.composition_by_facade[fac.name].shgc for d in designs])
        sc_ids = np.array([d.sc_by_facade[fac.name] for d in designs])
        refl = np.array([d.reflectance for d in designs])

        # Blind transmission multiplier per hour x design for programs
        # whose state does not depend on zone temperature.
        mult = np.ones((HOURS_PER_YEAR, n))
        for k in range(n):
            sc = int(sc_ids[k])
            if sc == 0:
                continue
            program = SC_PROGRAMS[sc]
            active = fdat["month_masks"][sc] & fdat["radiation_trigger"]
            m = slat_multiplier(program.slat_mode, float(refl[k]))
            if program.trigger == "SolarAndTemperature":
                continue  # handled through delta56
            mult[active, k] = m

        for slot in fac.slots:
            widths = np.array([d.widths[slot.id] for d in designs])
            heights = np.array([d.heights[slot.id] for d in designs])
            a_g = np.array([d.assemblies[slot.id].a_g for d in designs])

            lit = np.ones((HOURS_PER_YEAR, n))
            geoms = [d.shading_by_facade[fac.name] for d in designs]
            if any(g.any_device for g in geoms):
                idx = np.flatnonzero(sun_front)
                for k, geom in enumerate(geoms):
                    if not geom.any_device:
                        continue
                    lit[idx, k] = sunlit_fraction(
                        widths[k], heights[k], geom, alt[idx], rel[idx])

            base = incident[:, None] * lit * (shgc * a_g)[None, :]
            sol += base * mult

            for k in range(n):
                sc = int(sc_ids[k])
                if sc and SC_PROGRAMS[sc].trigger == "SolarAndTemperature":
                    any56 = True
                    m = slat_multiplier(SC_PROGRAMS[sc].slat_mode, float(refl[k]))
                    trig = fdat["month_masks"][sc] & fdat["radiation_trigger"]
                    delta56[trig, k] += base[trig, k] * (1.0 - m)

    return sol, delta56, any56


def simulate_batch(designs, building=None, weather=None, scenario=None,
                   settings: SimulatorSettings | None = None,
                   ctx: SimContext | None = None) -> list:
    """Simulate many canonical designs against one weather/building pair.

    Pass a prepared ``ctx`` on hot paths; otherwise supply building and
    weather and a context is built on the fly.  ``scenario`` is accepted
    for interface symmetry (designs are already canonical for it).
    """
    if ctx is None:
        ctx = prepare_context(building, weather, settings or SimulatorSettings())
    st = ctx.settings
    n = len(designs)
    if n == 0:
        return []

    sol, delta56, any56 = _design_gain_matrices(ctx, designs)
    gains = sol + ctx.internal_gains_w[:, None]

    opaque = ctx.building.gross_envelope_area_m2
    ua_env = np.zeros(n)
    for k, d in enumerate(designs):
        win_area = d.window_area_total
        ua_env[k] = ((opaque - win_area) * ctx.building.wall_u_w_m2k
                     + sum(d.assemblies[s].area * d.u_w_by_slot[s]
                           for s in d.u_w_by_slot))
    ua0 = ua_env + ctx.ua_vent_base
    ua1 = ua0 + ctx.ua_free_cool

    c_heat = ctx.capacitance_j_k
    nsub = st.substeps_per_hour
    dt = SECONDS_PER_HOUR / nsub
    coef = dt / c_heat
    t_out = ctx.weather.drybulb_c

    a0 = 1.0 - coef * ua0
    a1 = 1.0 - coef * ua1
    b0 = coef * (gains + ua0[None, :] * t_out[:, None])
    b1 = coef * (gains + ua1[None, :] * t_out[:, None])

    heat_sp = st.heat_setpoint_c
    cool_sp = st.cool_setpoint_c
    hvac = st.hvac_enabled
    fc_on = ctx.ua_free_cool > 0.0

    temp = np.full(n, st.initial_temp_c)
    e_heat = np.zeros(n)       # accumulated in kelvin units; energy = C * sum
    e_cool = np.zeros(n)
    st_sum = np.zeros(n)       # sum of sub-step start temperatures
    s_fc = np.zeros(n)         # sum of (T - T_out) over free-cooling sub-steps
    nct = np.zeros(n, dtype=np.int64)
    qsol_delta = np.zeros(n)   # W h removed from July gains by temp-triggered blinds
    sol_delta = np.zeros(n)    # same, whole year
    trace = np.empty((HOURS_PER_YEAR, n)) if st.retain_traces else None

    tf = np.empty(n)
    t2 = np.empty(n)
    buf = np.empty(n)
    comfort_lo = ctx.comfort_lo
    comfort_hi = ctx.comfort_hi
    july = ctx.july_mask
    c_coef = coef
    delta_row_set = (set(np.flatnonzero(delta56.any(axis=1)).tolist())
                     if any56 else set())

    for h in range(HOURS_PER_YEAR):
        b0h = b0[h]
        b1h = b1[h]
        if any56 and h in delta_row_set:
            active = temp > TEMPERATURE_THRESHOLD_C
            if active.any():
                cut = delta56[h] * active
                b0h = b0h - c_coef * cut
                b1h = b1h - c_coef * cut
                sol_delta += cut
                if july[h]:
                    qsol_delta += cut
        toh = t_out[h]
        for _ in range(nsub):
            st_sum += temp
            np.multiply(temp, a0, out=tf)
            tf += b0h
            if fc_on and (tf > cool_sp).any():
                engage = (tf > cool_sp) & (temp > toh)
                if engage.any():
                    np.multiply(temp, a1, out=t2)
                    t2 += b1h
                    np.copyto(tf, t2, where=engage)
                    np.subtract(temp, toh, out=buf)
                    buf *= engage
                    s_fc += buf
            if hvac:
                np.subtract(heat_sp, tf, out=buf)
                np.maximum(buf, 0.0, out=buf)
                e_heat += buf
                np.add(tf, buf, out=tf)
                np.subtract(tf, cool_sp, out=buf)
                np.maximum(buf, 0.0, out=buf)
                e_cool += buf
                np.subtract(tf, buf, out=temp)
            else:
                np.copyto(temp, tf)
        if temp.max() > TEMP_GUARD_HIGH or temp.min() < TEMP_GUARD_LOW:
            raise NumericalError(
                f"zone temperature left [{TEMP_GUARD_LOW}, {TEMP_GUARD_HIGH}] C "
                f"at hour {h}")
        nct += (temp < comfort_lo[h]) | (temp > comfort_hi[h])
        if trace is not None:
            trace[h] = temp

    area = ctx.building.zone_floor_area_m2
    heat_j = c_heat * e_heat
    cool_j = c_heat * e_cool
    sol_wh = sol.sum(axis=0) - sol_delta
    qsol_wh = sol[july].sum(axis=0) - qsol_delta
    int_wh = float(ctx.internal_gains_w.sum())
    env_j = ua_env * dt * (st_sum - nsub * float(t_out.sum()))
    vent_j = (ctx.ua_vent_base * dt * (st_sum - nsub * float(t_out.sum()))
              + ctx.ua_free_cool * dt * s_fc)
    storage_j = c_heat * (temp - st.initial_temp_c)

    results = []
    for k in range(n):
        results.append(SimulationResult(
            edh=float(heat_j[k]) / J_PER_KWH / area,
            edc=float(cool_j[k]) / J_PER_KWH / area,
            nct=float(nct[k]),
            q_sol_jul=float(qsol_wh[k]) / 1000.0 / area,
            energy_heat_kwh=float(heat_j[k]) / J_PER_KWH,
            energy_cool_kwh=float(cool_j[k]) / J_PER_KWH,
            energy_solar_kwh=float(sol_wh[k]) / 1000.0,
            energy_internal_kwh=int_wh / 1000.0,
            energy_envelope_kwh=float(env_j[k]) / J_PER_KWH,
            energy_ventilation_kwh=float(vent_j[k]) / J_PER_KWH,
            storage_delta_kwh=float(storage_j[k]) / J_PER_KWH,
            zone_temp_trace=trace[:, k].copy() if trace is not None else None,
        ))
    return results


def simulate(design, building, weather, scenario=None,
             settings: SimulatorSettings | None = None,
             ctx: SimContext | None = None) -> SimulationResult:
    """Simulate one canonical design; see simulate_batch."""
    return simulate_batch([design], building, weather, scenario,
                          settings, ctx)[0]
