"""Automated exterior blind control programs SC0-SC6.

A program combines an annual availability schedule, an activation
trigger, and a slat mode.  Schedule 1 makes blinds available only in the
inter-seasonal months (Apr, May, Sep, Oct); schedule 2 covers Apr-Oct;
the temperature-triggered programs are available year round.  Blinds
always retract at night.  When active, the blind scales window solar
transmission by a slat-mode multiplier, nudged by the slat reflectance
(darker slats block a little more, lighter a little less).
"""

from __future__ import annotations

from dataclasses import dataclass

SCHEDULE1_MONTHS = (4, 5, 9, 10)
SCHEDULE2_MONTHS = (4, 5, 6, 7, 8, 9, 10)
# Alternative reading of schedule 1 (blinds retract in the inter-seasonal
# months too): selectable via SimulatorSettings.schedule1_months.
SCHEDULE1_MONTHS_ALT = (6, 7, 8)

RADIATION_THRESHOLD_W_M2 = 200.0
TEMPERATURE_THRESHOLD_C = 27.0

MULT_BLOCK_SUN = 0.10
MULT_HORIZONTAL = 0.35
MULT_FLOOR = 0.05
REFLECTANCE_SWING = 0.03
REFLECTANCE_MID = 0.57  # midpoint of the 0.29-0.85 catalog range
REFLECTANCE_HALFSPAN = 0.28


@dataclass(frozen=True)
class ShadingControlProgram:
    id: int
    schedule: str        # "None", "AnnualWindowShading1/2", "Always"
    trigger: str         # "SolarRadiation" or "SolarAndTemperature"
    slat_mode: str       # "BlockSun" or "Horizontal"

    @property
    def name(self) -> str:
        return f"SC{self.id}"


SC_PROGRAMS = (
    ShadingControlProgram(0, "None", "SolarRadiation", "BlockSun"),
    ShadingControlProgram(1, "AnnualWindowShading1", "SolarRadiation", "BlockSun"),
    ShadingControlProgram(2, "AnnualWindowShading1", "SolarRadiation", "Horizontal"),
    ShadingControlProgram(3, "AnnualWindowShading2", "SolarRadiation", "BlockSun"),
    ShadingControlProgram(4, "AnnualWindowShading2", "SolarRadiation", "Horizontal"),
    ShadingControlProgram(5, "Always", "SolarAndTemperature", "BlockSun"),
    ShadingControlProgram(6, "Always", "SolarAndTemperature", "Horizontal"),
)


def slat_multiplier(slat_mode: str, reflectance: float) -> float:
    """Solar transmission multiplier of an active blind."""
    base = MULT_BLOCK_SUN if slat_mode == "BlockSun" else MULT_HORIZONTAL
    swing = REFLECTANCE_SWING * (reflectance - REFLECTANCE_MID) / REFLECTANCE_HALFSPAN
    return max(MULT_FLOOR, base + swing)


def schedule_months(program: ShadingControlProgram,
                    schedule1_months=SCHEDULE1_MONTHS) -> tuple:
    if program.schedule == "None":
        return ()
    if program.schedule == "AnnualWindowShading1":
        return tuple(schedule1_months)
    if program.schedule == "AnnualWindowShading2":
        return SCHEDULE2_MONTHS
    return tuple(range(1, 13))


def blind_state(sc, month: int, hour: int, incident_w_m2: float,
                zone_temp_c: float, reflectance: float = REFLECTANCE_MID,
                schedule1_months=SCHEDULE1_MONTHS) -> tuple:
    """(active, transmission multiplier) of one blind at one time step.

    Night hours (no incident radiation) always retract.  ``sc`` may be a
    program id or a ShadingControlProgram.
    """
    program = SC_PROGRAMS[sc] if isinstance(sc, int) else sc
    if program.id == 0:
        return False, 1.0
    if incident_w_m2 <= 0.0:
        return False, 1.0
    if month not in schedule_months(program, schedule1_months):
        return False, 1.0
    if incident_w_m2 <= RADIATION_THRESHOLD_W_M2:
        return False, 1.0
    if (program.trigger == "SolarAndTemperature"
            and zone_temp_c <= TEMPERATURE_THRESHOLD_C):
        return False, 1.0
    return True, slat_multiplier(program.slat_mode, reflectance)
