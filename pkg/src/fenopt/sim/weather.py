"""EPW weather file ingestion.

Reads the standard EnergyPlus weather format: a LOCATION header line
followed by seven more header lines and 8760 hourly data rows.  Only the
fields the thermal model needs are kept: dry-bulb temperature (field 7),
global horizontal (14), direct normal (15), and diffuse horizontal (16)
irradiance, all 1-indexed within a data row, plus site latitude,
longitude, and UTC offset from the LOCATION line.

Missing-value sentinels (9999/999 for irradiance, 99.9 for temperature)
are repaired: irradiance falls back to 0, temperature is linearly
interpolated between the nearest valid neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParseError, ShortFileError

HOURS_PER_YEAR = 8760
IRRADIANCE_SENTINELS = (9999.0, 999.0)
TEMP_SENTINEL = 99.9

# 0-indexed positions within a data row.
COL_DRYBULB = 6
COL_GHI = 13
COL_DNI = 14
COL_DHI = 15

# Month of each hour of a non-leap year, 1-indexed.
_DAYS_PER_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def month_of_hour() -> np.ndarray:
    months = []
    for m, days in enumerate(_DAYS_PER_MONTH, start=1):
        months.extend([m] * days * 24)
    return np.array(months, dtype=np.int64)


def day_of_year_of_hour() -> np.ndarray:
    return np.arange(HOURS_PER_YEAR) // 24 + 1


def hour_of_day_of_hour() -> np.ndarray:
    return np.arange(HOURS_PER_YEAR) % 24


@dataclass(frozen=True)
class WeatherSeries:
    name: str
    latitude: float
    longitude: float
    utc_offset: float
    drybulb_c: np.ndarray
    dni_w_m2: np.ndarray
    dhi_w_m2: np.ndarray
    ghi_w_m2: np.ndarray

    def __post_init__(self):
        if len(self.drybulb_c) != HOURS_PER_YEAR:
            raise ShortFileError(
                f"weather series needs {HOURS_PER_YEAR} hours, "
                f"got {len(self.drybulb_c)}")
        if not -90.0 <= self.latitude <= 90.0:
            raise ParseError(f"latitude {self.latitude} outside [-90, 90]")
        for name in ("dni_w_m2", "dhi_w_m2", "ghi_w_m2"):
            if np.any(getattr(self, name) < 0):
                raise ParseError(f"{name} has negative values")


def _interpolate_sentinels(values: np.ndarray) -> np.ndarray:
    bad = values >= TEMP_SENTINEL
    if not bad.any():
        return values
    idx = np.arange(len(values))
    good = ~bad
    if not good.any():
        raise ParseError("every temperature value is a missing sentinel")
    values = values.copy()
    values[bad] = np.interp(idx[bad], idx[good], values[good])
    return values


def parse_epw(path) -> WeatherSeries:
    """Parse an EPW file into a WeatherSeries."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read EPW {path}: {exc}") from exc
    if not lines or not lines[0].upper().startswith("LOCATION"):
        raise ParseError("first line must be a LOCATION header", line=1)

    loc = lines[0].split(",")
    try:
        latitude = float(loc[6])
        longitude = float(loc[7])
        utc_offset = float(loc[8])
        name = loc[1].strip() or "unnamed"
    except (IndexError, ValueError) as exc:
        raise ParseError(f"bad LOCATION header: {exc}", line=1) from exc

    data_start = None
    for i, line in enumerate(lines):
        head = line.split(",", 1)[0].strip().upper()
        if head == "DATA PERIODS":
            data_start = i + 1
            break
    if data_start is None:
        # Headerless variant: find the first row that looks like data.
        data_start = 8 if len(lines) > 8 else 1

    rows = [ln for ln in lines[data_start:] if ln.strip()]
    if len(rows) < HOURS_PER_YEAR:
        raise ShortFileError(
            f"EPW has {len(rows)} data rows, needs {HOURS_PER_YEAR}",
            line=data_start + len(rows))
    if len(rows) > HOURS_PER_YEAR:
        raise ParseError(
            f"EPW has {len(rows)} data rows; a typical year has exactly "
            f"{HOURS_PER_YEAR}", line=data_start + HOURS_PER_YEAR + 1)

    drybulb = np.empty(HOURS_PER_YEAR)
    ghi = np.empty(HOURS_PER_YEAR)
    dni = np.empty(HOURS_PER_YEAR)
    dhi = np.empty(HOURS_PER_YEAR)
    for i, row in enumerate(rows):
        fields = row.split(",")
        if len(fields) <= COL_DHI:
            raise ParseError(f"data row has {len(fields)} fields",
                             line=data_start + i + 1)
        try:
            drybulb[i] = float(fields[COL_DRYBULB])
            ghi[i] = float(fields[COL_GHI])
            dni[i] = float(fields[COL_DNI])
            dhi[i] = float(fields[COL_DHI])
        except ValueError as exc:
            raise ParseError(f"bad numeric field: {exc}",
                             line=data_start + i + 1) from exc

    for arr in (ghi, dni, dhi):
        bad = np.isin(arr, IRRADIANCE_SENTINELS)
        arr[bad] = 0.0
    drybulb = _interpolate_sentinels(drybulb)

    return WeatherSeries(
        name=name, latitude=latitude, longitude=longitude,
        utc_offset=utc_offset, drybulb_c=drybulb, dni_w_m2=dni,
        dhi_w_m2=dhi, ghi_w_m2=ghi,
    )
