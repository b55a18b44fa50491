#!/usr/bin/env python3
"""Generate the bundled synthetic EPW weather files.

Smooth, deterministic typical-year series for the three case-study
climates: a seasonal + diurnal temperature model and a clear-sky solar
model attenuated by a per-site clearness factor with a slow cloud cycle.
The files are committed under src/fenopt/data/weather/; rerun this
script only to regenerate them.
"""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fenopt.sim.solar import solar_position  # noqa: E402

SITES = {
    "leon": dict(lat=42.60, lon=-5.57, tz=1.0, elev=838,
                 t_mean=11.2, t_amp=8.6, diurnal=5.5, clearness=0.58),
    "madrid": dict(lat=40.41, lon=-3.70, tz=1.0, elev=667,
                   t_mean=15.0, t_amp=9.8, diurnal=6.5, clearness=0.66),
    "sevilla": dict(lat=37.39, lon=-5.98, tz=1.0, elev=34,
                    t_mean=19.2, t_amp=8.4, diurnal=7.0, clearness=0.74),
}

DAYS_PER_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def day_month_table():
    out = []
    for month, days in enumerate(DAYS_PER_MONTH, start=1):
        for day in range(1, days + 1):
            out.append((month, day))
    return out


def make_site(name, cfg, out_dir):
    lat, lon, tz = cfg["lat"], cfg["lon"], cfg["tz"]
    rows = []
    calendar = day_month_table()
    for h in range(8760):
        doy = h // 24 + 1
        hod = h % 24
        month, dom = calendar[doy - 1]

        season = math.cos(2.0 * math.pi * (doy - 203) / 365.0)
        diurnal = math.cos(2.0 * math.pi * (hod + 0.5 - 15.0) / 24.0)
        cloud_cycle = 0.5 + 0.5 * math.sin(2.0 * math.pi * doy / 9.3)
        temp = (cfg["t_mean"] + cfg["t_amp"] * season
                + cfg["diurnal"] * diurnal + 1.5 * (cloud_cycle - 0.5))

        solar_hour = hod + 0.5 + (lon - 15.0 * tz) / 15.0
        alt, _ = solar_position(lat, doy, solar_hour)
        if alt > 0.5:
            sin_alt = math.sin(math.radians(alt))
            clear = 0.45 + 0.55 * cfg["clearness"] * (0.6 + 0.4 * cloud_cycle)
            dni = 1050.0 * math.exp(-0.14 / sin_alt) * clear
            dni = min(dni, 998.0)
            dhi = (90.0 + 140.0 * (1.0 - clear)) * sin_alt
            ghi = dni * sin_alt + dhi
        else:
            dni = dhi = ghi = 0.0

        rows.append((2019, month, dom, hod + 1, temp, ghi, dni, dhi))

    lines = [
        f"LOCATION,{name.title()},ESP,ESP,Synthetic-TY,000000,"
        f"{lat:.2f},{lon:.2f},{tz:.1f},{cfg['elev']:.1f}",
        "DESIGN CONDITIONS,0",
        "TYPICAL/EXTREME PERIODS,0",
        "GROUND TEMPERATURES,0",
        "HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0",
        "COMMENTS 1,Synthetic typical-year file for desk-scale testing",
        "COMMENTS 2,Generated by tools/make_weather.py",
        "DATA PERIODS,1,1,Data,Sunday,1/1,12/31",
    ]
    for (year, month, dom, hour, temp, ghi, dni, dhi) in rows:
        dew = temp - 5.0
        fields = [
            str(year), str(month), str(dom), str(hour), "0", "?",
            f"{temp:.1f}", f"{dew:.1f}", "60", "101325",
            "9999", "9999", "9999",
            f"{ghi:.0f}", f"{dni:.0f}", f"{dhi:.0f}",
            "999999", "9999", "9999", "9999",
            "180", "3.0", "5", "5", "20000", "77777", "9", "999999999",
            "0", "0.0", "0", "88", "0.0", "0", "0",
        ]
        lines.append(",".join(fields))

    path = os.path.join(out_dir, f"{name}.epw")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {path}")


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..",
                           "src", "fenopt", "data", "weather")
    os.makedirs(out_dir, exist_ok=True)
    for name, cfg in SITES.items():
        make_site(name, cfg, out_dir)


if __name__ == "__main__":
    main()
