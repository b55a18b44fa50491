"""Solar geometry: sun position, irradiance on vertical facades, and the
sunlit fraction of a window behind fixed overhangs and fins.

All functions accept scalars or numpy arrays and are pure.  Azimuths are
degrees from north, clockwise.  The sunlit-fraction model treats the
overhang shadow as a horizontal band and the sun-side fin shadow as a
vertical band, each reduced by whatever part of it the device extensions
keep over the window; the lit area is the remaining rectangle.
"""

from __future__ import annotations

import numpy as np

GROUND_REFLECTANCE = 0.2
_DEG = np.pi / 180.0


def declination_deg(day_of_year):
    """Solar declination, degrees."""
    return 23.45 * np.sin(_DEG * 360.0 * (284.0 + np.asarray(day_of_year)) / 365.0)


def solar_position(latitude_deg, day_of_year, solar_hour):
    """(altitude_deg, azimuth_deg) of the sun.

    ``solar_hour`` is apparent solar time in hours (12 = solar noon).
    Azimuth is measured from north, clockwise; altitude <= 0 means the
    sun is down.
    """
    lat = np.asarray(latitude_deg) * _DEG
    dec = declination_deg(day_of_year) * _DEG
    hour_angle = (np.asarray(solar_hour) - 12.0) * 15.0 * _DEG

    sin_alt = (np.sin(lat) * np.sin(dec)
               + np.cos(lat) * np.cos(dec) * np.cos(hour_angle))
    altitude = np.arcsin(np.clip(sin_alt, -1.0, 1.0)) / _DEG

    azimuth = (np.arctan2(
        np.sin(hour_angle),
        np.cos(hour_angle) * np.sin(lat) - np.tan(dec) * np.cos(lat),
    ) / _DEG + 180.0) % 360.0
    return altitude, azimuth


def incident_irradiance(dni, dhi, ghi, sun_altitude_deg, sun_azimuth_deg,
                        facade_azimuth_deg):
    """(direct, diffuse) irradiance on a vertical facade, W/m2.

    Direct uses the incidence cosine on the vertical plane; diffuse is
    half the sky diffuse (isotropic) plus ground-reflected global with a
    0.5 view factor.
    """
    alt = np.asarray(sun_altitude_deg) * _DEG
    rel = (np.asarray(sun_azimuth_deg) - facade_azimuth_deg) * _DEG
    cos_inc = np.cos(alt) * np.cos(rel)
    sun_up = np.asarray(sun_altitude_deg) >= 0.0
    direct = np.asarray(dni) * np.maximum(0.0, cos_inc) * sun_up
    diffuse = np.asarray(dhi) / 2.0 + GROUND_REFLECTANCE * np.asarray(ghi) / 2.0
    return direct, diffuse


def sunlit_fraction(width_m, height_m, shading, sun_altitude_deg,
                    relative_azimuth_deg):
    """Unshaded fraction of a window behind its overhang and fins, 0..1.

    ``relative_azimuth_deg`` is sun azimuth minus facade azimuth,
    normalized to (-180, 180]; the caller guarantees the sun is up and
    in front of the facade (|rel| < 90).
    """
    alt = np.asarray(sun_altitude_deg, dtype=float) * _DEG
    rel = np.asarray(relative_azimuth_deg, dtype=float) * _DEG
    w = np.asarray(width_m, dtype=float)
    h = np.asarray(height_m, dtype=float)

    cos_rel = np.maximum(np.cos(rel), 1e-9)
    tan_profile = np.tan(alt) / cos_rel
    tan_horiz = np.abs(np.tan(rel))
    sun_right = rel > 0

    # Overhang: horizontal shadow band from the top, slipping sideways
    # away from the sun; the sun-side extension covers the slip.
    d_o = shading.overhang_depth_m
    if np.any(d_o > 0):
        band = np.minimum(h, d_o * np.maximum(tan_profile, 0.0))
        slip = d_o * tan_horiz
        ext_sun = np.where(sun_right, shading.overhang_ext_right_m,
                           shading.overhang_ext_left_m)
        uncovered = np.minimum(w, np.maximum(0.0, slip - ext_sun))
        band_eff = band * (w - uncovered) / w
        lit_h = h - band_eff
    else:
        lit_h = h * np.ones(np.broadcast(alt, rel, w).shape)

    # Sun-side fin: vertical shadow band slipping downward from the top;
    # the fin's top extension covers the slip.
    d_f = np.where(sun_right, shading.fin_right_depth_m, shading.fin_left_depth_m)
    if np.any(d_f > 0):
        band = np.minimum(w, d_f * tan_horiz)
        drop = d_f * np.maximum(tan_profile, 0.0)
        uncovered = np.minimum(h, np.maximum(0.0, drop - shading.fin_ext_top_m))
        band_eff = band * (h - uncovered) / h
        lit_w = w - band_eff
    else:
        lit_w = w * np.ones(np.broadcast(alt, rel, w).shape)

    frac = (np.maximum(lit_h, 0.0) * np.maximum(lit_w, 0.0)) / (w * h)
    frac = np.clip(frac, 0.0, 1.0)
    return float(frac) if frac.ndim == 0 else frac
