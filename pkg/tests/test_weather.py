import pytest

from fenopt import data_path
from fenopt.errors import ParseError, ShortFileError
from fenopt.sim.weather import HOURS_PER_YEAR, parse_epw


def test_bundled_epw_round_trip(madrid_weather):
    assert len(madrid_weather.drybulb_c) == HOURS_PER_YEAR
    assert madrid_weather.latitude == pytest.approx(40.41)
    assert madrid_weather.utc_offset == 1.0
    assert madrid_weather.ghi_w_m2.min() >= 0.0


def _mutate_bundled(tmp_path, mutate, name="mutated.epw"):
    lines = data_path("weather/madrid.epw").read_text().splitlines()
    lines = mutate(lines)
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


def test_dni_sentinel_maps_to_zero(tmp_path):
    def mutate(lines):
        header, rows = lines[:8], lines[8:]
        fields = rows[12].split(",")
        fields[14] = "9999"
        fields[15] = "999"
        rows[12] = ",".join(fields)
        return header + rows
    weather = parse_epw(_mutate_bundled(tmp_path, mutate))
    assert weather.dni_w_m2[12] == 0.0
    assert weather.dhi_w_m2[12] == 0.0


def test_temperature_sentinel_interpolated(tmp_path):
    def mutate(lines):
        header, rows = lines[:8], lines[8:]
        fields = rows[100].split(",")
        fields[6] = "99.9"
        rows[100] = ",".join(fields)
        return header + rows
    original = parse_epw(data_path("weather/madrid.epw"))
    weather = parse_epw(_mutate_bundled(tmp_path, mutate))
    lo = min(original.drybulb_c[99], original.drybulb_c[101])
    hi = max(original.drybulb_c[99], original.drybulb_c[101])
    assert lo <= weather.drybulb_c[100] <= hi


def test_truncated_file_rejected(tmp_path):
    def mutate(lines):
        return lines[:8] + lines[8:108]  # 100 data rows
    with pytest.raises(ShortFileError):
        parse_epw(_mutate_bundled(tmp_path, mutate))


def test_overlong_file_rejected(tmp_path):
    def mutate(lines):
        return lines + [lines[-1]]
    with pytest.raises(ParseError):
        parse_epw(_mutate_bundled(tmp_path, mutate))


def test_missing_location_header(tmp_path):
    path = tmp_path / "bad.epw"
    path.write_text("NOT A HEADER\n")
    with pytest.raises(ParseError):
        parse_epw(path)
