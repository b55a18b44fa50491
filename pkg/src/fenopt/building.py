"""Case-study dwelling model: zone constants, facades, window slots, and
the sizing/shading rule checks plus envelope-level metrics.

Geometry is always loaded from a JSON file; nothing dimensional is
hard-coded.  The bundled ``data/building.json`` reconstructs a 60 m2
corner apartment with north, south, and west facades whose window slots
fit every design the reports reference.

Sizing rules: windows are rectangular, at least 0.60 m wide and 1.00 m
high, snapped to a 0.1 m grid (values are truncated, not rounded), and
must fit the slot's designated area; kitchen and bathroom slots have a
fixed 0.60 m width.  Fixed-shading rules: overhang/fin depths live in
[0.20, 1.50] m (anything shorter is simply not built), extensions in
[0, 0.30] m, all on the 0.1 m grid, with overlapping overhang/fin
extensions at a shared corner clipped to 0.07 m.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .catalog import Orientation, WindowAssembly, classify_orientation
from .errors import GeometryError, ParseError, ValidationError

MIN_WINDOW_WIDTH = 0.60
MIN_WINDOW_HEIGHT = 1.00
GRID_STEP = 0.1
MIN_SHADING_DEPTH = 0.20
MAX_SHADING_DEPTH = 1.50
MAX_SHADING_EXT = 0.30
CORNER_CLIP = 0.07
# Fixed shading is permitted everywhere except east-facing facades.
SHADING_FORBIDDEN = {Orientation.E}

HABITABLE_ROOMS = ("Living", "SingleBed", "DoubleBed")


class Room(str, Enum):
    KITCHEN = "Kitchen"
    LIVING = "Living"
    BATH = "Bath"
    SINGLE_BED = "SingleBed"
    DOUBLE_BED = "DoubleBed"


def snap_down(value: float, step: float = GRID_STEP) -> float:
    """Truncate to the grid (first decimal for the 0.1 m grid).

    A tiny tolerance absorbs float noise so exact grid values survive
    (snap_down(1.5000000001) == 1.5, snap_down(1.54) == 1.5), and the
    result is re-rounded so every grid point has one canonical float.
    """
    return round(math.floor(value / step + 1e-9) * step, 6)


def snap_shading(value: float) -> float:
    """Grid snap for shading dimensions, preserving the 0.07 m corner clip."""
    if abs(value - CORNER_CLIP) < 1e-9:
        return CORNER_CLIP
    return snap_down(value)


@dataclass(frozen=True)
class WindowSlot:
    id: str
    room: Room
    room_floor_area_m2: float
    designated_width_m: float
    designated_height_m: float
    width_fixed: bool = False

    def __post_init__(self):
        if self.room_floor_area_m2 <= 0:
            raise ValidationError("room floor area must be positive", entry_id=self.id)
        if (self.designated_width_m < MIN_WINDOW_WIDTH
                or self.designated_height_m < MIN_WINDOW_HEIGHT):
            raise ValidationError(
                "designated area must admit the 0.60 x 1.00 minimum window",
                entry_id=self.id)


@dataclass(frozen=True)
class Facade:
    name: str
    azimuth_deg: float
    width_m: float
    height_m: float
    slots: tuple = ()

    def __post_init__(self):
        if self.width_m <= 0 or self.height_m <= 0:
            raise ValidationError("facade dimensions must be positive",
                                  entry_id=self.name)

    @property
    def gross_area_m2(self) -> float:
        return self.width_m * self.height_m

    @property
    def orientation(self) -> Orientation:
        return classify_orientation(self.azimuth_deg)


@dataclass(frozen=True)
class ShadingGeometry:
    """Fixed shading around one window: a top overhang and two side fins.

    A zero depth means the element is absent.  Extensions grow the panel
    beyond the window edge (overhangs sideways, fins upward); bottom
    elements do not exist by rule.
    """

    overhang_depth_m: float = 0.0
    overhang_ext_left_m: float = 0.0
    overhang_ext_right_m: float = 0.0
    fin_left_depth_m: float = 0.0
    fin_right_depth_m: float = 0.0
    fin_ext_top_m: float = 0.0

    def values(self) -> tuple:
        return (self.overhang_depth_m, self.overhang_ext_left_m,
                self.overhang_ext_right_m, self.fin_left_depth_m,
                self.fin_right_depth_m, self.fin_ext_top_m)

    @property
    def any_device(self) -> bool:
        return (self.overhang_depth_m > 0 or self.fin_left_depth_m > 0
                or self.fin_right_depth_m > 0)

    def panel_area(self, window_width: float, window_height: float) -> float:
        """Total panel area of the built devices for one window, m2."""
        area = 0.0
        if self.overhang_depth_m > 0:
            area += self.overhang_depth_m * (
                window_width + self.overhang_ext_left_m + self.overhang_ext_right_m)
        for depth in (self.fin_left_depth_m, self.fin_right_depth_m):
            if depth > 0:
                area += depth * (window_height + self.fin_ext_top_m)
        return area


@dataclass(frozen=True)
class BuildingModel:
    zone_floor_area_m2: float
    ceiling_height_m: float
    wall_u_w_m2k: float
    internal_capacitance_kj_m2k: float
    internal_mass_area_m2: float
    n50_ach: float
    compactness_m3_m2: float
    facades: tuple

    @property
    def volume_m3(self) -> float:
        return self.zone_floor_area_m2 * self.ceiling_height_m

    @property
    def slots(self) -> tuple:
        return tuple(s for f in self.facades for s in f.slots)

    @property
    def gross_envelope_area_m2(self) -> float:
        return sum(f.gross_area_m2 for f in self.facades)

    def facade_of(self, slot_id: str) -> Facade:
        for f in self.facades:
            for s in f.slots:
                if s.id == slot_id:
                    return f
        raise KeyError(slot_id)

    def habitable_floor_areas(self) -> dict:
        out = {}
        for slot in self.slots:
            if slot.room.value in HABITABLE_ROOMS:
                out[slot.room.value] = slot.room_floor_area_m2
        return out


def load_building(path) -> BuildingModel:
    """Load the geometry JSON (zone constants, facades, window slots)."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read geometry {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed geometry JSON {path}: {exc}") from exc

    facades = []
    seen_slots = set()
    for fac in raw.get("facades", []):
        slots = []
        for s in fac.get("slots", []):
            slot = WindowSlot(
                id=str(s["id"]),
                room=Room(s["room"]),
                room_floor_area_m2=float(s["room_floor_area_m2"]),
                designated_width_m=float(s["designated_width_m"]),
                designated_height_m=float(s["designated_height_m"]),
                width_fixed=bool(s.get("width_fixed", False)),
            )
            if slot.id in seen_slots:
                raise ValidationError("duplicate slot id", entry_id=slot.id)
            seen_slots.add(slot.id)
            slots.append(slot)
        facades.append(Facade(
            name=str(fac["name"]),
            azimuth_deg=float(fac["azimuth_deg"]),
            width_m=float(fac["width_m"]),
            height_m=float(fac["height_m"]),
            slots=tuple(slots),
        ))
    model = BuildingModel(
        zone_floor_area_m2=float(raw["zone_floor_area_m2"]),
        ceiling_height_m=float(raw["ceiling_height_m"]),
        wall_u_w_m2k=float(raw["wall_u_w_m2k"]),
        internal_capacitance_kj_m2k=float(raw["internal_capacitance_kj_m2k"]),
        internal_mass_area_m2=float(raw["internal_mass_area_m2"]),
        n50_ach=float(raw["n50_ach"]),
        compactness_m3_m2=float(raw["compactness_m3_m2"]),
        facades=tuple(facades),
    )
    # Designated areas must fit within their facade.
    for fac in model.facades:
        if sum(s.designated_width_m for s in fac.slots) > fac.width_m + 1e-9:
            raise ValidationError("designated widths exceed facade width",
                                  entry_id=fac.name)
    return model


def validate_window(slot: WindowSlot, width_m: float, height_m: float) -> tuple:
    """Clamp a requested window size into the slot's legal set.

    Returns ``(width, height, clamped)``; ``clamped`` reports that a
    bound (minimum size, designated area, or fixed width) had to be
    enforced.  Grid truncation alone does not set the flag.
    """
    w = snap_down(width_m)
    h = snap_down(height_m)
    snapped = (w, h)
    if slot.width_fixed:
        w = MIN_WINDOW_WIDTH
    w = min(max(w, MIN_WINDOW_WIDTH), snap_down(slot.designated_width_m))
    h = min(max(h, MIN_WINDOW_HEIGHT), snap_down(slot.designated_height_m))
    return w, h, (w, h) != snapped


def validate_shading(geom: ShadingGeometry, facade_orientation=None) -> ShadingGeometry:
    """Return the canonical (buildable) form of a raw shading request.

    Values are grid-truncated; depths under 0.20 m zero out the element;
    extensions clamp to [0, 0.30]; overlapping overhang/fin extensions at
    a shared top corner are clipped to 0.07 m.  Facades where fixed
    shading is not permitted canonicalize to no devices at all.
    """
    if facade_orientation is not None and not isinstance(facade_orientation, Orientation):
        facade_orientation = classify_orientation(float(facade_orientation))
    if facade_orientation in SHADING_FORBIDDEN:
        return ShadingGeometry()

    def depth(v):
        v = min(max(snap_shading(v), 0.0), MAX_SHADING_DEPTH)
        return v if v >= MIN_SHADING_DEPTH else 0.0

    def ext(v):
        return min(max(snap_shading(v), 0.0), MAX_SHADING_EXT)

    od = depth(geom.overhang_depth_m)
    ol = ext(geom.overhang_ext_left_m) if od > 0 else 0.0
    orr = ext(geom.overhang_ext_right_m) if od > 0 else 0.0
    fl = depth(geom.fin_left_depth_m)
    fr = depth(geom.fin_right_depth_m)
    ft = ext(geom.fin_ext_top_m) if (fl > 0 or fr > 0) else 0.0

    if od > 0 and fl > 0:
        ol = min(ol, CORNER_CLIP)
    if od > 0 and fr > 0:
        orr = min(orr, CORNER_CLIP)
    if od > 0 and (fl > 0 or fr > 0):
        ft = min(ft, CORNER_CLIP)

    return ShadingGeometry(od, ol, orr, fl, fr, ft)


def window_to_floor_ratio(window_areas_by_room: dict, floor_areas_by_room: dict) -> dict:
    """Glazed-area-to-floor-area ratio per room."""
    out = {}
    for room, floor in floor_areas_by_room.items():
        if floor <= 0:
            raise GeometryError(f"floor area of {room} must be positive")
        out[room] = window_areas_by_room.get(room, 0.0) / floor
    return out


def heat_transfer_k(model: BuildingModel, assemblies: dict) -> float:
    """Area-weighted mean U of the exposed envelope (three facades).

    ``assemblies`` maps slot id -> WindowAssembly.  Opaque wall area is
    facade gross area minus its windows, at the wall U-value; floors,
    ceilings, and party walls are adiabatic and excluded.
    """
    num = 0.0
    den = 0.0
    for fac in model.facades:
        win_area = 0.0
        for slot in fac.slots:
            asm = assemblies[slot.id]
            win_area += asm.area
            num += asm.area * asm.u_w
        opaque = fac.gross_area_m2 - win_area
        if opaque < 0:
            raise GeometryError(f"windows exceed facade area on {fac.name}")
        num += opaque * model.wall_u_w_m2k
        den += fac.gross_area_m2
    return num / den
