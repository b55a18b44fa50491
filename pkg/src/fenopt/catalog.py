"""Window product catalog: glass panes, gas gaps, frames, and the rule
engine that assembles them into legal double-glazing compositions.

Composition legality follows a fixed rule set over pane thicknesses, solar
transmittance, and low-emissivity coating placement, with the allowed
coating faces depending on the facade solar orientation.  Window faces are
numbered #1 (outermost) to #4 (innermost); a pane's own faces are #1
(front, toward the exterior when mounted) and #2 (back).

Center-of-glass U-values come from a resistance-network model (surface
films, glass conduction, and a cavity combining gas conduction with
radiative exchange between the two cavity-facing surfaces).  Cavity
convection is deliberately ignored (conduction-only gas layer), which is
documented behaviour: U-values for wide cavities come out lower than a
convecting model would give.  Catalog files may carry explicit per-
composition U/SHGC/VT values (e.g. measured or vendor data) which override
the built-in models.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DegenerateGap, GeometryError, ParseError, ValidationError

# Resistance-network constants (SI).
R_SE = 0.04           # exterior surface film, m2K/W
R_SI = 0.13           # interior surface film, m2K/W
GLASS_CONDUCTIVITY = 1.0   # W/mK
GAS_CONDUCTIVITY = {"Air": 0.025, "Argon": 0.017}  # W/mK
STEFAN_BOLTZMANN = 5.67e-8
CAVITY_MEAN_TEMP_K = 283.0

# A pane face counts as low-e coated below this hemispherical emissivity.
LOWE_EMISSIVITY_MAX = 0.4
# Solar-control glass per the orientation rules: reduced solar transmittance.
SOLAR_CONTROL_TSOL = 0.54

THICKNESS_CLASSES = (4, 6, 8, 10)
GAP_WIDTHS_MM = (6, 8, 10, 12, 16)
FRAME_WIDTH_M = 0.07


class GlassCategory(str, Enum):
    CLEAR = "Clear"
    LOW_TSOL = "LowTsol"
    SPECTRALLY_SELECTIVE = "SpectrallySelective"
    HIGH_TSOL_LOWE = "HighTsolLowE"
    LOW_TSOL_BACK_LOWE = "LowTsolBackLowE"


class Gas(str, Enum):
    AIR = "Air"
    ARGON = "Argon"


class Orientation(str, Enum):
    """Facade solar-orientation sectors, azimuth 0 = north, clockwise."""

    N = "N"
    E = "E"
    SE = "SE"
    S = "S"
    SW = "SW"
    W = "W"


SOUTH_LIKE = {Orientation.S, Orientation.SE, Orientation.SW}
EAST_WEST = {Orientation.E, Orientation.W}


def classify_orientation(azimuth_deg: float) -> Orientation:
    """Map a facade azimuth (degrees from north, clockwise) to its sector."""
    az = azimuth_deg % 360.0
    if az < 60.0 or az >= 300.0:
        return Orientation.N
    if az < 120.0:
        return Orientation.E
    if az < 150.0:
        return Orientation.SE
    if az < 210.0:
        return Orientation.S
    if az < 240.0:
        return Orientation.SW
    return Orientation.W


@dataclass(frozen=True)
class GlassPane:
    id: str
    thickness_mm: int
    tsol: float
    tvis: float
    emis_front: float
    emis_back: float
    category: GlassCategory

    def __post_init__(self):
        if self.thickness_mm not in THICKNESS_CLASSES:
            raise ValidationError(
                f"thickness {self.thickness_mm} mm not in {THICKNESS_CLASSES}",
                entry_id=self.id,
            )
        for name, v in (("tsol", self.tsol), ("tvis", self.tvis)):
            if not 0.0 < v <= 1.0:
                raise ValidationError(f"{name}={v} outside (0, 1]", entry_id=self.id)
        for name, v in (("emis_front", self.emis_front), ("emis_back", self.emis_back)):
            if not 0.0 < v <= 1.0:
                raise ValidationError(f"{name}={v} outside (0, 1]", entry_id=self.id)
        self._check_category()

    def _check_category(self):
        cat = self.category
        coated = self.low_e_faces
        if cat in (GlassCategory.CLEAR, GlassCategory.LOW_TSOL,
                   GlassCategory.SPECTRALLY_SELECTIVE):
            if coated:
                raise ValidationError(f"category {cat.value} must be uncoated",
                                      entry_id=self.id)
        if cat is GlassCategory.LOW_TSOL and not 0.23 <= self.tsol <= 0.54:
            raise ValidationError("LowTsol band is tsol 0.23-0.54", entry_id=self.id)
        if cat is GlassCategory.SPECTRALLY_SELECTIVE:
            if not 0.56 <= self.tvis <= 0.68:
                raise ValidationError("SpectrallySelective band is tvis 0.56-0.68",
                                      entry_id=self.id)
            if not 0.25 <= self.tsol <= 0.54:
                raise ValidationError("SpectrallySelective band is tsol 0.25-0.54",
                                      entry_id=self.id)
        if cat is GlassCategory.HIGH_TSOL_LOWE:
            if not coated:
                raise ValidationError("HighTsolLowE needs a low-e face", entry_id=self.id)
            if not 0.60 <= self.tsol <= 0.82:
                raise ValidationError("HighTsolLowE band is tsol 0.60-0.82",
                                      entry_id=self.id)
        if cat is GlassCategory.LOW_TSOL_BACK_LOWE:
            if coated != (2,):
                raise ValidationError("LowTsolBackLowE must be coated on the back only",
                                      entry_id=self.id)
            if not 0.26 <= self.tsol <= 0.55:
                raise ValidationError("LowTsolBackLowE band is tsol 0.26-0.55",
                                      entry_id=self.id)

    @property
    def low_e_faces(self) -> tuple:
        """Pane faces (1=front, 2=back) carrying a low-e coating."""
        faces = []
        if self.emis_front < LOWE_EMISSIVITY_MAX:
            faces.append(1)
        if self.emis_back < LOWE_EMISSIVITY_MAX:
            faces.append(2)
        return tuple(faces)

    @property
    def has_low_e(self) -> bool:
        return bool(self.low_e_faces)


@dataclass(frozen=True)
class GapSpec:
    gas: Gas
    width_mm: int

    def __post_init__(self):
        if self.width_mm not in GAP_WIDTHS_MM:
            raise ValidationError(
                f"gap width {self.width_mm} mm not in {GAP_WIDTHS_MM}",
                entry_id=self.label,
            )

    @property
    def conductivity_w_mk(self) -> float:
        return GAS_CONDUCTIVITY[self.gas.value]

    @property
    def label(self) -> str:
        return f"{self.gas.value}_{self.width_mm}"


@dataclass(frozen=True)
class FrameSpec:
    id: str
    material: str
    u_value_w_m2k: float
    width_m: float = FRAME_WIDTH_M

    def __post_init__(self):
        if not 0.5 <= self.u_value_w_m2k <= 5.0:
            raise ValidationError(f"frame U {self.u_value_w_m2k} outside [0.5, 5.0]",
                                  entry_id=self.id)
        if self.width_m != FRAME_WIDTH_M:
            raise ValidationError(f"frame width must be {FRAME_WIDTH_M} m",
                                  entry_id=self.id)


@dataclass(frozen=True)
class GlazingComposition:
    outer: GlassPane
    gap: GapSpec
    inner: GlassPane
    u_g: float
    shgc: float
    vt: float
    code: str

    def triple(self) -> tuple:
        return (self.u_g, self.shgc, self.vt)


def composition_code(outer: GlassPane, gap: GapSpec, inner: GlassPane) -> str:
    return f"{outer.id},{gap.label},{inner.id}"


def parse_composition_code(catalog: "Catalog", code: str) -> GlazingComposition:
    """Resolve a composition code back to a full composition.

    Raises ParseError if the code does not name catalog entries.
    """
    parts = code.split(",")
    if len(parts) != 3:
        raise ParseError(f"composition code needs 3 comma fields: {code!r}")
    outer = catalog.glasses_by_id.get(parts[0])
    inner = catalog.glasses_by_id.get(parts[2])
    if outer is None or inner is None:
        raise ParseError(f"unknown glass id in code {code!r}")
    gap_parts = parts[1].split("_")
    if len(gap_parts) != 2:
        raise ParseError(f"bad gap field in code {code!r}")
    try:
        gap = GapSpec(Gas(gap_parts[0]), int(gap_parts[1]))
    except (ValueError, ValidationError) as exc:
        raise ParseError(f"bad gap field in code {code!r}: {exc}") from exc
    return catalog.build_composition(outer, gap, inner)


def center_of_glass_u(outer: GlassPane, gap: GapSpec, inner: GlassPane) -> float:
    """Center-of-glass U-value of a double-glazing unit, W/m2K.

    Series resistances: exterior film, outer pane conduction, cavity
    (gas conduction in parallel with radiative exchange between the
    cavity-facing surfaces #2 and #3), inner pane conduction, interior
    film.  The cavity gas is treated as purely conductive.
    """
    if gap.width_mm <= 0:
        raise DegenerateGap(f"gap width {gap.width_mm} mm")
    s = gap.width_mm / 1000.0
    h_gas = gap.conductivity_w_mk / s
    eps_a = outer.emis_back    # window face #2
    eps_b = inner.emis_front   # window face #3
    h_rad = (4.0 * STEFAN_BOLTZMANN * CAVITY_MEAN_TEMP_K ** 3
             / (1.0 / eps_a + 1.0 / eps_b - 1.0))
    r_gap = 1.0 / (h_gas + h_rad)
    d1 = outer.thickness_mm / 1000.0
    d2 = inner.thickness_mm / 1000.0
    r_total = R_SE + d1 / GLASS_CONDUCTIVITY + r_gap + d2 / GLASS_CONDUCTIVITY + R_SI
    return 1.0 / r_total


def composition_optics(outer: GlassPane, inner: GlassPane) -> tuple:
    """(SHGC, VT) of a double-glazing unit from pane transmittances.

    Two-pane transmission with a single inter-reflection term; pane
    reflectance is estimated from its transmittance.  Used only when the
    catalog does not carry explicit values for the composition.
    """
    def stack(t1, t2):
        r1 = 0.08 + 0.2 * (1.0 - t1)
        r2 = 0.08 + 0.2 * (1.0 - t2)
        return min(1.0, t1 * t2 / (1.0 - r1 * r2))

    return stack(outer.tsol, inner.tsol), stack(outer.tvis, inner.tvis)


@dataclass(frozen=True)
class WindowAssembly:
    """A glazing composition mounted in a frame at given overall dimensions."""

    glazing: GlazingComposition
    frame: FrameSpec
    width_m: float
    height_m: float
    psi_gf: float = 0.0  # glass-frame linear transmittance; bridges neglected

    def __post_init__(self):
        if self.width_m < 0.60 or self.height_m < 1.00:
            raise GeometryError(
                f"window {self.width_m:.2f}x{self.height_m:.2f} below 0.60x1.00 minimum")
        if self.a_g <= 0.0:
            raise GeometryError("glass area <= 0 after frame inset")

    @property
    def a_g(self) -> float:
        inset = 2.0 * self.frame.width_m
        return (self.width_m - inset) * (self.height_m - inset)

    @property
    def a_f(self) -> float:
        return self.width_m * self.height_m - self.a_g

    @property
    def area(self) -> float:
        return self.width_m * self.height_m

    @property
    def u_w(self) -> float:
        return window_u(self)


def window_u(assembly: WindowAssembly) -> float:
    """Whole-window U-value: area-weighted glazing and frame contributions."""
    a_g = assembly.a_g
    a_f = assembly.a_f
    if a_g <= 0.0:
        raise GeometryError("glass area <= 0")
    u_g = assembly.glazing.u_g
    u_f = assembly.frame.u_value_w_m2k
    # psi_gf is kept in the formula for fidelity; it is 0 by policy.
    perimeter = 2.0 * (assembly.width_m + assembly.height_m)
    return (u_g * a_g + u_f * a_f + perimeter * assembly.psi_gf) / (a_g + a_f)


@dataclass
class Catalog:
    glasses: list
    gaps: list
    frames: list
    overrides: dict = field(default_factory=dict)  # code -> {u_g?, shgc?, vt?}

    @property
    def glasses_by_id(self) -> dict:
        return {g.id: g for g in self.glasses}

    @property
    def frames_by_id(self) -> dict:
        return {f.id: f for f in self.frames}

    def build_composition(self, outer: GlassPane, gap: GapSpec,
                          inner: GlassPane) -> GlazingComposition:
        """Assemble a composition, applying explicit catalog overrides."""
        code = composition_code(outer, gap, inner)
        ov = self.overrides.get(code, {})
        if "u_g" in ov:
            u_g = float(ov["u_g"])
            if not 0.0 < u_g <= 3.5:
                raise ValidationError(f"override u_g {u_g} outside (0, 3.5]",
                                      entry_id=code)
        else:
            u_g = center_of_glass_u(outer, gap, inner)
        shgc_h, vt_h = composition_optics(outer, inner)
        shgc = float(ov.get("shgc", shgc_h))
        vt = float(ov.get("vt", vt_h))
        for name, v in (("shgc", shgc), ("vt", vt)):
            if not 0.0 < v <= 1.0:
                raise ValidationError(f"{name}={v} outside (0, 1]", entry_id=code)
        return GlazingComposition(outer, gap, inner, u_g, shgc, vt, code)


def load_catalog(path) -> Catalog:
    """Load a catalog JSON file.

    Top-level arrays: ``glasses``, ``gaps``, ``frames``; optional
    ``compositions`` with explicit per-code U/SHGC/VT overrides.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read catalog {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed catalog JSON {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("catalog root must be a JSON object")

    glasses = []
    seen = set()
    for entry in raw.get("glasses", []):
        try:
            pane = GlassPane(
                id=str(entry["id"]),
                thickness_mm=int(entry["thickness_mm"]),
                tsol=float(entry["tsol"]),
                tvis=float(entry["tvis"]),
                emis_front=float(entry["emis_front"]),
                emis_back=float(entry["emis_back"]),
                category=GlassCategory(entry["category"]),
            )
        except KeyError as exc:
            raise ParseError(f"glass entry missing field {exc}")
        except ValueError as exc:
            raise ValidationError(str(exc), entry_id=entry.get("id"))
        if pane.id in seen:
            raise ValidationError("duplicate glass id", entry_id=pane.id)
        if "," in pane.id:
            raise ValidationError("glass id may not contain ','", entry_id=pane.id)
        seen.add(pane.id)
        glasses.append(pane)

    gaps = []
    seen_gaps = set()
    for entry in raw.get("gaps", []):
        try:
            gap = GapSpec(Gas(entry["gas"]), int(entry["width_mm"]))
        except KeyError as exc:
            raise ParseError(f"gap entry missing field {exc}")
        except ValueError as exc:
            raise ValidationError(str(exc), entry_id=str(entry))
        if gap.label in seen_gaps:
            raise ValidationError("duplicate gap", entry_id=gap.label)
        seen_gaps.add(gap.label)
        gaps.append(gap)

    frames = []
    seen_frames = set()
    for entry in raw.get("frames", []):
        try:
            frame = FrameSpec(
                id=str(entry["id"]),
                material=str(entry["material"]),
                u_value_w_m2k=float(entry["u_value_w_m2k"]),
                width_m=float(entry.get("width_m", FRAME_WIDTH_M)),
            )
        except KeyError as exc:
            raise ParseError(f"frame entry missing field {exc}")
        if frame.id in seen_frames:
            raise ValidationError("duplicate frame id", entry_id=frame.id)
        seen_frames.add(frame.id)
        frames.append(frame)

    overrides = {}
    for entry in raw.get("compositions", []):
        code = entry.get("code")
        if not code:
            raise ParseError("composition override missing 'code'")
        if code in overrides:
            raise ValidationError("duplicate composition override", entry_id=code)
        overrides[code] = {k: float(entry[k]) for k in ("u_g", "shgc", "vt")
                           if k in entry}

    catalog = Catalog(glasses, gaps, frames, overrides)
    # Override codes must resolve against the loaded entries.
    for code in overrides:
        parse_composition_code(catalog, code)
    return catalog


def _thickness_ok(outer: GlassPane, inner: GlassPane) -> bool:
    # Outer at least as thick as inner, at most one thickness class thicker.
    step = (THICKNESS_CLASSES.index(outer.thickness_mm)
            - THICKNESS_CLASSES.index(inner.thickness_mm))
    return 0 <= step <= 1


def _coating_placement_ok(outer: GlassPane, inner: GlassPane,
                          orientation: Orientation) -> bool:
    # Coatings may only face the cavity: outer back (#2) or inner front (#3);
    # south-like facades additionally forbid the inner-pane placement.
    if outer.low_e_faces not in ((), (2,)):
        return False
    if orientation in SOUTH_LIKE:
        return not inner.has_low_e
    return inner.low_e_faces in ((), (1,))


def legal_composition(outer: GlassPane, inner: GlassPane,
                      orientation: Orientation) -> bool:
    """Orientation-aware legality of a pane pairing (gap choice is free)."""
    if not _thickness_ok(outer, inner):
        return False
    if outer.has_low_e and inner.has_low_e:
        return False
    if not _coating_placement_ok(outer, inner, orientation):
        return False
    # Solar control, when present, must sit on the outer pane.
    if inner.tsol < SOLAR_CONTROL_TSOL and outer.tsol >= SOLAR_CONTROL_TSOL:
        return False
    if orientation is Orientation.N and outer.tsol < SOLAR_CONTROL_TSOL:
        return False
    return True


def enumerate_compositions(catalog: Catalog, orientation) -> list:
    """All legal glazing compositions for a facade orientation.

    Output is sorted by composition code so equal catalogs always
    enumerate identically.
    """
    if isinstance(orientation, str):
        orientation = Orientation(orientation)
    out = []
    for outer in catalog.glasses:
        for inner in catalog.glasses:
            if not legal_composition(outer, inner, orientation):
                continue
            for gap in catalog.gaps:
                out.append(catalog.build_composition(outer, gap, inner))
    out.sort(key=lambda c: c.code)
    return out
