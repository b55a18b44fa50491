"""Continuous decision vector <-> buildable design.

Every decision is carried as a real number; canonicalization snaps the
vector onto the discrete design space: window dimensions truncate to the
0.1 m grid and clamp into their slot rules, the per-facade (U, SHGC, VT)
glazing target snaps to the nearest legal catalog composition for that
facade's orientation (range-normalized Euclidean distance), the frame
target snaps to the nearest frame U-value, the blind-program index snaps
to the nearest integer, and shading dimensions canonicalize through the
sizing rules (sub-20 cm devices vanish, overlapping corner extensions
clip to 7 cm).

Identical canonical designs share a key string, which memoizes the
expensive simulation step: a key is simulated at most once per cache.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .building import (BuildingModel, ShadingGeometry, heat_transfer_k,
                       validate_shading, validate_window, window_to_floor_ratio)
from .catalog import Catalog, WindowAssembly, enumerate_compositions
from .errors import EmptyNeighborhood

REFLECTANCE_RANGE = (0.29, 0.85)
SC_COUNT = 7
SHADING_DIM_NAMES = ("overhang_depth", "overhang_ext_left", "overhang_ext_right",
                     "fin_left_depth", "fin_right_depth", "fin_ext_top")


class Scenario(str, Enum):
    S1 = "S1"   # movable and fixed shading both available
    S2 = "S2"   # fixed shading only; blind programs pinned off


@dataclass(frozen=True)
class Dimension:
    name: str
    lo: float
    hi: float


@dataclass
class GenomeLayout:
    dimensions: list
    scenario: Scenario
    slot_dim_index: dict      # slot id -> {"width": i or None, "height": i}
    facade_glazing_index: dict  # facade name -> (iU, iSHGC, iVT)
    facade_sc_index: dict     # facade name -> i
    facade_shading_index: dict  # facade name -> {dim name -> i}
    frame_index: int
    reflectance_index: int

    def __len__(self):
        return len(self.dimensions)

    @property
    def names(self):
        return [d.name for d in self.dimensions]

    @property
    def lower(self):
        return np.array([d.lo for d in self.dimensions])

    @property
    def upper(self):
        return np.array([d.hi for d in self.dimensions])

    @property
    def pinned(self):
        """Indices the scenario pins (ignored by canonicalization)."""
        if self.scenario is Scenario.S2:
            return sorted(self.facade_sc_index.values())
        return []


@dataclass(frozen=True)
class Genome:
    values: np.ndarray
    layout: GenomeLayout

    def clamped(self) -> np.ndarray:
        return np.clip(self.values, self.layout.lower, self.layout.upper)


def normalized_distance(triple_a, triple_b, norm_ranges) -> float:
    """Euclidean distance of per-component range-normalized differences."""
    total = 0.0
    for a, b, r in zip(triple_a, triple_b, norm_ranges):
        if r <= 0:
            raise ValueError("normalization ranges must be positive")
        total += ((a - b) / r) ** 2
    return math.sqrt(total)


@dataclass(frozen=True)
class CanonicalDesign:
    """A snapped, buildable design plus the envelope metrics fitness needs."""

    slot_ids: tuple
    widths: dict              # slot id -> m
    heights: dict             # slot id -> m
    composition_by_facade: dict  # facade name -> GlazingComposition
    frame: object             # FrameSpec
    sc_by_facade: dict        # facade name -> int 0..6
    shading_by_facade: dict   # facade name -> ShadingGeometry
    reflectance: float
    assemblies: dict          # slot id -> WindowAssembly
    u_w_by_slot: dict
    k_value: float
    rwf_by_room: dict
    window_area_total: float
    shading_area_total: float
    wwr: float
    key: str

    def window_area(self, slot_id: str) -> float:
        return self.widths[slot_id] * self.heights[slot_id]

    def to_dict(self) -> dict:
        return {
            "reflectance": self.reflectance,
            "frame": self.frame.id,
            "windows": [
                {
                    "id": sid,
                    "width_m": self.widths[sid],
                    "height_m": self.heights[sid],
                    "area_m2": round(self.window_area(sid), 4),
                    "glazing_code": None if sid not in self.assemblies
                    else self.assemblies[sid].glazing.code,
                    "u_w": round(self.u_w_by_slot[sid], 4),
                }
                for sid in self.slot_ids
            ],
            "sc_by_facade": dict(self.sc_by_facade),
            "shading_by_facade": {
                name: dict(zip(SHADING_DIM_NAMES, geom.values()))
                for name, geom in self.shading_by_facade.items()
            },
            "k": round(self.k_value, 6),
            "wwr": round(self.wwr, 6),
            "window_area_total": round(self.window_area_total, 6),
            "shading_area_total": round(self.shading_area_total, 6),
            "rwf_by_room": {k: round(v, 6) for k, v in self.rwf_by_room.items()},
            "key": self.key,
        }


def build_layout(building: BuildingModel, catalog: Catalog,
                 scenario: Scenario) -> GenomeLayout:
    """Dimension list for a building/catalog pair, in a fixed documented order:
    per-slot sizes, frame U, reflectance, per-facade glazing triples,
    per-facade blind program, per-facade shading dimensions.
    """
    from .building import (GRID_STEP, MIN_WINDOW_HEIGHT, MIN_WINDOW_WIDTH,
                           snap_down)

    dims = []
    slot_dim_index = {}
    for fac in building.facades:
        for slot in fac.slots:
            entry = {"width": None, "height": None}
            if not slot.width_fixed:
                entry["width"] = len(dims)
                dims.append(Dimension(f"{slot.id}:width", MIN_WINDOW_WIDTH,
                                      snap_down(slot.designated_width_m)))
            entry["height"] = len(dims)
            dims.append(Dimension(f"{slot.id}:height", MIN_WINDOW_HEIGHT,
                                  snap_down(slot.designated_height_m)))
            slot_dim_index[slot.id] = entry

    frame_us = [f.u_value_w_m2k for f in catalog.frames]
    frame_index = len(dims)
    dims.append(Dimension("frame_u", min(frame_us), max(frame_us)))

    reflectance_index = len(dims)
    dims.append(Dimension("reflectance", *REFLECTANCE_RANGE))

    pools = {fac.name: enumerate_compositions(catalog, fac.orientation)
             for fac in building.facades}
    all_comps = [c for pool in pools.values() for c in pool]
    if not all_comps:
        raise EmptyNeighborhood("catalog admits no composition for any facade")
    triples = np.array([c.triple() for c in all_comps])
    lo3, hi3 = triples.min(axis=0), triples.max(axis=0)

    facade_glazing_index = {}
    for fac in building.facades:
        idx = []
        for j, label in enumerate(("glazing_u", "glazing_shgc", "glazing_vt")):
            idx.append(len(dims))
            dims.append(Dimension(f"{fac.name}:{label}", float(lo3[j]), float(hi3[j])))
        facade_glazing_index[fac.name] = tuple(idx)

    facade_sc_index = {}
    for fac in building.facades:
        facade_sc_index[fac.name] = len(dims)
        dims.append(Dimension(f"{fac.name}:sc", 0.0, SC_COUNT - 1 + 0.999))

    facade_shading_index = {}
    for fac in building.facades:
        entry = {}
        for name in SHADING_DIM_NAMES:
            hi = 0.3 if "ext" in name else 1.5
            entry[name] = len(dims)
            dims.append(Dimension(f"{fac.name}:{name}", 0.0, hi))
        facade_shading_index[fac.name] = entry

    return GenomeLayout(
        dimensions=dims, scenario=scenario, slot_dim_index=slot_dim_index,
        facade_glazing_index=facade_glazing_index, facade_sc_index=facade_sc_index,
        facade_shading_index=facade_shading_index, frame_index=frame_index,
        reflectance_index=reflectance_index,
    )


class Encoder:
    """Canonicalization engine for one (building, catalog, scenario)."""

    def __init__(self, building: BuildingModel, catalog: Catalog,
                 scenario: Scenario = Scenario.S1):
        self.building = building
        self.catalog = catalog
        self.scenario = Scenario(scenario)
        self.layout = build_layout(building, catalog, self.scenario)
        self.pools = {fac.name: enumerate_compositions(catalog, fac.orientation)
                      for fac in building.facades}
        self._pool_triples = {
            name: np.array([c.triple() for c in pool]) if pool else np.empty((0, 3))
            for name, pool in self.pools.items()
        }
        all_triples = np.vstack([t for t in self._pool_triples.values() if len(t)])
        ranges = all_triples.max(axis=0) - all_triples.min(axis=0)
        self.norm_ranges = np.where(ranges > 0, ranges, 1.0)
        self._frame_us = np.array([f.u_value_w_m2k for f in catalog.frames])
        self.lower = self.layout.lower
        self.upper = self.layout.upper

    def canonicalize(self, values) -> CanonicalDesign:
        x = np.clip(np.asarray(values, dtype=float), self.lower, self.upper)
        lay = self.layout

        widths, heights, assemblies, u_w_by_slot = {}, {}, {}, {}
        comp_by_facade, sc_by_facade, shading_by_facade = {}, {}, {}
        areas_by_room = {}
        window_area_total = 0.0
        shading_area_total = 0.0

        frame = self.catalog.frames[int(np.argmin(
            np.abs(self._frame_us - x[lay.frame_index])))]
        reflectance = math.floor(x[lay.reflectance_index] * 100.0 + 0.5) / 100.0

        for fac in self.building.facades:
            pool = self.pools[fac.name]
            if not pool:
                raise EmptyNeighborhood(
                    f"no legal composition for facade {fac.name} "
                    f"({fac.orientation.value})")
            target = x[list(lay.facade_glazing_index[fac.name])]
            d = ((self._pool_triples[fac.name] - target) / self.norm_ranges)
            comp = pool[int(np.argmin(np.einsum("ij,ij->i", d, d)))]
            comp_by_facade[fac.name] = comp

            if self.scenario is Scenario.S2:
                sc = 0
            else:
                sc = min(SC_COUNT - 1, int(math.floor(
                    x[lay.facade_sc_index[fac.name]] + 0.5)))
            sc_by_facade[fac.name] = sc

            sh_idx = lay.facade_shading_index[fac.name]
            raw_geom = ShadingGeometry(**{
                f"{name}_m": float(x[sh_idx[name]]) for name in SHADING_DIM_NAMES})
            geom = validate_shading(raw_geom, fac.orientation)
            shading_by_facade[fac.name] = geom

            for slot in fac.slots:
                entry = lay.slot_dim_index[slot.id]
                w_req = x[entry["width"]] if entry["width"] is not None else 0.6
                h_req = x[entry["height"]]
                w, h, _ = validate_window(slot, w_req, h_req)
                widths[slot.id] = w
                heights[slot.id] = h
                asm = WindowAssembly(comp, frame, w, h)
                assemblies[slot.id] = asm
                u_w_by_slot[slot.id] = asm.u_w
                # Grid dimensions multiply to exact hundredths; re-round so
                # regulatory boundaries (e.g. the window-to-floor minimum)
                # compare exactly.
                area = round(w * h, 6)
                window_area_total += area
                shading_area_total += round(geom.panel_area(w, h), 6)
                areas_by_room[slot.room.value] = round(
                    areas_by_room.get(slot.room.value, 0.0) + area, 6)

        k_value = heat_transfer_k(self.building, assemblies)
        rwf = window_to_floor_ratio(areas_by_room,
                                    self.building.habitable_floor_areas())
        wwr = window_area_total / self.building.gross_envelope_area_m2

        key = self._key(widths, heights, comp_by_facade, frame, sc_by_facade,
                        shading_by_facade, reflectance)
        return CanonicalDesign(
            slot_ids=tuple(s.id for s in self.building.slots),
            widths=widths, heights=heights,
            composition_by_facade=comp_by_facade, frame=frame,
            sc_by_facade=sc_by_facade, shading_by_facade=shading_by_facade,
            reflectance=reflectance, assemblies=assemblies,
            u_w_by_slot=u_w_by_slot, k_value=k_value, rwf_by_room=rwf,
            window_area_total=window_area_total,
            shading_area_total=shading_area_total, wwr=wwr, key=key,
        )

    def _key(self, widths, heights, comps, frame, scs, shadings, refl) -> str:
        parts = []
        for sid in (s.id for s in self.building.slots):
            parts.append(f"{sid}={widths[sid]:.1f}x{heights[sid]:.1f}")
        for fac in self.building.facades:
            parts.append(f"{fac.name}<{comps[fac.name].code}>")
            parts.append(f"{fac.name}:SC{scs[fac.name]}")
            vals = ",".join(f"{v:.2f}" for v in shadings[fac.name].values())
            parts.append(f"{fac.name}:sh({vals})")
        parts.append(f"frame={frame.id}")
        parts.append(f"refl={refl:.2f}")
        return "|".join(parts)

    def rebuild(self, design: CanonicalDesign) -> np.ndarray:
        """Genome whose canonicalization is exactly ``design``."""
        lay = self.layout
        x = np.zeros(len(lay))
        for fac in self.building.facades:
            for slot in fac.slots:
                entry = lay.slot_dim_index[slot.id]
                if entry["width"] is not None:
                    x[entry["width"]] = design.widths[slot.id]
                x[entry["height"]] = design.heights[slot.id]
            comp = design.composition_by_facade[fac.name]
            for i, v in zip(lay.facade_glazing_index[fac.name], comp.triple()):
                x[i] = v
            x[lay.facade_sc_index[fac.name]] = float(design.sc_by_facade[fac.name])
            sh_idx = lay.facade_shading_index[fac.name]
            for name, v in zip(SHADING_DIM_NAMES,
                               design.shading_by_facade[fac.name].values()):
                x[sh_idx[name]] = v
        x[lay.frame_index] = design.frame.u_value_w_m2k
        x[lay.reflectance_index] = design.reflectance
        return np.clip(x, self.lower, self.upper)

    def canonical_vector(self, design: CanonicalDesign) -> np.ndarray:
        """Per-dimension canonical values (what robustness analysis reports)."""
        return self.rebuild(design)


def canonicalize(genome, catalog, building, scenario=Scenario.S1) -> CanonicalDesign:
    """One-shot canonicalization; build an Encoder for repeated use."""
    values = genome.values if isinstance(genome, Genome) else genome
    return Encoder(building, catalog, scenario).canonicalize(values)


class EvalCache:
    """Memo of canonical key -> (SimulationResult, FitnessBreakdown).

    Thread-safe with a single-flight guarantee: while one worker computes
    a key, others block on it instead of duplicating the simulation.
    """

    def __init__(self):
        self._data = {}
        self._inflight = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._data)

    def peek(self, key):
        with self._lock:
            return self._data.get(key)

    def get_or_compute(self, key, compute):
        while True:
            with self._lock:
                if key in self._data:
                    self.hits += 1
                    return self._data[key]
                event = self._inflight.get(key)
                if event is None:
                    self._inflight[key] = threading.Event()
                    self.misses += 1
                    break
            event.wait()
        try:
            result = compute()
        except BaseException:
            with self._lock:
                self._inflight.pop(key).set()
                self.misses -= 1
            raise
        with self._lock:
            self._data[key] = result
            self._inflight.pop(key).set()
        return result

    def store_batch(self, items):
        """Insert precomputed (key, result) pairs; counts them as misses."""
        with self._lock:
            for key, result in items:
                if key not in self._data:
                    self._data[key] = result
                    self.misses += 1

    def lookup_batch(self, keys):
        """Split keys into {key: result} hits and ordered unseen keys."""
        hits = {}
        missing = []
        seen = set()
        with self._lock:
            for key in keys:
                if key in self._data:
                    hits[key] = self._data[key]
                    self.hits += 1
                elif key not in seen:
                    seen.add(key)
                    missing.append(key)
        return hits, missing

    def stats(self) -> dict:
        with self._lock:
            return {"hits": self.hits, "misses": self.misses,
                    "entries": len(self._data)}


class CachedEvaluator:
    """Canonicalize -> simulate -> score, memoized on the canonical key."""

    def __init__(self, encoder: Encoder, simulate_one, fitness_config,
                 score=None, cache: EvalCache | None = None):
        from .fitness import total_fitness
        self.encoder = encoder
        self.simulate_one = simulate_one
        self.fitness_config = fitness_config
        self.score = score or total_fitness
        self.cache = cache if cache is not None else EvalCache()

    def evaluate(self, genome_values):
        design = self.encoder.canonicalize(genome_values)

        def compute():
            result = self.simulate_one(design)
            return result, self.score(result, design, self.fitness_config)

        try:
            result, breakdown = self.cache.get_or_compute(design.key, compute)
        except Exception as exc:
            raise type(exc)(f"{exc} [key={design.key}]") from exc
        return design, breakdown
