import itertools
import json
import math

import numpy as np
import pytest

from fenopt.catalog import (Catalog, FrameSpec, GapSpec, Gas, GlassCategory,
                            GlassPane, WindowAssembly, center_of_glass_u,
                            classify_orientation, composition_optics,
                            enumerate_compositions, load_catalog,
                            parse_composition_code, window_u, Orientation)
from fenopt.errors import DegenerateGap, ValidationError


def clear(gid, mm, tsol=0.80, tvis=0.88, emis=0.84):
    return GlassPane(gid, mm, tsol, tvis, emis, emis, GlassCategory.CLEAR)


# ---------------------------------------------------------------- loading

def test_bundled_catalog_counts(catalog):
    assert len(catalog.glasses) == 12
    assert len(catalog.gaps) == 10
    assert len(catalog.frames) == 10


def test_bundled_frame_u_values(catalog):
    expected = {1.9, 1.5, 1.19, 4.0, 3.2, 0.9, 0.71, 2.2, 1.8, 0.66}
    assert {f.u_value_w_m2k for f in catalog.frames} == expected


def test_bad_thickness_rejected():
    with pytest.raises(ValidationError):
        GlassPane("bad", 5, 0.8, 0.88, 0.84, 0.84, GlassCategory.CLEAR)


def test_duplicate_glass_id_rejected(tmp_path):
    raw = {
        "glasses": [
            {"id": "g", "thickness_mm": 4, "tsol": 0.8, "tvis": 0.88,
             "emis_front": 0.84, "emis_back": 0.84, "category": "Clear"},
            {"id": "g", "thickness_mm": 6, "tsol": 0.8, "tvis": 0.88,
             "emis_front": 0.84, "emis_back": 0.84, "category": "Clear"},
        ],
        "gaps": [], "frames": [],
    }
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(ValidationError):
        load_catalog(path)


def test_category_band_validation():
    with pytest.raises(ValidationError):
        # spectrally selective band requires tvis 0.56-0.68
        GlassPane("x", 6, 0.30, 0.80, 0.84, 0.84,
                  GlassCategory.SPECTRALLY_SELECTIVE)
    with pytest.raises(ValidationError):
        # a clear pane may not carry a coating
        GlassPane("x", 6, 0.80, 0.88, 0.05, 0.84, GlassCategory.CLEAR)


# ------------------------------------------------------------ rule engine

def appendix_rules(outer, gap, inner, orientation):
    """Independent oracle: the composition rules coded as predicates."""
    classes = [4, 6, 8, 10]
    step = classes.index(outer.thickness_mm) - classes.index(inner.thickness_mm)
    if step < 0 or step > 1:
        return False  # outer at least as thick, at most one class thicker
    out_faces = tuple(f for f, e in ((1, outer.emis_front), (2, outer.emis_back))
                      if e < 0.4)
    in_faces = tuple(f for f, e in ((1, inner.emis_front), (2, inner.emis_back))
                     if e < 0.4)
    if out_faces and in_faces:
        return False  # low-e on both panes forbidden
    if out_faces and out_faces != (2,):
        return False  # outer coating must sit on window face #2
    solar_control = min(outer.tsol, inner.tsol) < 0.54
    if solar_control and outer.tsol >= 0.54:
        return False  # solar control must be carried by the outer pane
    if orientation == "N":
        if outer.tsol < 0.54:
            return False
        if in_faces and in_faces != (1,):
            return False  # inner coating must face the cavity (#3)
    elif orientation in ("E", "W"):
        if in_faces and in_faces != (1,):
            return False
    else:  # S, SE, SW
        if in_faces:
            return False  # south-like: low-e only on window face #2
    return True


def oracle_enumerate(catalog, orientation):
    out = set()
    for outer, inner in itertools.product(catalog.glasses, repeat=2):
        for gap in catalog.gaps:
            if appendix_rules(outer, gap, inner, orientation):
                out.add((outer.id, gap.label, inner.id))
    return out


def test_two_clear_glasses_north_count():
    cat = Catalog(glasses=[clear("c4", 4), clear("c6", 6)],
                  gaps=[GapSpec(Gas.AIR, 12), GapSpec(Gas.ARGON, 16)],
                  frames=[])
    comps = enumerate_compositions(cat, "N")
    # pairs (4,4), (6,4), (6,6) x 2 gaps
    assert len(comps) == 6
    pairs = {(c.outer.id, c.inner.id) for c in comps}
    assert pairs == {("c4", "c4"), ("c6", "c4"), ("c6", "c6")}


def test_solar_control_only_catalog_empty_on_north():
    panes = [GlassPane(f"sc{m}", m, 0.30, 0.60, 0.84, 0.84,
                       GlassCategory.SPECTRALLY_SELECTIVE) for m in (4, 6)]
    cat = Catalog(glasses=panes, gaps=[GapSpec(Gas.AIR, 12)], frames=[])
    assert enumerate_compositions(cat, "N") == []
    assert len(enumerate_compositions(cat, "W")) > 0


def test_rule_engine_matches_oracle_on_bundled(catalog):
    for orientation in ("N", "E", "SE", "S", "SW", "W"):
        got = {(c.outer.id, c.gap.label, c.inner.id)
               for c in enumerate_compositions(catalog, orientation)}
        assert got == oracle_enumerate(catalog, orientation), orientation


def test_orientation_invariants(catalog):
    for c in enumerate_compositions(catalog, "N"):
        assert c.outer.tsol >= 0.54
    for orientation in ("N", "E", "S", "W"):
        for c in enumerate_compositions(catalog, orientation):
            assert not (c.outer.has_low_e and c.inner.has_low_e)
    for orientation in ("S", "SE", "SW"):
        for c in enumerate_compositions(catalog, orientation):
            assert not c.inner.has_low_e


def test_code_round_trip(catalog):
    for orientation in ("N", "S"):
        for comp in enumerate_compositions(catalog, orientation):
            again = parse_composition_code(catalog, comp.code)
            assert again == comp


def test_classify_orientation_sectors():
    assert classify_orientation(0) is Orientation.N
    assert classify_orientation(359) is Orientation.N
    assert classify_orientation(59.9) is Orientation.N
    assert classify_orientation(90) is Orientation.E
    assert classify_orientation(135) is Orientation.SE
    assert classify_orientation(180) is Orientation.S
    assert classify_orientation(225) is Orientation.SW
    assert classify_orientation(270) is Orientation.W


# --------------------------------------------------------- glass physics

def test_center_of_glass_examples():
    c4_89 = GlassPane("c", 4, 0.82, 0.90, 0.89, 0.89, GlassCategory.CLEAR)
    e4 = GlassPane("e", 4, 0.60, 0.84, 0.05, 0.89, GlassCategory.HIGH_TSOL_LOWE)
    u1 = center_of_glass_u(c4_89, GapSpec(Gas.ARGON, 16), e4)
    assert u1 == pytest.approx(1.068, abs=0.01)

    c4_84 = clear("c", 4, 0.82, 0.90, 0.84)
    u2 = center_of_glass_u(c4_84, GapSpec(Gas.AIR, 12), c4_84)
    assert u2 == pytest.approx(2.854, abs=0.01)


def test_center_of_glass_monotone_in_gap_width():
    pane = clear("c", 4)
    widths = [16, 12, 10, 8, 6]
    us = [center_of_glass_u(pane, GapSpec(Gas.ARGON, w), pane) for w in widths]
    assert all(a < b for a, b in zip(us, us[1:]))


def test_center_of_glass_monotone_in_emissivity():
    gap = GapSpec(Gas.ARGON, 12)
    prev = None
    for emis in (0.84, 0.4, 0.2, 0.1, 0.05):
        inner = GlassPane("e", 4, 0.6, 0.84, max(emis, 1e-6), 0.84,
                          GlassCategory.HIGH_TSOL_LOWE
                          if emis < 0.4 else GlassCategory.CLEAR)
        u = center_of_glass_u(clear("c", 4), gap, inner)
        if prev is not None:
            assert u < prev
        prev = u


def test_degenerate_gap():
    pane = clear("c", 4)
    gap = GapSpec.__new__(GapSpec)
    object.__setattr__(gap, "gas", Gas.AIR)
    object.__setattr__(gap, "width_mm", 0)
    with pytest.raises(DegenerateGap):
        center_of_glass_u(pane, gap, pane)


def test_optics_examples():
    full = clear("a", 4, tsol=1.0, tvis=1.0)
    shgc, vt = composition_optics(full, full)
    assert shgc == 1.0 and vt == 1.0

    g1 = clear("g1", 6, tsol=0.62, tvis=0.62)
    g2 = clear("g2", 4, tsol=0.82, tvis=0.82)
    shgc, _ = composition_optics(g1, g2)
    assert shgc == pytest.approx(0.5177, abs=0.001)


def test_explicit_override_returned_verbatim(tmp_path):
    raw = {
        "glasses": [
            {"id": "a", "thickness_mm": 4, "tsol": 0.8, "tvis": 0.88,
             "emis_front": 0.84, "emis_back": 0.84, "category": "Clear"},
        ],
        "gaps": [{"gas": "Air", "width_mm": 12}],
        "frames": [],
        "compositions": [{"code": "a,Air_12,a", "shgc": 0.42}],
    }
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(raw))
    cat = load_catalog(path)
    comp = enumerate_compositions(cat, "S")[0]
    assert comp.shgc == 0.42
    # vt not overridden: heuristic applies
    _, vt = composition_optics(comp.outer, comp.inner)
    assert comp.vt == pytest.approx(vt)


# ----------------------------------------------------------- window U

def frame(u=1.19):
    return FrameSpec("f", "WoodAlum", u)


def any_comp(catalog):
    return enumerate_compositions(catalog, "S")[0]


def test_window_u_equal_components(catalog):
    comp = any_comp(catalog)
    comp = comp.__class__(comp.outer, comp.gap, comp.inner, 1.8, comp.shgc,
                          comp.vt, comp.code)
    asm = WindowAssembly(comp, frame(1.8), 1.2, 1.2)
    assert window_u(asm) == pytest.approx(1.8, abs=1e-12)


def test_window_u_hand_example(catalog):
    comp = any_comp(catalog)
    comp = comp.__class__(comp.outer, comp.gap, comp.inner, 1.07, comp.shgc,
                          comp.vt, comp.code)
    asm = WindowAssembly(comp, frame(1.19), 0.6, 1.0)
    assert asm.a_g == pytest.approx(0.3956)
    assert asm.a_f == pytest.approx(0.2044)
    assert window_u(asm) == pytest.approx(1.111, abs=0.005)


def test_window_u_convex_combination(catalog):
    rng = np.random.default_rng(11)
    comps = enumerate_compositions(catalog, "W")
    for _ in range(300):
        comp = comps[rng.integers(len(comps))]
        u_f = float(rng.uniform(0.5, 5.0))
        w = float(rng.uniform(0.6, 3.0))
        h = float(rng.uniform(1.0, 2.2))
        asm = WindowAssembly(comp, frame(u_f), w, h)
        u = window_u(asm)
        assert min(comp.u_g, u_f) - 1e-12 <= u <= max(comp.u_g, u_f) + 1e-12


def test_window_below_minimum_rejected(catalog):
    comp = any_comp(catalog)
    with pytest.raises(Exception):
        WindowAssembly(comp, frame(), 0.5, 1.0)
    with pytest.raises(Exception):
        WindowAssembly(comp, frame(), 0.6, 0.9)


def test_table8_window2_u_value(catalog):
    comp = next(c for c in enumerate_compositions(catalog, "N")
                if c.code == "clear10,Argon_16,e8_0.05#1_tsol62tvis89")
    asm = WindowAssembly(comp, catalog.frames_by_id["FrameWoodAlum_Class4"],
                         1.5, 1.4)
    assert window_u(asm) == pytest.approx(1.6, abs=0.15)


def test_random_mini_catalogs_match_oracle():
    rng = np.random.default_rng(5)
    categories = list(GlassCategory)
    for trial in range(10):
        glasses = []
        for i in range(int(rng.integers(2, 9))):
            cat = categories[rng.integers(len(categories))]
            mm = int(rng.choice([4, 6, 8, 10]))
            glasses.append(_random_pane(rng, f"g{trial}_{i}", mm, cat))
        gaps = [GapSpec(Gas.AIR if rng.random() < 0.5 else Gas.ARGON,
                        int(rng.choice([6, 8, 10, 12, 16])))
                for _ in range(int(rng.integers(1, 5)))]
        gaps = list({g.label: g for g in gaps}.values())
        cat = Catalog(glasses=glasses, gaps=gaps, frames=[])
        for orientation in ("N", "E", "SE", "S", "SW", "W"):
            got = {(c.outer.id, c.gap.label, c.inner.id)
                   for c in enumerate_compositions(cat, orientation)}
            assert got == oracle_enumerate(cat, orientation)


def _random_pane(rng, gid, mm, category):
    if category is GlassCategory.CLEAR:
        return GlassPane(gid, mm, float(rng.uniform(0.56, 0.82)),
                         float(rng.uniform(0.7, 0.9)), 0.84, 0.84, category)
    if category is GlassCategory.LOW_TSOL:
        return GlassPane(gid, mm, float(rng.uniform(0.23, 0.54)),
                         float(rng.uniform(0.35, 0.9)), 0.84, 0.84, category)
    if category is GlassCategory.SPECTRALLY_SELECTIVE:
        return GlassPane(gid, mm, float(rng.uniform(0.25, 0.54)),
                         float(rng.uniform(0.56, 0.68)), 0.84, 0.84, category)
    if category is GlassCategory.HIGH_TSOL_LOWE:
        emis = float(rng.uniform(0.04, 0.3))
        front = rng.random() < 0.5
        return GlassPane(gid, mm, float(rng.uniform(0.60, 0.82)),
                         float(rng.uniform(0.7, 0.9)),
                         emis if front else 0.84,
                         0.84 if front else emis, category)
    return GlassPane(gid, mm, float(rng.uniform(0.26, 0.55)),
                     float(rng.uniform(0.5, 0.7)), 0.84,
                     float(rng.uniform(0.04, 0.13)), category)
