import threading

import numpy as np
import pytest

from fenopt.building import load_building
from fenopt.catalog import Catalog, GapSpec, Gas, GlassCategory, GlassPane
from fenopt.encoding import (CachedEvaluator, Encoder, EvalCache, Scenario,
                             normalized_distance)
from fenopt.errors import EmptyNeighborhood
from fenopt import data_path


def random_genomes(encoder, n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(encoder.lower, encoder.upper, (n, len(encoder.layout)))


# ------------------------------------------------------------------ layout

def test_layout_dimensions(encoder):
    # 8 slot dims + frame U + reflectance + 3x3 glazing + 3 SC + 3x6 shading
    assert len(encoder.layout) == 40
    names = encoder.layout.names
    assert names.count("frame_u") == 1
    assert names.count("reflectance") == 1
    assert sum(1 for n in names if n.endswith(":sc")) == 3
    assert sum(1 for n in names if "glazing" in n) == 9
    assert "W1:width" not in names      # fixed-width slots omit width
    assert "W3:width" not in names
    assert "W2:width" in names


def test_s2_pins_sc(building, catalog):
    enc = Encoder(building, catalog, Scenario.S2)
    pinned = enc.layout.pinned
    assert len(pinned) == 3
    g = random_genomes(enc, 1, seed=1)[0]
    g2 = g.copy()
    for i in pinned:
        g2[i] = enc.upper[i]
    d1 = enc.canonicalize(g)
    d2 = enc.canonicalize(g2)
    assert d1.key == d2.key
    assert set(d1.sc_by_facade.values()) == {0}


# --------------------------------------------------------------- snapping

def test_sc_nearest_integer(encoder):
    g = random_genomes(encoder, 1, seed=2)[0]
    i = encoder.layout.facade_sc_index["north"]
    g[i] = 3.4
    assert encoder.canonicalize(g).sc_by_facade["north"] == 3
    g[i] = 3.6
    assert encoder.canonicalize(g).sc_by_facade["north"] == 4
    g[i] = 6.999
    assert encoder.canonicalize(g).sc_by_facade["north"] == 6


def test_exact_triple_snaps_to_that_composition(encoder):
    g = random_genomes(encoder, 1, seed=3)[0]
    pool = encoder.pools["south"]
    target = pool[7]
    for idx, v in zip(encoder.layout.facade_glazing_index["south"],
                      target.triple()):
        g[idx] = v
    design = encoder.canonicalize(g)
    assert design.composition_by_facade["south"].code == target.code


def test_truncation_collision(encoder):
    g = random_genomes(encoder, 1, seed=4)[0]
    i = encoder.layout.slot_dim_index["W2"]["width"]
    g_a = g.copy()
    g_b = g.copy()
    g_a[i] = 1.51
    g_b[i] = 1.54
    assert encoder.canonicalize(g_a).key == encoder.canonicalize(g_b).key
    g_b[i] = 1.61
    assert encoder.canonicalize(g_a).key != encoder.canonicalize(g_b).key


def test_canonicalize_idempotent(encoder):
    for g in random_genomes(encoder, 300, seed=5):
        design = encoder.canonicalize(g)
        again = encoder.canonicalize(encoder.rebuild(design))
        assert again.key == design.key


def test_snapped_composition_is_orientation_legal(encoder):
    for g in random_genomes(encoder, 100, seed=6):
        design = encoder.canonicalize(g)
        for fac in encoder.building.facades:
            comp = design.composition_by_facade[fac.name]
            assert comp.code in {c.code for c in encoder.pools[fac.name]}


def test_empty_neighborhood():
    panes = [GlassPane(f"sc{m}", m, 0.30, 0.60, 0.84, 0.84,
                       GlassCategory.SPECTRALLY_SELECTIVE) for m in (4, 6)]
    cat = Catalog(glasses=panes, gaps=[GapSpec(Gas.AIR, 12)],
                  frames=[__import__("fenopt.catalog", fromlist=["FrameSpec"])
                          .FrameSpec("f", "WoodAlum", 1.19)])
    building = load_building(data_path("building.json"))
    with pytest.raises(EmptyNeighborhood):
        Encoder(building, cat, Scenario.S1).canonicalize(
            np.zeros(40))


def test_normalized_distance():
    assert normalized_distance((1, 2, 3), (1, 2, 3), (1, 1, 1)) == 0.0
    assert normalized_distance((1.0, 0.5, 0.7), (3.5, 0.5, 0.7),
                               (2.5, 1, 1)) == pytest.approx(1.0)
    assert normalized_distance((1.1, 0.5, 0.7), (1.6, 0.5, 0.7),
                               (2.5, 1, 1)) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        normalized_distance((1,), (2,), (0,))


# ------------------------------------------------------------------ cache

def test_cache_hit_counters():
    cache = EvalCache()
    calls = []

    def compute():
        calls.append(1)
        return "value"

    assert cache.get_or_compute("k", compute) == "value"
    assert cache.get_or_compute("k", compute) == "value"
    assert len(calls) == 1
    assert cache.stats() == {"hits": 1, "misses": 1, "entries": 1}


def test_cache_batch_accounting():
    cache = EvalCache()
    hits, missing = cache.lookup_batch(["a", "b", "a", "c", "b"])
    assert hits == {} and missing == ["a", "b", "c"]
    cache.store_batch([("a", 1), ("b", 2), ("c", 3)])
    hits, missing = cache.lookup_batch(["a", "b", "a"])
    assert missing == [] and hits == {"a": 1, "b": 2}
    assert cache.stats()["misses"] == 3


def test_cache_single_flight():
    cache = EvalCache()
    started = threading.Event()
    release = threading.Event()
    computed = []

    def slow():
        started.set()
        release.wait(5)
        computed.append(1)
        return 42

    results = []

    def worker():
        results.append(cache.get_or_compute("key", slow))

    t1 = threading.Thread(target=worker)
    t2 = threading.Thread(target=worker)
    t1.start()
    started.wait(5)
    t2.start()
    release.set()
    t1.join(5)
    t2.join(5)
    assert results == [42, 42]
    assert len(computed) == 1
    assert cache.misses == 1 and cache.hits == 1


def test_cached_evaluator_identical_breakdown(encoder, madrid_problem):
    evaluator = CachedEvaluator(
        madrid_problem.encoder,
        lambda design: __import__("fenopt.sim.engine", fromlist=["simulate_batch"])
        .simulate_batch([design], ctx=madrid_problem.ctx)[0],
        madrid_problem.fitness_config)
    g = random_genomes(madrid_problem.encoder, 1, seed=8)[0]
    d1, b1 = evaluator.evaluate(g)
    d2, b2 = evaluator.evaluate(g + 1e-12)
    assert d1.key == d2.key
    assert b1 is b2   # bit-for-bit: the same stored object
    assert evaluator.cache.stats()["misses"] == 1
    assert evaluator.cache.stats()["hits"] == 1
