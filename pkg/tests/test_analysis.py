import numpy as np
import pytest

from fenopt.analysis import (convergence_table, frequency, modal_share,
                             robustness_table, select_best, variability,
                             write_csv, write_robustness_csv)
from fenopt.errors import (EmptyTable, MismatchedBudgets, TooFewRows,
                           UnknownField)


def row(id, edh, edc, nct=100.0):
    return {"id": id, "edh": edh, "edc": edc, "nct": nct}


# ------------------------------------------------------------ select_best

def test_select_best_lowest_combined_when_compliant():
    rows = [row("a", 30.0, 14.0), row("b", 28.0, 15.0)]
    best = select_best(rows, edh_limit=30.0, edc_limit=15.0)
    assert best["id"] == "b"  # 43 < 44, both compliant


def test_select_best_violation_rule():
    rows = [row("a", 20.0, 18.0), row("b", 20.0, 16.5), row("c", 25.0, 17.0)]
    best = select_best(rows, edh_limit=30.0, edc_limit=15.0)
    assert best["id"] == "b"  # everyone exceeds EDc only: min EDc wins


def test_select_best_single_row():
    rows = [row("only", 99.0, 99.0)]
    assert select_best(rows, 30.0, 15.0)["id"] == "only"


def test_select_best_tie_break_on_nct_then_id():
    rows = [row("b", 10.0, 10.0, nct=50.0), row("a", 12.0, 8.0, nct=50.0),
            row("c", 12.0, 8.0, nct=40.0)]
    best = select_best(rows, 30.0, 15.0)
    assert best["id"] == "c"  # same combined 20, lower NCT wins


def test_select_best_permutation_invariant():
    rows = [row(f"s{i}", 20.0 + i, 10.0 + (i % 3)) for i in range(10)]
    a = select_best(rows, 30.0, 15.0)["id"]
    b = select_best(list(reversed(rows)), 30.0, 15.0)["id"]
    assert a == b


def test_select_best_empty():
    with pytest.raises(EmptyTable):
        select_best([], 30.0, 15.0)


# ------------------------------------------------------------- statistics

def test_variability_examples():
    stats = variability([1, 2, 3, 4])
    assert stats["sigma"] == pytest.approx(1.118034, abs=1e-4)
    assert stats["q75"] == pytest.approx(3.25)
    assert variability([5, 5, 5])["sigma"] == 0.0
    with pytest.raises(TooFewRows):
        variability([1])


def test_frequency_discrete():
    rows = [{"north_sc": "SC0"} for _ in range(150)]
    assert frequency(rows, "north_sc") == {"SC0": 150}


def test_frequency_absent_style():
    rows = [{"south_overhang_depth": v} for v in (0.0, 0.0, 0.3)]
    assert frequency(rows, "south_overhang_depth") == {"absent": 2, 0.3: 1}


def test_frequency_partition_property():
    rng = np.random.default_rng(41)
    rows = [{"x": float(rng.choice([0.5, 0.6, 0.7]))} for _ in range(97)]
    hist = frequency(rows, "x")
    assert sum(hist.values()) == 97


def test_frequency_unknown_field():
    with pytest.raises(UnknownField):
        frequency([{"a": 1}], "b")


# ------------------------------------------------------------ convergence

def test_convergence_single_run():
    trace = np.array([5.0, 4.0, 3.0])
    rows = convergence_table([trace])
    assert [r["median"] for r in rows] == [5.0, 4.0, 3.0]
    assert all(r["q05"] == r["q95"] == r["median"] for r in rows)


def test_convergence_identical_runs():
    trace = np.array([5.0, 4.0, 3.0])
    rows = convergence_table([trace] * 15)
    assert all(r["q25"] == r["q75"] for r in rows)


def test_convergence_monotone_median():
    rng = np.random.default_rng(42)
    traces = []
    for _ in range(9):
        t = np.minimum.accumulate(rng.uniform(0, 100, 50))
        traces.append(t)
    rows = convergence_table(traces)
    medians = [r["median"] for r in rows]
    assert all(b <= a for a, b in zip(medians, medians[1:]))
    for r in rows:
        assert r["q05"] <= r["q25"] <= r["median"] <= r["q75"] <= r["q95"]


def test_convergence_mismatched_budgets():
    with pytest.raises(MismatchedBudgets):
        convergence_table([np.zeros(5), np.zeros(6)])


# ------------------------------------------------------------- robustness

def test_robustness_identical_runs():
    vectors = np.tile(np.array([1.0, 2.0, 0.5]), (15, 1))
    rows = robustness_table(vectors, ["a", "b", "c"])
    for r in rows:
        assert r["values"][0][1] == 15
        assert len(r["values"]) == 1
    assert modal_share(rows, 8) == 1.0


def test_robustness_two_clusters():
    vectors = np.array([[1.0]] * 10 + [[2.0]] * 5)
    rows = robustness_table(vectors, ["dim"])
    assert rows[0]["values"] == [(1.0, 10), (2.0, 5)]


def test_robustness_counts_partition():
    rng = np.random.default_rng(43)
    vectors = rng.choice([0.1, 0.2, 0.3], size=(12, 7))
    rows = robustness_table(vectors, [f"d{i}" for i in range(7)])
    for r in rows:
        assert sum(c for _, c in r["values"]) == 12


# -------------------------------------------------------------- csv round

def test_csv_round_trip(tmp_path):
    rows = [{"a": 1, "b": "x"}, {"a": 2, "b": "y"}]
    path = tmp_path / "t.csv"
    write_csv(path, rows)
    import csv
    with open(path) as fh:
        back = list(csv.DictReader(fh))
    assert [r["b"] for r in back] == ["x", "y"]

    rpath = tmp_path / "r.csv"
    write_robustness_csv(rpath, [{"dimension": "d", "values": [(1.0, 3)]}])
    with open(rpath) as fh:
        back = list(csv.DictReader(fh))
    assert back[0]["dimension"] == "d" and back[0]["count"] == "3"
