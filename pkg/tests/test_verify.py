from sturmhankel.partition import Window
from sturmhankel.verify import bench, compare_row, compare_window


def test_parallel_report_matches_serial():
    w = Window(40, 25)
    a, b = compare_window(w, jobs=1), compare_window(w, jobs=3)
    assert a.census == b.census and a.mismatches == b.mismatches == []
    assert a.cells == len(w) and a.exit_code == 0


def test_row_values():
    row = compare_row(9, 10)
    assert row.closed == row.oracle and row.closed[3] == 2
    assert len(row.kinds) == 11


def test_origin_only_window():
    rep = compare_window(Window(0, 1))
    assert rep.census == {"SpecialOrigin": 1} and rep.exit_code == 0
    assert rep.coverage.anomalies == [(0, 1, 0)] and rep.coverage.unexpected == []


def test_bench_values_deterministic():
    a = bench([1, 20], repeats=3)
    b = bench([1, 20], repeats=3)
    assert [(r.closed_value, r.oracle_value) for r in a] == [(r.closed_value, r.oracle_value) for r in b]
    assert a[0].closed_value == a[0].oracle_value == 1
    assert all(r.agree and r.ratio > 0 for r in a)
