"""Window verification (closed form against the oracle) and timing."""
from __future__ import annotations

import statistics
import timeit
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .closed_form import evaluate
from .oracle import eval_oracle, eval_oracle_row
from .partition import CoverageReport, PartitionError, Window, classify, verify_partition
from .closed_form import eval_closed

__all__ = ["RowResult", "VerifyReport", "BenchRow", "compare_row", "compare_window", "bench"]


@dataclass
class RowResult:
    n: int
    closed: list[int]
    oracle: list[int]
    kinds: list[str]
    unclassified: list[tuple[int, int, str]] = field(default_factory=list)


def _census_key(cell) -> str:
    if cell.region is not None and cell.region.k < 0:
        return "U[-1]"
    return cell.kind


def compare_row(n: int, m_max: int) -> RowResult:
    """Closed-form and oracle values of H_{m,n} for 0 <= m <= m_max."""
    ms = range(m_max + 1)
    oracle = eval_oracle_row(n, ms)
    closed, kinds, bad = [], [], []
    for m in ms:
        try:
            cell = classify(m, n)
        except PartitionError as exc:
            bad.append((m, n, str(exc)))
            closed.append(None)
            kinds.append("unclassified")
            continue
        closed.append(evaluate(cell))
        kinds.append(_census_key(cell))
    return RowResult(n, closed, oracle, kinds, bad)


def _row_job(args):
    return compare_row(*args)


@dataclass
class VerifyReport:
    window: Window
    census: dict[str, int]
    mismatches: list[tuple[int, int, int | None, int]]  # (m, n, closed, oracle)
    unclassified: list[tuple[int, int, str]]
    coverage: CoverageReport

    @property
    def cells(self) -> int:
        return sum(self.census.values())

    @property
    def exit_code(self) -> int:
        if self.mismatches:
            return 2
        if self.unclassified or self.coverage.unexpected:
            return 3
        return 0

    def lines(self, limit: int = 20) -> list[str]:
        w = self.window
        out = [f"window 0<=m<={w.m_max} {w.n_min}<=n<={w.n_max} cells={self.cells}"]
        out.append("census " + " ".join(f"{k}={v}" for k, v in sorted(self.census.items())))
        out.append("coverage " + self.coverage.summary())
        for m, n, c in self.coverage.unexpected[:limit]:
            out.append(f"  anomaly ({m},{n}) covered {c} times")
        out.append(f"unclassified={len(self.unclassified)}")
        out.append(f"mismatches={len(self.mismatches)}")
        for m, n, c, o in self.mismatches[:limit]:
            out.append(f"  ({m},{n}) closed={c} oracle={o}")
        return out


def compare_window(window: Window, jobs: int = 1) -> VerifyReport:
    """Partition check plus cell-by-cell equality; rows may run in parallel.

    Results are assembled in row order, so the report does not depend on
    scheduling.
    """
    coverage = verify_partition(window)
    tasks = [(n, window.m_max) for n in range(window.n_min, window.n_max + 1)] if not window.empty else []
    if jobs > 1 and len(tasks) > 1:
        # largest rows first keeps the pool busy; map preserves input order
        order = sorted(range(len(tasks)), key=lambda t: -tasks[t][0])
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = dict(zip(order, pool.map(_row_job, [tasks[t] for t in order])))
        rows = [done[t] for t in range(len(tasks))]
    else:
        rows = [compare_row(*t) for t in tasks]
    census: Counter[str] = Counter()
    mismatches, unclassified = [], []
    for row in rows:
        census.update(row.kinds)
        unclassified += row.unclassified
        for m, (c, o) in enumerate(zip(row.closed, row.oracle)):
            if c != o:
                mismatches.append((m, row.n, c, o))
    return VerifyReport(window, dict(census), mismatches, unclassified, coverage)


@dataclass
class BenchRow:
    n: int
    m: int
    closed_value: int
    oracle_value: int
    closed_s: float  # median seconds per call
    oracle_s: float

    @property
    def ratio(self) -> float:
        return self.oracle_s / self.closed_s if self.closed_s > 0 else float("inf")

    @property
    def agree(self) -> bool:
        return self.closed_value == self.oracle_value


def _median_per_call(fn, budget: float = 0.2, repeats: int = 7) -> float:
    # pick a loop count so one repeat takes roughly budget/repeats seconds
    t = timeit.timeit(fn, number=1)
    number = max(1, int(budget / repeats / max(t, 1e-7)))
    return statistics.median(timeit.repeat(fn, number=number, repeat=repeats)) / number


def bench(n_list, m: int = 0, repeats: int = 7, method: str = "crt") -> list[BenchRow]:
    """Median latency of eval_closed versus eval_oracle at a fixed m."""
    out = []
    for n in n_list:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        c = eval_closed(m, n)  # warms the anchor caches
        o = eval_oracle(m, n, method)  # and the compiled kernel
        tc = _median_per_call(lambda: eval_closed(m, n), repeats=repeats)
        to = _median_per_call(lambda: eval_oracle(m, n, method), repeats=repeats)
        out.append(BenchRow(n, m, c, o, tc, to))
    return out
