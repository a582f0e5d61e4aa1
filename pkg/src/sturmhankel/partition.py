"""Anchor sets and the tiling of N x N_{>=1} by the U/V/T parallelograms.

For a generation k the anchors are (Phi_k is :func:`~sturmhankel.sequence.phi`)

    E'_k  = {x : Phi_k(x) = f_{2k+3}/2}           gamma_i (T_k), alpha_i (U_{k-1})
    E''_k = {x : Phi_k(x) = f_{2k+3}/2 + f_{2k}}
    F_k   = {y : Phi_k(y) = f_{2k+1}/2}
    F'_k  = {y : Phi_{k+1}(y) = f_{2k+1}/2},  F''_k = F_k minus F'_k   beta'_i (V_k)

Families are enumerated by walking their gap laws rather than by scanning, and
every walked member is re-checked against its defining predicate.

The n = 1 row is closed by a degenerate generation k = -1 (f_{-2} = 1,
f_{-1} = 0): U_{-1,i} is the single cell with m + n = alpha_i in E'_0.  The cell
(0, 1) lies in no parallelogram and is reported as the special origin.
"""
from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np

from .sequence import F_TABLE, WidthOverflowError, encode, f, phi

__all__ = [
    "Kind",
    "AnchorFamily",
    "Parallelogram",
    "CellClass",
    "Window",
    "CoverageReport",
    "PartitionError",
    "INTERIOR",
    "TOP_ROW",
    "BOTTOM_ROW",
    "LEFT_EDGE",
    "RIGHT_EDGE",
    "in_family",
    "family",
    "family_member",
    "family_upto",
    "classify",
    "parallelograms_in_window",
    "verify_partition",
]

INTERIOR = "Interior"
TOP_ROW = "TopRow"
BOTTOM_ROW = "BottomRow"
LEFT_EDGE = "LeftEdge"
RIGHT_EDGE = "RightEdge"
_FLAG_ORDER = (INTERIOR, BOTTOM_ROW, TOP_ROW, LEFT_EDGE, RIGHT_EDGE)


class PartitionError(RuntimeError):
    """A cell was covered by zero or several parallelograms."""


class Kind(str, Enum):
    E = "E"
    EPRIME = "Eprime"
    EDOUBLEPRIME = "Edoubleprime"
    F = "F"
    FPRIME = "Fprime"
    FDOUBLEPRIME = "Fdoubleprime"


def in_family(kind: Kind | str, k: int, x: int) -> bool:
    """Defining predicate of each anchor family."""
    kind = Kind(kind)
    if kind in (Kind.E, Kind.EPRIME, Kind.EDOUBLEPRIME):
        v = phi(k, x)
        e1 = f(2 * k + 3) // 2
        e2 = e1 + f(2 * k)
        if kind is Kind.EPRIME:
            return v == e1
        if kind is Kind.EDOUBLEPRIME:
            return v == e2
        return v in (e1, e2)
    half = f(2 * k + 1) // 2
    if kind is Kind.FPRIME:
        return phi(k + 1, x) == half
    in_f = phi(k, x) == half
    if kind is Kind.FDOUBLEPRIME:
        return in_f and phi(k + 1, x) != half
    return in_f


def _digits(n: int, width: int) -> tuple[int, ...]:
    d = encode(n).digits
    if len(d) > width:
        raise ValueError(f"{n} needs more than {width} digits")
    return d + (0,) * (width - len(d))


def _low_patterns(kind: Kind, k: int) -> tuple[tuple[int, ...], ...]:
    """The fixed low digits a_0 .. a_{l-1} shared by the members of a family."""
    w = 2 * k + 3
    if kind in (Kind.E, Kind.EPRIME, Kind.EDOUBLEPRIME):
        e1 = f(2 * k + 3) // 2
        pats = {Kind.EPRIME: [e1], Kind.EDOUBLEPRIME: [e1 + f(2 * k)], Kind.E: [e1, e1 + f(2 * k)]}[kind]
        return tuple(_digits(c, w) for c in pats)
    base = _digits(f(2 * k + 1) // 2, w)
    if kind is Kind.F:
        return (base,)
    if kind is Kind.FPRIME:
        return (base + (0, 0),)
    return tuple(p for p in (base + (1, 0), base + (0, 1)) if _valid_pattern(p))


def _valid_pattern(bits) -> bool:
    for i in range(len(bits) - 1):
        if bits[i] and bits[i + 1]:
            return False
        if i % 2 == 0 and i + 2 < len(bits) and bits[i] and bits[i + 2]:
            return False
    return True


class _DigitCounter:
    """Positional access to {x : low digits of x form one of the patterns}.

    Greedy representations compare like their digit strings read from the
    top, so the i-th member and the number of members below x both follow
    from counting valid completions digit by digit.
    """

    def __init__(self, patterns):
        self.patterns = sorted(patterns, key=lambda p: sum(F_TABLE[j] for j, a in enumerate(p) if a))
        self.width = len(self.patterns[0])
        self._memo: dict[tuple[int, int, int], int] = {}

    def _fits(self, p, up1: int, up2: int) -> bool:
        # p fills positions < width; up1, up2 are a_width, a_width+1
        w = self.width
        if p[w - 1] and up1:
            return False
        if (w - 1) % 2 == 0 and p[w - 1] and up2:
            return False
        if (w - 2) % 2 == 0 and p[w - 2] and up1:
            return False
        return True

    def fill(self, pos: int, up1: int, up2: int) -> int:
        """Valid ways to choose a_pos .. a_0 given a_{pos+1}, a_{pos+2}."""
        if pos < self.width:
            return sum(1 for p in self.patterns if self._fits(p, up1, up2))
        key = (pos, up1, up2)
        hit = self._memo.get(key)
        if hit is None:
            hit = self.fill(pos - 1, 0, up1)
            if not up1 and not (pos % 2 == 0 and up2):
                hit += self.fill(pos - 1, 1, up1)
            self._memo[key] = hit
        return hit

    def count_below(self, x: int) -> int:
        if x <= 0:
            return 0
        xd = encode(x).digits
        top = max(len(xd), self.width)
        xd = xd + (0,) * (top + 2 - len(xd))
        total = 0
        for pos in range(top - 1, self.width - 1, -1):
            if xd[pos]:
                total += self.fill(pos - 1, 0, xd[pos + 1])
        w = self.width
        low = sum(F_TABLE[j] for j in range(w) if xd[j])
        up1, up2 = xd[w], xd[w + 1]
        for p in self.patterns:
            if self._fits(p, up1, up2) and sum(F_TABLE[j] for j, a in enumerate(p) if a) < low:
                total += 1
        return total

    def nth(self, j: int) -> int:
        """Member with 0-based index j."""
        top = self.width
        while self.fill(top - 1, 0, 0) <= j:
            top += 1
            if top > len(F_TABLE):
                raise WidthOverflowError(f"member {j + 1} of the anchor family")
        value, up1, up2 = 0, 0, 0
        for pos in range(top - 1, self.width - 1, -1):
            zero = self.fill(pos - 1, 0, up1)
            if j < zero:
                up1, up2 = 0, up1
            else:
                j -= zero
                value += F_TABLE[pos]
                up1, up2 = 1, up1
        for p in self.patterns:
            if self._fits(p, up1, up2):
                if j == 0:
                    return value + sum(F_TABLE[i] for i, a in enumerate(p) if a)
                j -= 1
        raise AssertionError("digit count out of step")  # pragma: no cover


# Beyond these the walk is not extended; positions come from digit counting.
_WALK_VALUE = 1 << 18
_WALK_COUNT = 1 << 14


class AnchorFamily:
    """Sorted members of one anchor family, extended on demand.

    E-type families walk E_k: from an E'' member step f_{2k+2}; from an E'
    member step f_{2k} when its digits a_{2k+3}, a_{2k+4} vanish, else
    f_{2k+2}.  F-type families walk F_k: step f_{2k+3} from F'_k members and
    f_{2k+2} otherwise.  The primed families filter the walk.
    """

    def __init__(self, kind: Kind | str, k: int):
        if k < 0:
            raise ValueError(f"generation must be >= 0, got {k}")
        self.kind = Kind(kind)
        self.k = k
        self._e_type = self.kind in (Kind.E, Kind.EPRIME, Kind.EDOUBLEPRIME)
        if self._e_type:
            self._start = f(2 * k + 3) // 2
        else:
            self._start = f(2 * k + 1) // 2
        self._cursor: int | None = None
        self._members: list[int] = []
        self._lock = threading.Lock()
        self._counter: _DigitCounter | None = None

    @property
    def counter(self) -> _DigitCounter:
        if self._counter is None:
            self._counter = _DigitCounter(_low_patterns(self.kind, self.k))
        return self._counter

    def _successor(self, x: int) -> int:
        k = self.k
        if self._e_type:
            low = phi(k, x)
            if low != f(2 * k + 3) // 2:
                return x + f(2 * k + 2)
            if phi(k + 1, x) == low:
                return x + f(2 * k)
            return x + f(2 * k + 2)
        if phi(k + 1, x) == f(2 * k + 1) // 2:
            return x + f(2 * k + 3)
        return x + f(2 * k + 2)

    def _step(self) -> None:
        x = self._start if self._cursor is None else self._successor(self._cursor)
        base = Kind.E if self._e_type else Kind.F
        if not in_family(base, self.k, x):
            raise PartitionError(f"gap walk of {base.value}_{self.k} reached non-member {x}")
        self._cursor = x
        if self.kind is base or in_family(self.kind, self.k, x):
            self._members.append(x)

    def _grow(self, done) -> list[int]:
        members = self._members
        if done(members):
            return members
        with self._lock:
            while not done(self._members):
                self._step()
            return self._members

    def member(self, i: int) -> int:
        """The i-th smallest member, 1-based."""
        if i < 1:
            raise ValueError(f"members are 1-based, got {i}")
        members = self._members
        if i <= len(members):
            return members[i - 1]
        if i <= _WALK_COUNT:
            return self._grow(lambda ms: len(ms) >= i)[i - 1]
        return self.counter.nth(i - 1)

    def upto(self, bound: int) -> list[int]:
        members = self._grow(lambda ms: self._cursor is not None and self._cursor > bound)
        return members[: bisect.bisect_right(members, bound)]

    def index_at_least(self, x: int) -> int:
        """0-based index of the smallest member >= x."""
        members = self._members
        if members and members[-1] >= x:
            return bisect.bisect_left(members, x)
        if x <= _WALK_VALUE:
            members = self._grow(lambda ms: bool(ms) and ms[-1] >= x)
            return bisect.bisect_left(members, x)
        return self.counter.count_below(x)


_REGISTRY: dict[tuple[Kind, int], AnchorFamily] = {}
_REGISTRY_LOCK = threading.Lock()


def family(kind: Kind | str, k: int) -> AnchorFamily:
    key = (Kind(kind), k)
    fam = _REGISTRY.get(key)
    if fam is None:
        with _REGISTRY_LOCK:
            fam = _REGISTRY.setdefault(key, AnchorFamily(*key))
    return fam


def family_member(kind: Kind | str, k: int, i: int) -> int:
    return family(kind, k).member(i)


def family_upto(kind: Kind | str, k: int, bound: int) -> list[int]:
    if bound < 0:
        return []
    return list(family(kind, k).upto(bound))


def _fx(j: int) -> int:
    # f extended by f_{-2} = 1, f_{-1} = 0 for the degenerate generation
    if j == -2:
        return 1
    if j == -1:
        return 0
    return f(j)


@dataclass(frozen=True, order=True)
class Parallelogram:
    """One tile: ``n_lo <= n < n_hi`` and ``d_lo < m + n <= d_hi``.

    ``anchor`` is alpha_i for U, beta_i = beta'_i + f_{2k} for V and gamma_i
    for T.
    """

    k: int
    kind: str
    i: int
    anchor: int

    @property
    def n_lo(self) -> int:
        return _fx(2 * self.k + 1) if self.kind == "T" else _fx(2 * self.k)

    @property
    def n_hi(self) -> int:
        return _fx(2 * self.k + 3) if self.kind == "U" else _fx(2 * self.k + 2)

    @property
    def d_lo(self) -> int:
        k = self.k
        if self.kind == "U":
            return self.anchor - _fx(2 * k + 2)
        if self.kind == "V":
            return self.anchor
        return self.anchor - _fx(2 * k)

    @property
    def d_hi(self) -> int:
        if self.kind == "V":
            return self.anchor + _fx(2 * self.k + 1)
        return self.anchor

    @property
    def label(self) -> str:
        return f"{self.kind}_{{{self.k},{self.i}}}"

    def contains(self, m: int, n: int) -> bool:
        return m >= 0 and self.n_lo <= n < self.n_hi and self.d_lo < m + n <= self.d_hi

    def position(self, m: int, n: int) -> frozenset[str]:
        if not self.contains(m, n):
            raise ValueError(f"({m},{n}) is not in {self.label}")
        d = m + n
        flags = set()
        if n == self.n_lo:
            flags.add(BOTTOM_ROW)
        if n == self.n_hi - 1:
            flags.add(TOP_ROW)
        if d == self.d_lo + 1:
            flags.add(LEFT_EDGE)
        if d == self.d_hi:
            flags.add(RIGHT_EDGE)
        return frozenset(flags or {INTERIOR})

    def rows(self, window: Window) -> Iterator[tuple[int, int, int]]:
        """``(n, m_first, m_last)`` for each row of this tile inside the window."""
        for n in range(max(self.n_lo, window.n_min), min(self.n_hi - 1, window.n_max) + 1):
            lo = max(0, self.d_lo + 1 - n)
            hi = min(window.m_max, self.d_hi - n)
            if lo <= hi:
                yield n, lo, hi


@dataclass(frozen=True)
class CellClass:
    m: int
    n: int
    region: Parallelogram | None
    flags: frozenset[str] = field(default_factory=frozenset)

    @property
    def special_origin(self) -> bool:
        return self.region is None

    @property
    def kind(self) -> str:
        return "SpecialOrigin" if self.region is None else self.region.kind

    @property
    def flag_text(self) -> str:
        return "|".join(fl for fl in _FLAG_ORDER if fl in self.flags)


# (tile kind, anchor family, generation shift, offset from anchor to d_hi)
def _tile_spec(kind: str, k: int) -> tuple[Kind, int, int]:
    if kind == "U":
        return Kind.EPRIME, k + 1, 0
    if kind == "V":
        return Kind.FDOUBLEPRIME, k, f(2 * k + 2)
    return Kind.EPRIME, k, 0


def _tile(kind: str, k: int, i: int, raw: int) -> Parallelogram:
    anchor = raw + f(2 * k) if kind == "V" else raw
    return Parallelogram(k, kind, i, anchor)


def _strip(n: int) -> int:
    # k with f_{2k} <= n < f_{2k+2}
    return (bisect.bisect_right(F_TABLE[0::2], n) - 1)


def classify(m: int, n: int) -> CellClass:
    if m < 0 or n < 1:
        raise ValueError(f"cells need m >= 0 and n >= 1, got ({m},{n})")
    d = m + n
    if d == 1:
        return CellClass(m, n, None, frozenset())
    k = _strip(n)
    candidates = []
    if n < f(2 * k + 1):
        candidates.append(("U", k - 1))
    candidates += [("U", k), ("V", k)]
    if n >= f(2 * k + 1):
        candidates.append(("T", k))
    hits = []
    for kind, kk in candidates:
        fam_kind, fam_k, offset = _tile_spec(kind, kk)
        fam = family(fam_kind, fam_k)
        j = fam.index_at_least(d - offset)
        tile = _tile(kind, kk, j + 1, fam.member(j + 1))
        if tile.contains(m, n):
            hits.append(tile)
    if len(hits) != 1:
        raise PartitionError(f"({m},{n}) lies in {len(hits)} parallelograms: {[t.label for t in hits]}")
    tile = hits[0]
    return CellClass(m, n, tile, tile.position(m, n))


@dataclass(frozen=True)
class Window:
    """Cells ``0 <= m <= m_max``, ``n_min <= n <= n_max``."""

    m_max: int
    n_max: int
    n_min: int = 1

    def __post_init__(self) -> None:
        if self.n_min < 1:
            raise ValueError("n_min must be >= 1")

    @property
    def empty(self) -> bool:
        return self.m_max < 0 or self.n_max < self.n_min

    @property
    def width(self) -> int:
        return max(self.m_max + 1, 0)

    @property
    def height(self) -> int:
        return max(self.n_max - self.n_min + 1, 0)

    def __len__(self) -> int:
        return 0 if self.empty else self.width * self.height

    def cells(self) -> Iterator[tuple[int, int]]:
        if self.empty:
            return
        for n in range(self.n_min, self.n_max + 1):
            for m in range(self.m_max + 1):
                yield m, n


def parallelograms_in_window(window: Window, include_degenerate: bool = False) -> list[Parallelogram]:
    """Every tile meeting the window, sorted by (k, kind, i)."""
    if window.empty:
        return []
    out = []
    k = -1 if include_degenerate else 0
    while _fx(2 * k) <= window.n_max:
        kinds = ("U",) if k == -1 else ("T", "U", "V")
        for kind in kinds:
            fam_kind, fam_k, _ = _tile_spec(kind, k)
            probe = Parallelogram(k, kind, 0, 0)
            na = max(probe.n_lo, window.n_min)
            nb = min(probe.n_hi - 1, window.n_max)
            if na > nb:
                continue
            d_top = nb + window.m_max
            for i, raw in enumerate(family_upto(fam_kind, fam_k, d_top + _fx(2 * k + 3)), start=1):
                tile = _tile(kind, k, i, raw)
                if max(tile.d_lo + 1, na) <= min(tile.d_hi, d_top):
                    out.append(tile)
        k += 1
    return sorted(out)


@dataclass
class CoverageReport:
    window: Window
    counts: np.ndarray  # [n - n_min, m] -> number of covering tiles
    anomalies: list[tuple[int, int, int]]  # (m, n, count) with count != 1
    unexpected: list[tuple[int, int, int]]
    tiles: int

    @property
    def exact(self) -> bool:
        return not self.anomalies

    def summary(self) -> str:
        return (
            f"cells={len(self.window)} tiles={self.tiles} anomalies={len(self.anomalies)} "
            f"unexpected={len(self.unexpected)}"
        )


def _allowed_gap(m: int, n: int, count: int) -> bool:
    # cells closed only by the degenerate k = -1 tiles, plus the origin
    return count == 0 and n == 1 and (m == 0 or in_family(Kind.EPRIME, 0, m + 1))


def verify_partition(window: Window) -> CoverageReport:
    """Count the k >= 0 tiles covering each cell of the window."""
    counts = np.zeros((window.height, window.width), dtype=np.int64)
    tiles = parallelograms_in_window(window)
    for tile in tiles:
        for n, lo, hi in tile.rows(window):
            counts[n - window.n_min, lo : hi + 1] += 1
    anomalies = []
    for row, m in zip(*np.nonzero(counts != 1)):
        anomalies.append((int(m), int(row) + window.n_min, int(counts[row, m])))
    anomalies.sort(key=lambda t: (t[1], t[0]))
    unexpected = [a for a in anomalies if not _allowed_gap(*a)]
    return CoverageReport(window, counts, anomalies, unexpected, len(tiles))
