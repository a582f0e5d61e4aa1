"""The f-numeration system and the fixed point of 1 -> 101, 0 -> 1.

The length sequence satisfies

    f_0 = 1, f_1 = 2, f_{2j+2} = f_{2j} + f_{2j+1}, f_{2j+3} = f_{2j} + f_{2j+2}

with f_{2j} = |tau^j(1)| and f_{2j+1} = |tau^j(10)|.  Every n >= 0 has exactly
one greedy expansion in these lengths; its lowest digit decides the letter s_n.
"""
from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "INT64_MAX",
    "F_TABLE",
    "WidthOverflowError",
    "InvalidRepresentationError",
    "FRep",
    "SturmianWord",
    "f",
    "f_mod4",
    "encode",
    "decode",
    "validate",
    "phi",
    "s_prefix",
    "s_at",
    "s_at_half",
    "shift_even_differs",
    "shift_odd_differs",
]

INT64_MAX = 2**63 - 1


class WidthOverflowError(OverflowError):
    """A quantity left the signed 64-bit range."""

    def __init__(self, what: str, index: int | None = None):
        self.index = index
        if index is not None:
            what = f"{what} (index j={index})"
        super().__init__(f"{what} exceeds the 64-bit range")


class InvalidRepresentationError(ValueError):
    """A digit vector violates the f-representation constraints."""


def _build_table() -> tuple[int, ...]:
    vals = [1, 2]
    while True:
        j = len(vals)
        nxt = vals[j - 2] + vals[j - 1] if j % 2 == 0 else vals[j - 3] + vals[j - 1]
        if nxt > INT64_MAX:
            return tuple(vals)
        vals.append(nxt)


#: Every representable f_j, j = 0 .. len(F_TABLE) - 1.
F_TABLE: tuple[int, ...] = _build_table()


def f(j: int) -> int:
    if j < 0:
        raise ValueError(f"f is indexed from 0, got {j}")
    if j >= len(F_TABLE):
        raise WidthOverflowError("f_j", j)
    return F_TABLE[j]


# f_j mod 4 repeats with period 8 in j.
_F_MOD4 = (1, 2, 3, 0, 3, 2, 1, 0)


def f_mod4(j: int) -> int:
    """Residue of f_j modulo 4 without evaluating f_j."""
    if j < 0:
        raise ValueError(f"f is indexed from 0, got {j}")
    return _F_MOD4[j % 8]


def _check_width(n: int, what: str = "value") -> None:
    if n > INT64_MAX:
        raise WidthOverflowError(f"{what} {n}")


@dataclass(frozen=True)
class FRep:
    """Digits a_0, a_1, ... of an f-representation, lowest index first.

    The highest stored digit is 1 unless the value is 0 (then ``digits`` is
    empty).
    """

    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        ok, why = validate(self.digits)
        if not ok:
            raise InvalidRepresentationError(why)
        if self.digits and self.digits[-1] != 1:
            raise InvalidRepresentationError("highest stored digit must be 1")

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> FRep:
        idx = sorted(set(indices))
        if not idx:
            return cls(())
        digits = [0] * (idx[-1] + 1)
        for i in idx:
            digits[i] = 1
        return cls(tuple(digits))

    @property
    def indices(self) -> list[int]:
        return [i for i, a in enumerate(self.digits) if a]

    def digit(self, i: int) -> int:
        return self.digits[i] if i < len(self.digits) else 0

    @property
    def value(self) -> int:
        return decode(self)

    def __str__(self) -> str:
        return "".join(map(str, self.digits)) or "0"


def validate(bits: Sequence[int]) -> tuple[bool, str | None]:
    """Check the two digit constraints; returns ``(ok, first_violation)``."""
    for i, a in enumerate(bits):
        if a not in (0, 1):
            return False, f"digit a_{i}={a} is not a bit"
    for i in range(len(bits) - 1):
        if bits[i] and bits[i + 1]:
            return False, f"adjacent digits a_{i} and a_{i + 1} are both 1"
        if i % 2 == 0 and i + 2 < len(bits) and bits[i] and bits[i + 2]:
            return False, f"digits a_{i} and a_{i + 2} (even i) are both 1"
    return True, None


def _greedy_indices(n: int) -> list[int]:
    # descending indices of the greedy expansion
    if n < 0:
        raise ValueError(f"expected a nonnegative integer, got {n}")
    _check_width(n)
    out = []
    hi = len(F_TABLE)
    while n:
        j = bisect.bisect_right(F_TABLE, n, 0, hi) - 1
        out.append(j)
        n -= F_TABLE[j]
        hi = j
    return out


def encode(n: int) -> FRep:
    idx = _greedy_indices(n)
    if not idx:
        return FRep(())
    digits = [0] * (idx[0] + 1)
    for j in idx:
        digits[j] = 1
    return FRep(tuple(digits))


def decode(rep: FRep | Sequence[int]) -> int:
    bits = rep.digits if isinstance(rep, FRep) else tuple(rep)
    ok, why = validate(bits)
    if not ok:
        raise InvalidRepresentationError(why)
    total = 0
    for i, a in enumerate(bits):
        if a:
            total += f(i)
    _check_width(total, "decoded value")
    return total


def phi(k: int, n: int) -> int:
    """Truncated representation: the part of n using digits a_0 .. a_{2k+2}."""
    if k < 0:
        raise ValueError(f"generation must be >= 0, got {k}")
    top = 2 * k + 2
    return sum(F_TABLE[j] for j in _greedy_indices(n) if j <= top)


class SturmianWord:
    """Growable prefix of the fixed point, built by whole substitution steps.

    Readers may share one instance across threads; growth is serialized and
    only ever replaces the buffer with a longer prefix.
    """

    def __init__(self) -> None:
        self._bits = b"\x01"
        self._lock = threading.Lock()

    @staticmethod
    def substitute(word: bytes) -> bytes:
        # 1 -> 101, 0 -> 1, with \x02 as a placeholder for the new zeros
        return word.replace(b"\x01", b"\x01\x02\x01").replace(b"\x00", b"\x01").replace(b"\x02", b"\x00")

    def ensure(self, length: int) -> bytes:
        bits = self._bits
        if len(bits) >= length:
            return bits
        with self._lock:
            bits = self._bits
            while len(bits) < length:
                bits = self.substitute(bits)
            self._bits = bits
        return bits

    def prefix(self, length: int) -> bytes:
        if length < 0:
            raise ValueError(f"length must be >= 0, got {length}")
        return self.ensure(length)[:length]

    def __len__(self) -> int:
        return len(self._bits)

    def __getitem__(self, n: int) -> int:
        return self.ensure(n + 1)[n]


_WORD = SturmianWord()


def s_prefix(length: int) -> bytes:
    """First ``length`` letters of the fixed point, one 0/1 value per byte."""
    return _WORD.prefix(length)


def s_at(n: int) -> int:
    """Letter s_n read off the lowest f-digit; never touches the word buffer."""
    idx = _greedy_indices(n)
    return 0 if idx and idx[-1] == 0 else 1


def s_at_half(k: int) -> tuple[int, int]:
    """``(s_{f_{2k+1}/2}, s_{f_{2k+1}/2 - 1})``, determined by the parity of k."""
    if k < 0:
        raise ValueError(f"generation must be >= 0, got {k}")
    return (1, 0) if k % 2 else (0, 1)


def shift_even_differs(n: int, k: int) -> bool:
    """Whether s_{n + f_{2k}} != s_n, decided from the truncated representation."""
    if k < 0:
        raise ValueError(f"generation must be >= 0, got {k}")
    half = f(2 * k + 1) // 2
    return phi(k, n) in (half, half - 1)


def shift_odd_differs(n: int, k: int) -> bool:
    """Whether s_{n + f_{2k+1}} != s_n; only established for k >= 1."""
    if k < 1:
        raise ValueError("odd-shift criterion is only available for k >= 1; compare letters directly")
    half = f(2 * k + 3) // 2
    low = f(2 * k)
    return phi(k, n) in (half, half - 1, half + low, half + low - 1)
