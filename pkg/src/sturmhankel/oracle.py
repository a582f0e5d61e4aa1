"""Ground-truth Hankel determinants computed straight from the word.

Matrices are filled from the substitution-generated prefix only; nothing here
consults the numeration system, the tiling or the closed form.

Two exact methods are provided: fraction-free (Bareiss) elimination over
Python integers, and elimination modulo a fixed pool of primes recombined by
the Chinese remainder theorem.  The CRT path uses as many primes as needed to
exceed twice the Hadamard bound n^{n/2} of an n x n 0/1 matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .sequence import s_prefix

__all__ = [
    "PRIME_POOL",
    "MAX_PREFIX",
    "ConfigurationError",
    "HankelMatrix",
    "matrix",
    "det_bareiss",
    "primes_for",
    "det_mod_p",
    "det_crt",
    "det_crt_batch",
    "eval_oracle",
    "eval_oracle_row",
]

#: The 64 largest primes below 2**31, descending.  Residues stay below 2**31,
#: so every product of two residues fits a signed 64-bit lane.
PRIME_POOL: tuple[int, ...] = (
    2147483647, 2147483629, 2147483587, 2147483579,
    2147483563, 2147483549, 2147483543, 2147483497,
    2147483489, 2147483477, 2147483423, 2147483399,
    2147483353, 2147483323, 2147483269, 2147483249,
    2147483237, 2147483179, 2147483171, 2147483137,
    2147483123, 2147483077, 2147483069, 2147483059,
    2147483053, 2147483033, 2147483029, 2147482951,
    2147482949, 2147482943, 2147482937, 2147482921,
    2147482877, 2147482873, 2147482867, 2147482859,
    2147482819, 2147482817, 2147482811, 2147482801,
    2147482763, 2147482739, 2147482697, 2147482693,
    2147482681, 2147482663, 2147482661, 2147482621,
    2147482591, 2147482583, 2147482577, 2147482507,
    2147482501, 2147482481, 2147482417, 2147482409,
    2147482367, 2147482361, 2147482349, 2147482343,
    2147482327, 2147482291, 2147482273, 2147482237,
)


#: Longest word prefix the oracle will materialize (one byte per letter).
MAX_PREFIX = 1 << 31


class ConfigurationError(RuntimeError):
    """The prime pool cannot certify a determinant of the requested order."""


@dataclass(frozen=True)
class HankelMatrix:
    """M_{m,n} = (s_{m+i+j}) stored as its defining segment s_m .. s_{m+2n-2}."""

    m: int
    n: int
    segment: bytes

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError((i, j))
        return self.segment[i + j]

    def rows(self) -> list[list[int]]:
        seg = self.segment
        return [list(seg[i : i + self.n]) for i in range(self.n)]

    def array(self) -> np.ndarray:
        seg = np.frombuffer(self.segment, dtype=np.uint8).astype(np.int64)
        idx = np.arange(self.n)
        return seg[idx[:, None] + idx[None, :]]


def matrix(m: int, n: int) -> HankelMatrix:
    if m < 0 or n < 1:
        raise ValueError(f"need m >= 0 and n >= 1, got ({m},{n})")
    if m + 2 * n - 1 > MAX_PREFIX:
        raise MemoryError(f"matrix({m},{n}) needs a {m + 2 * n - 1}-letter prefix; the oracle cap is {MAX_PREFIX}")
    return HankelMatrix(m, n, s_prefix(m + 2 * n - 1)[m:])


def _rows(mat: HankelMatrix | Sequence[Sequence[int]]) -> list[list[int]]:
    rows = mat.rows() if isinstance(mat, HankelMatrix) else [list(map(int, r)) for r in mat]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("determinant of a non-square matrix")
    return rows


def det_bareiss(mat: HankelMatrix | Sequence[Sequence[int]]) -> int:
    """Fraction-free elimination; every intermediate entry is an exact minor."""
    a = _rows(mat)
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            for r in range(c + 1, n):
                if a[r][c]:
                    a[c], a[r] = a[r], a[c]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[c][c]
        row_c = a[c]
        for r in range(c + 1, n):
            row_r = a[r]
            lead = row_r[c]
            for j in range(c + 1, n):
                row_r[j] = (row_r[j] * piv - lead * row_c[j]) // prev
            row_r[c] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def primes_for(n: int) -> tuple[int, ...]:
    """Shortest prefix of the pool whose product exceeds 2 * n^{n/2}."""
    need = 4 * n**n  # compare squares to stay in integers
    prod = 1
    for count, p in enumerate(PRIME_POOL, start=1):
        prod *= p
        if prod * prod > need:
            return PRIME_POOL[:count]
    raise ConfigurationError(f"prime pool too small for order {n} (Hadamard bound exceeds pool product)")


@njit(cache=True)
def _det_mod_p(a0: np.ndarray, p: int) -> int:
    a = a0 % p
    n = a.shape[0]
    det = 1
    for c in range(n):
        r = c
        while r < n and a[r, c] == 0:
            r += 1
        if r == n:
            return 0
        if r != c:
            for j in range(c, n):
                t = a[c, j]
                a[c, j] = a[r, j]
                a[r, j] = t
            det = p - det
        piv = a[c, c]
        det = det * piv % p
        inv = 1
        base = piv
        e = p - 2
        while e:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for i in range(c + 1, n):
            fct = a[i, c] * inv % p
            if fct:
                for j in range(c + 1, n):
                    a[i, j] = (a[i, j] - fct * a[c, j]) % p
    return det % p


@njit(cache=True)
def _residues(stack: np.ndarray, primes: np.ndarray) -> np.ndarray:
    out = np.zeros((primes.shape[0], stack.shape[0]), dtype=np.int64)
    for b in range(stack.shape[0]):
        for j in range(primes.shape[0]):
            out[j, b] = _det_mod_p(stack[b], primes[j])
    return out


def det_mod_p(mat: HankelMatrix | Sequence[Sequence[int]], p: int) -> int:
    arr = mat.array() if isinstance(mat, HankelMatrix) else np.array(_rows(mat), dtype=np.int64)
    if arr.size == 0:
        return 1 % p
    return int(_det_mod_p(arr, p))


def _crt_lift(residues: Sequence[Sequence[int]], primes: Sequence[int]) -> list[int]:
    # residues[j][b]: value of matrix b modulo primes[j]; symmetric lift
    out = []
    for column in zip(*residues):
        x, mod = 0, 1
        for r, p in zip(column, primes):
            t = (r - x) * pow(mod, -1, p) % p
            x += mod * t
            mod *= p
        out.append(x - mod if 2 * x > mod else x)
    return out


def det_crt_batch(mats: Sequence[HankelMatrix | Sequence[Sequence[int]]]) -> list[int]:
    """Determinants of same-order 0/1 matrices via residues modulo the pool."""
    if not mats:
        return []
    arrs = [m.array() if isinstance(m, HankelMatrix) else np.array(_rows(m), dtype=np.int64) for m in mats]
    n = arrs[0].shape[0]
    if any(a.shape != (n, n) for a in arrs):
        raise ValueError("batched matrices must share one square order")
    if n == 0:
        return [1] * len(arrs)
    stack = np.stack(arrs)
    if stack.min() < 0 or stack.max() > 1:
        raise ValueError("the Hadamard sizing assumes 0/1 entries")
    primes = primes_for(n)
    residues = _residues(stack, np.array(primes, dtype=np.int64)).tolist()
    return _crt_lift(residues, primes)


def det_crt(mat: HankelMatrix | Sequence[Sequence[int]]) -> int:
    return det_crt_batch([mat])[0]


def eval_oracle(m: int, n: int, method: str = "crt") -> int:
    mat = matrix(m, n)
    if method == "crt":
        return det_crt(mat)
    if method == "bareiss":
        return det_bareiss(mat)
    raise ValueError(f"unknown method {method!r}; expected 'crt' or 'bareiss'")


def eval_oracle_row(n: int, ms: Sequence[int], chunk: int = 256) -> list[int]:
    """H_{m,n} for many m at one order n, batched through the CRT path."""
    out: list[int] = []
    ms = list(ms)
    for start in range(0, len(ms), chunk):
        out += det_crt_batch([matrix(m, n) for m in ms[start : start + chunk]])
    return out
