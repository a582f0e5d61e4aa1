"""Exact H_{m,n} from the tile containing (m, n).

Every sign (-1)^e is computed from the parity of e only.  The parities come
from f_j mod 4 and n mod 4; f-values are materialized only as magnitudes.
"""
from __future__ import annotations

from .partition import CellClass, Parallelogram, classify
from .sequence import f, f_mod4, phi, s_at

__all__ = ["eval_closed", "evaluate", "eval_U", "eval_V", "eval_T"]


def _sign(parity: int) -> int:
    return -1 if parity & 1 else 1


def _half_odd(j: int) -> int:
    """Parity of (f_j - 1)/2 for even j."""
    return (f_mod4(j) - 1) // 2


def _half_even(j: int) -> int:
    """Parity of f_j/2 for odd j."""
    return f_mod4(j) // 2


def _tri(t: int) -> int:
    """Parity of t(t-1)/2."""
    return 1 if t % 4 in (2, 3) else 0


def _check(region: Parallelogram, kind: str, m: int, n: int) -> None:
    if region.kind != kind or region.k < 0 or not region.contains(m, n):
        raise ValueError(f"({m},{n}) is not a cell of {region.label} (expected a {kind} tile, k >= 0)")


def eval_U(m: int, n: int, region: Parallelogram) -> int:
    _check(region, "U", m, n)
    k = region.k
    half = f(2 * k + 1) // 2
    if n == f(2 * k + 3) - 1:
        return _sign(k + 1 + _half_even(2 * k + 5) + phi(k + 1, m + n)) * half
    if n == f(2 * k):
        return _sign(k + 1 + _half_odd(2 * k + 2)) * half
    if m + n in (region.d_lo + 1, region.d_hi):
        t = f_mod4(2 * k + 3) - 1 - n  # f_{2k+3} - 1 - n, mod 4
        return -_sign((t + 1) * k + _tri(t)) * half
    return 0


def _v_top_parity(k: int) -> int:
    # parity of (f_{2k+2} + f_{2k+1} - 3)/2
    return ((f_mod4(2 * k + 2) + f_mod4(2 * k + 1) - 3) % 4) // 2


def eval_V(m: int, n: int, region: Parallelogram) -> int:
    _check(region, "V", m, n)
    k = region.k
    half = f(2 * k + 1) // 2
    if n == f(2 * k + 2) - 1:
        return _sign(_v_top_parity(k)) * half
    if n == f(2 * k):
        return _sign(k + 1 + _half_odd(2 * k + 2)) * half
    if m + n in (region.d_lo + 1, region.d_hi):
        # side edges carry the top-corner value, r = f_{2k+2} - 1 - n rows down,
        # with sign (-1)^{rk + r(r+1)/2}
        r = f_mod4(2 * k + 2) - 1 - n
        return _sign(r * k + _tri(r + 1) + _v_top_parity(k)) * half
    return 0


def eval_T(m: int, n: int, region: Parallelogram) -> int:
    _check(region, "T", m, n)
    k = region.k
    low = f(2 * k)
    if n == f(2 * k + 2) - 1:
        return _sign(_half_odd(2 * k)) * low
    if n == f(2 * k + 1):
        return _sign(phi(k, m + n) - _half_even(2 * k + 1) - 1) * low
    if m + n in (region.d_lo + 1, region.d_hi):
        t = f_mod4(2 * k + 2) - 1 - n
        return _sign(t * k + _tri(t) + _half_odd(2 * k)) * low
    return 0


_DISPATCH = {"U": eval_U, "V": eval_V, "T": eval_T}


def evaluate(cell: CellClass) -> int:
    """Value of an already classified cell."""
    if cell.region is None:
        return s_at(0)
    if cell.region.k < 0:
        return 0
    return _DISPATCH[cell.region.kind](cell.m, cell.n, cell.region)


def eval_closed(m: int, n: int) -> int:
    return evaluate(classify(m, n))
