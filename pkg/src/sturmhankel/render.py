"""PPM rendering of a window of Hankel determinants.

One pixel per cell, m increasing to the right and n increasing upward (the
first image row is n = n_max).  ``transpose=True`` swaps the axes.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .closed_form import eval_closed
from .oracle import eval_oracle_row
from .partition import Window

__all__ = ["PALETTE_VERSION", "color", "value_grid", "ppm_bytes", "write_ppm"]

PALETTE_VERSION = "v1"

WHITE = (255, 255, 255)


def color(v: int) -> tuple[int, int, int]:
    if v == 0:
        return WHITE
    c = min(abs(v), 15)
    if v > 0:
        return (255 - 12 * c, 40 + 10 * c, 40)
    return (40, 40 + 10 * c, 255 - 12 * c)


def value_grid(window: Window, source: str = "closed") -> list[list[int]]:
    """``grid[n - n_min][m]`` for the whole window."""
    ms = range(window.m_max + 1)
    rows = range(window.n_min, window.n_max + 1)
    if source == "closed":
        return [[eval_closed(m, n) for m in ms] for n in rows]
    if source == "oracle":
        return [eval_oracle_row(n, ms) for n in rows]
    raise ValueError(f"unknown source {source!r}; expected 'closed' or 'oracle'")


def ppm_bytes(grid: Sequence[Sequence[int]], transpose: bool = False) -> bytes:
    if transpose:
        grid = [list(col) for col in zip(*grid)]
    height = len(grid)
    width = len(grid[0]) if height else 0
    body = bytearray()
    for row in reversed(grid):  # top image row is the largest second coordinate
        for v in row:
            body += bytes(color(v))
    return f"P6\n{width} {height}\n255\n".encode("ascii") + bytes(body)


def write_ppm(path: str | Path, window: Window, source: str = "closed", transpose: bool = False) -> bytes:
    data = ppm_bytes(value_grid(window, source), transpose)
    Path(path).write_bytes(data)
    return data
