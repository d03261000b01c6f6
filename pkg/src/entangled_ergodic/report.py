"""Convergence tables and their CSV form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

ZERO_FLOOR = 1e-13


def fit_loglog_slope(rows: Iterable[tuple[int, float]], floor: float = ZERO_FLOOR) -> Optional[float]:
    """Least-squares slope of ``log deviation`` against ``log N``.

    Rows at or below ``floor`` count as exact zeros and are skipped; with
    fewer than two usable rows the slope is undefined and ``None`` is returned.
    """
    pts = [(n, d) for n, d in rows if d > floor]
    if len(pts) < 2:
        return None
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    xc = x - x.mean()
    var = float(np.dot(xc, xc))
    if var == 0.0:
        return None
    return float(np.dot(xc, y - y.mean()) / var)


def _fmt(x: float) -> str:
    return f"{x:.16e}"


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[tuple[int, float], ...]
    fitted_slope: Optional[float]
    probe_count: int

    def __post_init__(self):
        ns = [n for n, _ in self.rows]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("report rows must have strictly increasing N")
        if any(not math.isfinite(d) or d < 0 for _, d in self.rows):
            raise ValueError("deviations must be finite and non-negative")

    @classmethod
    def from_rows(cls, rows, probe_count: int = 0) -> "ConvergenceReport":
        rows = tuple((int(n), float(d)) for n, d in rows)
        return cls(rows, fit_loglog_slope(rows), probe_count)

    @property
    def slope_defined(self) -> bool:
        return self.fitted_slope is not None

    @property
    def max_deviation(self) -> float:
        return max((d for _, d in self.rows), default=0.0)

    def to_csv(self) -> str:
        lines = ["N,deviation"]
        lines += [f"{n},{_fmt(d)}" for n, d in self.rows]
        slope = "nan" if self.fitted_slope is None else _fmt(self.fitted_slope)
        lines.append(f"# slope={slope}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_csv())
        return path

    @classmethod
    def from_csv(cls, text: str) -> "ConvergenceReport":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if not lines or lines[0] != "N,deviation":
            raise ValueError("missing N,deviation header")
        rows, slope = [], None
        for ln in lines[1:]:
            if ln.startswith("# slope="):
                val = ln.split("=", 1)[1]
                slope = None if val == "nan" else float(val)
            else:
                n, d = ln.split(",")
                rows.append((int(n), float(d)))
        return cls(tuple(rows), slope, 0)
