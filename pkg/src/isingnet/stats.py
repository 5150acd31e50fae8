"""Pearson correlation with p-value bands and fixed-grid 2D histograms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

P_BANDS = ((0.001, "p<0.001"), (0.01, "p<0.01"), (0.05, "p<0.05"))
NOT_SIGNIFICANT = "n.s."


@dataclass(frozen=True)
class CorrelationReport:
    x_name: str
    y_name: str
    count: int
    pearson_r: float | None
    p_value: float | None
    p_inequality: str

    @property
    def defined(self) -> bool:
        return self.pearson_r is not None

    def to_json(self) -> dict:
        return {
            "x": self.x_name,
            "y": self.y_name,
            "count": self.count,
            "pearson_r": self.pearson_r,
            "p_value": self.p_value,
            "p_inequality": self.p_inequality,
        }

    def __str__(self) -> str:
        r = "undefined" if self.pearson_r is None else f"{self.pearson_r:+.4f}"
        return f"{self.y_name} vs {self.x_name}: n={self.count} r={r} {self.p_inequality}"


@dataclass(frozen=True, eq=False)
class Histogram2D:
    counts: np.ndarray
    x_edges: np.ndarray
    y_edges: np.ndarray

    def bin_of(self, x: float, y: float) -> tuple[int, int]:
        return _bin_index(self.x_edges, np.array([x]))[0], _bin_index(self.y_edges, np.array([y]))[0]


def p_band(p: float) -> str:
    for threshold, label in P_BANDS:
        if p < threshold:
            return label
    return NOT_SIGNIFICANT


def pearson(xs, ys, x_name: str = "x", y_name: str = "y") -> CorrelationReport:
    """Sample Pearson r with a two-sided t-test banded at 0.05/0.01/0.001.

    Constant input gives an undefined correlation rather than an error.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-D of equal length")
    m = len(x)
    if m < 3:
        raise ValueError("need at least three samples")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = dx @ dx, dy @ dy
    if sxx == 0 or syy == 0:
        return CorrelationReport(x_name, y_name, m, None, None, "undefined correlation")
    r = float(np.clip((dx @ dy) / np.sqrt(sxx * syy), -1.0, 1.0))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * np.sqrt((m - 2) / (1.0 - r * r))
        p = float(2.0 * sps.t.sf(abs(t), m - 2))
    return CorrelationReport(x_name, y_name, m, r, p, p_band(p))


def _edges(v: np.ndarray, bins: int) -> np.ndarray:
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        return np.array([lo, hi])
    return np.linspace(lo, hi, bins + 1)


def _bin_index(edges: np.ndarray, v: np.ndarray) -> np.ndarray:
    nbins = len(edges) - 1
    if edges[0] == edges[-1]:
        return np.zeros(len(v), dtype=int)
    idx = np.searchsorted(edges, v, side="right") - 1
    return np.clip(idx, 0, nbins - 1)


def histogram2d(xs, ys, bins: int = 64) -> Histogram2D:
    """Linear bins spanning each axis' data range; the maximum lands in the top bin.

    An axis whose values are all equal collapses to a single bin.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) == 0:
        raise ValueError("xs and ys must be non-empty 1-D of equal length")
    xe, ye = _edges(x, bins), _edges(y, bins)
    counts = np.zeros((len(xe) - 1, len(ye) - 1), dtype=np.int64)
    np.add.at(counts, (_bin_index(xe, x), _bin_index(ye, y)), 1)
    return Histogram2D(counts, xe, ye)
