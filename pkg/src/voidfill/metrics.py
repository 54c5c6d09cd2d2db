"""Fill-quality metrics: MSE and Earth Mover's distance on height histograms.

Both metrics look at unknown pixels only; known pixels are identical
between prediction and truth by the filler contract and would dilute the
scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .raster import DemGrid, VoidMask, check_shapes

DEFAULT_BINS = 256


def mse(pred: DemGrid, truth: DemGrid, mask: VoidMask) -> float:
    """Mean squared error over unknown pixels."""
    check_shapes(pred, mask)
    check_shapes(truth, mask)
    if not mask.bits.any():
        raise DataError("mse needs at least one unknown pixel")
    diff = pred.values[mask.bits] - truth.values[mask.bits]
    return float(np.mean(diff * diff))


@dataclass(frozen=True)
class HistogramPair:
    """Two histograms over a shared range, normalized to unit mass."""

    bins: int
    lo: float
    hi: float
    masses_a: np.ndarray
    masses_b: np.ndarray

    @property
    def bin_width(self) -> float:
        return (self.hi - self.lo) / self.bins

    @classmethod
    def build(cls, a: np.ndarray, b: np.ndarray, bins: int = DEFAULT_BINS) -> "HistogramPair":
        lo = float(min(a.min(), b.min()))
        hi = float(max(a.max(), b.max()))
        counts_a, _ = np.histogram(a, bins=bins, range=(lo, hi))
        counts_b, _ = np.histogram(b, bins=bins, range=(lo, hi))
        return cls(
            bins=bins,
            lo=lo,
            hi=hi,
            masses_a=counts_a / counts_a.sum(),
            masses_b=counts_b / counts_b.sum(),
        )


def wasserstein_binned(masses_a: np.ndarray, masses_b: np.ndarray, bin_width: float) -> float:
    """Exact 1-D Wasserstein-1 distance between binned unit-mass histograms:
    sum over bins of |CDF_a - CDF_b| times the bin width."""
    cdf_a = np.cumsum(np.asarray(masses_a, dtype=np.float64))
    cdf_b = np.cumsum(np.asarray(masses_b, dtype=np.float64))
    return float(np.abs(cdf_a - cdf_b).sum() * bin_width)


def em_histogram(pred: DemGrid, truth: DemGrid, mask: VoidMask, bins: int = DEFAULT_BINS) -> float:
    """Earth Mover's distance between the height histograms of the filled
    and true unknown pixels, over the shared range of both value sets."""
    check_shapes(pred, mask)
    check_shapes(truth, mask)
    if not mask.bits.any():
        raise DataError("em_histogram needs at least one unknown pixel")
    a = pred.values[mask.bits]
    b = truth.values[mask.bits]
    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    if lo == hi:
        return 0.0
    pair = HistogramPair.build(a, b, bins=bins)
    return wasserstein_binned(pair.masses_a, pair.masses_b, pair.bin_width)
