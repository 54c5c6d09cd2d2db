"""Boundary blending: C2-extend the known surface into the void and fade
it into the filler's prediction over a band of rings.

Ring k of the band receives (1 - alpha_k) * extension + alpha_k * fill
with alpha_k = beta((k-1)/w), so ring 1 is pure extension and the weight
hands off smoothly toward the fill. The extension itself evolves from ring
to ring: each ring's fitted values (not the blended ones) become the known
state for the next ring's window fits, keeping the extended surface C2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DataError
from .fillers import extend_ring
from .geometry import ring_partition
from .raster import DemGrid, VoidMask, check_shapes


@dataclass(frozen=True)
class BlendConfig:
    width: int = 8
    fit_radius: int = 3
    steepness: float = 10.0

    def __post_init__(self):
        if self.width < 1:
            raise DataError(f"blend width must be >= 1, got {self.width}")
        if self.fit_radius < 1:
            raise DataError(f"fit radius must be >= 1, got {self.fit_radius}")
        if self.steepness <= 0:
            raise DataError(f"sigmoid steepness must be > 0, got {self.steepness}")


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def blend_weight(t, steepness: float = 10.0):
    """Logistic blend rescaled to an exact bijection of [0, 1].

    beta(t) = (sigma(s*(t - 1/2)) - sigma(-s/2)) / (sigma(s/2) - sigma(-s/2));
    beta(0) = 0 and beta(1) = 1 hold exactly, and beta is strictly increasing.
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise DataError("blend weight argument must lie in [0, 1]")
    if steepness <= 0:
        raise DataError(f"sigmoid steepness must be > 0, got {steepness}")
    lo = _sigmoid(-0.5 * steepness)
    hi = _sigmoid(0.5 * steepness)
    out = (_sigmoid(steepness * (t - 0.5)) - lo) / (hi - lo)
    return float(out) if out.ndim == 0 else out


def blend_boundary(d0: DemGrid, filled: DemGrid, mask: VoidMask, cfg: BlendConfig | None = None) -> DemGrid:
    """Blend the C2 extension of d0's known region into `filled` over the band.

    Known pixels keep d0's values bit for bit; band rings get the convex
    blend; unknown pixels beyond the band keep the fill.
    """
    cfg = cfg or BlendConfig()
    check_shapes(d0, mask)
    check_shapes(filled, mask)
    if mask.bits.all():
        raise DataError("cannot blend when every pixel is unknown")
    if np.any(filled.values == filled.nodata):
        raise DataError("filled grid still contains nodata pixels")

    out = filled.values.copy()
    known_bits = ~mask.bits
    out[known_bits] = d0.values[known_bits]
    if mask.bits.any():
        extension = d0.values.copy()
        known = known_bits.copy()
        part = ring_partition(mask)
        for k, ring in enumerate(part.rings[: cfg.width], start=1):
            alpha = blend_weight((k - 1) / cfg.width, cfg.steepness)
            fitted = extend_ring(extension, known, ring, cfg.fit_radius)
            rr, cc = ring[:, 0], ring[:, 1]
            extension[rr, cc] = fitted
            out[rr, cc] = (1.0 - alpha) * fitted + alpha * filled.values[rr, cc]
            known[rr, cc] = True
    return d0.with_values(out)


def fill_and_blend(
    grid: DemGrid,
    mask: VoidMask,
    filler: Callable[[DemGrid, VoidMask], DemGrid],
    cfg: BlendConfig | None = None,
) -> DemGrid:
    """Run a filler, then blend the boundary band (the complete pipeline)."""
    return blend_boundary(grid, filler(grid, mask), mask, cfg)
