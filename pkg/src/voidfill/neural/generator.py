"""Two-stage generator inference.

The input is the normalized partial grid stacked with the mask as a
2-channel tensor. The coarse stage predicts the hole, its composite feeds
both refinement branches, and the decoder's output is composited so known
pixels pass through bit-identical.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..raster import DemGrid, Normalization, VoidMask, check_shapes, normalize
from .layers import build_stage, run_stage
from .netspec import NetworkSpec
from .weights import WeightStore


def network_input(norm_values: np.ndarray, mask: VoidMask) -> np.ndarray:
    """Stack normalized heights and the mask as a (1, 2, H, W) float32 tensor."""
    return np.stack([norm_values, mask.bits.astype(np.float64)])[None].astype(np.float32)


def composite_grid(grid: DemGrid, mask: VoidMask, out_norm: np.ndarray, norm: Normalization) -> DemGrid:
    """Known pixels keep the input heights bitwise; unknown pixels take the
    denormalized network output."""
    values = grid.values.copy()
    unknown = mask.bits
    values[unknown] = norm.denormalize(out_norm)[unknown]
    return grid.with_values(values)


def generator_forward(
    grid: DemGrid, mask: VoidMask, spec: NetworkSpec, weights: WeightStore
) -> tuple[DemGrid, DemGrid]:
    """Run the full generator; returns (coarse fill, refined fill)."""
    check_shapes(grid, mask)
    if mask.known_count == 0:
        raise DataError("generator needs at least one known pixel")
    norm_values, norm = normalize(grid, mask)
    unknown = mask.bits
    x = network_input(norm_values, mask)

    coarse_layers = build_stage(spec.coarse, weights, "coarse")
    y_coarse = run_stage(coarse_layers, x)
    _check_head(y_coarse, x, "coarse")
    coarse_norm = y_coarse[0, 0].astype(np.float64)
    coarse_grid = composite_grid(grid, mask, coarse_norm, norm)

    # refinement consumes the coarse composite, again with the mask channel
    comp = np.where(unknown, coarse_norm, norm_values)
    x2 = np.stack([comp, unknown.astype(np.float64)])[None].astype(np.float32)
    a = run_stage(build_stage(spec.branch_a, weights, "branch_a"), x2, unknown=unknown)
    b = run_stage(build_stage(spec.branch_b, weights, "branch_b"), x2, unknown=unknown)
    if a.shape[2:] != b.shape[2:]:
        raise DataError(f"branch outputs disagree: A {a.shape} vs B {b.shape}")
    merged = np.concatenate([a, b], axis=1)
    y = run_stage(build_stage(spec.decoder, weights, "decoder"), merged)
    _check_head(y, x, "decoder")
    refined_grid = composite_grid(grid, mask, y[0, 0].astype(np.float64), norm)
    return coarse_grid, refined_grid


def _check_head(y: np.ndarray, x: np.ndarray, stage: str) -> None:
    if y.shape[1] != 1 or y.shape[2:] != x.shape[2:]:
        raise DataError(f"{stage} stage produced shape {y.shape}, expected (_, 1, {x.shape[2]}, {x.shape[3]})")
