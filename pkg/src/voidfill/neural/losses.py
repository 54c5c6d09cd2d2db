"""Reconstruction and adversarial loss evaluation.

The l1 reconstruction loss is spatially discounted over the void's L1
rings so deviations near known data cost more than deep-hole
hallucination. The WGAN-GP critic losses are evaluated (not trained): the
gradient penalty differentiates the critic's score with respect to its
input by reverse mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, ShapeMismatchError
from ..geometry import ring_partition
from ..raster import DemGrid, VoidMask, check_shapes
from .layers import backward_stage, build_stage, run_stage
from .netspec import CriticSpec, validate_critic
from .weights import WeightStore


@dataclass(frozen=True)
class LossConfig:
    discount_gamma: float = 0.99
    gp_lambda: float = 10.0

    def __post_init__(self):
        if not (0.0 < self.discount_gamma <= 1.0):
            raise DataError(f"discount gamma must be in (0, 1], got {self.discount_gamma}")


def discount_weights(mask: VoidMask, gamma: float) -> np.ndarray:
    """gamma^(k-1) on ring-k pixels, 0 on known pixels."""
    part = ring_partition(mask)
    weights = np.zeros(mask.shape, dtype=np.float64)
    unknown = mask.bits
    weights[unknown] = gamma ** (part.labels[unknown].astype(np.float64) - 1.0)
    return weights


def loss_l1_discounted(pred: DemGrid, truth: DemGrid, mask: VoidMask, gamma: float = 0.99) -> float:
    """Weighted mean absolute error over unknown pixels, ring-discounted."""
    check_shapes(pred, mask)
    check_shapes(truth, mask)
    if not mask.bits.any():
        raise DataError("discounted loss needs at least one unknown pixel")
    weights = discount_weights(mask, gamma)
    diff = np.abs(pred.values - truth.values)
    return float((weights * diff).sum() / weights.sum())


def mask_bbox(mask: VoidMask, multiple: int = 8) -> tuple[int, int, int, int]:
    """Tight bounding box (r0, r1, c0, c1), half-open, of the unknown pixels,
    grown to side lengths that are multiples of `multiple` (clipped to grid)."""
    if not mask.bits.any():
        raise DataError("mask has no unknown pixels; bounding box is empty")
    rows = np.flatnonzero(mask.bits.any(axis=1))
    cols = np.flatnonzero(mask.bits.any(axis=0))
    r0, r1 = int(rows[0]), int(rows[-1]) + 1
    c0, c1 = int(cols[0]), int(cols[-1]) + 1
    h, w = mask.shape
    r0, r1 = _pad_span(r0, r1, h, multiple)
    c0, c1 = _pad_span(c0, c1, w, multiple)
    return r0, r1, c0, c1


def _pad_span(lo: int, hi: int, limit: int, multiple: int) -> tuple[int, int]:
    size = min(limit, -(-(hi - lo) // multiple) * multiple)
    hi = min(limit, lo + size)
    lo = hi - size
    return lo, hi


def critic_score_and_input_grad(critic: CriticSpec, weights: WeightStore, x: np.ndarray):
    """Per-item scores (sum of final feature map) and d(score)/d(input)."""
    layers = build_stage(critic.layers, weights, "critic")
    y = run_stage(layers, x, cache=True)
    scores = y.astype(np.float64).sum(axis=(1, 2, 3))
    dy = np.ones_like(y)
    dx = backward_stage(layers, dy)
    return scores, dx


def wgan_gp_eval(
    real: np.ndarray,
    fake: np.ndarray,
    critic: CriticSpec,
    weights: WeightStore,
    bbox: tuple[int, int, int, int],
    epsilon: float,
    gp_lambda: float = 10.0,
) -> tuple[float, float]:
    """Critic loss mean D(fake) - mean D(real) + gp_lambda*(|grad| - 1)^2.

    The penalty gradient is taken at the interpolate eps*real +
    (1-eps)*fake with respect to the input. The local loss applies the
    same formula to the bbox crops. Diagnostic only; no critic training.
    """
    validate_critic(critic, in_ch=real.shape[1])
    if real.shape != fake.shape:
        raise ShapeMismatchError(f"real shape {real.shape} != fake shape {fake.shape}")
    if not (0.0 <= epsilon <= 1.0):
        raise DataError(f"epsilon must be in [0, 1], got {epsilon}")
    r0, r1, c0, c1 = bbox
    if r1 <= r0 or c1 <= c0:
        raise DataError(f"empty bounding box {bbox}")

    def critic_loss(r, f):
        d_real, _ = critic_score_and_input_grad(critic, weights, r)
        d_fake, _ = critic_score_and_input_grad(critic, weights, f)
        interp = (epsilon * r.astype(np.float64) + (1.0 - epsilon) * f.astype(np.float64)).astype(r.dtype)
        _, grad = critic_score_and_input_grad(critic, weights, interp)
        norms = np.sqrt((grad.astype(np.float64) ** 2).sum(axis=(1, 2, 3)))
        penalty = gp_lambda * ((norms - 1.0) ** 2).mean()
        return float(d_fake.mean() - d_real.mean() + penalty)

    global_loss = critic_loss(real, fake)
    local_loss = critic_loss(real[:, :, r0:r1, c0:c1], fake[:, :, r0:r1, c0:c1])
    return global_loss, local_loss
