"""First-order training of the coarse stage against discounted l1 loss.

Only the coarse encoder-decoder is trained (it contains no attention
layer, so every layer has a backward pass); refinement weights keep their
seeded initialization. One tile per step, cycling through the dataset in
order, so a fixed seed and dataset make the run bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, NumericalError
from ..raster import DemGrid, VoidMask, normalize
from .generator import network_input
from .layers import backward_stage, build_stage, run_stage, stage_params
from .losses import LossConfig, discount_weights
from .netspec import DIFFERENTIABLE_KINDS, NetworkSpec
from .weights import WeightStore, init_weights


@dataclass(frozen=True)
class AdamParams:
    learning_rate: float = 1e-4
    beta1: float = 0.5
    beta2: float = 0.9
    epsilon: float = 1e-8


class Adam:
    """Bias-corrected Adam over named float32 parameters, float64 moments."""

    def __init__(self, params, config: AdamParams):
        self.params = params  # list of (name, array, grad_fn)
        self.config = config
        self.moments = {name: (np.zeros(p.shape), np.zeros(p.shape)) for name, p, _ in params}
        self.step_count = 0

    def step(self):
        self.step_count += 1
        cfg = self.config
        t = self.step_count
        for name, param, grad_fn in self.params:
            g = np.asarray(grad_fn(), dtype=np.float64)
            m, v = self.moments[name]
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * g * g
            m_hat = m / (1.0 - cfg.beta1**t)
            v_hat = v / (1.0 - cfg.beta2**t)
            update = param.astype(np.float64) - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
            param[...] = update.astype(np.float32)


def train_coarse(
    dataset,
    spec: NetworkSpec,
    seed: int,
    steps: int,
    adam: AdamParams | None = None,
    loss_cfg: LossConfig | None = None,
) -> tuple[WeightStore, list[float]]:
    """Train the coarse stage on (terrain, mask) pairs; returns the full
    weight store (refinement untouched) and the per-step loss trace."""
    if not dataset:
        raise DataError("training dataset is empty")
    bad = [l.kind for l in spec.coarse if l.kind not in DIFFERENTIABLE_KINDS]
    if bad:
        raise DataError(f"coarse stage contains non-differentiable layers: {bad}")
    adam = adam or AdamParams()
    loss_cfg = loss_cfg or LossConfig()

    store = init_weights(spec, seed)
    layers = build_stage(spec.coarse, store, "coarse")
    optimizer = Adam(stage_params(layers), adam)

    prepared = [_prepare(t, m, loss_cfg.discount_gamma) for t, m in dataset]
    losses: list[float] = []
    for step in range(1, steps + 1):
        sample = prepared[(step - 1) % len(prepared)]
        loss = _train_step(layers, optimizer, sample)
        if not np.isfinite(loss):
            raise NumericalError(f"non-finite loss at step {step}")
        losses.append(loss)
    return store, losses


def _prepare(terrain: DemGrid, mask: VoidMask, gamma: float):
    if not mask.bits.any():
        raise DataError("training mask has no unknown pixels")
    masked = terrain.with_values(np.where(mask.bits, terrain.nodata, terrain.values))
    norm_values, norm = normalize(masked, mask)
    weights = discount_weights(mask, gamma)
    return {
        "x": network_input(norm_values, mask),
        "truth": terrain.values,
        "unknown": mask.bits,
        "weights": weights,
        "weight_sum": float(weights.sum()),
        "half_range": norm.half_range,
        "mid": norm.mid,
    }


def _train_step(layers, optimizer: Adam, sample) -> float:
    y = run_stage(layers, sample["x"], cache=True)
    pred_norm = y[0, 0].astype(np.float64)
    pred = pred_norm * sample["half_range"] + sample["mid"]
    residual = np.where(sample["unknown"], pred - sample["truth"], 0.0)
    loss = float((sample["weights"] * np.abs(residual)).sum() / sample["weight_sum"])

    dpred = sample["weights"] * np.sign(residual) / sample["weight_sum"]
    dy = (dpred * sample["half_range"]).astype(np.float32)[None, None]
    backward_stage(layers, dy)
    optimizer.step()
    return loss


def dataset_loss(
    dataset, spec: NetworkSpec, store: WeightStore, gamma: float = 0.99
) -> float:
    """Mean discounted l1 loss of the coarse stage over a dataset."""
    layers = build_stage(spec.coarse, store, "coarse")
    total = 0.0
    for terrain, mask in dataset:
        sample = _prepare(terrain, mask, gamma)
        y = run_stage(layers, sample["x"])
        pred = y[0, 0].astype(np.float64) * sample["half_range"] + sample["mid"]
        residual = np.where(sample["unknown"], pred - sample["truth"], 0.0)
        total += float((sample["weights"] * np.abs(residual)).sum() / sample["weight_sum"])
    return total / len(dataset)
