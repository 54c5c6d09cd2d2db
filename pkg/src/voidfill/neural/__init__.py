"""Data-driven generator: tensor ops, architecture-as-data, inference,
weight files, losses, and first-order coarse-stage training."""

from .generator import generator_forward
from .losses import LossConfig, discount_weights, loss_l1_discounted, mask_bbox, wgan_gp_eval
from .netspec import (
    CriticSpec,
    LayerSpec,
    NetworkSpec,
    canonical_critic,
    canonical_network,
    enumerate_weight_slots,
    format_network_spec,
    parse_network_spec,
)
from .ops import (
    contextual_attention,
    conv2d,
    elu,
    lfe_dilations,
    lfe_forward,
    tanh,
    upsample_nearest,
)
from .training import AdamParams, dataset_loss, train_coarse
from .weights import (
    WeightStore,
    init_weights,
    load_weights,
    load_weights_file,
    save_weights,
    save_weights_file,
    zero_weights,
)

__all__ = [
    "AdamParams",
    "CriticSpec",
    "LayerSpec",
    "LossConfig",
    "NetworkSpec",
    "WeightStore",
    "canonical_critic",
    "canonical_network",
    "contextual_attention",
    "conv2d",
    "dataset_loss",
    "discount_weights",
    "elu",
    "enumerate_weight_slots",
    "format_network_spec",
    "generator_forward",
    "init_weights",
    "lfe_dilations",
    "lfe_forward",
    "load_weights",
    "load_weights_file",
    "loss_l1_discounted",
    "mask_bbox",
    "parse_network_spec",
    "save_weights",
    "save_weights_file",
    "tanh",
    "train_coarse",
    "upsample_nearest",
    "wgan_gp_eval",
    "zero_weights",
]
