"""Runtime layer objects: forward with caching, reverse-mode backward.

A stage is a flat list of these objects built from LayerSpec entries; LFE
entries expand into their six conv+elu stages. Parameters are held by
reference to the WeightStore arrays, so optimizer updates through
``params()`` mutate the store in place.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from . import ops
from .netspec import LayerSpec
from .ops import lfe_dilations


class ConvLayer:
    kind = "conv"

    def __init__(self, name: str, w: np.ndarray, b: np.ndarray, stride: int = 1, dilation: int = 1):
        self.name = name
        self.w = w
        self.b = b
        self.stride = stride
        self.dilation = dilation
        self.dw = None
        self.db = None
        self._x = None
        self._cols = None

    def forward(self, x, cache=False):
        if cache:
            cols, (oh, ow) = ops.im2col(x, self.w.shape[2], self.stride, self.dilation)
            self._x, self._cols = x, cols
            w2 = self.w.reshape(self.w.shape[0], -1).astype(np.float64)
            y = np.matmul(w2, cols.astype(np.float64)) + self.b.astype(np.float64)[:, None]
            return y.reshape(x.shape[0], self.w.shape[0], oh, ow).astype(np.result_type(x, self.w))
        return ops.conv2d(x, self.w, self.b, self.stride, self.dilation)

    def backward(self, dy):
        dx, self.dw, self.db = ops.conv2d_backward(
            self._x, self.w, dy, self.stride, self.dilation, cols=self._cols
        )
        return dx

    def params(self):
        return [(f"{self.name}.w", self.w, lambda: self.dw), (f"{self.name}.b", self.b, lambda: self.db)]


class EluLayer:
    kind = "elu"

    def __init__(self):
        self._x = None

    def forward(self, x, cache=False):
        if cache:
            self._x = x
        return ops.elu(x)

    def backward(self, dy):
        return ops.elu_backward(self._x, dy)

    def params(self):
        return []


class TanhLayer:
    kind = "tanh"

    def __init__(self):
        self._y = None

    def forward(self, x, cache=False):
        y = ops.tanh(x)
        if cache:
            self._y = y
        return y

    def backward(self, dy):
        return ops.tanh_backward(self._y, dy)

    def params(self):
        return []


class UpsampleLayer:
    kind = "upsample"

    def __init__(self, factor: int = 2):
        self.factor = factor

    def forward(self, x, cache=False):
        return ops.upsample_nearest(x, self.factor)

    def backward(self, dy):
        return ops.upsample_nearest_backward(dy, self.factor)

    def params(self):
        return []


class AttentionLayer:
    """Forward-only; the generator supplies the feature-resolution mask."""

    kind = "attention"

    def __init__(self, patch: int = 3, temperature: float = 10.0):
        self.patch = patch
        self.temperature = temperature

    def forward(self, x, known, cache=False):
        return ops.contextual_attention(x, x, known, self.patch, self.temperature)

    def backward(self, dy):
        raise DataError("attention layer has no backward pass; exclude it from trained stages")

    def params(self):
        return []


def build_stage(layers: tuple[LayerSpec, ...], store, prefix: str) -> list:
    """Instantiate runtime layers bound to the store's weight arrays."""
    built = []
    for idx, spec in enumerate(layers):
        base = f"{prefix}.{idx:02d}"
        if spec.kind == "conv":
            built.append(ConvLayer(base, store[f"{base}.w"], store[f"{base}.b"], spec.stride, spec.dilation))
        elif spec.kind == "lfe":
            for j, dil in enumerate(lfe_dilations()):
                sub = f"{base}.lfe{j}"
                built.append(ConvLayer(sub, store[f"{sub}.w"], store[f"{sub}.b"], stride=1, dilation=dil))
                built.append(EluLayer())
        elif spec.kind == "elu":
            built.append(EluLayer())
        elif spec.kind == "tanh":
            built.append(TanhLayer())
        elif spec.kind == "upsample":
            built.append(UpsampleLayer(spec.factor))
        elif spec.kind == "attention":
            built.append(AttentionLayer(spec.patch, spec.temperature))
        else:
            raise DataError(f"cannot build layer kind {spec.kind!r}")
    return built


def run_stage(built: list, x: np.ndarray, unknown: np.ndarray | None = None, cache: bool = False) -> np.ndarray:
    """Forward a stage, tracking the unknown-pixel mask across resolutions
    so attention layers see the mask at their own feature resolution."""
    cur_unknown = unknown
    y = x
    for layer in built:
        if isinstance(layer, AttentionLayer):
            if cur_unknown is None:
                raise DataError("attention layer needs the void mask")
            y = layer.forward(y, ~cur_unknown, cache=cache)
            continue
        if cur_unknown is not None:
            if layer.kind == "conv" and layer.stride > 1:
                cur_unknown = downsample_unknown(cur_unknown, layer.stride)
            elif layer.kind == "upsample":
                cur_unknown = np.repeat(np.repeat(cur_unknown, layer.factor, 0), layer.factor, 1)
        y = layer.forward(y, cache=cache)
    return y


def backward_stage(built: list, dy: np.ndarray) -> np.ndarray:
    for layer in reversed(built):
        dy = layer.backward(dy)
    return dy


def stage_params(built: list) -> list:
    out = []
    for layer in built:
        out.extend(layer.params())
    return out


def downsample_unknown(unknown: np.ndarray, stride: int) -> np.ndarray:
    """Block-max pooling: a feature pixel is unknown if any covered input
    pixel is unknown. Output size matches ceil-division convolutions."""
    h, w = unknown.shape
    oh, ow = -(-h // stride), -(-w // stride)
    padded = np.zeros((oh * stride, ow * stride), dtype=bool)
    padded[:h, :w] = unknown
    return padded.reshape(oh, stride, ow, stride).any(axis=(1, 3))
