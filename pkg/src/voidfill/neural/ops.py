"""Forward tensor operations for the inpainting network.

All arrays are NCHW. Weights and activations are float32 in production
use, but every reduction (convolution inner products, attention scores,
patch pasting) accumulates in float64 and casts back to the promoted
input dtype. Feeding float64 arrays keeps the whole computation in
float64, which the gradient checks rely on.

Convolutions use zero same-padding: output spatial size is ceil(in/stride)
and the padding is split with the extra pixel at the bottom/right.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError, ShapeMismatchError

_NORM_EPS = 1e-8


def same_padding(size: int, kernel: int, stride: int, dilation: int) -> tuple[int, int, int]:
    """(output size, pad before, pad after) for zero same-padding."""
    out = -(-size // stride)
    effective = (kernel - 1) * dilation + 1
    total = max(0, (out - 1) * stride + effective - size)
    before = total // 2
    return out, before, total - before


def _col_indices(h_pad, w_pad, kh, kw, stride, dilation, oh, ow):
    """Row/col gather indices of shape (kh*kw, oh*ow) into the padded input."""
    ki = np.repeat(np.arange(kh), kw) * dilation
    kj = np.tile(np.arange(kw), kh) * dilation
    oi = np.repeat(np.arange(oh), ow) * stride
    oj = np.tile(np.arange(ow), oh) * stride
    rows = ki[:, None] + oi[None, :]
    cols = kj[:, None] + oj[None, :]
    return rows, cols


def im2col(x: np.ndarray, kernel: int, stride: int, dilation: int):
    """Unfold x into (N, C*k*k, OH*OW) patch columns plus the output shape."""
    n, c, h, w = x.shape
    oh, ph0, ph1 = same_padding(h, kernel, stride, dilation)
    ow, pw0, pw1 = same_padding(w, kernel, stride, dilation)
    xp = np.pad(x, ((0, 0), (0, 0), (ph0, ph1), (pw0, pw1)))
    rows, cols = _col_indices(h + ph0 + ph1, w + pw0 + pw1, kernel, kernel, stride, dilation, oh, ow)
    patches = xp[:, :, rows, cols]  # (N, C, k*k, OH*OW)
    return patches.reshape(n, c * kernel * kernel, oh * ow), (oh, ow)


def col2im(cols: np.ndarray, x_shape, kernel: int, stride: int, dilation: int) -> np.ndarray:
    """Adjoint of im2col: scatter-add patch columns back onto the input grid."""
    n, c, h, w = x_shape
    oh, ph0, ph1 = same_padding(h, kernel, stride, dilation)
    ow, pw0, pw1 = same_padding(w, kernel, stride, dilation)
    rows, colsix = _col_indices(h + ph0 + ph1, w + pw0 + pw1, kernel, kernel, stride, dilation, oh, ow)
    xp = np.zeros((n, c, h + ph0 + ph1, w + pw0 + pw1), dtype=cols.dtype)
    vals = cols.reshape(n, c, kernel * kernel, oh * ow)
    np.add.at(
        xp,
        (
            np.arange(n)[:, None, None, None],
            np.arange(c)[None, :, None, None],
            rows[None, None],
            colsix[None, None],
        ),
        vals,
    )
    return xp[:, :, ph0 : ph0 + h, pw0 : pw0 + w]


def _check_conv_shapes(x, weight, bias):
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeMismatchError(f"conv expects 4-D tensors, got x{x.shape} w{weight.shape}")
    if weight.shape[2] != weight.shape[3]:
        raise ShapeMismatchError(f"conv kernels must be square, got {weight.shape[2:]}")
    if x.shape[1] != weight.shape[1]:
        raise ShapeMismatchError(
            f"input has {x.shape[1]} channels but kernel expects {weight.shape[1]}"
        )
    if bias is not None and bias.shape != (weight.shape[0],):
        raise ShapeMismatchError(f"bias shape {bias.shape} != ({weight.shape[0]},)")


def conv2d(
    x: np.ndarray,
    weight: np.ndarray,
    bias: np.ndarray | None = None,
    stride: int = 1,
    dilation: int = 1,
) -> np.ndarray:
    """Dilated cross-correlation with zero same-padding.

    weight is (out_ch, in_ch, k, k); output spatial dims are ceil(in/stride).
    """
    _check_conv_shapes(x, weight, bias)
    out_dtype = np.result_type(x, weight)
    kernel = weight.shape[2]
    cols, (oh, ow) = im2col(x, kernel, stride, dilation)
    w2 = weight.reshape(weight.shape[0], -1).astype(np.float64)
    y = np.matmul(w2, cols.astype(np.float64))
    if bias is not None:
        y += bias.astype(np.float64)[:, None]
    return y.reshape(x.shape[0], weight.shape[0], oh, ow).astype(out_dtype)


def conv2d_backward(
    x: np.ndarray,
    weight: np.ndarray,
    dy: np.ndarray,
    stride: int = 1,
    dilation: int = 1,
    cols: np.ndarray | None = None,
):
    """Gradients (dx, dw, db) of conv2d; dw/db come back in float64."""
    kernel = weight.shape[2]
    if cols is None:
        cols, _ = im2col(x, kernel, stride, dilation)
    n, out_ch = dy.shape[:2]
    dy2 = dy.reshape(n, out_ch, -1).astype(np.float64)
    cols64 = cols.astype(np.float64)
    dw = np.einsum("nol,nkl->ok", dy2, cols64).reshape(weight.shape)
    db = dy2.sum(axis=(0, 2))
    w2 = weight.reshape(out_ch, -1).astype(np.float64)
    dcols = np.matmul(w2.T, dy2)
    dx = col2im(dcols, x.shape, kernel, stride, dilation)
    return dx.astype(x.dtype), dw, db


def elu(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0, x, np.expm1(np.minimum(x, 0.0)))


def elu_backward(x: np.ndarray, dy: np.ndarray) -> np.ndarray:
    return (dy * np.where(x > 0, 1.0, np.exp(np.minimum(x, 0.0)))).astype(dy.dtype)


def tanh(x: np.ndarray) -> np.ndarray:
    return np.tanh(x)


def tanh_backward(y: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Backward from the cached output y = tanh(x)."""
    return (dy * (1.0 - y * y)).astype(dy.dtype)


def upsample_nearest(x: np.ndarray, factor: int = 2) -> np.ndarray:
    return np.repeat(np.repeat(x, factor, axis=2), factor, axis=3)


def upsample_nearest_backward(dy: np.ndarray, factor: int = 2) -> np.ndarray:
    n, c, h, w = dy.shape
    if h % factor or w % factor:
        raise ShapeMismatchError(f"upsample gradient shape {dy.shape} not divisible by {factor}")
    blocks = dy.reshape(n, c, h // factor, factor, w // factor, factor).astype(np.float64)
    return blocks.sum(axis=(3, 5)).astype(dy.dtype)


def lfe_dilations() -> tuple[int, ...]:
    """Dilation schedule of the local-feature-extraction stack."""
    return (2, 4, 8, 8, 4, 2)


def lfe_forward(x: np.ndarray, stage_weights) -> np.ndarray:
    """Six 3x3 conv+elu stages with dilations 2, 4, 8, 8, 4, 2."""
    dils = lfe_dilations()
    if len(stage_weights) != len(dils):
        raise ShapeMismatchError(f"LFE needs {len(dils)} conv stages, got {len(stage_weights)}")
    y = x
    for (w, b), d in zip(stage_weights, dils):
        y = elu(conv2d(y, w, b, stride=1, dilation=d))
    return y


def valid_patch_centers(known: np.ndarray, patch: int) -> np.ndarray:
    """(M, 2) centers whose patch x patch window lies fully inside the known set."""
    h, w = known.shape
    half = patch // 2
    ok = np.zeros((h, w), dtype=bool)
    if h >= patch and w >= patch:
        full = np.ones((h - patch + 1, w - patch + 1), dtype=bool)
        for di in range(patch):
            for dj in range(patch):
                full &= known[di : di + h - patch + 1, dj : dj + w - patch + 1]
        ok[half : half + full.shape[0], half : half + full.shape[1]] = full
    return np.argwhere(ok)


def contextual_attention(
    fg: np.ndarray,
    bg: np.ndarray,
    known: np.ndarray,
    patch: int = 3,
    temperature: float = 10.0,
    return_weights: bool = False,
):
    """Copy known-region patches into every location by cosine-similarity softmax.

    Background patches fully inside the known region are L2-normalized and
    matched against the patch around each foreground location; the output
    is the attention-weighted paste of the original background patches,
    with overlapping contributions averaged.
    """
    if fg.shape != bg.shape:
        raise ShapeMismatchError(f"fg shape {fg.shape} != bg shape {bg.shape}")
    n, c, h, w = fg.shape
    if known.shape != (h, w):
        raise ShapeMismatchError(f"mask shape {known.shape} != feature shape {(h, w)}")
    centers = valid_patch_centers(known, patch)
    if len(centers) == 0:
        raise DataError("attention source empty: no fully-known background patch")
    out_dtype = np.result_type(fg, bg)

    half = patch // 2
    bg64 = bg.astype(np.float64)
    patches = np.stack(
        [
            bg64[:, :, i - half : i + half + 1, j - half : j + half + 1].reshape(n, -1)
            for i, j in centers
        ],
        axis=1,
    )  # (N, M, C*p*p)
    norms = np.linalg.norm(patches, axis=2)
    normalized = patches / np.maximum(norms, _NORM_EPS)[:, :, None]

    fg_cols, _ = im2col(fg.astype(np.float64), patch, stride=1, dilation=1)  # (N, C*p*p, H*W)
    fg_norms = np.linalg.norm(fg_cols, axis=1)
    sim = np.matmul(normalized, fg_cols) / np.maximum(fg_norms, _NORM_EPS)[:, None, :]

    logits = temperature * sim
    logits -= logits.max(axis=1, keepdims=True)
    attn = np.exp(logits)
    attn /= attn.sum(axis=1, keepdims=True)  # (N, M, H*W)

    mixed = np.einsum("nml,nmk->nkl", attn, patches)  # (N, C*p*p, H*W)
    summed = col2im(mixed, fg.shape, patch, stride=1, dilation=1)
    ones = np.ones((1, 1, h * w), dtype=np.float64)
    coverage = col2im(np.repeat(ones, patch * patch, axis=1), (1, 1, h, w), patch, 1, 1)
    out = (summed / coverage).astype(out_dtype)
    if return_weights:
        return out, attn
    return out
