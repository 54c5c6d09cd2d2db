"""Independent reference implementations used as test oracles.

Everything here is deliberately written the slow, obvious way (explicit
loops, brute-force scans, generic LP solvers) and stays independent of the
library code paths it checks.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog


def brute_force_ring_labels(unknown: np.ndarray) -> np.ndarray:
    """Per-pixel minimum L1 distance to any known pixel (0 on known)."""
    rows, cols = unknown.shape
    known = np.argwhere(~unknown)
    labels = np.zeros((rows, cols), dtype=np.int32)
    for i in range(rows):
        for j in range(cols):
            if unknown[i, j]:
                labels[i, j] = int(np.abs(known - (i, j)).sum(axis=1).min())
    return labels


def naive_window_samples(values, known, i, j, r):
    """Double-loop window scan returning (u, v, value) triples."""
    rows, cols = values.shape
    out = []
    for ii in range(i - r, i + r + 1):
        for jj in range(j - r, j + r + 1):
            if 0 <= ii < rows and 0 <= jj < cols and known[ii, jj]:
                out.append((ii - i, jj - j, values[ii, jj]))
    return out


def naive_conv2d(x, w, b=None, stride=1, dilation=1):
    """Six-loop dilated cross-correlation with zero same-padding."""
    n, c, h, wd = x.shape
    o, _, kh, kw = w.shape

    def pad_before(size, k):
        out = -(-size // stride)
        eff = (k - 1) * dilation + 1
        total = max(0, (out - 1) * stride + eff - size)
        return out, total // 2

    oh, ph0 = pad_before(h, kh)
    ow, pw0 = pad_before(wd, kw)
    y = np.zeros((n, o, oh, ow), dtype=np.float64)
    for ni in range(n):
        for oi in range(o):
            for yi in range(oh):
                for xi in range(ow):
                    acc = 0.0 if b is None else float(b[oi])
                    for ci in range(c):
                        for ki in range(kh):
                            for kj in range(kw):
                                ii = yi * stride + ki * dilation - ph0
                                jj = xi * stride + kj * dilation - pw0
                                if 0 <= ii < h and 0 <= jj < wd:
                                    acc += float(x[ni, ci, ii, jj]) * float(w[oi, ci, ki, kj])
                    y[ni, oi, yi, xi] = acc
    return y


def naive_attention(fg, bg, known, patch=3, temperature=10.0):
    """O(locations x patches) similarity/softmax/paste reference."""
    n, c, h, w = fg.shape
    half = patch // 2
    fg = fg.astype(np.float64)
    bg = bg.astype(np.float64)

    centers = []
    for i in range(half, h - half):
        for j in range(half, w - half):
            if known[i - half : i + half + 1, j - half : j + half + 1].all():
                centers.append((i, j))
    assert centers, "fixture must leave at least one valid patch"

    out = np.zeros_like(fg)
    counts = np.zeros((h, w))
    for ni in range(n):
        patches = []
        for (i, j) in centers:
            patches.append(bg[ni, :, i - half : i + half + 1, j - half : j + half + 1].ravel())
        patches = np.array(patches)
        normed = patches / np.maximum(np.linalg.norm(patches, axis=1), 1e-8)[:, None]
        for li in range(h):
            for lj in range(w):
                fpatch = np.zeros((c, patch, patch))
                for di in range(-half, half + 1):
                    for dj in range(-half, half + 1):
                        ii, jj = li + di, lj + dj
                        if 0 <= ii < h and 0 <= jj < w:
                            fpatch[:, di + half, dj + half] = fg[ni, :, ii, jj]
                fvec = fpatch.ravel()
                sims = normed @ fvec / max(np.linalg.norm(fvec), 1e-8)
                logits = temperature * sims
                weights = np.exp(logits - logits.max())
                weights /= weights.sum()
                mixed = (weights[:, None] * patches).sum(axis=0).reshape(c, patch, patch)
                for di in range(-half, half + 1):
                    for dj in range(-half, half + 1):
                        ii, jj = li + di, lj + dj
                        if 0 <= ii < h and 0 <= jj < w:
                            out[ni, :, ii, jj] += mixed[:, di + half, dj + half]
                            if ni == 0:
                                counts[ii, jj] += 1
    return out / counts[None, None]


def naive_shepard(values, unknown, power, radius):
    """Literal Shepard loop: distance-power weights inside the radius,
    nearest known value as the fallback. No smoothing."""
    rows, cols = values.shape
    known = np.argwhere(~unknown)
    out = values.copy()
    for i in range(rows):
        for j in range(cols):
            if not unknown[i, j]:
                continue
            num = den = 0.0
            best = None
            best_d = np.inf
            for (ki, kj) in known:
                d = np.hypot(float(i - ki), float(j - kj))
                if d < best_d:
                    best_d, best = d, values[ki, kj]
                if d <= radius:
                    w = d**-power
                    num += w * values[ki, kj]
                    den += w
            out[i, j] = num / den if den > 0 else best
    return out


def transport_lp(masses_a, masses_b, bin_width) -> float:
    """Optimal transport between histograms by linear programming."""
    a = np.asarray(masses_a, dtype=np.float64)
    b = np.asarray(masses_b, dtype=np.float64)
    n = len(a)
    cost = (np.abs(np.subtract.outer(np.arange(n), np.arange(n))) * bin_width).ravel()
    eq_rows = []
    for i in range(n):
        row = np.zeros(n * n)
        row[i * n : (i + 1) * n] = 1.0
        eq_rows.append(row)
    for j in range(n):
        row = np.zeros(n * n)
        row[j::n] = 1.0
        eq_rows.append(row)
    result = linprog(cost, A_eq=np.array(eq_rows), b_eq=np.r_[a, b], bounds=(0, None), method="highs")
    assert result.status == 0, result.message
    return float(result.fun)


def central_difference(f, param: np.ndarray, index, h: float = 1e-3) -> float:
    """Central finite difference of scalar f() in one parameter entry."""
    orig = param[index]
    param[index] = orig + h
    plus = f()
    param[index] = orig - h
    minus = f()
    param[index] = orig
    return (plus - minus) / (2.0 * h)
