"""Ring partitioning, window extraction, and synthetic fixtures.

Unknown pixels are grouped into rings R_1, R_2, ... by city-block (L1)
distance to the nearest known pixel; the fillers and the boundary blender
both walk these rings inward. The module also provides the rectangular
mask sampler used to build training pairs and three synthetic terrain
generators for desk-scale experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .raster import DemGrid, VoidMask, check_shapes

TERRAIN_KINDS = ("quadratic", "gaussian_hills", "fractal")


@dataclass(frozen=True)
class RingPartition:
    """Unknown pixels grouped by L1 distance to the nearest known pixel.

    ``labels`` holds 0 for known pixels and k >= 1 for pixels in ring k.
    ``rings[k-1]`` is an (n_k, 2) array of (row, col) pairs in row-major
    order.
    """

    labels: np.ndarray
    rings: tuple[np.ndarray, ...]

    @property
    def depth(self) -> int:
        return len(self.rings)


def ring_partition(mask: VoidMask) -> RingPartition:
    """Multi-source L1 distance transform from the known pixel set.

    Runs a BFS over 4-neighborhoods, one full frontier per ring, so the
    result is deterministic and rings come out row-major sorted. An
    all-known mask yields an empty partition; an all-unknown mask has no
    seeds and is an error.
    """
    unknown = mask.bits
    if unknown.all():
        raise DataError("ring partition needs at least one known pixel as a seed")
    labels = np.zeros(unknown.shape, dtype=np.int32)
    if not unknown.any():
        return RingPartition(labels=labels, rings=())

    reached = ~unknown
    rings: list[np.ndarray] = []
    k = 0
    while not reached.all():
        k += 1
        frontier = _dilate4(reached) & ~reached
        coords = np.argwhere(frontier)  # row-major by construction
        labels[frontier] = k
        rings.append(coords)
        reached |= frontier
    labels.flags.writeable = False
    return RingPartition(labels=labels, rings=tuple(rings))


def _dilate4(a: np.ndarray) -> np.ndarray:
    """Binary dilation with the 4-connected cross element."""
    out = a.copy()
    out[1:, :] |= a[:-1, :]
    out[:-1, :] |= a[1:, :]
    out[:, 1:] |= a[:, :-1]
    out[:, :-1] |= a[:, 1:]
    return out


@dataclass(frozen=True)
class SampleSet:
    """Known samples around a center pixel, in window-local coordinates.

    u = row offset, v = col offset relative to the window center.
    """

    u: np.ndarray
    v: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def triples(self):
        return list(zip(self.u.tolist(), self.v.tolist(), self.values.tolist()))


def known_window(grid: DemGrid, mask: VoidMask, p: tuple[int, int], r: int) -> SampleSet:
    """All known pixels in the (2r+1)x(2r+1) window centered at p.

    The window is clipped at the grid border; offsets are reported relative
    to p. May return an empty set.
    """
    check_shapes(grid, mask)
    i, j = p
    if not (0 <= i < grid.rows and 0 <= j < grid.cols):
        raise DataError(f"window center {p} outside {grid.rows}x{grid.cols} grid")
    if r < 1:
        raise DataError(f"window radius must be >= 1, got {r}")
    return window_samples(grid.values, ~mask.bits, i, j, r)


def window_samples(values: np.ndarray, known: np.ndarray, i: int, j: int, r: int) -> SampleSet:
    """known_window on raw arrays; shared with the ring-by-ring fillers."""
    rows, cols = values.shape
    i0, i1 = max(0, i - r), min(rows, i + r + 1)
    j0, j1 = max(0, j - r), min(cols, j + r + 1)
    sub = known[i0:i1, j0:j1]
    ii, jj = np.nonzero(sub)
    return SampleSet(
        u=ii + (i0 - i),
        v=jj + (j0 - j),
        values=values[i0:i1, j0:j1][ii, jj],
    )


def sample_rect_mask(
    rows: int,
    cols: int,
    seed: int,
    count: int,
    size_range: tuple[int, int] = (8, 24),
    max_retries: int = 100,
) -> VoidMask:
    """Union of `count` random axis-aligned rectangles.

    Side lengths are uniform in [a, b] and positions uniform over valid
    placements; rectangles may overlap. Resamples (bounded) until at least
    one known pixel survives.
    """
    a, b = size_range
    if not (1 <= a <= b <= min(rows, cols)):
        raise DataError(
            f"rectangle sides [{a}, {b}] admit no valid placement on a {rows}x{cols} grid"
        )
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        bits = np.zeros((rows, cols), dtype=bool)
        for _ in range(count):
            h = int(rng.integers(a, b + 1))
            w = int(rng.integers(a, b + 1))
            top = int(rng.integers(0, rows - h + 1))
            left = int(rng.integers(0, cols - w + 1))
            bits[top : top + h, left : left + w] = True
        if count == 0 or not bits.all():
            return VoidMask(bits)
    raise DataError(
        f"could not leave a known pixel after {max_retries} attempts "
        f"({count} rects of sides [{a}, {b}] on {rows}x{cols})"
    )


def quadratic_surface(rows: int, cols: int, coeffs) -> DemGrid:
    """Heights A*i^2 + B*i*j + C*j^2 + D*i + E*j + F over pixel coordinates."""
    qa, qb, qc, qd, qe, qf = (float(c) for c in coeffs)
    i = np.arange(rows, dtype=np.float64)[:, None]
    j = np.arange(cols, dtype=np.float64)[None, :]
    values = qa * i * i + qb * i * j + qc * j * j + qd * i + qe * j + qf
    return DemGrid(values)


def synth_terrain(rows: int, cols: int, seed: int, kind: str = "gaussian_hills", coeffs=None) -> DemGrid:
    """Deterministic synthetic terrain of the given kind.

    quadratic: exact polynomial surface (coefficients drawn from the seed
    unless given explicitly); gaussian_hills: sum of random Gaussian bumps;
    fractal: midpoint-displacement surface cropped to size.
    """
    if rows < 8 or cols < 8:
        raise DataError(f"synthetic terrain needs at least 8x8 pixels, got {rows}x{cols}")
    if kind not in TERRAIN_KINDS:
        raise DataError(f"unknown terrain kind {kind!r}; choose from {TERRAIN_KINDS}")
    rng = np.random.default_rng(seed)
    if kind == "quadratic":
        if coeffs is None:
            coeffs = (
                rng.uniform(-0.05, 0.05),
                rng.uniform(-0.05, 0.05),
                rng.uniform(-0.05, 0.05),
                rng.uniform(-1.0, 1.0),
                rng.uniform(-1.0, 1.0),
                rng.uniform(-50.0, 50.0),
            )
        return quadratic_surface(rows, cols, coeffs)
    if kind == "gaussian_hills":
        return _gaussian_hills(rows, cols, rng)
    return _fractal(rows, cols, rng)


def _gaussian_hills(rows: int, cols: int, rng: np.random.Generator) -> DemGrid:
    i = np.arange(rows, dtype=np.float64)[:, None]
    j = np.arange(cols, dtype=np.float64)[None, :]
    values = np.full((rows, cols), rng.uniform(-20.0, 20.0))
    scale = min(rows, cols)
    for _ in range(int(rng.integers(3, 9))):
        ci = rng.uniform(0, rows - 1)
        cj = rng.uniform(0, cols - 1)
        sigma = rng.uniform(scale / 10.0, scale / 3.0)
        amp = rng.uniform(-40.0, 40.0)
        values += amp * np.exp(-((i - ci) ** 2 + (j - cj) ** 2) / (2.0 * sigma**2))
    return DemGrid(values)


def _fractal(rows: int, cols: int, rng: np.random.Generator) -> DemGrid:
    """Midpoint displacement (diamond-square) on a 2^n+1 square, cropped."""
    n = 1
    while (1 << n) + 1 < max(rows, cols):
        n += 1
    size = (1 << n) + 1
    grid = np.zeros((size, size), dtype=np.float64)
    amp = 30.0
    grid[0, 0], grid[0, -1], grid[-1, 0], grid[-1, -1] = rng.uniform(-amp, amp, 4)
    step = size - 1
    while step > 1:
        half = step // 2
        # diamond: centers of squares
        ci = np.arange(half, size, step)
        ii, jj = np.meshgrid(ci, ci, indexing="ij")
        grid[ii, jj] = 0.25 * (
            grid[ii - half, jj - half]
            + grid[ii - half, jj + half]
            + grid[ii + half, jj - half]
            + grid[ii + half, jj + half]
        ) + rng.uniform(-amp, amp, ii.shape)
        # square: edge midpoints, averaging in-bounds diamond neighbors
        for i in range(0, size, half):
            j_start = half if (i // half) % 2 == 0 else 0
            for j in range(j_start, size, step):
                acc, cnt = 0.0, 0
                for di, dj in ((-half, 0), (half, 0), (0, -half), (0, half)):
                    ni, nj = i + di, j + dj
                    if 0 <= ni < size and 0 <= nj < size:
                        acc += grid[ni, nj]
                        cnt += 1
                grid[i, j] = acc / cnt + rng.uniform(-amp, amp)
        step = half
        amp *= 0.55
    return DemGrid(grid[:rows, :cols].copy())
