#!/usr/bin/env python3
"""Show the boundary blending step healing a discontinuous fill.

A deliberately offset fill (constant shelf 15 m above the surrounding
terrain) leaves a sharp cliff at the void boundary. Blending fades the
smooth extension of the known surface into that fill over a band of rings:
ring 1 is pure extension, and the weight hands off to the fill following a
rescaled sigmoid.
"""

import numpy as np

from voidfill import BlendConfig, DemGrid, blend_boundary, blend_weight, ring_partition, sample_rect_mask, synth_terrain

truth = synth_terrain(48, 48, seed=21, kind="gaussian_hills")
mask = sample_rect_mask(48, 48, seed=9, count=1, size_range=(16, 20))
partial = truth.with_values(np.where(mask.bits, truth.nodata, truth.values))

# a bad fill: correct outside, shifted 15 m inside the void
shelf = truth.values[~mask.bits].mean() + 15.0
bad_fill = DemGrid(np.where(mask.bits, shelf, truth.values))

cfg = BlendConfig(width=8, fit_radius=3, steepness=10.0)
blended = blend_boundary(partial, bad_fill, mask, cfg)

part = ring_partition(mask)
print("sigmoid weights over the band:")
for k in range(1, min(cfg.width, part.depth) + 1):
    alpha = blend_weight((k - 1) / cfg.width, cfg.steepness)
    print(f"  ring {k}: alpha = {alpha:.4f}")

print("\nboundary jump before/after (max |step| across the void edge):")


def max_edge_step(values):
    steps = []
    for i, j in np.argwhere(mask.bits):
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ni, nj = i + di, j + dj
            if 0 <= ni < 48 and 0 <= nj < 48 and not mask.bits[ni, nj]:
                steps.append(abs(values[i, j] - values[ni, nj]))
    return max(steps)


print(f"  raw fill:  {max_edge_step(bad_fill.values):8.3f} m")
print(f"  blended:   {max_edge_step(blended.values):8.3f} m")

ring1 = part.rings[0]
inner = part.rings[-1]
print(f"\nring 1 mean (pure extension):     {blended.values[ring1[:, 0], ring1[:, 1]].mean():8.3f} m")
print(f"deep ring mean (keeps the fill):  {blended.values[inner[:, 0], inner[:, 1]].mean():8.3f} m")
print(f"shelf height of the bad fill:     {shelf:8.3f} m")
