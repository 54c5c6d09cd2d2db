#!/usr/bin/env python3
"""Regenerate the stored generator output used by tests/test_generator.py.

Run only after the forward ops have been re-validated against the naive
references (pytest tests/test_neural_ops.py)."""

from pathlib import Path

import numpy as np

from voidfill import sample_rect_mask, synth_terrain
from voidfill.neural import canonical_network, generator_forward, init_weights

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden_generator_32.npz"


def main():
    terrain = synth_terrain(32, 32, seed=11, kind="gaussian_hills")
    mask = sample_rect_mask(32, 32, seed=4, count=1, size_range=(8, 12))
    grid = terrain.with_values(np.where(mask.bits, terrain.nodata, terrain.values))
    spec = canonical_network()
    weights = init_weights(spec, seed=0)
    coarse, refined = generator_forward(grid, mask, spec, weights)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(OUT, coarse=coarse.values, refined=refined.values)
    print(f"wrote {OUT} (coarse/refined 32x32 float64)")


if __name__ == "__main__":
    main()
