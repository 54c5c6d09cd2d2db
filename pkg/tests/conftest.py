import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from voidfill import DemGrid, VoidMask, sample_rect_mask


def masked_copy(grid: DemGrid, mask: VoidMask) -> DemGrid:
    """Grid with the masked pixels replaced by the nodata sentinel."""
    return grid.with_values(np.where(mask.bits, grid.nodata, grid.values))


def interior_rect_mask(rows, cols, seed, count=1, sizes=(10, 30), margin=3) -> tuple[VoidMask, int]:
    """First seeded rectangle mask (scanning up from `seed`) whose void keeps
    `margin` known pixels clear of every border, so each ring pixel's fit
    window retains two-dimensional spread (the exactness qualifier)."""
    s = seed
    while True:
        mask = sample_rect_mask(rows, cols, seed=s, count=count, size_range=sizes)
        idx = np.argwhere(mask.bits)
        if (
            len(idx)
            and idx[:, 0].min() >= margin
            and idx[:, 1].min() >= margin
            and idx[:, 0].max() < rows - margin
            and idx[:, 1].max() < cols - margin
        ):
            return mask, s
        s += 1


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
