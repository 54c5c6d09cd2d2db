"""Method comparison runner: mask, fill, score, tabulate.

Each (tile, method) pair produces one record; failures are recorded on
their row and the run continues. With timing disabled the CSV is byte-
deterministic for fixed seeds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from . import __version__
from .errors import VoidFillError
from .metrics import DEFAULT_BINS, em_histogram, mse
from .raster import DemGrid, VoidMask

FillMethod = Callable[[DemGrid, VoidMask], DemGrid]
MaskSource = Callable[[int, str, DemGrid], tuple[VoidMask, int]]


@dataclass
class EvalRecord:
    method: str
    tile: str
    seed: int
    mse: float
    em: float
    wall_time_s: float
    error: str = ""


def run_comparison(
    tiles: Sequence[tuple[str, DemGrid]],
    mask_source: MaskSource | Mapping[str, VoidMask],
    methods: Mapping[str, FillMethod],
    bins: int = DEFAULT_BINS,
    record_timing: bool = True,
) -> list[EvalRecord]:
    """Mask every (complete) tile, run every method on it, score both metrics.

    mask_source is either a mapping tile_id -> VoidMask or a callable
    (index, tile_id, grid) -> (VoidMask, seed). Records come back sorted by
    (tile, method).
    """
    if isinstance(mask_source, Mapping):
        mapping = mask_source

        def mask_source(index, tile_id, grid):  # noqa: F811 - local adapter
            return mapping[tile_id], 0

    records: list[EvalRecord] = []
    for index, (tile_id, grid) in enumerate(tiles):
        mask, seed = mask_source(index, tile_id, grid)
        masked = grid.with_values(np.where(mask.bits, grid.nodata, grid.values))
        for name, method in methods.items():
            start = time.perf_counter()
            try:
                filled = method(masked, mask)
                elapsed = time.perf_counter() - start
                records.append(
                    EvalRecord(
                        method=name,
                        tile=tile_id,
                        seed=seed,
                        mse=mse(filled, grid, mask),
                        em=em_histogram(filled, grid, mask, bins=bins),
                        wall_time_s=elapsed if record_timing else 0.0,
                    )
                )
            except VoidFillError as exc:
                elapsed = time.perf_counter() - start
                records.append(
                    EvalRecord(
                        method=name,
                        tile=tile_id,
                        seed=seed,
                        mse=float("nan"),
                        em=float("nan"),
                        wall_time_s=elapsed if record_timing else 0.0,
                        error=str(exc),
                    )
                )
    records.sort(key=lambda rec: (rec.tile, rec.method))
    return records


def records_to_csv(records: Sequence[EvalRecord], bins: int = DEFAULT_BINS) -> str:
    """CSV with a comment line carrying the tool version and bin count."""
    lines = [f"# voidfill {__version__} bins={bins}", "method,tile,seed,mse,em,wall_time_s"]
    for rec in records:
        lines.append(
            f"{rec.method},{rec.tile},{rec.seed},{rec.mse!r},{rec.em!r},{rec.wall_time_s:.6f}"
        )
    return "\n".join(lines) + "\n"


def aggregate_means(records: Sequence[EvalRecord]) -> dict[str, tuple[float, float, int]]:
    """Per-method (mean mse, mean em, tiles counted), skipping failed rows."""
    sums: dict[str, list[float]] = {}
    for rec in records:
        if rec.error:
            continue
        entry = sums.setdefault(rec.method, [0.0, 0.0, 0])
        entry[0] += rec.mse
        entry[1] += rec.em
        entry[2] += 1
    return {
        name: (total_mse / n, total_em / n, n)
        for name, (total_mse, total_em, n) in sums.items()
        if n > 0
    }
