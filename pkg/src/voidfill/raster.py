"""DEM grid and void mask types plus ASCII-grid I/O.

A grid is a rectangular raster of heights in meters; voids are marked
either by a nodata sentinel inside the grid or by a companion binary mask.
Heights are stored as 64-bit floats; everything downstream works in pixel
coordinates, so the georeferencing fields (cell size, origin) are carried
as metadata only.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DataError, GridFormatError, ShapeMismatchError

NODATA_DEFAULT = -9999.0

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


@dataclass(frozen=True)
class DemGrid:
    """Rectangular grid of height samples.

    ``values`` is a (rows, cols) float64 array; every entry is either
    finite or exactly equal to ``nodata``. The array is frozen after
    construction so grids can be shared freely.
    """

    values: np.ndarray
    cell_size: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)
    nodata: float = NODATA_DEFAULT

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DataError(f"grid must be 2-D and non-empty, got shape {values.shape}")
        bad = ~(np.isfinite(values) | (values == self.nodata))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise DataError(f"non-finite height at ({i}, {j}) that is not the nodata sentinel")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def with_values(self, values: np.ndarray) -> "DemGrid":
        """New grid with the same metadata but different heights."""
        return DemGrid(values, cell_size=self.cell_size, origin=self.origin, nodata=self.nodata)


@dataclass(frozen=True)
class VoidMask:
    """Binary raster marking unknown pixels: True/1 = unknown, False/0 = known."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits).astype(bool)
        if bits.ndim != 2:
            raise DataError(f"mask must be 2-D, got shape {bits.shape}")
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    @property
    def unknown_count(self) -> int:
        return int(self.bits.sum())

    @property
    def known_count(self) -> int:
        return int(self.bits.size - self.bits.sum())

    @classmethod
    def from_grid(cls, grid: DemGrid) -> "VoidMask":
        """Mask with a 1-bit exactly where the grid holds its nodata sentinel."""
        return cls(grid.values == grid.nodata)

    @classmethod
    def empty(cls, rows: int, cols: int) -> "VoidMask":
        return cls(np.zeros((rows, cols), dtype=bool))


@dataclass(frozen=True)
class Normalization:
    """Affine map between heights in meters and the network range [-1, 1]."""

    mid: float
    half_range: float

    def normalize(self, v):
        return (np.asarray(v, dtype=np.float64) - self.mid) / self.half_range

    def denormalize(self, v):
        return np.asarray(v, dtype=np.float64) * self.half_range + self.mid


def check_shapes(grid: DemGrid, mask: VoidMask) -> None:
    if grid.shape != mask.shape:
        raise ShapeMismatchError(f"grid shape {grid.shape} != mask shape {mask.shape}")


def normalize(grid: DemGrid, mask: VoidMask) -> tuple[np.ndarray, Normalization]:
    """Map known heights into [-1, 1]; unknown pixels become 0.

    mid and half_range are taken over known pixels only; a constant field
    clamps half_range to 1e-6 so the map stays invertible.
    """
    check_shapes(grid, mask)
    known = ~mask.bits
    if not known.any():
        raise DataError("cannot normalize a grid with no known pixels")
    vals = grid.values[known]
    lo, hi = float(vals.min()), float(vals.max())
    norm = Normalization(mid=(lo + hi) / 2.0, half_range=max(1e-6, (hi - lo) / 2.0))
    out = np.zeros(grid.shape, dtype=np.float64)
    out[known] = norm.normalize(grid.values[known])
    return out, norm


# ---------------------------------------------------------------------------
# ASCII grid format
#
# line 1..6: ncols / nrows / xllcorner / yllcorner / cellsize / NODATA_value
# (keys case-insensitive), then nrows lines of ncols space-separated reals,
# top row first.
# ---------------------------------------------------------------------------


def _parse_header_line(line: str, lineno: int, expected_key: str) -> str:
    parts = line.split()
    if len(parts) != 2:
        raise GridFormatError(f"expected '{expected_key} <value>', got {line!r}", lineno)
    key, value = parts
    if key.lower() != expected_key:
        raise GridFormatError(f"expected header key {expected_key!r}, got {key!r}", lineno)
    return value


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("ascii")
    if isinstance(source, str):
        return source
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("ascii") if isinstance(data, bytes) else data
    raise TypeError(f"cannot read ASCII grid from {type(source).__name__}")


def read_asc(source) -> tuple[DemGrid, VoidMask]:
    """Parse an ASCII grid; the mask marks pixels equal to the nodata sentinel.

    Accepts str, bytes, or a file-like object. Parsing uses float() and is
    therefore independent of the process locale. Errors report 1-based line
    numbers.
    """
    lines = _as_text(source).splitlines()
    if len(lines) < 6:
        raise GridFormatError(f"header needs 6 lines, file has {len(lines)}", len(lines))

    raw: dict[str, str] = {}
    for idx, key in enumerate(_HEADER_KEYS):
        raw[key] = _parse_header_line(lines[idx], idx + 1, key)
    try:
        ncols = int(raw["ncols"])
        nrows = int(raw["nrows"])
    except ValueError as exc:
        raise GridFormatError(f"ncols/nrows must be integers: {exc}", 1) from None
    if ncols < 1 or nrows < 1:
        raise GridFormatError(f"grid dimensions must be positive, got {nrows}x{ncols}", 1)
    try:
        xll = float(raw["xllcorner"])
        yll = float(raw["yllcorner"])
        cell = float(raw["cellsize"])
        nodata = float(raw["nodata_value"])
    except ValueError as exc:
        raise GridFormatError(f"non-numeric header value: {exc}", 3) from None

    body = lines[6:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != nrows:
        raise GridFormatError(f"expected {nrows} data rows, found {len(body)}", 6 + len(body))

    values = np.empty((nrows, ncols), dtype=np.float64)
    for r, line in enumerate(body):
        lineno = 7 + r
        tokens = line.split()
        if len(tokens) != ncols:
            raise GridFormatError(f"expected {ncols} values, found {len(tokens)}", lineno)
        try:
            values[r] = [float(tok) for tok in tokens]
        except ValueError:
            bad = next(tok for tok in tokens if not _is_number(tok))
            raise GridFormatError(f"non-numeric token {bad!r}", lineno) from None
        if not np.all(np.isfinite(values[r]) | (values[r] == nodata)):
            raise GridFormatError("non-finite height value", lineno)

    grid = DemGrid(values, cell_size=cell, origin=(xll, yll), nodata=nodata)
    return grid, VoidMask.from_grid(grid)


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def write_asc(grid: DemGrid, mask: VoidMask | None = None) -> str:
    """Serialize a grid; pixels flagged unknown are written as the nodata sentinel.

    Heights use 17 significant digits, which round-trips 64-bit floats
    exactly through read_asc.
    """
    if mask is None:
        mask = VoidMask.from_grid(grid)
    check_shapes(grid, mask)
    values = np.where(mask.bits, grid.nodata, grid.values)
    out = io.StringIO()
    out.write(f"ncols {grid.cols}\n")
    out.write(f"nrows {grid.rows}\n")
    out.write(f"xllcorner {grid.origin[0]:.17g}\n")
    out.write(f"yllcorner {grid.origin[1]:.17g}\n")
    out.write(f"cellsize {grid.cell_size:.17g}\n")
    out.write(f"NODATA_value {grid.nodata:.17g}\n")
    for r in range(grid.rows):
        out.write(" ".join(f"{v:.17g}" for v in values[r]))
        out.write("\n")
    return out.getvalue()


def read_mask_asc(source) -> VoidMask:
    """Read a sidecar mask: an ASCII grid whose values are all 0 or 1."""
    grid, _ = read_asc(source)
    vals = grid.values
    if not np.isin(vals, (0.0, 1.0)).all():
        raise DataError("mask file must contain only 0 and 1 values")
    return VoidMask(vals == 1.0)


def load_asc(path) -> tuple[DemGrid, VoidMask]:
    with open(path, "r", encoding="ascii") as fh:
        return read_asc(fh.read())


def dump_asc(path, grid: DemGrid, mask: VoidMask | None = None) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_asc(grid, mask))
