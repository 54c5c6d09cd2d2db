"""voidfill: void filling for digital elevation models.

Classical fillers (ring-by-ring paraboloid extension, inverse distance
weighting, bicubic spline surfaces), a small data-driven inpainting
generator with dilated-convolution feature stacks and contextual
attention, sigmoid boundary blending, and an evaluation harness.
"""

__version__ = "0.1.0"

from .blend import BlendConfig, blend_boundary, blend_weight, fill_and_blend
from .errors import (
    ConditioningError,
    ConvergenceError,
    DataError,
    GridFormatError,
    NumericalError,
    ShapeMismatchError,
    VoidFillError,
)
from .fillers import (
    IdwParams,
    Paraboloid,
    SplineParams,
    eval_paraboloid,
    fill_extend,
    fill_idw,
    fill_spline,
    fit_paraboloid,
)
from .geometry import (
    RingPartition,
    SampleSet,
    known_window,
    quadratic_surface,
    ring_partition,
    sample_rect_mask,
    synth_terrain,
)
from .metrics import HistogramPair, em_histogram, mse, wasserstein_binned
from .raster import (
    DemGrid,
    Normalization,
    VoidMask,
    dump_asc,
    load_asc,
    normalize,
    read_asc,
    read_mask_asc,
    write_asc,
)

__all__ = [
    "__version__",
    "BlendConfig",
    "ConditioningError",
    "ConvergenceError",
    "DataError",
    "DemGrid",
    "GridFormatError",
    "HistogramPair",
    "IdwParams",
    "Normalization",
    "NumericalError",
    "Paraboloid",
    "RingPartition",
    "SampleSet",
    "ShapeMismatchError",
    "SplineParams",
    "VoidFillError",
    "VoidMask",
    "blend_boundary",
    "blend_weight",
    "dump_asc",
    "em_histogram",
    "eval_paraboloid",
    "fill_and_blend",
    "fill_extend",
    "fill_idw",
    "fill_spline",
    "fit_paraboloid",
    "known_window",
    "load_asc",
    "mse",
    "normalize",
    "quadratic_surface",
    "read_asc",
    "read_mask_asc",
    "ring_partition",
    "sample_rect_mask",
    "synth_terrain",
    "wasserstein_binned",
    "write_asc",
]
