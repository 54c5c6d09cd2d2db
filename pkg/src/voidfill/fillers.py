"""Classical void fillers.

fill_extend walks the void rings inward, fitting a least-squares
paraboloid to the known pixels of a small window around each ring pixel
and assigning the fitted center value; each completed ring becomes known
for the next. Run over all rings this yields an approximate C2 extension
of the known surface. fill_idw is the Shepard inverse-distance baseline
with masked 3x3 smoothing passes; fill_spline fits a smoothed bicubic
tensor-product B-spline surface to the known pixels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.interpolate import BSpline
from scipy.sparse.linalg import cg
from scipy.spatial import cKDTree

from .errors import ConditioningError, ConvergenceError, DataError, NumericalError
from .geometry import SampleSet, ring_partition, window_samples
from .raster import DemGrid, VoidMask, check_shapes

CONDITION_LIMIT = 1e8


@dataclass(frozen=True)
class Paraboloid:
    """Coefficients of f(u, v) = a*u^2 + b*u*v + c*v^2 + d*u + e*v + f.

    degree records which least-squares model was actually fit: 'quadratic'
    uses all six terms, 'affine' only d, e, f, 'constant' only f.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    degree: str = "quadratic"


def eval_paraboloid(p: Paraboloid, u, v):
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    out = p.a * u * u + p.b * u * v + p.c * v * v + p.d * u + p.e * v + p.f
    return float(out) if out.ndim == 0 else out


def _normal_solve(design: np.ndarray, z: np.ndarray) -> np.ndarray | None:
    """Solve the normal equations if the diagonally scaled system is
    well-conditioned; None signals the caller to fall back a degree."""
    normal = design.T @ design
    diag = np.sqrt(np.diag(normal))
    if not np.all(np.isfinite(diag)) or np.any(diag <= 0.0):
        return None
    scale = np.outer(diag, diag)
    scaled = normal / scale
    cond = np.linalg.cond(scaled)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        return None
    rhs = (design.T @ z) / diag
    try:
        solution = scipy.linalg.solve(scaled, rhs, assume_a="pos")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError):
        return None
    return solution / diag


def fit_paraboloid(samples: SampleSet) -> Paraboloid:
    """Least-squares paraboloid over window-local samples with degree
    fallback: quadratic needs >= 6 samples and a well-conditioned normal
    matrix, affine >= 3, otherwise the constant mean."""
    n = len(samples)
    if n == 0:
        raise DataError("cannot fit a paraboloid to an empty sample set")
    u = samples.u.astype(np.float64)
    v = samples.v.astype(np.float64)
    z = samples.values.astype(np.float64)
    if n >= 6:
        design = np.column_stack([u * u, u * v, v * v, u, v, np.ones(n)])
        coef = _normal_solve(design, z)
        if coef is not None:
            return Paraboloid(*coef, degree="quadratic")
    if n >= 3:
        design = np.column_stack([u, v, np.ones(n)])
        coef = _normal_solve(design, z)
        if coef is not None:
            return Paraboloid(0.0, 0.0, 0.0, *coef, degree="affine")
    return Paraboloid(0.0, 0.0, 0.0, 0.0, 0.0, float(z.mean()), degree="constant")


def extend_ring(values: np.ndarray, known: np.ndarray, ring: np.ndarray, r: int) -> np.ndarray:
    """Fitted center values for one ring against the frozen ring-start state.

    An empty window doubles the radius for that pixel until samples appear.
    Fits are mutually independent, so the result does not depend on the
    order pixels are visited.
    """
    fitted = np.empty(len(ring), dtype=np.float64)
    for idx in range(len(ring)):
        i, j = int(ring[idx, 0]), int(ring[idx, 1])
        radius = r
        while True:
            samples = window_samples(values, known, i, j, radius)
            if len(samples):
                break
            radius *= 2
        # window coordinates are centered on the pixel: the fit at p is f
        fitted[idx] = fit_paraboloid(samples).f
    return fitted


def fill_extend(grid: DemGrid, mask: VoidMask, r: int = 3) -> DemGrid:
    """Approximate C2 extension of the known surface across all rings."""
    check_shapes(grid, mask)
    if r < 1:
        raise DataError(f"fit radius must be >= 1, got {r}")
    known = ~mask.bits
    if not known.any():
        raise DataError("cannot extend a grid with no known pixels")
    values = grid.values.copy()
    if mask.bits.any():
        part = ring_partition(mask)
        known = known.copy()
        for ring in part.rings:
            fitted = extend_ring(values, known, ring, r)
            values[ring[:, 0], ring[:, 1]] = fitted
            known[ring[:, 0], ring[:, 1]] = True
    return grid.with_values(values)


# ---------------------------------------------------------------------------
# Inverse distance weighting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdwParams:
    power: float = 2.0
    radius: float = 32.0
    smoothing_passes: int = 2

    def __post_init__(self):
        if self.power <= 0:
            raise DataError(f"IDW power must be > 0, got {self.power}")
        if self.radius < 1:
            raise DataError(f"IDW radius must be >= 1, got {self.radius}")
        if self.smoothing_passes < 0:
            raise DataError(f"smoothing passes must be >= 0, got {self.smoothing_passes}")


def fill_idw(grid: DemGrid, mask: VoidMask, params: IdwParams | None = None) -> DemGrid:
    """Shepard fill: distance-power weighted average of known pixels within
    the search radius (nearest known value if none), then masked 3x3 mean
    smoothing passes over the originally-unknown pixels."""
    params = params or IdwParams()
    check_shapes(grid, mask)
    known = ~mask.bits
    if not known.any():
        raise DataError("cannot interpolate a grid with no known pixels")
    values = grid.values.copy()
    if not mask.bits.any():
        return grid.with_values(values)

    known_coords = np.argwhere(known)
    known_vals = grid.values[known]
    unknown_coords = np.argwhere(mask.bits)
    tree = cKDTree(known_coords.astype(np.float64))
    targets = unknown_coords.astype(np.float64)
    neighbor_lists = tree.query_ball_point(targets, r=params.radius)

    filled = np.empty(len(unknown_coords), dtype=np.float64)
    for idx, neighbors in enumerate(neighbor_lists):
        if not neighbors:
            _, nearest = tree.query(targets[idx])
            filled[idx] = known_vals[nearest]
            continue
        neighbors = np.sort(np.asarray(neighbors))
        delta = known_coords[neighbors] - unknown_coords[idx]
        dist = np.sqrt((delta.astype(np.float64) ** 2).sum(axis=1))
        w = dist**-params.power
        filled[idx] = (w * known_vals[neighbors]).sum() / w.sum()
    values[mask.bits] = filled

    for _ in range(params.smoothing_passes):
        smoothed = _box3_mean(values)
        values[mask.bits] = smoothed[mask.bits]
    return grid.with_values(values)


def _box3_mean(a: np.ndarray) -> np.ndarray:
    """3x3 mean using only in-bounds neighbors."""
    rows, cols = a.shape
    total = np.zeros((rows, cols), dtype=np.float64)
    count = np.zeros((rows, cols), dtype=np.float64)
    padded = np.zeros((rows + 2, cols + 2), dtype=np.float64)
    padded[1:-1, 1:-1] = a
    ones = np.zeros((rows + 2, cols + 2), dtype=np.float64)
    ones[1:-1, 1:-1] = 1.0
    for di in (0, 1, 2):
        for dj in (0, 1, 2):
            total += padded[di : di + rows, dj : dj + cols]
            count += ones[di : di + rows, dj : dj + cols]
    return total / count


# ---------------------------------------------------------------------------
# Tensor-product bicubic spline fill
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplineParams:
    knot_spacing: int = 8
    smoothing_weight: float = 1e-3
    solver_tolerance: float = 1e-8
    max_iterations: int = 10000

    def __post_init__(self):
        if self.knot_spacing < 2:
            raise DataError(f"knot spacing must be >= 2, got {self.knot_spacing}")
        if self.smoothing_weight < 0:
            raise DataError(f"smoothing weight must be >= 0, got {self.smoothing_weight}")


def _axis_basis(length: int, spacing: int) -> sparse.csr_matrix:
    """Design matrix of a clamped cubic B-spline basis on uniform knots,
    evaluated at the integer pixel coordinates of one axis."""
    top = float(length - 1)
    interior = np.arange(spacing, top, spacing, dtype=np.float64)
    knots = np.r_[[0.0] * 4, interior, [top] * 4]
    x = np.arange(length, dtype=np.float64)
    return BSpline.design_matrix(x, knots, 3).tocsr()


def _second_difference(n: int) -> sparse.csr_matrix:
    if n < 3:
        return sparse.csr_matrix((0, n))
    data = np.tile([1.0, -2.0, 1.0], n - 2)
    rows = np.repeat(np.arange(n - 2), 3)
    cols = (np.arange(n - 2)[:, None] + np.arange(3)[None, :]).ravel()
    return sparse.csr_matrix((data, (rows, cols)), shape=(n - 2, n))


def _first_difference(n: int) -> sparse.csr_matrix:
    if n < 2:
        return sparse.csr_matrix((0, n))
    data = np.tile([-1.0, 1.0], n - 1)
    rows = np.repeat(np.arange(n - 1), 2)
    cols = (np.arange(n - 1)[:, None] + np.arange(2)[None, :]).ravel()
    return sparse.csr_matrix((data, (rows, cols)), shape=(n - 1, n))


def spline_system(grid: DemGrid, mask: VoidMask, params: SplineParams):
    """Assemble the regularized normal equations and evaluation operators.

    Returns (A, rhs, basis, unknown_flat) where A = B_k' B_k + w * P with P
    the discretized thin-plate energy (squared second differences of the
    control grid, plus the doubled mixed first differences).
    """
    rows, cols = grid.shape
    basis_r = _axis_basis(rows, params.knot_spacing)
    basis_c = _axis_basis(cols, params.knot_spacing)
    nr, nc = basis_r.shape[1], basis_c.shape[1]
    basis = sparse.kron(basis_r, basis_c, format="csr")  # (rows*cols, nr*nc)

    known_flat = np.flatnonzero(~mask.bits.ravel())
    b_known = basis[known_flat]
    z = grid.values.ravel()[known_flat]

    a_mat = (b_known.T @ b_known).tocsr()
    if params.smoothing_weight > 0:
        d2r = sparse.kron(_second_difference(nr), sparse.eye(nc), format="csr")
        d2c = sparse.kron(sparse.eye(nr), _second_difference(nc), format="csr")
        dx = sparse.kron(_first_difference(nr), _first_difference(nc), format="csr")
        penalty = d2r.T @ d2r + d2c.T @ d2c + 2.0 * (dx.T @ dx)
        a_mat = (a_mat + params.smoothing_weight * penalty).tocsr()
    rhs = b_known.T @ z
    return a_mat, rhs, basis, np.flatnonzero(mask.bits.ravel())


def fill_spline(grid: DemGrid, mask: VoidMask, params: SplineParams | None = None) -> DemGrid:
    """Least-squares bicubic spline surface through the known pixels,
    evaluated at the unknown ones; known pixels pass through unchanged."""
    params = params or SplineParams()
    check_shapes(grid, mask)
    known = ~mask.bits
    if not known.any():
        raise DataError("cannot fit a spline to a grid with no known pixels")
    if not mask.bits.any():
        return grid.with_values(grid.values.copy())
    coords = np.argwhere(known)
    if len(coords) < 3 or np.linalg.matrix_rank(
        np.column_stack([coords, np.ones(len(coords))]).astype(np.float64)
    ) < 3:
        raise ConditioningError(
            "spline fill needs at least 3 non-collinear known pixels to pin the surface"
        )

    a_mat, rhs, basis, unknown_flat = spline_system(grid, mask, params)
    control, info = cg(a_mat, rhs, rtol=params.solver_tolerance, atol=0.0, maxiter=params.max_iterations)
    if info > 0:
        raise ConvergenceError(
            f"conjugate gradients did not reach {params.solver_tolerance:g} in {params.max_iterations} iterations"
        )
    if info < 0:
        raise NumericalError(f"conjugate gradients failed with status {info}")

    values = grid.values.copy()
    values.ravel()[unknown_flat] = basis[unknown_flat] @ control
    return grid.with_values(values)
