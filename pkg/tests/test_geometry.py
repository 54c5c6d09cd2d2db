import numpy as np
import pytest

from naive_ref import brute_force_ring_labels, naive_window_samples
from voidfill import (
    DataError,
    DemGrid,
    VoidMask,
    known_window,
    quadratic_surface,
    ring_partition,
    sample_rect_mask,
    synth_terrain,
)


class TestRingPartition:
    def test_single_middle_pixel(self):
        mask = VoidMask(np.array([[False, True, False]]))
        part = ring_partition(mask)
        assert part.depth == 1
        assert part.rings[0].tolist() == [[0, 1]]

    def test_center_3x3_hole(self):
        bits = np.zeros((5, 5), bool)
        bits[1:4, 1:4] = True
        part = ring_partition(VoidMask(bits))
        assert part.depth == 2
        assert len(part.rings[0]) == 8
        assert part.rings[1].tolist() == [[2, 2]]

    def test_l_shaped_hole_matches_brute_force(self):
        bits = np.zeros((8, 8), bool)
        bits[1:7, 1:3] = True
        bits[5:7, 1:7] = True
        part = ring_partition(VoidMask(bits))
        assert np.array_equal(part.labels, brute_force_ring_labels(bits))

    def test_random_grids_match_brute_force(self):
        hits = 0
        for seed in range(120):
            rng = np.random.default_rng(seed)
            rows, cols = int(rng.integers(1, 13)), int(rng.integers(1, 13))
            bits = rng.random((rows, cols)) < rng.uniform(0.1, 0.9)
            if bits.all() or not bits.any():
                continue
            part = ring_partition(VoidMask(bits))
            assert np.array_equal(part.labels, brute_force_ring_labels(bits)), seed
            hits += 1
        assert hits >= 100

    def test_rings_are_disjoint_and_cover_unknown(self):
        mask = sample_rect_mask(12, 12, seed=3, count=2, size_range=(3, 6))
        part = ring_partition(mask)
        seen = np.zeros(mask.shape, dtype=int)
        for ring in part.rings:
            seen[ring[:, 0], ring[:, 1]] += 1
        assert np.array_equal(seen == 1, mask.bits)

    def test_ring_connectivity(self):
        mask = sample_rect_mask(16, 16, seed=9, count=3, size_range=(3, 7))
        part = ring_partition(mask)
        labels = part.labels
        known = ~mask.bits
        for k, ring in enumerate(part.rings, start=1):
            for i, j in ring:
                neighbors = []
                for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    ni, nj = i + di, j + dj
                    if 0 <= ni < 16 and 0 <= nj < 16:
                        neighbors.append(known[ni, nj] if k == 1 else labels[ni, nj] == k - 1)
                assert any(neighbors), (k, i, j)

    def test_all_known_returns_empty_partition(self):
        part = ring_partition(VoidMask(np.zeros((3, 3), bool)))
        assert part.depth == 0

    def test_all_unknown_is_error(self):
        with pytest.raises(DataError, match="seed"):
            ring_partition(VoidMask(np.ones((3, 3), bool)))

    def test_row_major_order_within_ring(self):
        mask = sample_rect_mask(10, 10, seed=1, count=1, size_range=(4, 4))
        part = ring_partition(mask)
        for ring in part.rings:
            flat = ring[:, 0] * 10 + ring[:, 1]
            assert np.array_equal(flat, np.sort(flat))


class TestKnownWindow:
    def test_all_known_full_window(self):
        grid = DemGrid(np.arange(49, dtype=float).reshape(7, 7))
        samples = known_window(grid, VoidMask.empty(7, 7), (3, 3), 3)
        assert len(samples) == 49

    def test_corner_clipping(self):
        grid = DemGrid(np.ones((7, 7)))
        samples = known_window(grid, VoidMask.empty(7, 7), (0, 0), 3)
        assert len(samples) == 16

    def test_matches_naive_enumeration(self, rng):
        values = rng.standard_normal((9, 11))
        bits = rng.random((9, 11)) < 0.4
        grid = DemGrid(values)
        mask = VoidMask(bits)
        for p in [(0, 0), (4, 5), (8, 10), (2, 9)]:
            for r in (1, 2, 3):
                got = sorted(known_window(grid, mask, p, r).triples())
                want = sorted(naive_window_samples(values, ~bits, p[0], p[1], r))
                assert got == want

    def test_center_offsets_are_relative(self):
        grid = DemGrid(np.ones((5, 5)))
        samples = known_window(grid, VoidMask.empty(5, 5), (2, 2), 1)
        assert sorted(zip(samples.u.tolist(), samples.v.tolist()))[0] == (-1, -1)


class TestSampleRectMask:
    def test_forced_geometry(self):
        mask = sample_rect_mask(4, 5, seed=0, count=1, size_range=(4, 4))
        assert mask.unknown_count == 16
        assert mask.known_count == 4

    def test_zero_rectangles(self):
        mask = sample_rect_mask(6, 6, seed=0, count=0, size_range=(2, 3))
        assert mask.unknown_count == 0

    def test_deterministic_for_seed(self):
        m1 = sample_rect_mask(20, 20, seed=42, count=3, size_range=(4, 9))
        m2 = sample_rect_mask(20, 20, seed=42, count=3, size_range=(4, 9))
        assert np.array_equal(m1.bits, m2.bits)

    def test_invalid_sizes(self):
        with pytest.raises(DataError, match="placement"):
            sample_rect_mask(4, 4, seed=0, count=1, size_range=(5, 6))
        with pytest.raises(DataError, match="placement"):
            sample_rect_mask(4, 4, seed=0, count=1, size_range=(3, 2))

    def test_full_cover_exhausts_retries(self):
        with pytest.raises(DataError, match="attempts"):
            sample_rect_mask(4, 4, seed=0, count=1, size_range=(4, 4))

    def test_leaves_a_known_pixel(self):
        for seed in range(50):
            mask = sample_rect_mask(8, 8, seed=seed, count=4, size_range=(4, 7))
            assert mask.known_count >= 1


class TestSynthTerrain:
    def test_quadratic_constant_coefficients(self):
        grid = synth_terrain(8, 8, seed=0, kind="quadratic", coeffs=(0, 0, 0, 0, 0, 7))
        assert np.all(grid.values == 7.0)

    def test_quadratic_matches_direct_evaluation(self):
        coeffs = (0.03, -0.02, 0.05, 1.5, -0.7, 12.0)
        grid = quadratic_surface(9, 13, coeffs)
        qa, qb, qc, qd, qe, qf = coeffs
        for i in range(9):
            for j in range(13):
                expected = qa * i * i + qb * i * j + qc * j * j + qd * i + qe * j + qf
                assert grid.values[i, j] == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("kind", ["quadratic", "gaussian_hills", "fractal"])
    def test_deterministic_by_seed(self, kind):
        g1 = synth_terrain(16, 12, seed=5, kind=kind)
        g2 = synth_terrain(16, 12, seed=5, kind=kind)
        assert np.array_equal(g1.values, g2.values)

    @pytest.mark.parametrize("kind", ["quadratic", "gaussian_hills", "fractal"])
    def test_finite(self, kind):
        grid = synth_terrain(24, 18, seed=7, kind=kind)
        assert np.isfinite(grid.values).all()

    def test_too_small_is_error(self):
        with pytest.raises(DataError):
            synth_terrain(4, 20, seed=0)

    def test_unknown_kind_is_error(self):
        with pytest.raises(DataError):
            synth_terrain(8, 8, seed=0, kind="volcano")
