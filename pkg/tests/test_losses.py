import numpy as np
import pytest

from conftest import masked_copy
from voidfill import DataError, DemGrid, VoidMask, sample_rect_mask, synth_terrain
from voidfill.neural import LossConfig, discount_weights, loss_l1_discounted, mask_bbox


class TestDiscountedL1:
    def test_perfect_prediction_is_zero(self):
        truth = synth_terrain(10, 10, seed=1)
        mask = sample_rect_mask(10, 10, seed=2, count=1, size_range=(3, 4))
        assert loss_l1_discounted(truth, truth, mask) == 0.0

    def test_single_pixel_weights_normalize_out(self):
        truth = DemGrid(np.zeros((5, 5)))
        bits = np.zeros((5, 5), bool)
        bits[2, 2] = True
        pred = DemGrid(np.where(bits, 3.0, 0.0))
        for gamma in (0.2, 0.5, 0.99, 1.0):
            assert loss_l1_discounted(pred, truth, VoidMask(bits), gamma=gamma) == 3.0

    def test_two_ring_hand_case(self):
        # 5x5 with a full 3x3 hole: ring 1 is the 8-pixel border (error a),
        # ring 2 the center (error b); gamma = 0.5 weights them 1 and 0.5
        bits = np.zeros((5, 5), bool)
        bits[1:4, 1:4] = True
        truth = DemGrid(np.zeros((5, 5)))
        values = np.zeros((5, 5))
        a, b = 2.0, 6.0
        values[bits] = a
        values[2, 2] = b
        pred = DemGrid(values)
        got = loss_l1_discounted(pred, truth, VoidMask(bits), gamma=0.5)
        expected = (8 * 1.0 * a + 1 * 0.5 * b) / (8 * 1.0 + 0.5)
        assert got == pytest.approx(expected, rel=1e-15)

    def test_discount_weights_follow_rings(self):
        bits = np.zeros((7, 7), bool)
        bits[2:5, 2:5] = True
        w = discount_weights(VoidMask(bits), gamma=0.9)
        assert w[0, 0] == 0.0
        assert w[2, 2] == 1.0  # ring 1
        assert w[3, 3] == pytest.approx(0.9)  # ring 2

    def test_empty_mask_is_error(self):
        truth = DemGrid(np.zeros((4, 4)))
        with pytest.raises(DataError):
            loss_l1_discounted(truth, truth, VoidMask.empty(4, 4))

    def test_gamma_validation(self):
        with pytest.raises(DataError):
            LossConfig(discount_gamma=0.0)
        with pytest.raises(DataError):
            LossConfig(discount_gamma=1.5)


class TestMaskBbox:
    def test_tight_box_padded_to_multiple(self):
        bits = np.zeros((32, 32), bool)
        bits[5:8, 10:13] = True  # 3x3 tight box
        r0, r1, c0, c1 = mask_bbox(VoidMask(bits), multiple=8)
        assert (r1 - r0) % 8 == 0 and (c1 - c0) % 8 == 0
        assert r0 <= 5 and r1 >= 8 and c0 <= 10 and c1 >= 13

    def test_clipped_to_grid(self):
        bits = np.zeros((10, 10), bool)
        bits[0:2, 8:10] = True
        r0, r1, c0, c1 = mask_bbox(VoidMask(bits), multiple=8)
        assert 0 <= r0 and r1 <= 10 and 0 <= c0 and c1 <= 10
        assert (r1 - r0) == 8 and (c1 - c0) == 8

    def test_small_grid_uses_full_extent(self):
        bits = np.zeros((5, 6), bool)
        bits[2, 3] = True
        assert mask_bbox(VoidMask(bits), multiple=8) == (0, 5, 0, 6)

    def test_empty_mask_is_error(self):
        with pytest.raises(DataError):
            mask_bbox(VoidMask.empty(4, 4))


class TestLossOnMaskedFills:
    def test_loss_decreases_with_better_fill(self):
        truth = synth_terrain(16, 16, seed=3, kind="gaussian_hills")
        mask = sample_rect_mask(16, 16, seed=4, count=1, size_range=(5, 6))
        from voidfill import fill_extend

        grid = masked_copy(truth, mask)
        kvals = truth.values[~mask.bits]
        flat = truth.with_values(np.full((16, 16), kvals.mean()))
        good = fill_extend(grid, mask)
        assert loss_l1_discounted(good, truth, mask) <= loss_l1_discounted(flat, truth, mask)
