import numpy as np
import pytest

from voidfill import (
    DataError,
    DemGrid,
    GridFormatError,
    ShapeMismatchError,
    VoidMask,
    normalize,
    read_asc,
    read_mask_asc,
    synth_terrain,
    write_asc,
)


def make_asc(ncols, nrows, body, nodata=-9999.0):
    header = (
        f"ncols {ncols}\nnrows {nrows}\nxllcorner 0\nyllcorner 0\n"
        f"cellsize 1\nNODATA_value {nodata}\n"
    )
    return header + body


class TestReadAsc:
    def test_nodata_becomes_mask_bit(self):
        grid, mask = read_asc(make_asc(2, 2, "1 2\n-9999 4\n"))
        assert mask.bits.tolist() == [[False, False], [True, False]]
        assert mask.unknown_count == 1

    def test_row_major_order(self):
        grid, _ = read_asc(make_asc(3, 2, "1 2 3\n4 5 6\n"))
        assert grid.values.tolist() == [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]

    def test_case_insensitive_keys_and_crlf(self):
        text = "NCOLS 2\r\nNROWS 1\r\nXllcorner 0\r\nYLLCORNER 0\r\ncellSIZE 2\r\nnodata_value -1\r\n7 8\r\n"
        grid, mask = read_asc(text)
        assert grid.cell_size == 2.0
        assert grid.nodata == -1.0
        assert not mask.bits.any()

    def test_header_key_error_reports_line(self):
        with pytest.raises(GridFormatError, match="line 2"):
            read_asc("ncols 2\nnrow 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1 2\n3 4\n")

    def test_token_count_mismatch_reports_line(self):
        with pytest.raises(GridFormatError, match="line 8"):
            read_asc(make_asc(2, 2, "1 2\n3\n"))

    def test_non_numeric_token_reports_line(self):
        with pytest.raises(GridFormatError, match="line 7.*'oops'"):
            read_asc(make_asc(2, 1, "1 oops\n"))

    def test_missing_rows(self):
        with pytest.raises(GridFormatError, match="expected 3 data rows"):
            read_asc(make_asc(2, 3, "1 2\n3 4\n"))

    def test_bytes_input(self):
        grid, _ = read_asc(make_asc(1, 1, "5\n").encode("ascii"))
        assert grid.values[0, 0] == 5.0


class TestWriteAsc:
    def test_constant_grid_tokens(self):
        grid = DemGrid(np.full((2, 3), 4.5))
        body = write_asc(grid, VoidMask.empty(2, 3)).splitlines()[6:]
        assert body == ["4.5 4.5 4.5", "4.5 4.5 4.5"]

    def test_all_unknown_writes_nodata(self):
        grid = DemGrid(np.ones((2, 2)))
        body = write_asc(grid, VoidMask(np.ones((2, 2), bool))).splitlines()[6:]
        assert body == ["-9999 -9999", "-9999 -9999"]

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            write_asc(DemGrid(np.ones((2, 2))), VoidMask(np.zeros((3, 2), bool)))

    def test_round_trip_5x5(self, rng):
        grid = DemGrid(rng.uniform(-500, 2000, (5, 5)))
        mask = VoidMask(rng.random((5, 5)) < 0.3)
        text = write_asc(grid, mask)
        again = write_asc(*read_asc(text))
        assert " ".join(text.split()) == " ".join(again.split())

    def test_round_trip_values_bit_exact(self, rng):
        grid = DemGrid(rng.standard_normal((16, 16)) * 1234.5678)
        mask = VoidMask(rng.random((16, 16)) < 0.25)
        grid2, mask2 = read_asc(write_asc(grid, mask))
        known = ~mask.bits
        assert np.array_equal(mask.bits, mask2.bits)
        assert np.array_equal(grid.values[known], grid2.values[known])

    def test_mask_derivation_idempotent(self, rng):
        grid = DemGrid(rng.uniform(0, 100, (9, 7)))
        mask = VoidMask(rng.random((9, 7)) < 0.4)
        text = write_asc(grid, mask)
        _, mask2 = read_asc(text)
        text2 = write_asc(*read_asc(text))
        _, mask3 = read_asc(text2)
        assert np.array_equal(mask2.bits, mask3.bits)


class TestNormalize:
    def test_endpoints_map_to_unit(self):
        grid = DemGrid(np.array([[0.0, 10.0], [5.0, 5.0]]))
        arr, norm = normalize(grid, VoidMask.empty(2, 2))
        assert norm.mid == 5.0 and norm.half_range == 5.0
        assert arr[0, 1] == 1.0 and arr[0, 0] == -1.0

    def test_constant_field_clamps_half_range(self):
        grid = DemGrid(np.full((3, 3), 42.0))
        arr, norm = normalize(grid, VoidMask.empty(3, 3))
        assert norm.half_range == 1e-6
        assert np.all(arr == 0.0)

    def test_unknown_pixels_become_zero(self):
        grid = DemGrid(np.array([[0.0, 10.0], [-9999.0, 5.0]]))
        mask = VoidMask.from_grid(grid)
        arr, _ = normalize(grid, mask)
        assert arr[1, 0] == 0.0

    def test_denormalize_round_trip(self, rng):
        grid = DemGrid(rng.uniform(-2000, 3000, (12, 12)))
        arr, norm = normalize(grid, VoidMask.empty(12, 12))
        back = norm.denormalize(arr)
        assert np.allclose(back, grid.values, rtol=1e-12, atol=0)

    def test_known_pixels_stay_in_unit_interval(self):
        for seed in range(30):
            grid = synth_terrain(10, 11, seed=seed, kind="gaussian_hills")
            mask = VoidMask(np.random.default_rng(seed).random((10, 11)) < 0.3)
            arr, _ = normalize(grid, mask)
            known = ~mask.bits
            assert arr[known].min() >= -1 - 1e-9
            assert arr[known].max() <= 1 + 1e-9

    def test_all_unknown_is_error(self):
        grid = DemGrid(np.full((2, 2), -9999.0))
        with pytest.raises(DataError):
            normalize(grid, VoidMask.from_grid(grid))


class TestSidecarMask:
    def test_read_mask(self):
        text = make_asc(2, 2, "0 1\n1 0\n")
        mask = read_mask_asc(text)
        assert mask.bits.tolist() == [[False, True], [True, False]]

    def test_rejects_non_binary(self):
        with pytest.raises(DataError, match="0 and 1"):
            read_mask_asc(make_asc(2, 1, "0 2\n"))


class TestDemGridInvariants:
    def test_rejects_nan(self):
        with pytest.raises(DataError):
            DemGrid(np.array([[1.0, np.nan]]))

    def test_values_frozen(self):
        grid = DemGrid(np.ones((2, 2)))
        with pytest.raises(ValueError):
            grid.values[0, 0] = 3.0
