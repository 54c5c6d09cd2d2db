import numpy as np
import pytest

from voidfill import DataError, sample_rect_mask, synth_terrain
from voidfill.neural import (
    AdamParams,
    canonical_network,
    dataset_loss,
    init_weights,
    train_coarse,
)
from voidfill.neural.netspec import NetworkSpec, attention, conv, elu, tanh


def small_dataset(n=4, size=16):
    tiles = []
    for i in range(n):
        terrain = synth_terrain(size, size, seed=400 + i, kind="gaussian_hills")
        mask = sample_rect_mask(size, size, seed=500 + i, count=1, size_range=(4, 6))
        tiles.append((terrain, mask))
    return tiles


def tiny_spec():
    return NetworkSpec(
        name="tiny",
        coarse=(conv(2, 6, kernel=3), elu(), conv(6, 1, kernel=3), tanh()),
        branch_a=(conv(2, 4, kernel=3, stride=2), elu()),
        branch_b=(conv(2, 4, kernel=3, stride=2), elu(), attention()),
        decoder=(conv(8, 4, kernel=3), elu(), *(conv(4, 1, kernel=3), tanh())),
    )


class TestTrainCoarse:
    def test_zero_learning_rate_leaves_weights_unchanged(self):
        spec = tiny_spec()
        dataset = small_dataset()
        store, losses = train_coarse(dataset, spec, seed=1, steps=5, adam=AdamParams(learning_rate=0.0))
        assert store.equal(init_weights(spec, seed=1))
        assert len(losses) == 5

    def test_deterministic_rerun_bitwise(self):
        spec = tiny_spec()
        dataset = small_dataset()
        s1, l1 = train_coarse(dataset, spec, seed=3, steps=20)
        s2, l2 = train_coarse(dataset, spec, seed=3, steps=20)
        assert s1.equal(s2)
        assert l1 == l2

    def test_refinement_weights_untouched(self):
        spec = tiny_spec()
        store, _ = train_coarse(small_dataset(), spec, seed=2, steps=10)
        fresh = init_weights(spec, seed=2)
        for name in store.names():
            same = np.array_equal(store[name], fresh[name])
            if name.startswith("coarse") and name.endswith(".w"):
                assert not same, name
            if not name.startswith("coarse"):
                assert same, name

    def test_training_reduces_dataset_loss(self):
        spec = tiny_spec()
        dataset = small_dataset(n=6)
        store, losses = train_coarse(dataset, spec, seed=0, steps=120)
        before = dataset_loss(dataset, spec, init_weights(spec, seed=0))
        after = dataset_loss(dataset, spec, store)
        assert after < before
        assert np.mean(losses[-6:]) < losses[0]

    def test_attention_in_coarse_is_rejected(self):
        spec = tiny_spec()
        bad = NetworkSpec(
            name="bad",
            coarse=spec.branch_b + (conv(4, 1, kernel=3), tanh()),
            branch_a=spec.branch_a,
            branch_b=spec.branch_b,
            decoder=spec.decoder,
        )
        with pytest.raises(DataError, match="non-differentiable"):
            train_coarse(small_dataset(), bad, seed=0, steps=1)

    def test_empty_dataset_is_error(self):
        with pytest.raises(DataError):
            train_coarse([], tiny_spec(), seed=0, steps=1)

    def test_loss_trace_finite_and_positive(self):
        store, losses = train_coarse(small_dataset(), tiny_spec(), seed=5, steps=12)
        assert all(np.isfinite(l) and l >= 0 for l in losses)

    def test_canonical_spec_trains(self):
        spec = canonical_network()
        dataset = small_dataset(n=2, size=16)
        store, losses = train_coarse(dataset, spec, seed=0, steps=4)
        assert len(losses) == 4
        assert np.isfinite(losses).all()
