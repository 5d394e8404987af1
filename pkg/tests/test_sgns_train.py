import numpy as np
import pytest

from clex.sgns import TrainConfig, pair_gradients, pair_loss, sgns_train


def small_config(**overrides):
    base = dict(dim=8, epochs=3, seed=42, min_count=1, bucket_count=64, window=3, negatives=3)
    base.update(overrides)
    return TrainConfig(**base)


def finite_difference_errors(n_instances=100, dim=10, eps=1e-4, seed=5):
    """Max relative error of analytic vs central-difference gradients,
    per instance.  The relative error floors the denominator at 1e-3 so
    near-zero coordinates do not blow up the ratio."""
    rng = np.random.default_rng(seed)
    errors = []
    for _ in range(n_instances):
        n_units = int(rng.integers(1, 7))
        units = rng.normal(0.0, 1.0, (n_units, dim))
        ctx = rng.normal(0.0, 1.0, dim)
        negs = rng.normal(0.0, 1.0, (5, dim))
        grads = pair_gradients(units, ctx, negs)

        worst = 0.0

        def check(array, index, analytic_row):
            nonlocal worst
            for d in range(dim):
                original = array[index][d] if index is not None else array[d]
                view = array[index] if index is not None else array
                view[d] = original + eps
                up = pair_loss(units, ctx, negs)
                view[d] = original - eps
                down = pair_loss(units, ctx, negs)
                view[d] = original
                fd = (up - down) / (2.0 * eps)
                rel = abs(analytic_row[d] - fd) / max(1e-3, abs(fd))
                worst = max(worst, rel)

        for i in range(n_units):
            check(units, i, grads.units)
        check(ctx, None, grads.context)
        for j in range(5):
            check(negs, j, grads.negatives[j])
        errors.append(worst)
    return errors


class TestGradients:
    def test_matches_finite_differences(self):
        errors = finite_difference_errors(n_instances=30)
        assert max(errors) < 1e-4

    def test_loss_is_positive(self, rng):
        units = rng.normal(size=(3, 6))
        assert pair_loss(units, rng.normal(size=6), rng.normal(size=(4, 6))) > 0.0

    def test_no_negatives_edge(self, rng):
        units = rng.normal(size=(2, 4))
        ctx = rng.normal(size=4)
        grads = pair_gradients(units, ctx, np.empty((0, 4)))
        h = units.mean(axis=0)
        sig = 1.0 / (1.0 + np.exp(-(ctx @ h)))
        np.testing.assert_allclose(grads.units, (sig - 1.0) * ctx / 2.0, atol=1e-12)


class TestTraining:
    def test_two_word_corpus_bitwise_deterministic(self, make_slice):
        sl = make_slice([["alpha", "beta"]] * 8)
        cfg = small_config(epochs=1)
        a = sgns_train(sl, cfg)
        b = sgns_train(sl, cfg)
        np.testing.assert_array_equal(a.input_vectors, b.input_vectors)
        np.testing.assert_array_equal(a.output_vectors, b.output_vectors)

    def test_bitwise_deterministic_larger(self, make_slice, rng):
        words = [f"w{i}" for i in range(12)]
        sentences = [list(rng.choice(words, size=7)) for _ in range(40)]
        sl = make_slice(sentences)
        cfg = small_config(epochs=2, seed=9)
        a = sgns_train(sl, cfg)
        b = sgns_train(sl, cfg)
        np.testing.assert_array_equal(a.input_vectors, b.input_vectors)
        np.testing.assert_array_equal(a.output_vectors, b.output_vectors)

    def test_loss_descends_on_moving_average(self, make_slice, rng):
        # fixed co-occurrence structure so there is something to learn
        pairs = [(f"n{i}", f"v{i}") for i in range(5)]
        sentences = [
            [a, b, a, b] for a, b in pairs for _ in range(12)
        ]
        sl = make_slice(sentences)
        losses = []
        sgns_train(sl, small_config(epochs=30, seed=3), progress=lambda e, l: losses.append(l))
        moving = np.convolve(losses, np.ones(5) / 5, mode="valid")
        # descent dominates; per-step upticks stay within sampling noise
        assert np.all(np.diff(moving) <= 1e-3)
        assert moving[-1] < moving[0]

    def test_epoch_zero_with_init_preserves_shared_rows(self, make_slice):
        sl = make_slice([["alpha", "beta", "gamma"]] * 10)
        base = sgns_train(sl, small_config(epochs=2))
        frozen = sgns_train(sl, small_config(epochs=0), init=base)
        for word in ("alpha", "beta", "gamma"):
            i, j = frozen.vocab.index[word], base.vocab.index[word]
            np.testing.assert_array_equal(frozen.input_vectors[i], base.input_vectors[j])
            np.testing.assert_array_equal(frozen.output_vectors[i], base.output_vectors[j])
        # bucket block carries over wholesale
        np.testing.assert_array_equal(
            frozen.input_vectors[len(frozen.vocab) :], base.input_vectors[len(base.vocab) :]
        )

    def test_init_dim_mismatch_rejected(self, make_slice):
        sl = make_slice([["alpha", "beta"]] * 6)
        base = sgns_train(sl, small_config(dim=4, epochs=1))
        with pytest.raises(ValueError, match="dimension 4 does not match configured dimension 8"):
            sgns_train(sl, small_config(dim=8, epochs=1), init=base)

    def test_empty_slice_rejected(self, make_slice):
        with pytest.raises(ValueError, match="empty"):
            sgns_train(make_slice([]), small_config())

    def test_new_words_randomly_initialized_under_init(self, make_slice):
        sl1 = make_slice([["alpha", "beta"]] * 8)
        sl2 = make_slice([["alpha", "beta", "nova"]] * 8)
        base = sgns_train(sl1, small_config(epochs=1))
        grown = sgns_train(sl2, small_config(epochs=0), init=base)
        i = grown.vocab.index["nova"]
        row = grown.input_vectors[i]
        assert np.all(np.abs(row) <= 1.0 / 8 + 1e-7)
        assert np.any(row != 0.0)
        np.testing.assert_array_equal(grown.output_vectors[i], np.zeros(8, dtype=np.float32))

    def test_seed_word_vectors_sets_input_rows_only(self, make_slice):
        sl = make_slice([["alpha", "beta"]] * 8)
        seeded = sgns_train(
            sl,
            small_config(epochs=0),
            seed_word_vectors={"alpha": np.full(8, 0.5), "ghost": np.full(8, 9.0)},
        )
        i = seeded.vocab.index["alpha"]
        np.testing.assert_array_equal(seeded.input_vectors[i], np.full(8, 0.5, dtype=np.float32))
        np.testing.assert_array_equal(seeded.output_vectors[i], np.zeros(8, dtype=np.float32))
        assert "ghost" not in seeded.vocab  # absent external words are ignored

    def test_seed_vector_dim_mismatch_rejected(self, make_slice):
        sl = make_slice([["alpha", "beta"]] * 8)
        with pytest.raises(ValueError, match="dimension"):
            sgns_train(sl, small_config(epochs=0), seed_word_vectors={"alpha": np.ones(3)})

    def test_vectors_finite_after_training(self, make_slice, rng):
        words = [f"w{i}" for i in range(6)]
        sentences = [list(rng.choice(words, size=5)) for _ in range(30)]
        space = sgns_train(make_slice(sentences), small_config(epochs=5))
        assert np.isfinite(space.input_vectors).all()
        assert np.isfinite(space.output_vectors).all()


class TestTrainConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(dim=0),
            dict(epochs=-1),
            dict(window=0),
            dict(negatives=0),
            dict(min_count=0),
            dict(ngram_min=5, ngram_max=3),
            dict(bucket_count=0),
            dict(initial_lr=0.0),
        ],
    )
    def test_invalid_rejected(self, kwargs):
        base = dict(dim=8, epochs=1, seed=0)
        base.update(kwargs)
        with pytest.raises(ValueError):
            TrainConfig(**base)

    def test_epoch_zero_is_diagnostic_mode(self):
        TrainConfig(dim=8, epochs=0, seed=0)  # allowed
