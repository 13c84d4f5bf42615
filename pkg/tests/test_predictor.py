from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratincon import matchgen, predictor
from stratincon.predictor import (
    INPUT_SIZE,
    OUTPUT_SIZE,
    WINDOW_LEN,
    DivergenceError,
    EmptyDataset,
    ShapeError,
    TrainConfig,
    build_windows,
    evaluate,
    forward,
    gradient_check,
    init_model,
    load_model,
    model_fingerprint,
    persistence_metrics,
    save_model,
    split_contiguous,
    train,
)
from stratincon.telemetry import (
    SLOT_COUNT,
    BehaviorClass,
    NormalizationStats,
    compute_normalization,
)


def zeroed(model):
    for block in model.params.blocks().values():
        block[:] = 0.0
    return model


def retime(log, ts):
    frames = tuple(replace(f, t=t) for f, t in zip(log.frames, ts))
    return replace(log, frames=frames)


class TestBuildWindows:
    def test_seven_frames_two_samples(self, small_match, small_stats):
        log, _ = small_match
        short = replace(log, frames=log.frames[:7])
        samples = build_windows(short, small_stats)
        assert len(samples) == 2
        assert [s.frame_index for s in samples] == [5, 6]

    def test_gap_skips_all(self, small_match, small_stats):
        log, _ = small_match
        short = retime(replace(log, frames=log.frames[:6]), [0, 1, 2, 3, 8, 9])
        assert build_windows(short, small_stats, gap_max=2.0) == []

    def test_full_match_count(self, small_match, small_stats):
        log, _ = small_match
        assert len(build_windows(log, small_stats)) == len(log.frames) - WINDOW_LEN

    def test_2200_frames_2195_samples(self):
        log, _ = matchgen.generate_match(matchgen.GenConfig(seed=2, n_frames=2200))
        stats = compute_normalization([log])
        assert len(build_windows(log, stats)) == 2195

    def test_shapes_and_ranges(self, small_match, small_stats):
        log, _ = small_match
        s = build_windows(log, small_stats)[0]
        assert s.x.shape == (5, 10, 9) and s.y.shape == (10, 7)
        assert np.all((s.x >= 0) & (s.x <= 1))
        assert np.allclose(s.y[:, 2:].sum(axis=1), 1.0)

    def test_gap_count_property(self, small_match, small_stats):
        # count = sum over maximal contiguous runs of max(0, len - 5)
        log, _ = small_match
        ts = list(range(10)) + list(range(20, 28)) + [40]
        short = retime(replace(log, frames=log.frames[: len(ts)]), ts)
        samples = build_windows(short, small_stats, gap_max=2.0)
        assert len(samples) == max(0, 10 - 5) + max(0, 8 - 5) + max(0, 1 - 5)


class TestForward:
    def test_zero_params_uniform(self, small_match, small_stats):
        log, _ = small_match
        sample = build_windows(log, small_stats)[0]
        model = zeroed(init_model(small_stats, hidden_size=8))
        preds = forward(model, sample.x)
        for p in preds:
            assert np.allclose(p.behavior_probs, 0.2)

    def test_zero_params_tie_break(self, small_match, small_stats):
        log, _ = small_match
        sample = build_windows(log, small_stats)[0]
        model = zeroed(init_model(small_stats, hidden_size=8))
        top3 = [b for b, _ in forward(model, sample.x)[0].top_k[:3]]
        assert top3 == [BehaviorClass.MINION, BehaviorClass.CHAMPION, BehaviorClass.RESOURCE]

    def test_probs_sum_to_one(self, small_match, small_stats):
        log, _ = small_match
        sample = build_windows(log, small_stats)[3]
        model = init_model(small_stats, hidden_size=16, seed=4)
        for p in forward(model, sample.x):
            assert abs(p.behavior_probs.sum() - 1.0) < 1e-6
            assert 0.0 <= p.coords[0] <= 1.0 and 0.0 <= p.coords[1] <= 1.0
            probs = [q for _, q in p.top_k]
            assert probs == sorted(probs, reverse=True)

    def test_shape_error(self, small_stats):
        model = init_model(small_stats, hidden_size=8)
        with pytest.raises(ShapeError):
            forward(model, np.zeros((4, 10, 9)))

    @settings(max_examples=25, deadline=None)
    @given(
        logits=st.lists(st.floats(-10, 10), min_size=5, max_size=5),
        shift=st.floats(-50, 50),
    )
    def test_softmax_shift_invariance(self, logits, shift):
        a = predictor._softmax(np.array(logits))
        b = predictor._softmax(np.array(logits) + shift)
        assert np.allclose(a, b, atol=1e-9)
        assert a.min() >= 0 and abs(a.sum() - 1.0) < 1e-6


class TestTrain:
    def test_deterministic(self, small_match, small_stats):
        log, _ = small_match
        samples = build_windows(log, small_stats)[:12]
        cfg = TrainConfig(epochs=3, batch_size=4, learning_rate=3e-4, seed=1)
        m1, r1 = train(init_model(small_stats, hidden_size=8, seed=0), samples, cfg)
        m2, r2 = train(init_model(small_stats, hidden_size=8, seed=0), samples, cfg)
        for k, block in m1.params.blocks().items():
            assert np.array_equal(block, m2.params.blocks()[k])
        assert r1.loss_curve == r2.loss_curve

    def test_identical_samples_non_increasing(self, small_match, small_stats):
        log, _ = small_match
        s = build_windows(log, small_stats)[0]
        samples = [s] * 8
        _, report = train(
            init_model(small_stats, hidden_size=8, seed=0),
            samples,
            TrainConfig(epochs=25, batch_size=8, learning_rate=1e-3, seed=0),
        )
        curve = report.loss_curve
        assert all(b <= a + 1e-9 for a, b in zip(curve[1:], curve[2:]))

    def test_empty_dataset(self, small_stats):
        with pytest.raises(EmptyDataset):
            train(init_model(small_stats, hidden_size=8), [], TrainConfig(epochs=1))

    def test_divergence_detected(self, small_match, small_stats):
        log, _ = small_match
        samples = build_windows(log, small_stats)[:8]
        model = init_model(small_stats, hidden_size=8, seed=0)
        model.params.w_out[:] = 1e200
        model.params.b_out[:] = 1e200
        with np.errstate(all="ignore"), pytest.raises(DivergenceError):
            train(model, samples, TrainConfig(epochs=2, batch_size=8, seed=0))


class TestEvaluate:
    def make_exact_model(self, samples, stats):
        """Bias-only head reproducing the (single) target exactly; behavior
        logits saturated so softmax is one-hot to machine precision."""
        y = samples[0].y
        model = zeroed(init_model(stats, hidden_size=4))
        b = model.params.b_out.reshape(SLOT_COUNT, 7)
        b[:, :2] = y[:, :2]
        b[:, 2:] = -60.0
        for slot in range(SLOT_COUNT):
            b[slot, 2 + int(y[slot, 2:].argmax())] = 60.0
        return model

    def test_exact_model_zero_error(self, small_match, small_stats):
        log, _ = small_match
        s = build_windows(log, small_stats)[0]
        model = self.make_exact_model([s], small_stats)
        result = evaluate(model, [s])
        assert result.mse < 1e-20 and result.mae < 1e-10
        assert result.top1_accuracy == 1.0

    def test_persistence_brute_force(self, small_match, small_stats):
        log, _ = small_match
        samples = build_windows(log, small_stats)[:40]
        result = persistence_metrics(samples)
        # independent recomputation
        errs = []
        hits = 0
        for s in samples:
            pred = np.concatenate([s.x[-1, :, 2:4], s.x[-1, :, 4:]], axis=1)
            errs.append(pred - s.y)
            hits += int(
                np.sum(pred[:, 2:].argmax(axis=1) == s.y[:, 2:].argmax(axis=1))
            )
        errs = np.stack(errs)
        assert abs(result.mse - np.mean(errs**2)) < 1e-12
        assert abs(result.mae - np.mean(np.abs(errs))) < 1e-12
        assert abs(result.top1_accuracy - hits / (len(samples) * SLOT_COUNT)) < 1e-12

    def test_empty(self, small_stats):
        with pytest.raises(EmptyDataset):
            evaluate(init_model(small_stats, hidden_size=4), [])

    def test_split_fractions(self, small_match, small_stats):
        log, _ = small_match
        samples = build_windows(log, small_stats)
        tr, va, te = split_contiguous(samples)
        assert len(tr) + len(va) + len(te) == len(samples)
        assert tr == samples[: len(tr)]
        assert abs(len(tr) / len(samples) - 0.75) < 0.02
        with pytest.raises(ValueError):
            split_contiguous(samples, (0.5, 0.2, 0.2))


class TestGradient:
    def test_small_model_error(self, small_match, small_stats):
        log, _ = small_match
        s = build_windows(log, small_stats)[0]
        model = init_model(small_stats, hidden_size=10, seed=7)
        assert gradient_check(model, s, eps=1e-5, n_params=120, seed=7) < 1e-4

    def test_zero_coord_grads_at_exact_fit(self, small_match, small_stats):
        log, _ = small_match
        s = build_windows(log, small_stats)[0]
        model = TestEvaluate().make_exact_model([s], small_stats)
        xb, yb = predictor._stack([s])
        _, grads = predictor._loss_and_grads(model.params, xb, yb)
        coord_slots = [slot * 7 + k for slot in range(SLOT_COUNT) for k in (0, 1)]
        assert np.allclose(grads["b_out"][coord_slots], 0.0)


class TestCheckpoint:
    def test_round_trip(self, small_stats):
        model = init_model(small_stats, hidden_size=6, seed=3)
        loaded = load_model(save_model(model))
        for k, block in model.params.blocks().items():
            assert np.array_equal(block, loaded.params.blocks()[k])
        assert loaded.stats == model.stats
        assert loaded.config == model.config
        assert model_fingerprint(loaded) == model_fingerprint(model)

    def test_fingerprint_changes(self, small_stats):
        model = init_model(small_stats, hidden_size=6, seed=3)
        fp = model_fingerprint(model)
        model.params.b_out[0] += 1e-9
        assert model_fingerprint(model) != fp

    def test_bad_container(self):
        with pytest.raises(ValueError):
            load_model(b'{"format":"other"}')
