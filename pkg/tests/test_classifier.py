import numpy as np
import pytest

from chanaug.classifier import (EvalReport, TrainedModel, evaluate,
                                examples_to_arrays, export_features,
                                gradient_check, load_model, save_model, train)
from chanaug.dataset import Day, Example, Provenance, RecordingMeta, WaveformKind
from chanaug.errors import ConfigError
from chanaug.net import Cnn, NetConfig, softmax


def _example(window, label, kind=WaveformKind.FIVE_G, day=Day.DAY1):
    meta = RecordingMeta(kind, label, day, Provenance.original())
    return Example(np.asarray(window, dtype=complex), label, meta)


def _toy_set(n_per_class=40, w=64, seed=0):
    # two classes separated by a constant complex offset
    rng = np.random.default_rng(seed)
    examples = []
    for label, offset in ((0, 0.0), (1, 0.9 + 0.9j)):
        for _ in range(n_per_class):
            window = offset + 0.35 * (rng.standard_normal(w) + 1j * rng.standard_normal(w))
            examples.append(_example(window, label))
    return examples


TINY = NetConfig(window_len=32, num_classes=3, conv_stages=1, filters=4,
                 kernel=5, hidden=8, epochs=4, batch_size=8, learning_rate=0.05,
                 seed=11)


def _probe_batch(cfg, n=6, seed=5):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 2, cfg.window_len))
    y = rng.integers(0, cfg.num_classes, n)
    return x, y


def test_gradient_check_small_net():
    assert gradient_check(TINY, _probe_batch(TINY)) < 1e-4


def test_gradients_finite_for_zero_input_zero_weights():
    cfg = TINY
    net = Cnn(cfg, [np.zeros_like(w) for w in Cnn(cfg).weights])
    x = np.zeros((4, 2, cfg.window_len))
    y = np.array([0, 1, 2, 0])
    loss, grads, probs = net.loss_and_grads(x, y)
    assert np.isfinite(loss)
    assert all(np.all(np.isfinite(g)) for g in grads)
    np.testing.assert_allclose(probs, 1.0 / cfg.num_classes)


def test_gradient_check_repeatable():
    a = gradient_check(TINY, _probe_batch(TINY))
    b = gradient_check(TINY, _probe_batch(TINY))
    assert a == b


def test_separable_toy_reaches_full_accuracy():
    examples = _toy_set()
    cfg = NetConfig(window_len=64, num_classes=2, conv_stages=2, filters=8,
                    kernel=7, hidden=32, epochs=16, batch_size=16,
                    learning_rate=0.01, seed=3)
    model = train(examples, cfg)
    assert evaluate(model, examples).accuracy == 1.0
    assert len(model.log) == 16


def test_zero_epochs_is_initialization_at_chance():
    examples = _toy_set()
    cfg = NetConfig(window_len=64, num_classes=2, conv_stages=1, filters=8,
                    kernel=7, hidden=16, epochs=0, batch_size=16, seed=3)
    model = train(examples, cfg)
    np.testing.assert_array_equal(model.weights[0], Cnn(cfg).weights[0])
    # labels drawn independently of the windows, so an untrained model can
    # only score chance level
    rng = np.random.default_rng(12)
    balanced = [_example(rng.standard_normal(64) + 1j * rng.standard_normal(64), lab)
                for lab in (0, 1) for _ in range(200)]
    report = evaluate(model, balanced)
    assert abs(report.accuracy - 0.5) < 0.1


def test_training_deterministic():
    examples = _toy_set()
    cfg = NetConfig(window_len=64, num_classes=2, conv_stages=1, filters=8,
                    kernel=7, hidden=16, epochs=3, batch_size=16, seed=9)
    a = train(examples, cfg)
    b = train(examples, cfg)
    for wa, wb in zip(a.weights, b.weights):
        np.testing.assert_array_equal(wa, wb)
    assert a.log == b.log


def test_train_rejects_empty_class():
    examples = [ex for ex in _toy_set() if ex.label == 0]
    cfg = NetConfig(window_len=64, num_classes=2, conv_stages=1, filters=4,
                    kernel=5, hidden=8, epochs=1, batch_size=8)
    with pytest.raises(ConfigError, match="class 1"):
        train(examples, cfg)


def test_softmax_rows_sum_to_one():
    rng = np.random.default_rng(0)
    probs = softmax(rng.standard_normal((50, 7)) * 30)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)


def test_balanced_sampling_draw_counts():
    # over one epoch, per-class draw counts differ by at most batch_size
    from chanaug.net import _balanced_label_sequence
    from chanaug.seeds import rng_for
    by_class = {0: np.arange(10), 1: np.arange(100), 2: np.arange(3)}
    seq = _balanced_label_sequence(by_class, 7 * 32, rng_for(0))
    counts = np.bincount(seq, minlength=3)
    assert counts.sum() == 7 * 32
    assert counts.max() - counts.min() <= 1


def test_constant_class_zero_model_scores_quarter():
    # force a degenerate model by biasing the output layer hard toward class 0
    cfg = NetConfig(window_len=32, num_classes=4, conv_stages=1, filters=4,
                    kernel=5, hidden=8, epochs=0, batch_size=8, seed=0)
    rng = np.random.default_rng(1)
    examples = [_example(rng.standard_normal(32) + 1j * rng.standard_normal(32), lab)
                for lab in range(4) for _ in range(25)]
    model = train(examples, cfg)
    model.weights[-2][:] = 0.0
    model.weights[-1][:] = np.array([100.0, 0.0, 0.0, 0.0])
    report = evaluate(model, examples)
    assert report.accuracy == 0.25
    assert report.confusion[:, 0].sum() == 100


def test_confusion_matrix_contract():
    rng = np.random.default_rng(2)
    cfg = NetConfig(window_len=32, num_classes=4, conv_stages=1, filters=4,
                    kernel=5, hidden=8, epochs=0, batch_size=8, seed=4)
    examples = [_example(rng.standard_normal(32) + 1j * rng.standard_normal(32),
                         int(rng.integers(4))) for _ in range(120)]
    model = train([_example(np.ones(32) * (1 + 1j), lab) for lab in range(4)], cfg)
    report = evaluate(model, examples)
    totals = report.confusion.sum(axis=1)
    observed = np.bincount([ex.label for ex in examples], minlength=4)
    np.testing.assert_array_equal(totals, observed)
    assert report.accuracy == np.trace(report.confusion) / 120


def test_trained_model_beats_noise_windows():
    examples = _toy_set()
    cfg = NetConfig(window_len=64, num_classes=2, conv_stages=1, filters=8,
                    kernel=7, hidden=16, epochs=8, batch_size=16, seed=6)
    model = train(examples, cfg)
    rng = np.random.default_rng(7)
    noise = [_example(5 * rng.standard_normal(64) + 5j * rng.standard_normal(64),
                      int(rng.integers(2))) for _ in range(80)]
    assert evaluate(model, examples).accuracy >= evaluate(model, noise).accuracy


def test_export_features_shape_and_determinism(tmp_path):
    examples = _toy_set(n_per_class=10)
    cfg = NetConfig(window_len=64, num_classes=2, conv_stages=1, filters=8,
                    kernel=7, hidden=16, epochs=2, batch_size=16, seed=6)
    model = train(examples, cfg)
    path = tmp_path / "features.csv"
    export_features(model, examples + [examples[0]], path)
    lines = path.read_text().splitlines()
    assert len(lines) == 1 + 21
    header = lines[0].split(",")
    assert header[:3] == ["label", "waveform", "day"]
    assert len(header) == 3 + 16
    assert lines[1] == lines[-1]  # identical example twice -> identical rows


def test_model_save_load_roundtrip(tmp_path):
    examples = _toy_set(n_per_class=10)
    cfg = NetConfig(window_len=64, num_classes=2, conv_stages=2, filters=8,
                    kernel=7, hidden=16, epochs=2, batch_size=16, seed=8)
    model = train(examples, cfg)
    path = tmp_path / "model.bin"
    save_model(model, path)
    back = load_model(path)
    assert back.config == cfg
    x, _ = examples_to_arrays(examples)
    a = model.net().predict_proba(x)
    b = back.net().predict_proba(x)
    assert np.max(np.abs(a - b)) < 1e-5  # float32 storage
    assert np.array_equal(a.argmax(axis=1), b.argmax(axis=1))
