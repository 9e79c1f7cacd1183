"""Training, evaluation, feature export, and model persistence.

Examples enter as complex windows; they are power-normalized and split
into I/Q planes (2 x W) before hitting the network, and nothing else is
done to them.
"""

import csv
import struct
from dataclasses import dataclass

import numpy as np

from .dataset import Example
from .errors import ConfigError, FormatError, ValidationError
from .net import Cnn, EpochStats, NetConfig, fit
from .net import gradient_check as _net_gradient_check

_MODEL_MAGIC = b"RFCM"
_MODEL_VERSION = 1


@dataclass
class TrainedModel:
    config: NetConfig
    weights: list[np.ndarray]
    log: list[EpochStats]

    def net(self) -> Cnn:
        return Cnn(self.config, self.weights)


@dataclass
class EvalReport:
    accuracy: float
    confusion: np.ndarray  # (num_classes, num_classes) counts, rows = truth
    per_class_accuracy: np.ndarray


def windows_to_planes(windows: np.ndarray) -> np.ndarray:
    """(N, W) complex -> (N, 2, W) float with per-window unit mean power."""
    windows = np.asarray(windows, dtype=np.complex128)
    if windows.ndim == 1:
        windows = windows[None, :]
    power = np.mean(np.abs(windows) ** 2, axis=1, keepdims=True)
    scale = np.sqrt(np.where(power > 0, power, 1.0))
    normalized = windows / scale
    return np.stack([normalized.real, normalized.imag], axis=1)


def examples_to_arrays(examples: list[Example]) -> tuple[np.ndarray, np.ndarray]:
    if not examples:
        raise ValidationError("need at least one example")
    x = windows_to_planes(np.stack([ex.window for ex in examples]))
    y = np.array([ex.label for ex in examples], dtype=np.int64)
    return x, y


def train(train_set: list[Example], cfg: NetConfig) -> TrainedModel:
    """Class-balanced mini-batch SGD for cfg.epochs; deterministic given seed."""
    x, y = examples_to_arrays(train_set)
    if x.shape[2] != cfg.window_len:
        raise ConfigError(f"examples have window {x.shape[2]}, config says {cfg.window_len}")
    if y.max() >= cfg.num_classes:
        raise ConfigError("label outside the configured class count")
    net, log = fit(x, y, cfg)
    return TrainedModel(cfg, net.weights, log)


def predict(model: TrainedModel, examples: list[Example]) -> np.ndarray:
    x, _ = examples_to_arrays(examples)
    return model.net().predict_proba(x).argmax(axis=1)


def evaluate(model: TrainedModel, test_set: list[Example]) -> EvalReport:
    x, y = examples_to_arrays(test_set)
    t = model.config.num_classes
    predictions = model.net().predict_proba(x).argmax(axis=1)
    confusion = np.zeros((t, t), dtype=np.int64)
    np.add.at(confusion, (y, predictions), 1)
    totals = confusion.sum(axis=1)
    per_class = np.divide(np.diag(confusion), totals, where=totals > 0,
                          out=np.zeros(t, dtype=np.float64))
    return EvalReport(float(np.trace(confusion) / len(test_set)), confusion, per_class)


def gradient_check(cfg: NetConfig, probe_batch) -> float:
    """Analytic vs central-difference gradients; see net.gradient_check."""
    return _net_gradient_check(cfg, probe_batch)


def export_features(model: TrainedModel, examples: list[Example], path) -> None:
    """CSV of penultimate activations: label, waveform, day, then H features."""
    x, y = examples_to_arrays(examples)
    features = model.net().penultimate(x)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["label", "waveform", "day"] +
                        [f"f{i}" for i in range(features.shape[1])])
        for ex, row in zip(examples, features):
            writer.writerow([ex.label, ex.meta.waveform.value, ex.meta.day.value] +
                            [repr(float(v)) for v in row])


def save_model(model: TrainedModel, path) -> None:
    """Versioned flat binary: header, architecture, float32 weight blocks."""
    cfg = model.config
    with open(path, "wb") as f:
        f.write(_MODEL_MAGIC)
        f.write(struct.pack("<I", _MODEL_VERSION))
        f.write(struct.pack("<8I", cfg.window_len, cfg.num_classes, cfg.conv_stages,
                            cfg.filters, cfg.kernel, cfg.hidden, cfg.epochs,
                            cfg.batch_size))
        f.write(struct.pack("<dQ", cfg.learning_rate, cfg.seed))
        f.write(struct.pack("<I", len(model.weights)))
        for w in model.weights:
            f.write(struct.pack("<I", w.ndim))
            f.write(struct.pack(f"<{w.ndim}I", *w.shape))
            f.write(w.astype("<f4").tobytes())


def load_model(path) -> TrainedModel:
    with open(path, "rb") as f:
        if f.read(4) != _MODEL_MAGIC:
            raise FormatError(f"{path}: not a model file")
        (version,) = struct.unpack("<I", f.read(4))
        if version != _MODEL_VERSION:
            raise FormatError(f"{path}: unsupported model version {version}")
        dims = struct.unpack("<8I", f.read(32))
        learning_rate, seed = struct.unpack("<dQ", f.read(16))
        cfg = NetConfig(window_len=dims[0], num_classes=dims[1], conv_stages=dims[2],
                        filters=dims[3], kernel=dims[4], hidden=dims[5],
                        epochs=dims[6], batch_size=dims[7],
                        learning_rate=learning_rate, seed=seed)
        (count,) = struct.unpack("<I", f.read(4))
        weights = []
        for _ in range(count):
            (ndim,) = struct.unpack("<I", f.read(4))
            shape = struct.unpack(f"<{ndim}I", f.read(4 * ndim))
            n_values = int(np.prod(shape))
            block = np.frombuffer(f.read(4 * n_values), dtype="<f4")
            if block.size != n_values:
                raise FormatError(f"{path}: truncated weight block")
            weights.append(block.astype(np.float64).reshape(shape))
    return TrainedModel(cfg, weights, [])
