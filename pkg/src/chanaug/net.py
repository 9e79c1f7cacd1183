"""Hand-rolled convolutional classifier over I/Q windows.

The network is input (2 x W) -> [conv1d(valid) -> ReLU -> maxpool2] x C
-> dense hidden + ReLU -> dense softmax.  Forward, backward, and the
plain mini-batch SGD loop are all written against numpy so training is
bit-reproducible given the seed.  Every array is float64; gradients are
checked against central differences in the test suite.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ConfigError, ValidationError
from .seeds import mix_seed, rng_for


@dataclass
class NetConfig:
    window_len: int = 256
    num_classes: int = 4
    conv_stages: int = 2
    filters: int = 16
    kernel: int = 7
    hidden: int = 64
    epochs: int = 16
    batch_size: int = 64
    learning_rate: float = 0.1
    seed: int = 0
    dtype: str = "float64"  # float32 halves training time; gradient checks want float64

    def __post_init__(self):
        if min(self.window_len, self.num_classes, self.conv_stages, self.filters,
               self.kernel, self.hidden, self.batch_size) < 1:
            raise ConfigError("all NetConfig dimensions must be >= 1")
        if self.epochs < 0:
            raise ConfigError("epochs must be >= 0")
        if self.dtype not in ("float32", "float64"):
            raise ConfigError("dtype must be float32 or float64")

    def feature_lengths(self) -> list[int]:
        """Sequence length after each conv stage; validates the geometry."""
        lengths = []
        length = self.window_len
        for _ in range(self.conv_stages):
            length = length - self.kernel + 1
            if length < 2:
                raise ConfigError("window too short for the configured conv stack")
            length //= 2
            lengths.append(length)
        return lengths


def init_weights(cfg: NetConfig) -> list[np.ndarray]:
    """Seeded He-initialized weights, biases zero.

    Layout: [conv_w, conv_b] per stage, then hidden w/b, then output w/b.
    """
    rng = rng_for(cfg.seed)
    weights = []
    c_in = 2
    for _ in range(cfg.conv_stages):
        fan_in = c_in * cfg.kernel
        weights.append(rng.standard_normal((cfg.filters, c_in, cfg.kernel)) *
                       np.sqrt(2.0 / fan_in))
        weights.append(np.zeros(cfg.filters))
        c_in = cfg.filters
    flat = cfg.filters * cfg.feature_lengths()[-1]
    weights.append(rng.standard_normal((cfg.hidden, flat)) * np.sqrt(2.0 / flat))
    weights.append(np.zeros(cfg.hidden))
    weights.append(rng.standard_normal((cfg.num_classes, cfg.hidden)) *
                   np.sqrt(2.0 / cfg.hidden))
    weights.append(np.zeros(cfg.num_classes))
    return [w.astype(cfg.dtype) for w in weights]


def _conv_forward(x, w, b):
    n, c, length = x.shape
    f, _, k = w.shape
    l_out = length - k + 1
    windows = sliding_window_view(x, k, axis=2)           # (N, C, L_out, K)
    cols = np.ascontiguousarray(windows.transpose(0, 2, 1, 3)).reshape(n * l_out, c * k)
    out = (cols @ w.reshape(f, c * k).T + b).reshape(n, l_out, f)
    return out.transpose(0, 2, 1), cols


def _conv_backward(dout, cols, w, x_shape, need_dx=True):
    n, c, length = x_shape
    f, _, k = w.shape
    l_out = length - k + 1
    dflat = np.ascontiguousarray(dout.transpose(0, 2, 1)).reshape(n * l_out, f)
    dw = (dflat.T @ cols).reshape(w.shape)
    db = dout.sum(axis=(0, 2))
    if not need_dx:  # first stage: the input gradient is never used
        return None, dw, db
    dcols = (dflat @ w.reshape(f, c * k)).reshape(n, l_out, c, k)
    dx_t = np.zeros((n, length, c), dtype=dout.dtype)  # channels-last scatter
    for j in range(k):
        dx_t[:, j:j + l_out, :] += dcols[:, :, :, j]
    return np.ascontiguousarray(dx_t.transpose(0, 2, 1)), dw, db


def _pool_forward(x):
    n, f, length = x.shape
    half = length // 2
    left = x[:, :, 0:2 * half:2]
    right = x[:, :, 1:2 * half:2]
    mask = left >= right  # ties route to the earlier sample
    return np.where(mask, left, right), mask


def _pool_backward(dout, mask, x_shape):
    n, f, length = x_shape
    half = length // 2
    dx = np.zeros(x_shape, dtype=dout.dtype)
    dx[:, :, 0:2 * half:2] = np.where(mask, dout, 0)
    dx[:, :, 1:2 * half:2] = np.where(mask, 0, dout)
    return dx


def softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class Cnn:
    """Forward/backward engine over a weight list (see init_weights layout)."""

    def __init__(self, cfg: NetConfig, weights: list[np.ndarray] | None = None):
        self.cfg = cfg
        cfg.feature_lengths()
        self.weights = weights if weights is not None else init_weights(cfg)

    def forward(self, x, want_cache=False):
        cfg = self.cfg
        x = np.asarray(x, dtype=cfg.dtype)
        cache = {"conv": [], "x": x}
        h = x
        for s in range(cfg.conv_stages):
            w, b = self.weights[2 * s], self.weights[2 * s + 1]
            z, cols = _conv_forward(h, w, b)
            a = np.maximum(z, 0.0)
            p, idx = _pool_forward(a)
            cache["conv"].append((h.shape, cols, z, a.shape, idx))
            h = p
        flat = h.reshape(h.shape[0], -1)
        wh, bh = self.weights[-4], self.weights[-3]
        zh = flat @ wh.T + bh
        ah = np.maximum(zh, 0.0)
        wo, bo = self.weights[-2], self.weights[-1]
        logits = ah @ wo.T + bo
        if not want_cache:
            return logits
        cache.update(flat=flat, zh=zh, ah=ah, pooled_shape=h.shape)
        return logits, cache

    def penultimate(self, x):
        """Hidden-layer activations (the exported feature vector)."""
        logits, cache = self.forward(x, want_cache=True)
        return cache["ah"]

    def predict_proba(self, x):
        return softmax(self.forward(x))

    def loss_and_grads(self, x, y):
        """Mean cross-entropy over the batch and gradients for every weight."""
        cfg = self.cfg
        n = x.shape[0]
        logits, cache = self.forward(x, want_cache=True)
        probs = softmax(logits)
        loss = float(-np.mean(np.log(probs[np.arange(n), y] + 1e-300)))

        dlogits = probs.copy()
        dlogits[np.arange(n), y] -= 1.0
        dlogits /= n

        grads = [None] * len(self.weights)
        wo = self.weights[-2]
        grads[-2] = dlogits.T @ cache["ah"]
        grads[-1] = dlogits.sum(axis=0)
        dah = dlogits @ wo
        dzh = dah * (cache["zh"] > 0)
        wh = self.weights[-4]
        grads[-4] = dzh.T @ cache["flat"]
        grads[-3] = dzh.sum(axis=0)
        dflat = dzh @ wh
        dh = dflat.reshape(cache["pooled_shape"])

        for s in reversed(range(cfg.conv_stages)):
            x_shape, cols, z, a_shape, idx = cache["conv"][s]
            da = _pool_backward(dh, idx, a_shape)
            dz = da * (z > 0)
            dh, dw, db = _conv_backward(dz, cols, self.weights[2 * s], x_shape,
                                        need_dx=s > 0)
            grads[2 * s] = dw
            grads[2 * s + 1] = db
        return loss, grads, probs


def _balanced_label_sequence(labels_by_class, num_draws, rng):
    """Per-epoch label draw order: class counts as even as possible."""
    classes = sorted(labels_by_class)
    base, extra = divmod(num_draws, len(classes))
    counts = {c: base for c in classes}
    for c in rng.permutation(classes)[:extra]:
        counts[int(c)] += 1
    seq = np.concatenate([np.full(counts[c], c, dtype=np.int64) for c in classes])
    rng.shuffle(seq)
    return seq


class _ClassCycler:
    """Deterministic shuffled cyclic sampler over one class's example indices."""

    def __init__(self, indices, rng):
        self.indices = np.asarray(indices)
        self.rng = rng
        self.order = self.rng.permutation(len(self.indices))
        self.pos = 0

    def take(self):
        if self.pos == len(self.order):
            self.order = self.rng.permutation(len(self.indices))
            self.pos = 0
        value = self.indices[self.order[self.pos]]
        self.pos += 1
        return int(value)


@dataclass
class EpochStats:
    epoch: int
    loss: float
    accuracy: float


def fit(x: np.ndarray, y: np.ndarray, cfg: NetConfig):
    """Train with class-balanced mini-batch SGD; returns (Cnn, per-epoch log)."""
    y = np.asarray(y)
    if x.shape[0] != y.shape[0] or x.shape[0] == 0:
        raise ValidationError("need matching, non-empty inputs and labels")
    by_class = {c: np.flatnonzero(y == c) for c in range(cfg.num_classes)}
    for c, idx in by_class.items():
        if idx.size == 0:
            raise ConfigError(f"class {c} has no training examples")

    net = Cnn(cfg)
    log = []
    num_batches = max(1, int(np.ceil(x.shape[0] / cfg.batch_size)))
    for epoch in range(cfg.epochs):
        rng = rng_for(cfg.seed, 1, epoch)
        cyclers = {c: _ClassCycler(idx, rng) for c, idx in sorted(by_class.items())}
        seq = _balanced_label_sequence(by_class, num_batches * cfg.batch_size, rng)
        losses = []
        correct = 0
        for b in range(num_batches):
            labels = seq[b * cfg.batch_size:(b + 1) * cfg.batch_size]
            picks = np.array([cyclers[int(c)].take() for c in labels])
            loss, grads, probs = net.loss_and_grads(x[picks], y[picks])
            for w, g in zip(net.weights, grads):
                w -= cfg.learning_rate * g
            losses.append(loss)
            correct += int(np.sum(probs.argmax(axis=1) == y[picks]))
        log.append(EpochStats(epoch, float(np.mean(losses)),
                              correct / (num_batches * cfg.batch_size)))
    return net, log


def gradient_check(cfg: NetConfig, probe_batch, num_coords: int = 8,
                   step: float = 1e-4) -> float:
    """Max relative error between analytic and central-difference gradients."""
    x, y = probe_batch
    net = Cnn(cfg)
    _, grads, _ = net.loss_and_grads(x, y)
    rng = rng_for(cfg.seed, 2)
    worst = 0.0
    for w, g in zip(net.weights, grads):
        flat_w = w.reshape(-1)
        flat_g = g.reshape(-1)
        coords = rng.choice(flat_w.size, size=min(num_coords, flat_w.size), replace=False)
        for c in coords:
            original = flat_w[c]
            flat_w[c] = original + step
            up, _, _ = net.loss_and_grads(x, y)
            flat_w[c] = original - step
            down, _, _ = net.loss_and_grads(x, y)
            flat_w[c] = original
            numeric = (up - down) / (2 * step)
            denom = max(abs(numeric), abs(flat_g[c]), 1e-8)
            worst = max(worst, abs(numeric - flat_g[c]) / denom)
    return worst
