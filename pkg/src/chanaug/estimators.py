"""Scikit-learn style wrappers around the toolkit's numeric core.

These exist so the channel, fingerprint, and classifier stages compose
with sklearn pipelines and model-selection tooling; the math lives in the
functional modules.  X is an (N, W) complex matrix of windows throughout
(real (N, 2, W) I/Q planes are accepted too).
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from .channel import ChannelConfig, add_awgn, apply_channel
from .errors import ConfigError
from .impairments import TransmitterFingerprint, apply_fingerprint
from .iqio import IqBuffer
from .net import NetConfig, softmax
from .profiles import (cdl_profile, normalize_profile_power, scale_delays,
                       tdl_profile)
from .seeds import mix_seed
from .validation import as_complex_windows, as_labels


class ChannelTransform(BaseEstimator, TransformerMixin):
    """Per-window randomized fading channel plus optional AWGN.

    Each row passes through an independently seeded draw of the configured
    profile, so transform() acts like one augmentation pass.
    """

    def __init__(self, family="tdl", profile_id="A", delay_spread_s=100e-9,
                 max_doppler_hz=0.0, snr_db=None, sample_rate_hz=1e6, seed=0):
        self.family = family
        self.profile_id = profile_id
        self.delay_spread_s = delay_spread_s
        self.max_doppler_hz = max_doppler_hz
        self.snr_db = snr_db
        self.sample_rate_hz = sample_rate_hz
        self.seed = seed

    def _profile(self):
        if self.family == "tdl":
            profile = tdl_profile(self.profile_id)
        elif self.family == "cdl":
            profile = cdl_profile(self.profile_id)
        else:
            raise ConfigError(f"family must be 'tdl' or 'cdl', got {self.family!r}")
        return scale_delays(normalize_profile_power(profile), self.delay_spread_s)

    def fit(self, X, y=None):
        as_complex_windows(X)
        self._profile()
        return self

    def transform(self, X):
        windows = as_complex_windows(X)
        profile = self._profile()
        out = np.empty_like(windows)
        for i, row in enumerate(windows):
            cfg = ChannelConfig(sample_rate_hz=self.sample_rate_hz,
                                delay_spread_s=self.delay_spread_s,
                                max_doppler_hz=self.max_doppler_hz,
                                snr_db=self.snr_db,
                                seed=mix_seed(self.seed, i))
            buf = apply_channel(IqBuffer(row, self.sample_rate_hz), profile, cfg)
            if self.snr_db is not None:
                buf = add_awgn(buf, self.snr_db, mix_seed(self.seed, i, 1))
            out[i] = buf.samples
        return out


class FingerprintTransform(BaseEstimator, TransformerMixin):
    """Apply one transmitter's impairment chain to every window."""

    def __init__(self, fingerprint=None, sample_rate_hz=1e6, seed=0):
        self.fingerprint = fingerprint
        self.sample_rate_hz = sample_rate_hz
        self.seed = seed

    def fit(self, X, y=None):
        as_complex_windows(X)
        return self

    def transform(self, X):
        windows = as_complex_windows(X)
        fp = self.fingerprint or TransmitterFingerprint()
        out = np.empty_like(windows)
        for i, row in enumerate(windows):
            buf = apply_fingerprint(IqBuffer(row, self.sample_rate_hz), fp,
                                    seed=mix_seed(self.seed, i))
            out[i] = buf.samples
        return out


class WindowClassifier(BaseEstimator, ClassifierMixin):
    """The raw-I/Q convolutional classifier behind a fit/predict API."""

    def __init__(self, conv_stages=2, filters=16, kernel=7, hidden=64, epochs=16,
                 batch_size=64, learning_rate=0.1, seed=0, dtype="float64"):
        self.conv_stages = conv_stages
        self.filters = filters
        self.kernel = kernel
        self.hidden = hidden
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed
        self.dtype = dtype

    def _net_config(self, window_len, num_classes):
        return NetConfig(window_len=window_len, num_classes=num_classes,
                         conv_stages=self.conv_stages, filters=self.filters,
                         kernel=self.kernel, hidden=self.hidden, epochs=self.epochs,
                         batch_size=self.batch_size, learning_rate=self.learning_rate,
                         seed=self.seed, dtype=self.dtype)

    def fit(self, X, y):
        from .classifier import windows_to_planes
        from .net import fit as net_fit

        windows = as_complex_windows(X)
        labels = as_labels(y, windows.shape[0])
        self.classes_ = np.unique(labels)
        cfg = self._net_config(windows.shape[1], int(labels.max()) + 1)
        self.net_, self.log_ = net_fit(windows_to_planes(windows), labels, cfg)
        return self

    def _check_fitted(self):
        if not hasattr(self, "net_"):
            raise ConfigError("classifier is not fitted yet")

    def predict_proba(self, X):
        from .classifier import windows_to_planes

        self._check_fitted()
        windows = as_complex_windows(X)
        return softmax(self.net_.forward(windows_to_planes(windows)))

    def predict(self, X):
        return self.predict_proba(X).argmax(axis=1)

    def transform(self, X):
        """Penultimate-layer features, for embedding/visualization stages."""
        from .classifier import windows_to_planes

        self._check_fitted()
        windows = as_complex_windows(X)
        return self.net_.penultimate(windows_to_planes(windows))
