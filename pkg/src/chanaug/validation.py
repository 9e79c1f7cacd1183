"""Input validation helpers for the estimator API."""

import numpy as np

from .errors import ValidationError


def as_complex_windows(X) -> np.ndarray:
    """Coerce input to an (N, W) complex matrix.

    Accepts (N, W) complex, a single 1-D complex window, or (N, 2, W) real
    I/Q planes.
    """
    arr = np.asarray(X)
    if arr.ndim == 3 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0, :] + 1j * arr[:, 1, :]
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValidationError(f"expected (n_windows, window_len), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("windows must be finite")
    return arr


def as_labels(y, n: int) -> np.ndarray:
    labels = np.asarray(y, dtype=np.int64).ravel()
    if labels.shape[0] != n:
        raise ValidationError(f"got {labels.shape[0]} labels for {n} windows")
    if labels.min() < 0:
        raise ValidationError("labels must be non-negative integers")
    return labels
