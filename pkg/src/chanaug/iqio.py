"""Complex baseband buffers and raw .bin I/Q file access.

On-disk format: interleaved 32-bit little-endian floats, I then Q, no
header.  This is the common SDR raw-capture layout; one complex sample
occupies 8 bytes.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, FormatError, ValidationError

BYTES_PER_SAMPLE = 8  # float32 I + float32 Q


@dataclass
class IqBuffer:
    """Contiguous complex baseband samples at a fixed sample rate."""

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1:
            raise ValidationError("IqBuffer samples must be a 1-D vector")
        if not self.sample_rate_hz > 0:
            raise ValidationError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        if self.samples.size and not np.all(np.isfinite(self.samples)):
            raise ValidationError("IqBuffer samples must be finite (no NaN/Inf)")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def mean_power(self) -> float:
        if self.samples.size == 0:
            return 0.0
        return float(np.mean(np.abs(self.samples) ** 2))


def read_iq_bin(path, sample_rate_hz: float) -> IqBuffer:
    """Decode an interleaved float32 I/Q file into a buffer.

    A trailing partial record (file length not a multiple of 8 bytes) is a
    format error; an empty file decodes to an empty buffer.
    """
    size = os.path.getsize(path)
    if size % BYTES_PER_SAMPLE != 0:
        good = size - size % BYTES_PER_SAMPLE
        raise FormatError(
            f"{path}: truncated I/Q record, {size - good} stray bytes at offset {good}"
        )
    raw = np.fromfile(path, dtype="<f4")
    samples = raw[0::2].astype(np.float64) + 1j * raw[1::2].astype(np.float64)
    return IqBuffer(samples, sample_rate_hz)


def write_iq_bin(buffer: IqBuffer, path) -> None:
    """Write a buffer as interleaved float32 little-endian I,Q (inverse of read)."""
    out = np.empty(2 * len(buffer), dtype="<f4")
    out[0::2] = buffer.samples.real
    out[1::2] = buffer.samples.imag
    out.tofile(path)


def normalize_power(buffer: IqBuffer) -> IqBuffer:
    """Scale so the mean sample power is exactly 1."""
    if len(buffer) == 0:
        raise DegenerateInputError("cannot normalize an empty buffer")
    p = buffer.mean_power()
    if p <= 0.0:
        raise DegenerateInputError("cannot normalize an all-zero buffer")
    return IqBuffer(buffer.samples / np.sqrt(p), buffer.sample_rate_hz)
