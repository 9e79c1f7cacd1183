"""Simplified OFDM burst synthesis for the three waveform kinds.

The kinds share QPSK payloads and differ only in their OFDM numerology
(FFT size, cyclic prefix, occupied band), so a classifier cannot key on
modulation content, only on transmitter and channel effects.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import WaveformKind
from .errors import ValidationError
from .iqio import IqBuffer
from .seeds import rng_for


@dataclass(frozen=True)
class WaveformSpec:
    kind: WaveformKind
    fft_size: int
    cp_len: int
    occupied_subcarriers: int

    def __post_init__(self):
        if self.fft_size < 2 or self.fft_size & (self.fft_size - 1):
            raise ValidationError("fft_size must be a power of two")
        if not 0 < self.cp_len < self.fft_size:
            raise ValidationError("cp_len must lie in (0, fft_size)")
        if not 0 < self.occupied_subcarriers <= self.fft_size - 2:
            raise ValidationError("occupied_subcarriers must lie in (0, fft_size-2]")
        if self.occupied_subcarriers % 2:
            raise ValidationError("occupied_subcarriers must be even (symmetric around DC)")

    @property
    def symbol_len(self) -> int:
        return self.fft_size + self.cp_len


_DEFAULT_SPECS = {
    WaveformKind.FIVE_G: (512, 36, 300),
    WaveformKind.WIFI: (64, 16, 52),
    WaveformKind.LTE: (512, 40, 300),
}


def default_spec(kind: WaveformKind) -> WaveformSpec:
    fft_size, cp_len, occupied = _DEFAULT_SPECS[kind]
    return WaveformSpec(kind, fft_size, cp_len, occupied)


def gen_burst(spec: WaveformSpec, num_symbols: int, payload_seed: int,
              sample_rate_hz: float = 1e6) -> IqBuffer:
    """Generate a seeded QPSK OFDM burst with unit mean power.

    Each symbol maps fresh QPSK points onto the occupied subcarriers
    (DC excluded), inverse-transforms, and prepends the cyclic prefix.
    """
    if num_symbols < 1:
        raise ValidationError("num_symbols must be >= 1")
    rng = rng_for(payload_seed)
    half = spec.occupied_subcarriers // 2
    out = np.empty(num_symbols * spec.symbol_len, dtype=np.complex128)
    for s in range(num_symbols):
        points = (rng.choice((-1.0, 1.0), spec.occupied_subcarriers) +
                  1j * rng.choice((-1.0, 1.0), spec.occupied_subcarriers)) / np.sqrt(2.0)
        grid = np.zeros(spec.fft_size, dtype=np.complex128)
        grid[1:half + 1] = points[:half]
        grid[-half:] = points[half:]
        body = np.fft.ifft(grid)
        start = s * spec.symbol_len
        out[start:start + spec.cp_len] = body[-spec.cp_len:]
        out[start + spec.cp_len:start + spec.symbol_len] = body
    out /= np.sqrt(np.mean(np.abs(out) ** 2))
    return IqBuffer(out, sample_rate_hz)
