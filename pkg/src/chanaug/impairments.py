"""Transmit-chain hardware impairments that form a transmitter's fingerprint.

The synthesis chain applies, in fixed transmit order: DC offset, I/Q
modulator imbalance, memoryless odd-order PA polynomial, then oscillator
errors (CFO and phase-noise random walk).  The all-nominal fingerprint is
the exact identity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .iqio import IqBuffer


@dataclass(frozen=True)
class TransmitterFingerprint:
    """Per-transmitter impairment parameters (nominal values = clean transmitter)."""

    iq_gain: float = 1.0
    iq_phase_deg: float = 0.0
    dc_offset: complex = 0j
    pa_a1: complex = 1.0 + 0j
    pa_a3: complex = 0j
    pa_a5: complex = 0j
    cfo_hz: float = 0.0
    phase_noise_std: float = 0.0

    def __post_init__(self):
        if not self.iq_gain > 0:
            raise ValidationError("iq_gain must be > 0")
        if not abs(self.iq_phase_deg) < 90:
            raise ValidationError("iq_phase_deg must satisfy |phase| < 90")
        values = [self.iq_gain, self.iq_phase_deg, self.dc_offset, self.pa_a1,
                  self.pa_a3, self.pa_a5, self.cfo_hz, self.phase_noise_std]
        if not all(math.isfinite(abs(complex(v))) for v in values):
            raise ValidationError("fingerprint parameters must be finite")


def iq_imbalance_coefficients(gain: float, phase_deg: float) -> tuple[complex, complex]:
    """Direct/image coefficients: y = mu*x + nu*conj(x)."""
    e = gain * np.exp(1j * np.deg2rad(phase_deg))
    return (1.0 + e) / 2.0, (1.0 - e) / 2.0


def apply_iq_imbalance(x: IqBuffer, gain: float, phase_deg: float) -> IqBuffer:
    if not gain > 0:
        raise ValidationError("gain must be > 0")
    mu, nu = iq_imbalance_coefficients(gain, phase_deg)
    return IqBuffer(mu * x.samples + nu * np.conj(x.samples), x.sample_rate_hz)


def apply_dc_offset(x: IqBuffer, offset: complex) -> IqBuffer:
    return IqBuffer(x.samples + offset, x.sample_rate_hz)


def apply_pa(x: IqBuffer, a1: complex, a3: complex, a5: complex) -> IqBuffer:
    """Memoryless odd-order polynomial: y = a1*x + a3*x|x|^2 + a5*x|x|^4."""
    mag2 = np.abs(x.samples) ** 2
    return IqBuffer(x.samples * (a1 + a3 * mag2 + a5 * mag2 ** 2), x.sample_rate_hz)


def apply_cfo_phase_noise(x: IqBuffer, cfo_hz: float, phase_noise_std: float,
                          seed: int) -> IqBuffer:
    """Rotate by a frequency offset plus a seeded Gaussian phase random walk."""
    k = np.arange(len(x))
    phase = 2.0 * np.pi * cfo_hz * k / x.sample_rate_hz
    if phase_noise_std > 0:
        rng = np.random.default_rng(seed)
        phase = phase + np.cumsum(rng.standard_normal(len(x)) * phase_noise_std)
    return IqBuffer(x.samples * np.exp(1j * phase), x.sample_rate_hz)


def apply_fingerprint(x: IqBuffer, fp: TransmitterFingerprint, seed: int = 0) -> IqBuffer:
    """Apply the full transmit chain: DC -> IQ imbalance -> PA -> CFO/phase noise."""
    y = apply_dc_offset(x, fp.dc_offset)
    y = apply_iq_imbalance(y, fp.iq_gain, fp.iq_phase_deg)
    y = apply_pa(y, fp.pa_a1, fp.pa_a3, fp.pa_a5)
    return apply_cfo_phase_noise(y, fp.cfo_hz, fp.phase_noise_std, seed)
