"""Fading channel emulation: Doppler processes, multipath application, AWGN.

Tap gain processes
------------------
TDL taps fade as sum-of-sinusoids Rayleigh processes (64 seeded sinusoids,
equally spaced arrival angles with a random rotation), which gives the
classical J0 autocorrelation.  A LOS first tap adds a deterministic
component so the specular/diffuse power ratio equals the profile's K.

CDL clusters are collapsed to single composite rays: each cluster rotates
at f_d*cos(AoA - heading) with a seeded initial phase, the heading drawn
once per realization.

Zero Doppler freezes each tap to a unit-magnitude phasor.  The first tap
of an NLOS profile is then pinned to zero phase (the receiver's phase
reference), so a single 0 dB zero-delay tap is the exact identity channel;
later taps keep seeded random phases, which is still a (frozen) fade.

Fractional delays use a 63-tap Hann-windowed sinc interpolator with the
center-tap group delay compensated, so output length equals input length.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError, ValidationError
from .iqio import IqBuffer
from .profiles import ClusterProfile, TapProfile
from .seeds import mix_seed, rng_for

NUM_SINUSOIDS = 64
FRAC_DELAY_TAPS = 63
_FADE_OVERSAMPLING = 64  # fading generated at >= this multiple of f_d, then interpolated
_HEADING_STREAM = 0x48454144  # sub-stream tag for the travel-azimuth draw


@dataclass
class ChannelConfig:
    """One randomized channel draw."""

    sample_rate_hz: float
    delay_spread_s: float = 0.0
    max_doppler_hz: float = 0.0
    snr_db: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.sample_rate_hz > 0:
            raise ConfigError("sample_rate_hz must be > 0")
        if self.delay_spread_s < 0:
            raise ConfigError("delay_spread_s must be >= 0")
        if not 0 <= self.max_doppler_hz < self.sample_rate_hz / 2:
            raise ConfigError("max_doppler_hz must lie in [0, sample_rate_hz/2)")


@dataclass
class FadingRealization:
    """Unit-mean-square complex gain series for one tap."""

    gains: np.ndarray
    los_component: np.ndarray | None
    num_sinusoids: int
    doppler_hz: float


def _sos_rayleigh(rng: np.random.Generator, f_d: float, fs: float,
                  num_samples: int) -> np.ndarray:
    """Sum-of-sinusoids Rayleigh process, E|g|^2 = 1, max Doppler f_d."""
    n = NUM_SINUSOIDS
    alpha = 2.0 * np.pi * (np.arange(n) + 0.5) / n + rng.uniform(0.0, 2.0 * np.pi)
    omega = 2.0 * np.pi * f_d * np.cos(alpha)
    phi = rng.uniform(0.0, 2.0 * np.pi, n)

    # The process bandwidth is f_d << fs; synthesize on a coarse grid and
    # linearly interpolate onto the sample grid.
    fs_fade = min(fs, _FADE_OVERSAMPLING * f_d)
    if fs_fade == fs:
        t = np.arange(num_samples) / fs
        return np.exp(1j * (np.outer(t, omega) + phi)).sum(axis=1) / np.sqrt(n)
    duration = (num_samples - 1) / fs
    m = int(np.ceil(duration * fs_fade)) + 2
    t_grid = np.arange(m) / fs_fade
    g_grid = np.exp(1j * (np.outer(t_grid, omega) + phi)).sum(axis=1) / np.sqrt(n)
    t = np.arange(num_samples) / fs
    return np.interp(t, t_grid, g_grid.real) + 1j * np.interp(t, t_grid, g_grid.imag)


def gen_fading(tap_index: int, profile: TapProfile, config: ChannelConfig,
               num_samples: int) -> FadingRealization:
    """Generate the tap's unit-power complex gain series for one realization."""
    if num_samples < 1:
        raise ValidationError("num_samples must be >= 1")
    fs = config.sample_rate_hz
    f_d = config.max_doppler_hz
    rng = rng_for(config.seed, tap_index)
    is_los_tap = profile.los and tap_index == 0

    if isinstance(profile, ClusterProfile):
        # Single composite ray per cluster at the cluster's Doppler shift.
        heading = rng_for(config.seed, _HEADING_STREAM).uniform(0.0, 2.0 * np.pi)
        shift = f_d * np.cos(np.deg2rad(profile.aoa_deg[tap_index]) - heading)
        t = np.arange(num_samples) / fs
        if is_los_tap:
            k_lin = 10.0 ** (profile.rician_k_db / 10.0)
            phase_spec = rng.uniform(0.0, 2.0 * np.pi)
            phase_clu = rng.uniform(0.0, 2.0 * np.pi)
            los = np.sqrt(k_lin / (1.0 + k_lin)) * np.exp(
                1j * (2.0 * np.pi * shift * t + phase_spec))
            diffuse = np.sqrt(1.0 / (1.0 + k_lin)) * np.exp(
                1j * (2.0 * np.pi * shift * t + phase_clu))
            return FadingRealization(los + diffuse, los, 1, abs(shift))
        if f_d == 0.0:
            phase = 0.0 if tap_index == 0 else rng.uniform(0.0, 2.0 * np.pi)
            gains = np.full(num_samples, np.exp(1j * phase))
        else:
            phase = rng.uniform(0.0, 2.0 * np.pi)
            gains = np.exp(1j * (2.0 * np.pi * shift * np.arange(num_samples) / fs + phase))
        return FadingRealization(gains, None, 1, abs(shift))

    # TDL tap: isotropic diffuse process, optionally with a LOS component.
    if is_los_tap:
        k_lin = 10.0 ** (profile.rician_k_db / 10.0)
        theta_los = rng.uniform(0.0, 2.0 * np.pi)
        phase_los = rng.uniform(0.0, 2.0 * np.pi)
        if f_d == 0.0:
            diffuse = np.full(num_samples, np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
            los = np.full(num_samples, np.exp(1j * phase_los))
        else:
            diffuse = _sos_rayleigh(rng, f_d, fs, num_samples)
            t = np.arange(num_samples) / fs
            los = np.exp(1j * (2.0 * np.pi * f_d * np.cos(theta_los) * t + phase_los))
        los *= np.sqrt(k_lin / (1.0 + k_lin))
        gains = los + np.sqrt(1.0 / (1.0 + k_lin)) * diffuse
        return FadingRealization(gains, los, NUM_SINUSOIDS, f_d)

    if f_d == 0.0:
        phase = 0.0 if tap_index == 0 else rng.uniform(0.0, 2.0 * np.pi)
        gains = np.full(num_samples, np.exp(1j * phase))
        return FadingRealization(gains, None, NUM_SINUSOIDS, 0.0)

    gains = _sos_rayleigh(rng, f_d, fs, num_samples)
    return FadingRealization(gains, None, NUM_SINUSOIDS, f_d)


def fractional_delay(x: np.ndarray, delay_samples: float) -> np.ndarray:
    """Delay a sequence by a (possibly fractional) number of samples.

    Windowed-sinc interpolation, group delay compensated; output has the
    input's length with zeros shifted in from the left.
    """
    if delay_samples < 0:
        raise ValidationError("delay must be non-negative")
    n = x.size
    d_int = int(np.floor(delay_samples))
    frac = delay_samples - d_int
    if frac == 0.0:
        frac_part = x
    else:
        center = FRAC_DELAY_TAPS // 2
        taps = np.sinc(np.arange(FRAC_DELAY_TAPS) - center - frac) * np.hanning(FRAC_DELAY_TAPS)
        frac_part = np.convolve(x, taps)[center:center + n]
    out = np.zeros(n, dtype=np.complex128)
    if d_int < n:
        out[d_int:] = frac_part[:n - d_int]
    return out


def apply_channel(x: IqBuffer, profile: TapProfile, config: ChannelConfig) -> IqBuffer:
    """Pass a buffer through one realization of the profile's multipath channel.

    y[k] = sum_n sqrt(p_n) * g_n[k] * (x delayed by tau_n)[k].  Tap powers
    are used as given; apply normalize_profile_power first when total
    output energy must match the input.
    """
    if x.sample_rate_hz != config.sample_rate_hz:
        raise ConfigError(
            f"buffer sample rate {x.sample_rate_hz} != config {config.sample_rate_hz}")
    if not profile.scaled:
        raise ConfigError("profile delays are still normalized; call scale_delays first")
    if len(x) == 0:
        return IqBuffer(np.zeros(0), x.sample_rate_hz)
    if np.max(profile.delays) >= x.duration_s:
        raise ValidationError("profile delays exceed the buffer duration")

    fs = config.sample_rate_hz
    amps = np.sqrt(10.0 ** (profile.powers_db / 10.0))
    y = np.zeros(len(x), dtype=np.complex128)
    for i in range(profile.num_taps):
        fading = gen_fading(i, profile, config, len(x))
        y += amps[i] * fading.gains * fractional_delay(x.samples, profile.delays[i] * fs)
    return IqBuffer(y, fs)


def add_awgn(x: IqBuffer, snr_db: float, seed: int) -> IqBuffer:
    """Add complex circular Gaussian noise at the requested SNR."""
    if len(x) == 0:
        raise DegenerateInputError("cannot add noise to an empty buffer")
    p = x.mean_power()
    if p <= 0.0:
        raise DegenerateInputError("cannot set an SNR against a zero-power signal")
    var = p / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    noise = np.sqrt(var / 2.0) * (rng.standard_normal(len(x)) +
                                  1j * rng.standard_normal(len(x)))
    return IqBuffer(x.samples + noise, x.sample_rate_hz)
