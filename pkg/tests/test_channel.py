import numpy as np
import pytest

from chanaug.channel import (ChannelConfig, add_awgn, apply_channel,
                             fractional_delay, gen_fading)
from chanaug.errors import ConfigError, DegenerateInputError, ValidationError
from chanaug.iqio import IqBuffer
from chanaug.profiles import (ClusterProfile, TapProfile, cdl_profile,
                              normalize_profile_power, scale_delays,
                              tdl_profile)
from oracles import bessel_j0, empirical_autocorr

FS = 1e6


def _noise_buffer(n, seed=0, fs=FS):
    rng = np.random.default_rng(seed)
    x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    return IqBuffer(x, fs)


def _flat_tap(power_db=0.0):
    return TapProfile([0.0], [power_db], scaled=True)


def test_identity_channel():
    x = _noise_buffer(4096)
    cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=0.0, seed=3)
    y = apply_channel(x, _flat_tap(), cfg)
    assert np.max(np.abs(y.samples - x.samples)) < 1e-6


def test_single_attenuated_tap_scales_magnitude():
    x = _noise_buffer(4096, seed=1)
    cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=0.0, seed=11)
    y = apply_channel(x, _flat_tap(-6.0), cfg)
    expected = 10 ** (-6.0 / 20.0)
    np.testing.assert_allclose(np.abs(y.samples), expected * np.abs(x.samples), rtol=1e-9)
    # the realization phase is a single unit-modulus constant
    ratio = y.samples / x.samples
    assert np.max(np.abs(ratio - ratio[0])) < 1e-9
    assert abs(abs(ratio[0]) - expected) < 1e-9


def test_two_tap_impulse_energy_ratio():
    x = np.zeros(4096, dtype=complex)
    x[512] = 1.0
    profile = TapProfile([0.0, 32 / FS], [-3.0103, -3.0103], scaled=True)
    cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=0.0, seed=5)
    y = apply_channel(IqBuffer(x, FS), profile, cfg).samples
    e1 = np.sum(np.abs(y[512 - 4:512 + 5]) ** 2)
    e2 = np.sum(np.abs(y[544 - 4:544 + 5]) ** 2)
    assert abs(e2 / e1 - 1.0) < 0.01


def test_fractional_delay_against_shifted_tone():
    # a slow tone delayed by d samples must match exp(-j w d) times itself
    n = 2048
    w = 2 * np.pi * 0.04
    k = np.arange(n)
    tone = np.exp(1j * w * k)
    d = 10.5
    out = fractional_delay(tone, d)
    expected = np.exp(1j * w * (k - d))
    # first samples are the filter fill transient, last 31 lack future input
    assert np.max(np.abs(out[64:-64] - expected[64:-64])) < 1e-3


def test_fractional_delay_integer_is_exact_shift():
    x = np.arange(100, dtype=complex)
    out = fractional_delay(x, 7.0)
    np.testing.assert_array_equal(out[7:], x[:-7])
    np.testing.assert_array_equal(out[:7], np.zeros(7))


def test_zero_doppler_gain_is_frozen():
    profile = scale_delays(tdl_profile("A"), 100e-9)
    cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=0.0, seed=9)
    for tap in (0, 5, 12):
        g = gen_fading(tap, profile, cfg, 500).gains
        assert np.max(np.abs(g - g[0])) == 0.0
        assert abs(abs(g[0]) - 1.0) < 1e-12


def test_fading_deterministic_given_seed():
    profile = scale_delays(tdl_profile("B"), 100e-9)
    cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=40.0, seed=21)
    a = gen_fading(3, profile, cfg, 4000).gains
    b = gen_fading(3, profile, cfg, 4000).gains
    np.testing.assert_array_equal(a, b)
    other = gen_fading(3, profile, ChannelConfig(sample_rate_hz=FS, max_doppler_hz=40.0,
                                                 seed=22), 4000).gains
    assert np.max(np.abs(a - other)) > 1e-3


def test_doppler_autocorrelation_tracks_bessel():
    # Monte-Carlo autocorrelation vs the Bessel oracle
    f_d, n = 50.0, 100_000
    profile = _flat_tap()
    lags = np.arange(0, 10_001, 500)
    acc = np.zeros(len(lags), dtype=complex)
    reps = 384
    for r in range(reps):
        cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=f_d, seed=1000 + r)
        acc += empirical_autocorr(gen_fading(0, profile, cfg, n).gains, lags)
    acc /= reps
    acc /= acc[0].real  # normalized autocorrelation; J0(0) = 1
    ref = bessel_j0(2 * np.pi * f_d * lags / FS)
    assert np.max(np.abs(acc - ref)) < 0.05


def test_rician_power_split():
    profile = TapProfile([0.0], [0.0], rician_k_db=13.0, los=True, scaled=True)
    ratios = []
    for r in range(4):
        cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=20e3, seed=50 + r)
        fading = gen_fading(0, profile, cfg, 100_000)
        p_los = np.mean(np.abs(fading.los_component) ** 2)
        p_diff = np.mean(np.abs(fading.gains - fading.los_component) ** 2)
        ratios.append(p_los / p_diff)
    measured_db = 10 * np.log10(np.mean(ratios))
    assert abs(measured_db - 13.0) < 0.2


def test_cluster_doppler_shifts_differ_across_clusters():
    profile = scale_delays(cdl_profile("A"), 100e-9)
    cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=200.0, seed=77)
    shifts = {gen_fading(i, profile, cfg, 16).doppler_hz for i in range(5)}
    assert len(shifts) > 1
    assert all(s <= 200.0 + 1e-9 for s in shifts)


def test_energy_preserved_for_normalized_profiles():
    # E[output power] / input power within +-0.5 dB over >= 1e5 samples.
    # CDL clusters with repeated angles stay mutually coherent, so their
    # cross terms only vanish in the ensemble; use more realizations there.
    x = _noise_buffer(20_000, seed=4)
    cases = [(tdl_profile, "A", 24), (tdl_profile, "C", 24), (cdl_profile, "A", 128)]
    for profile_fn, pid, reps in cases:
        profile = scale_delays(normalize_profile_power(profile_fn(pid)), 100e-9)
        ratios = []
        for r in range(reps):
            cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=5000.0, seed=300 + r)
            y = apply_channel(x, profile, cfg)
            ratios.append(y.mean_power() / x.mean_power())
        assert abs(10 * np.log10(np.mean(ratios))) < 0.5, pid


def test_apply_channel_validates_inputs():
    x = _noise_buffer(1024)
    with pytest.raises(ConfigError, match="sample rate"):
        apply_channel(x, _flat_tap(), ChannelConfig(sample_rate_hz=2e6))
    with pytest.raises(ConfigError, match="scale_delays"):
        apply_channel(x, tdl_profile("A"), ChannelConfig(sample_rate_hz=FS))
    long_delay = TapProfile([0.0, 0.9], [0.0, 0.0], scaled=True)  # 0.9 s delay
    with pytest.raises(ValidationError, match="duration"):
        apply_channel(x, long_delay, ChannelConfig(sample_rate_hz=FS))


def test_channel_config_invariants():
    with pytest.raises(ConfigError):
        ChannelConfig(sample_rate_hz=FS, max_doppler_hz=FS)
    with pytest.raises(ConfigError):
        ChannelConfig(sample_rate_hz=0.0)
    with pytest.raises(ConfigError):
        ChannelConfig(sample_rate_hz=FS, delay_spread_s=-1e-9)


def test_awgn_vanishes_at_high_snr():
    x = _noise_buffer(10_000, seed=8)
    y = add_awgn(x, 200.0, seed=1)
    rms = np.sqrt(x.mean_power())
    assert np.max(np.abs(y.samples - x.samples)) < 1e-8 * rms


@pytest.mark.parametrize("snr_db", [0.0, 10.0, 20.0])
def test_awgn_calibration(snr_db):
    x = _noise_buffer(100_000, seed=9)
    y = add_awgn(x, snr_db, seed=123)
    noise = y.samples - x.samples
    measured = 10 * np.log10(x.mean_power() / np.mean(np.abs(noise) ** 2))
    assert abs(measured - snr_db) < 0.1


def test_awgn_deterministic_and_degenerate():
    x = _noise_buffer(256, seed=10)
    a = add_awgn(x, 10.0, seed=42)
    b = add_awgn(x, 10.0, seed=42)
    np.testing.assert_array_equal(a.samples, b.samples)
    with pytest.raises(DegenerateInputError):
        add_awgn(IqBuffer(np.zeros(16, dtype=complex), FS), 10.0, seed=0)
