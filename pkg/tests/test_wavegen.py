import numpy as np
import pytest

from chanaug.dataset import WaveformKind
from chanaug.errors import ValidationError
from chanaug.wavegen import WaveformSpec, default_spec, gen_burst


def test_default_specs_distinct_and_valid():
    specs = {kind: default_spec(kind) for kind in WaveformKind}
    pairs = {(s.fft_size, s.cp_len) for s in specs.values()}
    assert len(pairs) == 3
    wifi = specs[WaveformKind.WIFI]
    assert wifi.cp_len / wifi.fft_size == 0.25
    for s in specs.values():
        assert 0 < s.cp_len < s.fft_size
        assert s.occupied_subcarriers <= s.fft_size - 2


def test_spec_invariants():
    with pytest.raises(ValidationError):
        WaveformSpec(WaveformKind.WIFI, 60, 16, 52)  # not a power of two
    with pytest.raises(ValidationError):
        WaveformSpec(WaveformKind.WIFI, 64, 64, 52)
    with pytest.raises(ValidationError):
        WaveformSpec(WaveformKind.WIFI, 64, 16, 63)


def test_burst_length_and_unit_power():
    spec = default_spec(WaveformKind.FIVE_G)
    burst = gen_burst(spec, 6, payload_seed=42)
    assert len(burst) == 6 * (512 + 36)
    assert abs(burst.mean_power() - 1.0) < 1e-6


def test_cyclic_prefix_property():
    for kind in WaveformKind:
        spec = default_spec(kind)
        burst = gen_burst(spec, 4, payload_seed=7).samples
        for s in range(4):
            start = s * spec.symbol_len
            prefix = burst[start:start + spec.cp_len]
            tail = burst[start + spec.symbol_len - spec.cp_len:start + spec.symbol_len]
            np.testing.assert_array_equal(prefix, tail)


def test_spectrum_occupancy():
    # >= 95% of burst energy inside the occupied band
    for kind in WaveformKind:
        spec = default_spec(kind)
        burst = gen_burst(spec, 16, payload_seed=3).samples
        spectrum = np.abs(np.fft.fft(burst)) ** 2
        freqs = np.fft.fftfreq(burst.size)  # cycles/sample
        edge = (spec.occupied_subcarriers / 2 + 0.5) / spec.fft_size
        in_band = spectrum[np.abs(freqs) <= edge].sum()
        assert in_band / spectrum.sum() >= 0.95, kind


def test_burst_determinism():
    spec = default_spec(WaveformKind.WIFI)
    a = gen_burst(spec, 8, payload_seed=5).samples
    b = gen_burst(spec, 8, payload_seed=5).samples
    np.testing.assert_array_equal(a, b)
    c = gen_burst(spec, 8, payload_seed=6).samples
    assert np.max(np.abs(a - c)) > 1e-3


def test_burst_rejects_zero_symbols():
    with pytest.raises(ValidationError):
        gen_burst(default_spec(WaveformKind.LTE), 0, payload_seed=0)
