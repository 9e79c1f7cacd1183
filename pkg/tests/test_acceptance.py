"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines; the desk-scale experiment criterion performs the full default
three-seed run and dominates the runtime.
"""

import time

import numpy as np
import pytest

from chanaug.augment import AugmentationPolicy, Transform, select_transform
from chanaug.channel import ChannelConfig, add_awgn, apply_channel, gen_fading
from chanaug.classifier import gradient_check
from chanaug.dataset import (DatasetManifest, Day, ManifestHeader,
                             ManifestRecord, Provenance, RecordingMeta,
                             WaveformKind, read_manifest, write_manifest)
from chanaug.experiment import ExperimentConfig, run_experiment
from chanaug.iqio import IqBuffer, read_iq_bin, write_iq_bin
from chanaug.net import NetConfig
from chanaug.profiles import (TapProfile, cdl_profile, diffuse_powers_linear,
                              scale_delays, tdl_profile)
from oracles import bessel_j0, empirical_autocorr

FS = 1e6


def _ok(name):
    print(f"\nACCEPTANCE {name}: PASS")


def test_channel_identity():
    start = time.time()
    rng = np.random.default_rng(0)
    x = IqBuffer((rng.standard_normal(4096) + 1j * rng.standard_normal(4096)) / np.sqrt(2),
                 FS)
    profile = TapProfile([0.0], [0.0], scaled=True)
    y = apply_channel(x, profile, ChannelConfig(sample_rate_hz=FS, max_doppler_hz=0.0,
                                                seed=1))
    assert np.max(np.abs(y.samples - x.samples)) < 1e-6
    assert time.time() - start < 1.0
    _ok("channel identity")


def test_delay_spread_scaling():
    for target in (30e-9, 100e-9, 300e-9, 1000e-9):
        for pid in "ABCDE":
            for profile in (tdl_profile(pid), cdl_profile(pid)):
                scaled = scale_delays(profile, target)
                w = diffuse_powers_linear(scaled)
                tau = scaled.delays
                m1 = np.sum(w * tau) / np.sum(w)
                ds = np.sqrt(np.sum(w * tau ** 2) / np.sum(w) - m1 ** 2)
                assert abs(ds - target) / target < 1e-9, (pid, target)
    _ok("delay-spread scaling")


def test_doppler_statistics():
    start = time.time()
    f_d, n = 50.0, 100_000
    profile = TapProfile([0.0], [0.0], scaled=True)
    lags = np.arange(0, 10_001, 500)  # tau * f_d up to 0.5
    acc = np.zeros(len(lags), dtype=complex)
    reps = 384
    for r in range(reps):
        cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=f_d, seed=2000 + r)
        acc += empirical_autocorr(gen_fading(0, profile, cfg, n).gains, lags)
    acc /= reps
    acc /= acc[0].real  # normalized autocorrelation; J0(0) = 1
    err = np.max(np.abs(acc - bessel_j0(2 * np.pi * f_d * lags / FS)))
    assert err < 0.05
    assert time.time() - start < 10.0
    _ok(f"doppler autocorrelation vs Bessel oracle (max err {err:.4f})")


def test_rician_power_split():
    profile = TapProfile([0.0], [0.0], rician_k_db=13.0, los=True, scaled=True)
    ratios = []
    for r in range(4):
        cfg = ChannelConfig(sample_rate_hz=FS, max_doppler_hz=20e3, seed=300 + r)
        fading = gen_fading(0, profile, cfg, 100_000)
        p_los = np.mean(np.abs(fading.los_component) ** 2)
        p_diff = np.mean(np.abs(fading.gains - fading.los_component) ** 2)
        ratios.append(p_los / p_diff)
    measured = 10 * np.log10(np.mean(ratios))
    assert abs(measured - 13.0) < 0.2
    _ok(f"rician split ({measured:.3f} dB vs 13 dB)")


def test_awgn_calibration():
    rng = np.random.default_rng(5)
    x = IqBuffer((rng.standard_normal(100_000) + 1j * rng.standard_normal(100_000))
                 / np.sqrt(2), FS)
    for snr_db in (0.0, 10.0, 20.0):
        y = add_awgn(x, snr_db, seed=int(snr_db) + 7)
        noise = y.samples - x.samples
        measured = 10 * np.log10(x.mean_power() / np.mean(np.abs(noise) ** 2))
        assert abs(measured - snr_db) < 0.1, snr_db
    _ok("awgn calibration at 0/10/20 dB")


def test_routing_matrix():
    P, K, T = AugmentationPolicy, WaveformKind, Transform
    expected = {
        P.NO_AUG: (T.PASSTHROUGH, T.PASSTHROUGH, T.PASSTHROUGH),
        P.UNIFORM_TDL: (T.TDL, T.TDL, T.TDL),
        P.UNIFORM_CDL: (T.CDL, T.CDL, T.CDL),
        P.FIVEG_ONLY_CDL: (T.CDL, T.PASSTHROUGH, T.PASSTHROUGH),
        P.WIFI_ONLY_TDL: (T.PASSTHROUGH, T.TDL, T.PASSTHROUGH),
        P.DECOUPLED_CDL_TDL: (T.CDL, T.TDL, T.PASSTHROUGH),
    }
    kinds = (K.FIVE_G, K.WIFI, K.LTE)
    for policy, row in expected.items():
        for kind, want in zip(kinds, row):
            assert select_transform(policy, kind) is want, (policy, kind)
    assert select_transform(P.DECOUPLED_CDL_TDL, K.LTE) is T.PASSTHROUGH
    _ok("routing matrix (6 policies x 3 kinds)")


def test_gradient_check():
    cfg = NetConfig(window_len=32, num_classes=3, conv_stages=1, filters=4,
                    kernel=5, hidden=8, epochs=1, batch_size=8, seed=17)
    rng = np.random.default_rng(23)
    x = rng.standard_normal((6, 2, 32))
    y = rng.integers(0, 3, 6)
    err = gradient_check(cfg, (x, y))
    assert err < 1e-4
    _ok(f"gradient check (max rel err {err:.2e})")


def test_binary_and_manifest_roundtrips(tmp_path):
    rng = np.random.default_rng(77)
    for case in range(100):
        n = int(rng.integers(0, 300))
        raw = (rng.standard_normal(2 * n) * 10 ** rng.uniform(-2, 2)).astype("<f4")
        src = tmp_path / "src.bin"
        dst = tmp_path / "dst.bin"
        raw.tofile(src)
        write_iq_bin(read_iq_bin(src, FS), dst)
        assert src.read_bytes() == dst.read_bytes(), case

    kinds = list(WaveformKind)
    days = list(Day)
    (tmp_path / "f.bin").write_bytes(b"\x00" * 8)
    for case in range(100):
        records = []
        for _ in range(int(rng.integers(0, 6))):
            prov = (Provenance.original() if rng.random() < 0.5 else
                    Provenance.augmented(str(rng.choice(["CDL+TDL", "p,q", "z"])),
                                         int(rng.integers(0, 2 ** 63))))
            records.append(ManifestRecord("f.bin", RecordingMeta(
                kinds[int(rng.integers(3))], int(rng.integers(4)),
                days[int(rng.integers(2))], prov)))
        header = ManifestHeader(4, float(rng.choice([1e6, 2e6])), int(rng.integers(16, 400)))
        p1 = tmp_path / "m1.csv"
        p2 = tmp_path / "m2.csv"
        write_manifest(DatasetManifest(header, records, root=str(tmp_path)), p1)
        back = read_manifest(p1)
        assert back.header == header and back.records == records, case
        write_manifest(back, p2)
        assert p1.read_bytes() == p2.read_bytes(), case
    _ok("binary + manifest round-trips (100 cases each)")


def test_desk_scale_experiment(tmp_path):
    start = time.time()
    cfg = ExperimentConfig()  # default: 3 master seeds, five policies
    table = run_experiment(cfg, tmp_path / "exp")
    minutes = (time.time() - start) / 60

    noaug_day1 = table.day1(AugmentationPolicy.NO_AUG)
    noaug_day2 = table.day2(AugmentationPolicy.NO_AUG)
    decoupled_day2 = table.day2(AugmentationPolicy.DECOUPLED_CDL_TDL)

    for name, a1, a2 in table.rows:
        print(f"\n  {name:<22} day1 {a1:.4f}  day2 {a2:.4f}")
    print(f"  runtime {minutes:.1f} min")

    assert len(table.rows) == 5
    assert noaug_day1 >= 0.90, f"(a) NoAug day1 {noaug_day1:.4f}"
    assert noaug_day1 - noaug_day2 >= 0.10, \
        f"(b) gap {noaug_day1 - noaug_day2:.4f}"
    assert decoupled_day2 - noaug_day2 >= 0.05, \
        f"(c) decoupled gain {decoupled_day2 - noaug_day2:.4f}"
    for policy in cfg.policies:
        if policy is AugmentationPolicy.NO_AUG:
            continue
        assert table.day2(policy) >= noaug_day2 - 0.02, \
            f"(d) {policy.value} day2 {table.day2(policy):.4f} vs noaug {noaug_day2:.4f}"
    assert minutes <= 30.0
    _ok("desk-scale experiment (a)-(d)")


def test_full_pipeline_determinism(tmp_path):
    from chanaug.cli import main
    ini = tmp_path / "exp.ini"
    ini.write_text("""
[experiment]
bursts_per_combo = 2
window_len = 128
train_stride = 64
symbols_per_burst = 3,21,3
master_seeds = 11
policies = no_aug,decoupled_cdl_tdl

[net]
epochs = 2
filters = 4
hidden = 8
conv_stages = 1
kernel = 5
batch_size = 32

[plan]
copies_per_example = 1
""")
    assert main(["experiment", "--config", str(ini), "--out", str(tmp_path / "r1")]) == 0
    assert main(["experiment", "--config", str(ini), "--out", str(tmp_path / "r2")]) == 0
    a = (tmp_path / "r1" / "results.csv").read_bytes()
    b = (tmp_path / "r2" / "results.csv").read_bytes()
    assert a == b and len(a) > 0
    _ok("full-pipeline determinism (byte-identical results.csv)")
