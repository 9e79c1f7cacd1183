import os
from dataclasses import replace

import numpy as np
import pytest

from chanaug.augment import AugmentationPolicy
from chanaug.dataset import Day, WaveformKind, read_manifest
from chanaug.errors import ConfigError
from chanaug.experiment import (DayConditions, ExperimentConfig, ResultTable,
                                _split_day1, load_examples, run_experiment,
                                synth_dataset)
from chanaug.net import NetConfig
from chanaug.seeds import mix_seed


def tiny_config(**overrides):
    defaults = dict(
        bursts_per_combo=2,
        symbols_per_burst={WaveformKind.FIVE_G: 3, WaveformKind.WIFI: 21,
                           WaveformKind.LTE: 3},
        window_len=128,
        stride=128,
        train_stride=64,
        plan=replace(ExperimentConfig().plan, copies_per_example=1),
        policies=(AugmentationPolicy.NO_AUG, AugmentationPolicy.DECOUPLED_CDL_TDL),
        net=NetConfig(window_len=128, num_classes=4, conv_stages=1, filters=4,
                      kernel=5, hidden=8, epochs=1, batch_size=32),
        val_fraction=0.5,
        master_seeds=(7,),
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def test_synth_dataset_file_counts(tmp_path):
    cfg = ExperimentConfig(symbols_per_burst={WaveformKind.FIVE_G: 2,
                                              WaveformKind.WIFI: 14,
                                              WaveformKind.LTE: 2})
    m1, m2 = synth_dataset(cfg, tmp_path, synth_seed=1)
    assert len(m1.records) == 60  # 4 tx x 3 kinds x 5 bursts
    assert len(m2.records) == 60
    assert all(r.meta.day is Day.DAY1 for r in m1.records)
    assert all(r.meta.day is Day.DAY2 for r in m2.records)
    back = read_manifest(tmp_path / "day1" / "manifest.csv")
    assert len(back.records) == 60


def test_synth_dataset_deterministic(tmp_path):
    cfg = tiny_config()
    synth_dataset(cfg, tmp_path / "a", synth_seed=5)
    synth_dataset(cfg, tmp_path / "b", synth_seed=5)
    for day in ("day1", "day2"):
        for name in sorted(os.listdir(tmp_path / "a" / day)):
            assert ((tmp_path / "a" / day / name).read_bytes() ==
                    (tmp_path / "b" / day / name).read_bytes()), name


def test_synth_days_differ_only_by_channel_draw(tmp_path):
    cfg = tiny_config()
    m1, m2 = synth_dataset(cfg, tmp_path, synth_seed=9)
    d1 = (tmp_path / "day1" / m1.records[0].path).read_bytes()
    d2 = (tmp_path / "day2" / m2.records[0].path).read_bytes()
    assert m1.records[0].path == m2.records[0].path  # same payload identity
    assert d1 != d2


def test_config_requires_day_gap():
    same = DayConditions()
    with pytest.raises(ConfigError, match="differ"):
        ExperimentConfig(day1=same, day2=same)


def test_split_day1_stratified(tmp_path):
    cfg = tiny_config()
    m1, _ = synth_dataset(cfg, tmp_path, synth_seed=3)
    train, val = _split_day1(m1, 0.5, seed=4)
    assert len(train.records) + len(val.records) == len(m1.records)
    for manifest, expect in ((train, 1), (val, 1)):
        counts = {}
        for rec in manifest.records:
            key = (rec.meta.transmitter_id, rec.meta.waveform)
            counts[key] = counts.get(key, 0) + 1
        assert all(v == expect for v in counts.values())


def test_result_table_contract():
    table = ResultTable([("no_aug", 0.9, 0.5), ("decoupled_cdl_tdl", 0.9, 0.7)])
    assert table.day2(AugmentationPolicy.NO_AUG) == 0.5
    with pytest.raises(Exception):
        ResultTable([("x", 1.2, 0.5)])


def test_run_experiment_tiny_end_to_end(tmp_path):
    cfg = tiny_config()
    table = run_experiment(cfg, tmp_path)
    assert [row[0] for row in table.rows] == ["no_aug", "decoupled_cdl_tdl"]
    results = (tmp_path / "results.csv").read_text().splitlines()
    assert results[0] == "policy,day1_acc,day2_acc"
    assert len(results) == 3
    assert (tmp_path / "report.txt").exists()
    assert (tmp_path / "results_per_seed.csv").exists()
    seed_dir = tmp_path / "seed_7"
    assert (seed_dir / "features_no_aug_day2.csv").exists()
    assert (seed_dir / "features_decoupled_cdl_tdl_day1val.csv").exists()


def test_run_experiment_deterministic(tmp_path):
    cfg = tiny_config()
    run_experiment(cfg, tmp_path / "r1")
    run_experiment(cfg, tmp_path / "r2")
    assert ((tmp_path / "r1" / "results.csv").read_bytes() ==
            (tmp_path / "r2" / "results.csv").read_bytes())


def test_default_table_has_five_policies():
    cfg = ExperimentConfig()
    assert [p.value for p in cfg.policies] == [
        "no_aug", "uniform_cdl", "fiveg_only_cdl", "wifi_only_tdl",
        "decoupled_cdl_tdl"]
