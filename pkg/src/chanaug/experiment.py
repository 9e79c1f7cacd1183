"""End-to-end cross-day protocol at desk scale.

Per master seed: synthesize Day-1/Day-2 captures for every (transmitter,
waveform kind) pair, hold out a by-file validation slice of Day-1, expand
the training slice under each augmentation policy, train the classifier
16 epochs, and score held-out Day-1 windows plus all Day-2 windows.  The
two days share transmitted payloads and fingerprints; only the channel
draws (and their condition ranges) differ, so the Day-2 accuracy drop is
attributable to channel change alone.
"""

import os
from dataclasses import dataclass, field, replace

import numpy as np

from .augment import AugmentationPlan, AugmentationPolicy, augment_dataset
from .bank import default_bank
from .channel import ChannelConfig, add_awgn, apply_channel
from .classifier import TrainedModel, evaluate, export_features, train
from .dataset import (DatasetManifest, Day, Example, ManifestHeader,
                      ManifestRecord, Provenance, RecordingMeta, WaveformKind,
                      read_manifest, slice_examples, write_manifest)
from .errors import ConfigError, ValidationError
from .impairments import apply_fingerprint
from .iqio import read_iq_bin, write_iq_bin
from .net import NetConfig
from .profiles import cdl_profile, normalize_profile_power, scale_delays, tdl_profile
from .seeds import mix_seed, rng_for
from .wavegen import default_spec, gen_burst

DEFAULT_POLICIES = (
    AugmentationPolicy.NO_AUG,
    AugmentationPolicy.UNIFORM_CDL,
    AugmentationPolicy.FIVEG_ONLY_CDL,
    AugmentationPolicy.WIFI_ONLY_TDL,
    AugmentationPolicy.DECOUPLED_CDL_TDL,
)

_KIND_INDEX = {kind: i for i, kind in enumerate(WaveformKind)}


@dataclass
class DayConditions:
    """Channel-draw ranges standing in for one capture day's conditions."""

    family: str = "tdl"
    profile_ids: tuple[str, ...] = ("A", "B", "C")
    ds_range_s: tuple[float, float] = (30e-9, 100e-9)
    doppler_range_hz: tuple[float, float] = (0.0, 5.0)
    snr_range_db: tuple[float, float] = (20.0, 30.0)

    def __post_init__(self):
        if self.family not in ("tdl", "cdl"):
            raise ConfigError("family must be 'tdl' or 'cdl'")
        if not self.profile_ids:
            raise ConfigError("profile_ids must be non-empty")
        for name in ("ds_range_s", "doppler_range_hz", "snr_range_db"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} must satisfy min <= max")


@dataclass
class ExperimentConfig:
    num_tx: int = 4
    bursts_per_combo: int = 5
    symbols_per_burst: dict = field(default_factory=lambda: {
        WaveformKind.FIVE_G: 16, WaveformKind.WIFI: 110, WaveformKind.LTE: 16})
    sample_rate_hz: float = 1e6
    window_len: int = 256
    stride: int = 128        # evaluation and augmented-copy slicing
    train_stride: int = 16   # dense slicing of the scarce original train files
    day1: DayConditions = field(default_factory=lambda: DayConditions(
        ds_range_s=(10e-9, 30e-9), doppler_range_hz=(0.0, 2.0),
        snr_range_db=(25.0, 35.0)))
    day2: DayConditions = field(default_factory=lambda: DayConditions(
        ds_range_s=(150e-9, 300e-9), doppler_range_hz=(0.0, 10.0),
        snr_range_db=(12.0, 18.0)))
    plan: AugmentationPlan = field(default_factory=AugmentationPlan)
    policies: tuple[AugmentationPolicy, ...] = DEFAULT_POLICIES
    net: NetConfig = field(default_factory=lambda: NetConfig(dtype="float32"))
    val_fraction: float = 0.2
    master_seeds: tuple[int, ...] = (101, 102, 103)

    def __post_init__(self):
        if self.num_tx < 2:
            raise ConfigError("need at least two transmitters")
        if not 0 < self.val_fraction < 1:
            raise ConfigError("val_fraction must be in (0, 1)")
        if not self.master_seeds:
            raise ConfigError("need at least one master seed")
        same = (self.day1.ds_range_s == self.day2.ds_range_s and
                self.day1.doppler_range_hz == self.day2.doppler_range_hz and
                self.day1.snr_range_db == self.day2.snr_range_db and
                self.day1.profile_ids == self.day2.profile_ids and
                self.day1.family == self.day2.family)
        if same:
            raise ConfigError("day1 and day2 conditions must differ somewhere, "
                              "otherwise there is no cross-day gap to study")


@dataclass
class ResultTable:
    """(policy, Day-1 accuracy, Day-2 accuracy) rows in fixed policy order."""

    rows: list[tuple[str, float, float]]

    def __post_init__(self):
        for name, a1, a2 in self.rows:
            if not (0.0 <= a1 <= 1.0 and 0.0 <= a2 <= 1.0):
                raise ValidationError(f"accuracy outside [0,1] for {name}")

    def day1(self, policy: AugmentationPolicy) -> float:
        return next(r[1] for r in self.rows if r[0] == policy.value)

    def day2(self, policy: AugmentationPolicy) -> float:
        return next(r[2] for r in self.rows if r[0] == policy.value)


def _day_channel_draw(x, conditions: DayConditions, seed: int, noise_seed: int):
    rng = rng_for(seed)
    profile_id = str(rng.choice(conditions.profile_ids))
    ds = rng.uniform(*conditions.ds_range_s)
    doppler = rng.uniform(*conditions.doppler_range_hz)
    snr = rng.uniform(*conditions.snr_range_db)
    lookup = tdl_profile if conditions.family == "tdl" else cdl_profile
    profile = scale_delays(normalize_profile_power(lookup(profile_id)), ds)
    cfg = ChannelConfig(sample_rate_hz=x.sample_rate_hz, delay_spread_s=ds,
                        max_doppler_hz=doppler, snr_db=snr, seed=mix_seed(seed, 1))
    y = apply_channel(x, profile, cfg)
    return add_awgn(y, snr, noise_seed)


def synth_dataset(cfg: ExperimentConfig, out_dir, synth_seed: int
                  ) -> tuple[DatasetManifest, DatasetManifest]:
    """Write day1/ and day2/ datasets; returns their manifests.

    Payload and fingerprint seeds exclude the day index, so a Day-1/Day-2
    file pair differs only by its channel and noise draw.  The channel draw
    is shared by all bursts of one (day, transmitter, kind) combination:
    a capture day is one physical environment, and the cross-day gap comes
    from that environment changing, not from per-file scatter.
    """
    bank = default_bank()
    if len(bank) < cfg.num_tx:
        raise ConfigError(f"fingerprint bank has {len(bank)} entries, need {cfg.num_tx}")
    header = ManifestHeader(cfg.num_tx, cfg.sample_rate_hz, cfg.window_len)
    manifests = []
    for day_index, (day, conditions) in enumerate(((Day.DAY1, cfg.day1),
                                                   (Day.DAY2, cfg.day2))):
        day_dir = os.path.join(out_dir, day.value)
        os.makedirs(day_dir, exist_ok=True)
        records = []
        for tx in range(cfg.num_tx):
            for kind in WaveformKind:
                k = _KIND_INDEX[kind]
                channel_seed = mix_seed(synth_seed, day_index, tx, k, 2)
                for b in range(cfg.bursts_per_combo):
                    burst = gen_burst(default_spec(kind), cfg.symbols_per_burst[kind],
                                      payload_seed=mix_seed(synth_seed, tx, k, b),
                                      sample_rate_hz=cfg.sample_rate_hz)
                    sent = apply_fingerprint(burst, bank[tx],
                                             seed=mix_seed(synth_seed, tx, k, b, 1))
                    received = _day_channel_draw(
                        sent, conditions, channel_seed,
                        noise_seed=mix_seed(synth_seed, day_index, tx, k, b, 4))
                    name = f"tx{tx}_{kind.value}_{b}.bin"
                    write_iq_bin(received, os.path.join(day_dir, name))
                    records.append(ManifestRecord(name, RecordingMeta(
                        kind, tx, day, Provenance.original())))
        manifest = DatasetManifest(header, records, root=day_dir)
        write_manifest(manifest, os.path.join(day_dir, "manifest.csv"))
        manifests.append(manifest)
    return manifests[0], manifests[1]


def load_examples(manifest: DatasetManifest, stride: int,
                  stride_augmented: int | None = None) -> list[Example]:
    """Slice every recording into windows.

    Augmented copies may use a coarser stride: their value is channel
    diversity across copies, while scarce originals are sliced densely.
    """
    examples = []
    for rec in manifest.records:
        buf = read_iq_bin(manifest.resolve(rec), manifest.header.sample_rate_hz)
        s = stride
        if stride_augmented is not None and not rec.meta.provenance.is_original:
            s = stride_augmented
        examples.extend(slice_examples(buf, rec.meta, manifest.header.window_len, s))
    return examples


def _split_day1(manifest: DatasetManifest, val_fraction: float, seed: int):
    """By-file stratified split: every (tx, kind) group donates val files."""
    groups = {}
    for rec in manifest.records:
        groups.setdefault((rec.meta.transmitter_id, rec.meta.waveform), []).append(rec)
    rng = rng_for(seed)
    train_records, val_records = [], []
    for key in sorted(groups, key=lambda g: (g[0], g[1].value)):
        recs = groups[key]
        n_val = max(1, round(val_fraction * len(recs)))
        order = rng.permutation(len(recs))
        chosen = set(order[:n_val].tolist())
        for i, rec in enumerate(recs):
            (val_records if i in chosen else train_records).append(rec)
    return (DatasetManifest(manifest.header, train_records, root=manifest.root),
            DatasetManifest(manifest.header, val_records, root=manifest.root))


def _train_one_policy(policy, train_manifest, val_examples, day2_examples, cfg,
                      master_seed, policy_index, seed_dir):
    plan = replace(cfg.plan, policy=policy,
                   master_seed=mix_seed(master_seed, 10, policy_index))
    aug_dir = os.path.join(seed_dir, f"aug_{policy.value}")
    expanded = augment_dataset(train_manifest, plan, aug_dir)
    for rec in expanded.records:
        if rec.meta.day is not Day.DAY1:
            raise ValidationError("Day-2 record leaked into a training set")
    train_examples = load_examples(expanded, cfg.train_stride,
                                   stride_augmented=cfg.stride)
    net_cfg = replace(cfg.net, window_len=cfg.window_len, num_classes=cfg.num_tx,
                      seed=mix_seed(master_seed, 11, policy_index))
    model = train(train_examples, net_cfg)
    day1_acc = evaluate(model, val_examples).accuracy
    day2_acc = evaluate(model, day2_examples).accuracy
    export_features(model, val_examples,
                    os.path.join(seed_dir, f"features_{policy.value}_day1val.csv"))
    export_features(model, day2_examples,
                    os.path.join(seed_dir, f"features_{policy.value}_day2.csv"))
    return day1_acc, day2_acc, model


def run_experiment(cfg: ExperimentConfig, out_dir) -> ResultTable:
    """Run every policy over every master seed; returns the seed-mean table.

    Writes results.csv (mean per policy), results_per_seed.csv, report.txt,
    and per-seed datasets/features under out_dir.
    """
    os.makedirs(out_dir, exist_ok=True)
    per_seed = {policy: [] for policy in cfg.policies}
    for master_seed in cfg.master_seeds:
        seed_dir = os.path.join(out_dir, f"seed_{master_seed}")
        os.makedirs(seed_dir, exist_ok=True)
        day1_manifest, day2_manifest = synth_dataset(
            cfg, seed_dir, synth_seed=mix_seed(master_seed, 0))
        train_manifest, val_manifest = _split_day1(
            day1_manifest, cfg.val_fraction, mix_seed(master_seed, 1))
        val_examples = load_examples(val_manifest, cfg.stride)
        day2_examples = load_examples(day2_manifest, cfg.stride)
        for policy_index, policy in enumerate(cfg.policies):
            day1_acc, day2_acc, _ = _train_one_policy(
                policy, train_manifest, val_examples, day2_examples, cfg,
                master_seed, policy_index, seed_dir)
            per_seed[policy].append((master_seed, day1_acc, day2_acc))

    rows = [(policy.value,
             float(np.mean([a for _, a, _ in per_seed[policy]])),
             float(np.mean([b for _, _, b in per_seed[policy]])))
            for policy in cfg.policies]
    table = ResultTable(rows)

    with open(os.path.join(out_dir, "results.csv"), "w") as f:
        f.write("policy,day1_acc,day2_acc\n")
        for name, a1, a2 in table.rows:
            f.write(f"{name},{a1:.4f},{a2:.4f}\n")
    with open(os.path.join(out_dir, "results_per_seed.csv"), "w") as f:
        f.write("policy,master_seed,day1_acc,day2_acc\n")
        for policy in cfg.policies:
            for seed, a1, a2 in per_seed[policy]:
                f.write(f"{policy.value},{seed},{a1:.4f},{a2:.4f}\n")
    _write_report(cfg, table, os.path.join(out_dir, "report.txt"))
    return table


def _write_report(cfg: ExperimentConfig, table: ResultTable, path) -> None:
    lines = [
        "Cross-day augmentation comparison (synthetic desk-scale run)",
        f"transmitters={cfg.num_tx} bursts/combo/day={cfg.bursts_per_combo} "
        f"window={cfg.window_len} stride={cfg.stride}",
        f"day1 split: {1 - cfg.val_fraction:.0%} train / {cfg.val_fraction:.0%} "
        "held out, stratified by file",
        f"epochs={cfg.net.epochs} master_seeds={list(cfg.master_seeds)}",
        "fingerprint magnitudes are synthesis knobs, not measured hardware",
        "",
        f"{'policy':<22}{'day1_acc':>10}{'day2_acc':>10}",
    ]
    for name, a1, a2 in table.rows:
        lines.append(f"{name:<22}{a1:>10.4f}{a2:>10.4f}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
