"""Waveform-aware augmentation policies and bulk dataset expansion.

A policy decides, per waveform kind, whether a recording is expanded
through a CDL transform, a TDL transform, or left alone.  Expansion draws
an independent seeded channel per copy (profile id, delay spread, Doppler)
and adds AWGN on the transformed data.  Originals are always kept;
passthrough kinds are not duplicated.
"""

import os
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .channel import ChannelConfig, add_awgn, apply_channel
from .dataset import (DatasetManifest, Day, ManifestRecord, Provenance,
                      RecordingMeta, WaveformKind, rebase_record, write_manifest)
from .errors import ConfigError, ValidationError
from .iqio import IqBuffer, read_iq_bin, write_iq_bin
from .profiles import cdl_profile, normalize_profile_power, scale_delays, tdl_profile
from .seeds import mix_seed, rng_for


class AugmentationPolicy(Enum):
    NO_AUG = "no_aug"
    UNIFORM_TDL = "uniform_tdl"
    UNIFORM_CDL = "uniform_cdl"
    FIVEG_ONLY_CDL = "fiveg_only_cdl"
    WIFI_ONLY_TDL = "wifi_only_tdl"
    DECOUPLED_CDL_TDL = "decoupled_cdl_tdl"


class Transform(Enum):
    CDL = "cdl"
    TDL = "tdl"
    PASSTHROUGH = "passthrough"


_ROUTING = {
    AugmentationPolicy.NO_AUG: {
        WaveformKind.FIVE_G: Transform.PASSTHROUGH,
        WaveformKind.WIFI: Transform.PASSTHROUGH,
        WaveformKind.LTE: Transform.PASSTHROUGH,
    },
    AugmentationPolicy.UNIFORM_TDL: {
        WaveformKind.FIVE_G: Transform.TDL,
        WaveformKind.WIFI: Transform.TDL,
        WaveformKind.LTE: Transform.TDL,
    },
    AugmentationPolicy.UNIFORM_CDL: {
        WaveformKind.FIVE_G: Transform.CDL,
        WaveformKind.WIFI: Transform.CDL,
        WaveformKind.LTE: Transform.CDL,
    },
    AugmentationPolicy.FIVEG_ONLY_CDL: {
        WaveformKind.FIVE_G: Transform.CDL,
        WaveformKind.WIFI: Transform.PASSTHROUGH,
        WaveformKind.LTE: Transform.PASSTHROUGH,
    },
    AugmentationPolicy.WIFI_ONLY_TDL: {
        WaveformKind.FIVE_G: Transform.PASSTHROUGH,
        WaveformKind.WIFI: Transform.TDL,
        WaveformKind.LTE: Transform.PASSTHROUGH,
    },
    AugmentationPolicy.DECOUPLED_CDL_TDL: {
        WaveformKind.FIVE_G: Transform.CDL,
        WaveformKind.WIFI: Transform.TDL,
        WaveformKind.LTE: Transform.PASSTHROUGH,
    },
}


def select_transform(policy: AugmentationPolicy, kind: WaveformKind) -> Transform:
    """The policy routing table: which transform a waveform kind receives."""
    return _ROUTING[policy][kind]


@dataclass
class AugmentationPlan:
    """Randomization ranges and copy count for one expansion run."""

    policy: AugmentationPolicy = AugmentationPolicy.DECOUPLED_CDL_TDL
    copies_per_example: int = 4
    tdl_ids: tuple[str, ...] = ("A", "B", "C")
    cdl_ids: tuple[str, ...] = ("A", "B", "C")
    ds_range_s: tuple[float, float] = (30e-9, 300e-9)
    doppler_range_hz: tuple[float, float] = (0.0, 10.0)
    snr_range_db: tuple[float, float] = (10.0, 25.0)
    master_seed: int = 0

    def __post_init__(self):
        if self.copies_per_example < 1:
            raise ConfigError("copies_per_example must be >= 1")
        for name in ("ds_range_s", "doppler_range_hz", "snr_range_db"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} must satisfy min <= max")
        routed = set(_ROUTING[self.policy].values())
        if Transform.TDL in routed and not self.tdl_ids:
            raise ConfigError(f"policy {self.policy.value} routes to TDL but tdl_ids is empty")
        if Transform.CDL in routed and not self.cdl_ids:
            raise ConfigError(f"policy {self.policy.value} routes to CDL but cdl_ids is empty")


def _augmented_copy(x: IqBuffer, transform: Transform, plan: AugmentationPlan,
                    seed: int) -> IqBuffer:
    rng = rng_for(seed)
    if transform is Transform.CDL:
        profile = cdl_profile(str(rng.choice(plan.cdl_ids)))
    else:
        profile = tdl_profile(str(rng.choice(plan.tdl_ids)))
    ds = rng.uniform(*plan.ds_range_s)
    doppler = rng.uniform(*plan.doppler_range_hz)
    snr = rng.uniform(*plan.snr_range_db)
    profile = scale_delays(normalize_profile_power(profile), ds)
    config = ChannelConfig(sample_rate_hz=x.sample_rate_hz, delay_spread_s=ds,
                           max_doppler_hz=doppler, snr_db=snr, seed=mix_seed(seed, 1))
    y = apply_channel(x, profile, config)
    return add_awgn(y, snr, mix_seed(seed, 2))


def augment_recording(x: IqBuffer, meta: RecordingMeta, plan: AugmentationPlan,
                      item_index: int) -> list[tuple[IqBuffer, RecordingMeta]]:
    """Expand one original recording per the plan's routed transform.

    Passthrough kinds return an empty list (originals are kept separately
    by the dataset-level expansion).
    """
    if not meta.provenance.is_original:
        raise ValidationError("only original recordings may be augmented")
    transform = select_transform(plan.policy, meta.waveform)
    if transform is Transform.PASSTHROUGH:
        return []
    out = []
    for copy in range(plan.copies_per_example):
        seed = mix_seed(plan.master_seed, item_index, copy)
        y = _augmented_copy(x, transform, plan, seed)
        new_meta = replace(meta, provenance=Provenance.augmented(plan.policy.value, seed))
        out.append((y, new_meta))
    return out


def augment_dataset(manifest: DatasetManifest, plan: AugmentationPlan,
                    out_dir) -> DatasetManifest:
    """Expand a Day-1 manifest into out_dir: originals plus augmented copies.

    Writes the new .bin files and out_dir/manifest.csv; original records are
    re-referenced relative to out_dir, not copied.
    """
    for rec in manifest.records:
        if rec.meta.day is not Day.DAY1:
            raise ValidationError("augmentation applies to Day-1 data only")
    os.makedirs(out_dir, exist_ok=True)
    out_dir = os.path.abspath(out_dir)

    records = [rebase_record(rec, manifest.root, out_dir) for rec in manifest.records]
    for index, rec in enumerate(manifest.records):
        if select_transform(plan.policy, rec.meta.waveform) is Transform.PASSTHROUGH:
            continue
        x = read_iq_bin(manifest.resolve(rec), manifest.header.sample_rate_hz)
        stem = os.path.splitext(os.path.basename(rec.path))[0]
        for copy, (y, new_meta) in enumerate(augment_recording(x, rec.meta, plan, index)):
            name = f"{stem}__{plan.policy.value}_{index}_{copy}.bin"
            write_iq_bin(y, os.path.join(out_dir, name))
            records.append(ManifestRecord(name, new_meta))

    out = DatasetManifest(manifest.header, records, root=out_dir)
    write_manifest(out, os.path.join(out_dir, "manifest.csv"))
    return out
