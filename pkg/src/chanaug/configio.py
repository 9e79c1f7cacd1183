"""INI-backed configuration files for plans and experiments.

One flat key-value section per concern: [plan] mirrors AugmentationPlan,
[day1]/[day2] mirror DayConditions, [net] the classifier shape, and
[experiment] the protocol constants.  Command-line flags override file
values; missing sections fall back to the coded defaults.
"""

import configparser
from dataclasses import fields, replace

from .augment import AugmentationPlan, AugmentationPolicy
from .dataset import WaveformKind
from .errors import ParseError
from .experiment import DayConditions, ExperimentConfig
from .net import NetConfig


def _pair(raw: str) -> tuple[float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'min,max', got {raw!r}")
    return float(parts[0]), float(parts[1])


def _ids(raw: str) -> tuple[str, ...]:
    return tuple(p.strip().upper() for p in raw.split(",") if p.strip())


def plan_from_section(section) -> AugmentationPlan:
    kwargs = {}
    if "policy" in section:
        kwargs["policy"] = AugmentationPolicy(section["policy"].strip())
    if "copies_per_example" in section:
        kwargs["copies_per_example"] = int(section["copies_per_example"])
    if "tdl_ids" in section:
        kwargs["tdl_ids"] = _ids(section["tdl_ids"])
    if "cdl_ids" in section:
        kwargs["cdl_ids"] = _ids(section["cdl_ids"])
    for key in ("ds_range_s", "doppler_range_hz", "snr_range_db"):
        if key in section:
            kwargs[key] = _pair(section[key])
    if "master_seed" in section:
        kwargs["master_seed"] = int(section["master_seed"])
    return AugmentationPlan(**kwargs)


def load_plan(path) -> AugmentationPlan:
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ParseError(f"cannot read plan file {path}")
    if not parser.has_section("plan"):
        raise ParseError(f"{path}: missing [plan] section")
    try:
        return plan_from_section(parser["plan"])
    except (ValueError, KeyError) as e:
        raise ParseError(f"{path}: {e}") from e


def save_plan(plan: AugmentationPlan, path) -> None:
    parser = configparser.ConfigParser()
    parser["plan"] = {
        "policy": plan.policy.value,
        "copies_per_example": str(plan.copies_per_example),
        "tdl_ids": ",".join(plan.tdl_ids),
        "cdl_ids": ",".join(plan.cdl_ids),
        "ds_range_s": f"{plan.ds_range_s[0]!r},{plan.ds_range_s[1]!r}",
        "doppler_range_hz": f"{plan.doppler_range_hz[0]!r},{plan.doppler_range_hz[1]!r}",
        "snr_range_db": f"{plan.snr_range_db[0]!r},{plan.snr_range_db[1]!r}",
        "master_seed": str(plan.master_seed),
    }
    with open(path, "w") as f:
        parser.write(f)


def _day_from_section(section, base: DayConditions) -> DayConditions:
    kwargs = {}
    if "family" in section:
        kwargs["family"] = section["family"].strip().lower()
    if "profile_ids" in section:
        kwargs["profile_ids"] = _ids(section["profile_ids"])
    for key in ("ds_range_s", "doppler_range_hz", "snr_range_db"):
        if key in section:
            kwargs[key] = _pair(section[key])
    return replace(base, **kwargs)


def _net_from_section(section, base: NetConfig) -> NetConfig:
    kwargs = {}
    for name in ("conv_stages", "filters", "kernel", "hidden", "epochs",
                 "batch_size", "seed"):
        if name in section:
            kwargs[name] = int(section[name])
    if "learning_rate" in section:
        kwargs["learning_rate"] = float(section["learning_rate"])
    return replace(base, **kwargs)


def load_experiment_config(path) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ParseError(f"cannot read experiment config {path}")
    base = ExperimentConfig()
    try:
        kwargs = {}
        if parser.has_section("experiment"):
            section = parser["experiment"]
            for name in ("num_tx", "bursts_per_combo", "window_len", "stride",
                         "train_stride"):
                if name in section:
                    kwargs[name] = int(section[name])
            if "sample_rate_hz" in section:
                kwargs["sample_rate_hz"] = float(section["sample_rate_hz"])
            if "val_fraction" in section:
                kwargs["val_fraction"] = float(section["val_fraction"])
            if "master_seeds" in section:
                kwargs["master_seeds"] = tuple(
                    int(p) for p in section["master_seeds"].split(",") if p.strip())
            if "policies" in section:
                kwargs["policies"] = tuple(
                    AugmentationPolicy(p.strip())
                    for p in section["policies"].split(",") if p.strip())
            if "symbols_per_burst" in section:
                counts = [int(p) for p in section["symbols_per_burst"].split(",")]
                if len(counts) != 3:
                    raise ValueError("symbols_per_burst wants three counts: 5g,wifi,lte")
                kwargs["symbols_per_burst"] = dict(zip(WaveformKind, counts))
        if parser.has_section("day1"):
            kwargs["day1"] = _day_from_section(parser["day1"], base.day1)
        if parser.has_section("day2"):
            kwargs["day2"] = _day_from_section(parser["day2"], base.day2)
        if parser.has_section("plan"):
            kwargs["plan"] = plan_from_section(parser["plan"])
        if parser.has_section("net"):
            kwargs["net"] = _net_from_section(parser["net"], base.net)
        return ExperimentConfig(**kwargs)
    except (ValueError, KeyError) as e:
        raise ParseError(f"{path}: {e}") from e
