"""Command-line entry point.

Subcommands mirror the pipeline stages: synth, augment, train, eval,
features, experiment.  Every failure exits nonzero with the stage name in
the message.
"""

import argparse
import os
import sys
from dataclasses import replace

from . import configio
from .augment import AugmentationPlan, augment_dataset
from .classifier import evaluate, export_features, load_model, save_model, train
from .dataset import read_manifest
from .errors import ChanAugError
from .experiment import ExperimentConfig, load_examples, run_experiment, synth_dataset
from .net import NetConfig
from .seeds import mix_seed


def _experiment_config(args) -> ExperimentConfig:
    cfg = configio.load_experiment_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = replace(cfg, master_seeds=(args.seed,))
    return cfg


def _cmd_synth(args):
    cfg = _experiment_config(args)
    seed = args.seed if args.seed is not None else cfg.master_seeds[0]
    m1, m2 = synth_dataset(cfg, args.out, synth_seed=mix_seed(seed, 0))
    print(f"wrote {len(m1.records)} day1 and {len(m2.records)} day2 recordings "
          f"under {args.out}")


def _cmd_augment(args):
    manifest = read_manifest(args.manifest)
    plan = configio.load_plan(args.plan) if args.plan else AugmentationPlan()
    if args.policy:
        from .augment import AugmentationPolicy
        plan = replace(plan, policy=AugmentationPolicy(args.policy))
    if args.seed is not None:
        plan = replace(plan, master_seed=args.seed)
    out = augment_dataset(manifest, plan, args.out)
    print(f"wrote {len(out.records)} records ({plan.policy.value}) to {args.out}")


def _net_config(args, manifest, num_tx) -> NetConfig:
    cfg = _experiment_config(args)
    net = replace(cfg.net, window_len=manifest.header.window_len, num_classes=num_tx)
    if args.seed is not None:
        net = replace(net, seed=args.seed)
    return net


def _cmd_train(args):
    manifest = read_manifest(args.manifest)
    examples = load_examples(manifest, args.stride)
    net = _net_config(args, manifest, manifest.header.num_tx)
    model = train(examples, net)
    save_model(model, args.out)
    last = model.log[-1] if model.log else None
    if last:
        print(f"trained {net.epochs} epochs, final train accuracy {last.accuracy:.4f}")
    print(f"model written to {args.out}")


def _cmd_eval(args):
    model = load_model(args.model)
    manifest = read_manifest(args.manifest)
    report = evaluate(model, load_examples(manifest, args.stride))
    print(f"accuracy {report.accuracy:.4f}")
    print("confusion (rows = truth):")
    for row in report.confusion:
        print("  " + " ".join(f"{v:6d}" for v in row))


def _cmd_features(args):
    model = load_model(args.model)
    manifest = read_manifest(args.manifest)
    export_features(model, load_examples(manifest, args.stride), args.out)
    print(f"features written to {args.out}")


def _cmd_experiment(args):
    cfg = _experiment_config(args)
    table = run_experiment(cfg, args.out)
    print(f"{'policy':<22}{'day1_acc':>10}{'day2_acc':>10}")
    for name, a1, a2 in table.rows:
        print(f"{name:<22}{a1:>10.4f}{a2:>10.4f}")
    print(f"artifacts under {args.out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chanaug",
        description="Waveform-aware TDL/CDL channel augmentation for RF fingerprinting")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--config", help="experiment INI file")
        p.add_argument("--seed", type=int, help="override the master seed")
        if needs_out:
            p.add_argument("--out", required=True, help="output path")

    p = sub.add_parser("synth", help="synthesize the two-day dataset")
    common(p)
    p.set_defaults(func=_cmd_synth, stage="synth")

    p = sub.add_parser("augment", help="expand a day-1 manifest under a policy")
    common(p)
    p.add_argument("--manifest", required=True)
    p.add_argument("--plan", help="plan INI file (defaults otherwise)")
    p.add_argument("--policy", help="override the plan's policy")
    p.set_defaults(func=_cmd_augment, stage="augment")

    p = sub.add_parser("train", help="train the classifier on a manifest")
    common(p)
    p.add_argument("--manifest", required=True)
    p.add_argument("--stride", type=int, default=64)
    p.set_defaults(func=_cmd_train, stage="train")

    p = sub.add_parser("eval", help="evaluate a model on a manifest")
    common(p, needs_out=False)
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--stride", type=int, default=128)
    p.set_defaults(func=_cmd_eval, stage="eval")

    p = sub.add_parser("features", help="export penultimate-layer features")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--stride", type=int, default=128)
    p.set_defaults(func=_cmd_features, stage="features")

    p = sub.add_parser("experiment", help="run the full cross-day comparison")
    common(p)
    p.set_defaults(func=_cmd_experiment, stage="experiment")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ChanAugError as e:
        print(f"chanaug {args.stage}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"chanaug {args.stage}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
