"""Command-line interface: ``ldbp {extract,eval,sweep-k,predict,synth}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .classify import knn_predict, rank_neighbors
from .codecs import read_sequence
from .harness.evaluation import (
    DEFAULT_K_LIST,
    EvalConfig,
    config_from_meta,
    extract_samples,
    extract_volume_features,
    k_sweep,
    run_evaluation,
)
from .harness.featurefile import read_features, write_features
from .harness.folds import LOSO
from .harness.manifest import load_manifest
from .harness.synth import synth_generate


def _folds(text: str) -> int:
    if text.lower() == "loso":
        return LOSO
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("folds must be >= 2 or 'loso'")
    return value


def _k_list(text: str) -> tuple[int, ...]:
    try:
        ks = tuple(int(k) for k in text.split(",") if k.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad K list {text!r}") from None
    if not ks or min(ks) < 1:
        raise argparse.ArgumentTypeError("K values must be positive")
    return ks


def _descriptor_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("descriptor")
    g.add_argument("--descriptor", choices=("lbp", "ldbp", "vldbp", "ldbp-top"), default="ldbp-top")
    g.add_argument("--L", type=int, default=1, help="VLDBP temporal interval")
    g.add_argument("--P", type=int, default=None, help="neighbour count (default 8 for lbp, else 4)")
    g.add_argument("--R", type=float, default=1.0, help="radius")
    g.add_argument("--block-size", type=int, default=10)
    g.add_argument("--canon-size", type=int, default=100)
    g.add_argument("--center-stat", choices=("median", "mean"), default="median")
    g.add_argument("--cache-dir", default=None, help="directory for cached per-sequence features")
    g.add_argument("--workers", type=int, default=1)


def _protocol_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--folds", type=_folds, default=10, help="fold count or 'loso'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--leave-one-in", action="store_true", help="sanity mode: queries stay in training")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")


def _source_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest", help="CSV manifest of sequences")
    src.add_argument("--features", help="feature file written by 'extract'")


def _config(args, **extra) -> EvalConfig:
    return EvalConfig(
        descriptor=args.descriptor, L=args.L, P=args.P, R=args.R, block_size=args.block_size,
        canon_size=args.canon_size, center_stat=args.center_stat, cache_dir=args.cache_dir,
        workers=args.workers, **extra,
    )


def _samples_and_config(args, **protocol):
    if getattr(args, "features", None):
        samples = read_features(args.features)
        config = config_from_meta(samples[0].features.meta, **protocol)
        return samples, config
    config = _config(args, **protocol)
    return extract_samples(load_manifest(args.manifest), config), config


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def cmd_extract(args) -> int:
    config = _config(args)
    samples = extract_samples(load_manifest(args.manifest), config)
    write_features(args.out, samples)
    print(f"wrote {len(samples)} feature vectors ({len(samples[0].features)} values each) to {args.out}")
    return 0


def cmd_eval(args) -> int:
    samples, config = _samples_and_config(
        args, K=args.k, folds=args.folds, seed=args.seed, leave_one_in=args.leave_one_in)
    _emit(run_evaluation(samples, config).format(args.format), args.out)
    return 0


def cmd_sweep(args) -> int:
    samples, config = _samples_and_config(
        args, k_list=args.k_list, folds=args.folds, seed=args.seed, leave_one_in=args.leave_one_in)
    _emit(k_sweep(samples, config, args.k_list).format(args.format), args.out)
    return 0


def cmd_predict(args) -> int:
    train = read_features(args.features)
    config = config_from_meta(train[0].features.meta)
    query = extract_volume_features(read_sequence(args.sequence), config)
    label = knn_predict(train, query, args.k)
    neighbours = rank_neighbors(train, query, args.k)
    if args.format == "json":
        print(json.dumps({"label": label, "K": args.k, "neighbors": [
            {"label": s.label, "subject": s.subject, "distance": d} for s, d in neighbours]}, indent=2))
    elif args.format == "csv":
        print("rank,label,subject,distance")
        for i, (s, d) in enumerate(neighbours, 1):
            print(f"{i},{s.label},{s.subject},{d:.6f}")
    else:
        print(label)
        for s, d in neighbours:
            print(f"  {s.label:<10} {s.subject:<12} {d:.6f}")
    return 0


def cmd_synth(args) -> int:
    manifest = synth_generate(
        args.out, class_count=args.classes, sequences_per_class=args.sequences,
        subjects_per_class=args.subjects, frames=args.frames, size=args.size,
        seed=args.seed, noise=args.noise,
        contrast=(1.0, 1.0) if args.full_contrast else (0.5, 1.0),
    )
    print(f"wrote {manifest}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ldbp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract features for every manifest sequence")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    _descriptor_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eval", help="subject-independent KNN evaluation with a confusion matrix")
    _source_flags(p)
    _descriptor_flags(p)
    _protocol_flags(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep-k", help="recognition rate for several K values")
    _source_flags(p)
    _descriptor_flags(p)
    _protocol_flags(p)
    p.add_argument("--k-list", type=_k_list, default=DEFAULT_K_LIST)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("predict", help="classify one sequence against a feature file")
    p.add_argument("--features", required=True)
    p.add_argument("--sequence", required=True, help="directory of frames")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("synth", help="generate the drifting-grating benchmark")
    p.add_argument("--out", required=True)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--sequences", type=int, default=20, help="sequences per class")
    p.add_argument("--subjects", type=int, default=5, help="subjects (shared by all classes)")
    p.add_argument("--frames", type=int, default=12)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--noise", type=float, default=4.0)
    p.add_argument("--full-contrast", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"ldbp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
