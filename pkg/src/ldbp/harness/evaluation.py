"""Feature extraction over manifests, subject-independent KNN evaluation and K sweeps."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..classify import LABELS, LabeledSample, chi_square_matrix, vote
from ..codecs import read_sequence
from ..features import DESCRIPTORS, FeatureVector
from ..lbp import LbpParams, lbp_feature
from ..ldbp_top import LdbpTopParams, ldbp_feature, ldbp_top_feature
from ..vldbp import VldbpParams, vldbp_feature
from ..volume import VideoVolume, canonicalize, partition_blocks
from .featurefile import read_features, write_features
from .folds import LOSO, fold_pairs, split_grouped_folds
from .manifest import ManifestEntry

__all__ = [
    "DEFAULT_K_LIST",
    "EvalConfig",
    "ExtractionError",
    "ConfusionMatrix",
    "EvalResult",
    "KSweepReport",
    "config_from_meta",
    "extract_volume_features",
    "extract_samples",
    "evaluate_samples",
    "run_evaluation",
    "k_sweep",
    "round_row_percentages",
]

log = logging.getLogger(__name__)

DEFAULT_K_LIST = (1, 3, 5, 10, 15, 18)


class ExtractionError(RuntimeError):
    pass


@dataclass(frozen=True)
class EvalConfig:
    """Descriptor, preprocessing and protocol settings for one evaluation.

    ``P=None`` picks the descriptor default (8 for LBP, 4 otherwise).
    ``folds=0`` is leave-one-subject-out. ``leave_one_in`` classifies every
    sample against the full set including itself (a sanity mode, not a
    protocol).
    """

    descriptor: str = "ldbp-top"
    L: int = 1
    P: int | None = None
    R: float = 1
    block_size: int = 10
    canon_size: int | tuple[int, int] = 100
    center_stat: str = "median"
    K: int = 10
    k_list: tuple[int, ...] = DEFAULT_K_LIST
    folds: int = 10
    seed: int = 0
    leave_one_in: bool = False
    cache_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.descriptor not in DESCRIPTORS:
            raise ValueError(f"descriptor must be one of {DESCRIPTORS}, got {self.descriptor!r}")

    @property
    def canon(self) -> tuple[int, int]:
        c = self.canon_size
        return (c, c) if isinstance(c, int) else tuple(c)

    @property
    def resolved_P(self) -> int:
        if self.P is not None:
            return self.P
        return 8 if self.descriptor == "lbp" else 4

    def descriptor_label(self) -> str:
        d, P = self.descriptor, self.resolved_P
        if d == "vldbp":
            return f"VLDBP({self.L},{P},{self.R:g})"
        if d == "ldbp-top":
            return f"LDBP-TOP_{{{P},{P},{P};1,1,1}}"
        return f"{d.upper()}({P},{self.R:g})"

    def protocol(self) -> str:
        if self.leave_one_in:
            split = "leave-one-in (queries included in training)"
        elif self.folds == LOSO:
            split = "leave-one-subject-out"
        else:
            split = f"subject-grouped {self.folds}-fold CV, seed {self.seed}"
        w, h = self.canon
        return (f"{self.descriptor_label()}, {self.center_stat} center, {self.block_size}x{self.block_size} "
                f"blocks, frames resized to {w}x{h}, chi-square KNN, {split}")


def config_from_meta(meta, **overrides) -> EvalConfig:
    """Extraction settings that reproduce features carrying ``meta``."""
    base = dict(descriptor=meta.descriptor, L=meta.L or 1, P=meta.P[0], R=meta.R[0],
                block_size=meta.block[0], canon_size=tuple(meta.frame), center_stat=meta.center_stat)
    if meta.block[0] != meta.block[1]:
        raise ValueError(f"non-square blocks {meta.block} cannot be expressed as a block size")
    base.update(overrides)
    return EvalConfig(**base)


def extract_volume_features(volume: VideoVolume, config: EvalConfig) -> FeatureVector:
    w, h = config.canon
    volume = canonicalize(volume, w, h)
    grid = partition_blocks(w, h, config.block_size, config.block_size)
    d, P, stat = config.descriptor, config.resolved_P, config.center_stat
    # single-image descriptors describe the last (peak expression) frame
    if d == "lbp":
        return lbp_feature(volume.data[-1], grid, LbpParams(P, config.R))
    if d == "ldbp":
        return ldbp_feature(volume.data[-1], grid, P, stat)
    if d == "vldbp":
        return vldbp_feature(volume, grid, VldbpParams(config.L, P, int(config.R)), stat)
    if config.R != 1:
        raise ValueError("LDBP-TOP is defined for radius 1 only")
    return ldbp_top_feature(volume, grid, LdbpTopParams(P, P, P), stat)


def _cache_key(entry: ManifestEntry, config: EvalConfig) -> str:
    relevant = {k: v for k, v in asdict(config).items()
                if k in ("descriptor", "L", "R", "block_size", "center_stat")}
    relevant.update(P=config.resolved_P, canon=config.canon, path=str(Path(entry.path).resolve()))
    return hashlib.sha256(json.dumps(relevant, sort_keys=True).encode()).hexdigest()[:32]


def _extract_entry(entry: ManifestEntry, config: EvalConfig) -> LabeledSample:
    cache = None
    if config.cache_dir is not None:
        cache = Path(config.cache_dir) / f"{_cache_key(entry, config)}.ldbf"
        if cache.is_file():
            return LabeledSample(read_features(cache)[0].features, entry.label, entry.subject)
    try:
        features = extract_volume_features(read_sequence(entry.path), config)
    except (ValueError, OSError) as exc:
        raise ExtractionError(f"feature extraction failed for sequence {os.fspath(entry.path)}: {exc}") from exc
    sample = LabeledSample(features, entry.label, entry.subject)
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        tmp = cache.with_suffix(".tmp")
        write_features(tmp, [sample])
        tmp.replace(cache)
    return sample


def extract_samples(entries: Sequence[ManifestEntry], config: EvalConfig) -> list[LabeledSample]:
    """Features for every manifest entry, in manifest order."""
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            return list(pool.map(lambda e: _extract_entry(e, config), entries))
    return [_extract_entry(e, config) for e in entries]


def round_row_percentages(counts: np.ndarray) -> np.ndarray:
    """Row percentages rounded to 0.1 so that every non-empty row sums to exactly 100.0.

    Largest-remainder rounding on tenths of a percent; ties go to the lower
    column index.
    """
    counts = np.asarray(counts, dtype=np.int64)
    out = np.zeros(counts.shape)
    for r, row in enumerate(counts):
        n = row.sum()
        if n == 0:
            continue
        tenths = row * 1000 / n
        base = np.floor(tenths).astype(np.int64)
        short = 1000 - base.sum()
        frac = tenths - base
        for c in sorted(range(len(row)), key=lambda c: (-frac[c], c))[:short]:
            base[c] += 1
        out[r] = base / 10
    return out


@dataclass
class ConfusionMatrix:
    """Rows are true classes, columns predicted classes, in :data:`LABELS` order."""

    counts: np.ndarray = field(default_factory=lambda: np.zeros((len(LABELS), len(LABELS)), dtype=np.int64))
    classes: tuple[str, ...] = LABELS

    def add(self, true: str, predicted: str) -> None:
        self.counts[self.classes.index(true), self.classes.index(predicted)] += 1

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def correct(self) -> int:
        return int(np.trace(self.counts))

    @property
    def rate(self) -> float:
        return 100.0 * self.correct / self.total if self.total else 0.0

    @property
    def percentages(self) -> np.ndarray:
        n = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(n > 0, 100.0 * self.counts / np.maximum(n, 1), 0.0)

    def active_classes(self) -> list[int]:
        used = (self.counts.sum(axis=0) + self.counts.sum(axis=1)) > 0
        idx = list(np.flatnonzero(used))
        return idx or list(range(len(self.classes)))

    def rows(self) -> tuple[list[str], np.ndarray]:
        """Class names and rounded percentage table restricted to classes that occur."""
        idx = self.active_classes()
        table = round_row_percentages(self.counts[np.ix_(idx, idx)])
        return [self.classes[i] for i in idx], table

    def to_text(self) -> str:
        names, table = self.rows()
        width = max(9, *(len(n) for n in names)) + 1
        lines = ["(%)".ljust(width) + "".join(n.rjust(width) for n in names)]
        for name, row in zip(names, table):
            lines.append(name.ljust(width) + "".join(f"{v:.1f}".rjust(width) for v in row))
        return "\n".join(lines)

    def to_csv(self) -> str:
        names, table = self.rows()
        lines = ["true\\predicted," + ",".join(names)]
        lines += [name + "," + ",".join(f"{v:.1f}" for v in row) for name, row in zip(names, table)]
        return "\n".join(lines)

    def to_dict(self) -> dict:
        names, table = self.rows()
        return {
            "classes": names,
            "counts": self.counts[np.ix_(self.active_classes(), self.active_classes())].tolist(),
            "percentages": [[round(float(v), 1) for v in row] for row in table],
        }


@dataclass
class EvalResult:
    confusion: ConfusionMatrix
    rate: float
    K: int
    protocol: str
    n_folds: int
    predictions: list[str]

    def format(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps({"K": self.K, "rate": round(self.rate, 1), "protocol": self.protocol,
                               "folds": self.n_folds, "confusion": self.confusion.to_dict()}, indent=2)
        if fmt == "csv":
            return f"# {self.protocol}\n# K={self.K} rate={self.rate:.1f}\n{self.confusion.to_csv()}"
        return (f"protocol: {self.protocol}\nK={self.K}  folds={self.n_folds}  "
                f"recognition rate: {self.rate:.1f}%\n\n{self.confusion.to_text()}")


@dataclass
class KSweepReport:
    descriptor: str
    protocol: str
    rates: dict[int, float]

    def format(self, fmt: str = "text") -> str:
        Ks = list(self.rates)
        if fmt == "json":
            return json.dumps({"descriptor": self.descriptor, "protocol": self.protocol,
                               "rates": {str(k): round(v, 1) for k, v in self.rates.items()}}, indent=2)
        if fmt == "csv":
            return "method," + ",".join(f"K={k}" for k in Ks) + "\n" + \
                self.descriptor + "," + ",".join(f"{self.rates[k]:.1f}" for k in Ks)
        width = max(len(self.descriptor), 7) + 2
        head = "method".ljust(width) + "".join(f"K={k}".rjust(7) for k in Ks)
        row = self.descriptor.ljust(width) + "".join(f"{self.rates[k]:.1f}".rjust(7) for k in Ks)
        return f"protocol: {self.protocol}\n{head}\n{row}"


def _folds(samples: Sequence[LabeledSample], config: EvalConfig):
    n = len(samples)
    if config.leave_one_in:
        everything = np.arange(n)
        return [(everything, everything)]
    subjects = [s.subject for s in samples]
    assignment = split_grouped_folds(subjects, config.folds, config.seed)
    # fold_pairs asserts train/test subject disjointness for every fold
    return list(fold_pairs(assignment, subjects))


def evaluate_samples(samples: Sequence[LabeledSample], config: EvalConfig,
                     Ks: Sequence[int] | None = None) -> dict[int, EvalResult]:
    """Evaluate several K values with one distance matrix per fold."""
    if not samples:
        raise ValueError("no samples to evaluate")
    Ks = list(Ks) if Ks is not None else [config.K]
    meta = samples[0].features.meta
    for i, s in enumerate(samples):
        if s.features.meta != meta:
            raise ValueError(f"sample {i} was extracted with different descriptor settings")
    X = np.stack([s.features.values for s in samples])
    labels = [s.label for s in samples]
    folds = _folds(samples, config)
    confusion = {k: ConfusionMatrix() for k in Ks}
    predicted = {k: [None] * len(samples) for k in Ks}
    for test, train in folds:
        if max(Ks) > len(train):
            raise ValueError(f"K={max(Ks)} exceeds the {len(train)} training samples of a fold")
        dist = chi_square_matrix(X[test], X[train])
        order = np.argsort(dist, axis=1, kind="stable")
        for row, qi in enumerate(test):
            for k in Ks:
                nn = order[row, :k]
                pred = vote([labels[train[j]] for j in nn], dist[row, nn])
                confusion[k].add(labels[qi], pred)
                predicted[k][qi] = pred
    protocol = config.protocol()
    n_folds = len(folds)
    return {k: EvalResult(confusion[k], confusion[k].rate, k, protocol, n_folds, predicted[k]) for k in Ks}


def _as_samples(data, config: EvalConfig) -> list[LabeledSample]:
    data = list(data)
    if data and isinstance(data[0], LabeledSample):
        return data
    return extract_samples(data, config)


def run_evaluation(entries, config: EvalConfig) -> EvalResult:
    """Extract (unless given samples), classify fold by fold, and accumulate the confusion matrix."""
    samples = _as_samples(entries, config)
    result = evaluate_samples(samples, config, [config.K])[config.K]
    log.info("%s: K=%d rate %.1f%%", config.protocol(), config.K, result.rate)
    return result


def k_sweep(entries, config: EvalConfig, Ks: Sequence[int] | None = None) -> KSweepReport:
    Ks = tuple(Ks) if Ks is not None else tuple(config.k_list)
    samples = _as_samples(entries, config)
    results = evaluate_samples(samples, config, Ks)
    return KSweepReport(config.descriptor_label(), config.protocol(), {k: results[k].rate for k in Ks})
