"""Dataset ingestion, evaluation protocols, synthetic data and feature persistence."""

from .evaluation import (
    DEFAULT_K_LIST,
    ConfusionMatrix,
    EvalConfig,
    EvalResult,
    ExtractionError,
    KSweepReport,
    config_from_meta,
    evaluate_samples,
    extract_samples,
    extract_volume_features,
    k_sweep,
    run_evaluation,
)
from .featurefile import FeatureFileError, read_features, write_features
from .folds import LOSO, split_grouped_folds
from .manifest import ManifestEntry, ManifestError, ckplus_entries, load_manifest, write_manifest
from .synth import synth_generate

__all__ = [
    "DEFAULT_K_LIST", "ConfusionMatrix", "EvalConfig", "EvalResult", "ExtractionError",
    "KSweepReport", "config_from_meta", "evaluate_samples", "extract_samples",
    "extract_volume_features", "k_sweep", "run_evaluation", "FeatureFileError",
    "read_features", "write_features", "LOSO", "split_grouped_folds", "ManifestEntry",
    "ManifestError", "ckplus_entries", "load_manifest", "write_manifest", "synth_generate",
]
