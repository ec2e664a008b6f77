"""Subject-grouped fold assignment."""

from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = ["LOSO", "split_grouped_folds", "fold_pairs"]

#: ``folds`` sentinel selecting leave-one-subject-out
LOSO = 0


def _subject_of(s) -> str:
    return s if isinstance(s, str) else s.subject


def split_grouped_folds(samples: Sequence, folds: int, seed: int = 0) -> np.ndarray:
    """Fold index of every sample such that no subject spans two folds.

    Distinct subjects are sorted, shuffled with ``seed`` and dealt round-robin
    into ``folds`` groups. ``folds=0`` gives every subject its own fold.
    ``samples`` may hold subject strings or objects with a ``subject``.
    """
    subjects = [_subject_of(s) for s in samples]
    distinct = sorted(set(subjects))
    if folds == LOSO:
        folds = len(distinct)
    if folds < 2:
        raise ValueError(f"need at least 2 folds, got {folds}")
    if len(distinct) < folds:
        raise ValueError(f"{len(distinct)} distinct subjects cannot fill {folds} folds")
    order = np.random.default_rng(seed).permutation(len(distinct))
    fold_of = {distinct[j]: pos % folds for pos, j in enumerate(order)}
    return np.array([fold_of[s] for s in subjects], dtype=np.int64)


def fold_pairs(assignment: np.ndarray, subjects: Sequence[str] | None = None):
    """Yield ``(test_idx, train_idx)`` per fold, checking subject disjointness if given."""
    for f in np.unique(assignment):
        test = np.flatnonzero(assignment == f)
        train = np.flatnonzero(assignment != f)
        if subjects is not None:
            overlap = {subjects[i] for i in test} & {subjects[i] for i in train}
            if overlap:
                raise AssertionError(f"fold {f}: subjects {sorted(overlap)} in both train and test")
        yield test, train
