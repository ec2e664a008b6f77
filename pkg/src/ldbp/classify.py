"""Chi-square histogram dissimilarity and K-nearest-neighbour voting."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .features import FeatureVector

__all__ = [
    "LABELS",
    "LabeledSample",
    "chi_square",
    "chi_square_matrix",
    "rank_neighbors",
    "vote",
    "knn_predict",
]

# alphabetical; the index is the on-disk label code
LABELS = ("Anger", "Contempt", "Disgust", "Fear", "Happiness", "Sadness", "Surprise")


@dataclass(frozen=True)
class LabeledSample:
    features: FeatureVector
    label: str
    subject: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown expression label {self.label!r}; expected one of {LABELS}")


def _values(v) -> np.ndarray:
    return v.values if isinstance(v, FeatureVector) else np.asarray(v, dtype=np.float64)


def _check_comparable(a, b) -> None:
    if isinstance(a, FeatureVector) and isinstance(b, FeatureVector) and a.meta != b.meta:
        raise ValueError(f"feature vectors are not comparable: {a.meta} vs {b.meta}")
    if len(_values(a)) != len(_values(b)):
        raise ValueError(f"feature length mismatch: {len(_values(a))} vs {len(_values(b))}")


def chi_square(s, m) -> float:
    """``sum_i (s_i - m_i)^2 / (s_i + m_i)``, skipping bins where both are 0.

    >>> round(chi_square([0.2, 0.8], [0.4, 0.6]), 7)
    0.0952381
    """
    _check_comparable(s, m)
    s, m = _values(s), _values(m)
    total = s + m
    nz = total != 0
    diff = s[nz] - m[nz]
    return float(np.sum(diff * diff / total[nz]))


def chi_square_matrix(queries: np.ndarray, train: np.ndarray, chunk_bytes: int = 1 << 27) -> np.ndarray:
    """Pairwise chi-square distances, shape ``(len(queries), len(train))``.

    Entries agree with :func:`chi_square` up to summation order.
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    train = np.atleast_2d(np.asarray(train, dtype=np.float64))
    if queries.shape[1] != train.shape[1]:
        raise ValueError(f"feature length mismatch: {queries.shape[1]} vs {train.shape[1]}")
    out = np.empty((queries.shape[0], train.shape[0]))
    step = max(1, chunk_bytes // (8 * max(1, train.shape[1])))
    for qi, q in enumerate(queries):
        for t0 in range(0, train.shape[0], step):
            block = train[t0:t0 + step]
            total = q + block
            diff = q - block
            with np.errstate(invalid="ignore", divide="ignore"):
                terms = diff * diff / total
            terms[total == 0] = 0.0
            out[qi, t0:t0 + step] = terms.sum(axis=1)
    return out


def _train_matrix(train: Sequence[LabeledSample], query) -> np.ndarray:
    if len(train) == 0:
        raise ValueError("training set is empty")
    for s in train:
        _check_comparable(s.features, query)
    return np.stack([s.features.values for s in train])


def rank_neighbors(train: Sequence[LabeledSample], query, K: int) -> list[tuple[LabeledSample, float]]:
    """The ``K`` closest training samples, ascending; equal distances keep training order."""
    if not 1 <= K <= len(train):
        raise ValueError(f"K must lie in [1, {len(train)}], got {K}")
    dist = chi_square_matrix(_values(query), _train_matrix(train, query))[0]
    order = np.argsort(dist, kind="stable")[:K]
    return [(train[i], float(dist[i])) for i in order]


def vote(labels: Sequence[str], distances: Sequence[float]) -> str:
    """Majority label; ties go to the smaller summed distance, then alphabetical order."""
    if len(labels) == 0:
        raise ValueError("no neighbours to vote")
    count: dict[str, int] = defaultdict(int)
    dsum: dict[str, float] = defaultdict(float)
    for lab, d in zip(labels, distances):
        count[lab] += 1
        dsum[lab] += float(d)
    return min(count, key=lambda lab: (-count[lab], dsum[lab], lab))


def knn_predict(train: Sequence[LabeledSample], query, K: int) -> str:
    ranked = rank_neighbors(train, query, K)
    return vote([s.label for s, _ in ranked], [d for _, d in ranked])
