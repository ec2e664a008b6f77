"""Code histograms and descriptor feature vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DESCRIPTORS", "CodeHistogram", "FeatureMeta", "FeatureVector", "normalize", "block_histograms"]

DESCRIPTORS = ("lbp", "ldbp", "vldbp", "ldbp-top")


@dataclass(frozen=True, eq=False)
class CodeHistogram:
    """Counts (or frequencies, once normalized) of descriptor codes.

    ``values[c]`` is the mass of code ``c``.
    """

    values: np.ndarray
    normalized: bool = False

    @property
    def bin_count(self) -> int:
        return self.values.shape[0]

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def __len__(self) -> int:
        return self.bin_count

    def __eq__(self, other):
        if not isinstance(other, CodeHistogram):
            return NotImplemented
        return self.normalized == other.normalized and np.array_equal(self.values, other.values)


def normalize(hist: CodeHistogram | np.ndarray) -> CodeHistogram:
    """Divide every bin by the histogram total.

    >>> normalize(np.array([1, 3, 0, 4])).values.tolist()
    [0.125, 0.375, 0.0, 0.5]
    """
    values = hist.values if isinstance(hist, CodeHistogram) else np.asarray(hist)
    values = values.astype(np.float64)
    if np.any(values < 0):
        raise ValueError("histogram has negative bins")
    total = values.sum()
    if total <= 0:
        raise ValueError("cannot normalize an all-zero histogram")
    return CodeHistogram(values / total, normalized=True)


def block_histograms(codes: np.ndarray, labels: np.ndarray, n_blocks: int, n_bins: int) -> np.ndarray:
    """Count ``codes`` per block label into an ``(n_blocks, n_bins)`` int64 table.

    Entries with a negative label are ignored; ``codes`` and ``labels``
    broadcast against each other.
    """
    codes, labels = np.broadcast_arrays(codes, labels)
    keep = labels >= 0
    flat = labels[keep].astype(np.int64) * n_bins + codes[keep]
    return np.bincount(flat, minlength=n_blocks * n_bins).reshape(n_blocks, n_bins)


@dataclass(frozen=True)
class FeatureMeta:
    """Everything needed to decide whether two feature vectors are comparable.

    ``P`` and ``R`` are per-plane triples (XY, XT, YT) for LDBP-TOP; for the
    other descriptors only the first entry is used and the rest are 0.
    ``L`` is the VLDBP temporal interval, 0 elsewhere. ``frame`` is the
    ``(width, height)`` of the described frames.
    """

    descriptor: str
    P: tuple[int, int, int]
    R: tuple[float, float, float]
    block: tuple[int, int]
    frame: tuple[int, int]
    center_stat: str = "median"
    L: int = 0

    def __post_init__(self):
        if self.descriptor not in DESCRIPTORS:
            raise ValueError(f"unknown descriptor {self.descriptor!r}")

    @property
    def n_blocks(self) -> int:
        return (self.frame[0] // self.block[0]) * (self.frame[1] // self.block[1])

    @property
    def remainder(self) -> tuple[int, int]:
        """Right/bottom pixels left out because no whole block covers them."""
        return self.frame[0] % self.block[0], self.frame[1] % self.block[1]

    @property
    def segments(self) -> tuple[int, ...]:
        """Histogram lengths making up one block's slice of the vector."""
        if self.descriptor == "ldbp-top":
            return tuple(2 ** p for p in self.P)
        if self.descriptor == "vldbp":
            return (2 ** (3 * self.P[0] + 2),)
        return (2 ** self.P[0],)

    @property
    def block_length(self) -> int:
        return sum(self.segments)

    @property
    def length(self) -> int:
        return self.n_blocks * self.block_length


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Concatenated normalized block histograms, blocks in row-major order."""

    values: np.ndarray
    meta: FeatureMeta

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.shape[0] != self.meta.length:
            raise ValueError(
                f"feature length {self.values.shape} does not match layout ({self.meta.length},)"
            )

    def __len__(self) -> int:
        return self.values.shape[0]

    def blocks(self) -> np.ndarray:
        """View as ``(n_blocks, block_length)``."""
        return self.values.reshape(self.meta.n_blocks, self.meta.block_length)

    def segment_views(self) -> list[np.ndarray]:
        """One ``(n_blocks, bins)`` view per histogram segment (e.g. XY, XT, YT)."""
        b = self.blocks()
        out, start = [], 0
        for n in self.meta.segments:
            out.append(b[:, start:start + n])
            start += n
        return out

    def __eq__(self, other):
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return self.meta == other.meta and np.array_equal(self.values, other.values)


def assemble(per_block: list[np.ndarray], meta: FeatureMeta) -> FeatureVector:
    """Normalize each raw ``(n_blocks, bins)`` table row-wise and interleave per block."""
    parts = []
    for table in per_block:
        table = table.astype(np.float64)
        sums = table.sum(axis=1, keepdims=True)
        if np.any(sums <= 0):
            raise ValueError("a block histogram is empty")
        parts.append(table / sums)
    values = np.concatenate(parts, axis=1).ravel()
    return FeatureVector(values, meta)
