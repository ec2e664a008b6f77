"""Little-endian binary feature files.

Layout::

    "LDBF"                 magic, 4 bytes
    u32                    version (1)
    u8                     descriptor (0=LBP, 1=LDBP, 2=VLDBP, 3=LDBP-TOP)
    u16                    L
    u16 u16 u16            P_XY, P_XT, P_YT  (P, 0, 0 for single-P descriptors)
    f64 f64 f64            R_X, R_Y, R_T     (R, 0, 0 likewise)
    u16 u16                block width, height
    u16 u16                frame (canonical) width, height
    u8                     center statistic (0=median, 1=mean)
    u32                    sample count
    per sample:
      u16                  label index into the alphabetical class list
      u16 + bytes          subject, UTF-8
      u32                  value count
      f64 * count          values
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from ..classify import LABELS, LabeledSample
from ..features import DESCRIPTORS, FeatureMeta, FeatureVector

__all__ = ["FeatureFileError", "MAGIC", "VERSION", "write_features", "read_features",
           "encode_features", "decode_features"]

MAGIC = b"LDBF"
VERSION = 1
_STATS = ("median", "mean")
_HEADER = struct.Struct("<4sIBH3H3d4HB")
_COUNT = struct.Struct("<I")


class FeatureFileError(ValueError):
    pass


def _pack_meta(meta: FeatureMeta) -> bytes:
    return _HEADER.pack(
        MAGIC, VERSION, DESCRIPTORS.index(meta.descriptor), meta.L,
        *meta.P, *meta.R, *meta.block, *meta.frame, _STATS.index(meta.center_stat),
    )


def encode_features(samples: Sequence[LabeledSample]) -> bytes:
    if not samples:
        raise FeatureFileError("no samples to write")
    meta = samples[0].features.meta
    for i, s in enumerate(samples):
        if s.features.meta != meta:
            raise FeatureFileError(
                f"sample {i} has descriptor metadata {s.features.meta}, expected {meta}"
            )
    parts = [_pack_meta(meta), _COUNT.pack(len(samples))]
    for s in samples:
        subj = s.subject.encode("utf-8")
        if len(subj) > 0xFFFF:
            raise FeatureFileError(f"subject identifier too long ({len(subj)} bytes)")
        values = np.ascontiguousarray(s.features.values, dtype="<f8")
        parts.append(struct.pack("<HH", LABELS.index(s.label), len(subj)))
        parts.append(subj)
        parts.append(_COUNT.pack(values.shape[0]))
        parts.append(values.tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise FeatureFileError(
                f"truncated file: {what} needs {n} bytes at offset {self.pos}, "
                f"{len(self.data) - self.pos} left"
            )
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: struct.Struct, what: str):
        return fmt.unpack(self.take(fmt.size, what))


def decode_features(data: bytes) -> list[LabeledSample]:
    r = _Reader(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise FeatureFileError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    head = r.unpack(_HEADER, "header")
    _, version, desc, L = head[:4]
    if version != VERSION:
        raise FeatureFileError(f"unsupported version {version}, expected {VERSION}")
    if desc >= len(DESCRIPTORS):
        raise FeatureFileError(f"unknown descriptor type {desc}")
    P, R = head[4:7], head[7:10]
    block, frame, stat = head[10:12], head[12:14], head[14]
    if stat >= len(_STATS):
        raise FeatureFileError(f"unknown center statistic {stat}")
    try:
        meta = FeatureMeta(DESCRIPTORS[desc], tuple(P), tuple(R), tuple(block), tuple(frame),
                           _STATS[stat], L)
        expected = meta.length
    except (ValueError, ZeroDivisionError) as exc:
        raise FeatureFileError(f"inconsistent descriptor metadata: {exc}") from None
    (count,) = r.unpack(_COUNT, "sample count")
    samples = []
    for i in range(count):
        label, slen = r.unpack(struct.Struct("<HH"), f"sample {i} header")
        if label >= len(LABELS):
            raise FeatureFileError(f"sample {i}: label index {label} out of range")
        subject = r.take(slen, f"sample {i} subject").decode("utf-8")
        (n,) = r.unpack(_COUNT, f"sample {i} value count")
        if n != expected:
            raise FeatureFileError(f"sample {i}: {n} values, descriptor layout needs {expected}")
        values = np.frombuffer(r.take(8 * n, f"sample {i} values"), dtype="<f8").astype(np.float64)
        samples.append(LabeledSample(FeatureVector(values, meta), LABELS[label], subject))
    if r.pos != len(data):
        raise FeatureFileError(f"{len(data) - r.pos} trailing bytes after {count} samples")
    return samples


def write_features(path, samples: Sequence[LabeledSample]) -> Path:
    path = Path(path)
    path.write_bytes(encode_features(samples))
    return path


def read_features(path) -> list[LabeledSample]:
    return decode_features(Path(path).read_bytes())
