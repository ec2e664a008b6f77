import struct

import numpy as np
import pytest

from ldbp.classify import LabeledSample
from ldbp.harness.featurefile import (
    FeatureFileError,
    decode_features,
    encode_features,
    read_features,
    write_features,
)
from ldbp.ldbp_top import ldbp_top_feature
from ldbp.volume import VideoVolume, partition_blocks
from ldbp.vldbp import VldbpParams, vldbp_feature


@pytest.fixture
def samples(rng):
    grid = partition_blocks(12, 12, 6, 6)
    out = []
    for i, label in enumerate(["Fear", "Surprise", "Anger"]):
        vol = VideoVolume(rng.integers(0, 256, (4, 12, 12)))
        out.append(LabeledSample(ldbp_top_feature(vol, grid), label, f"S{i:03d}é"))
    return out


def test_round_trip(tmp_path, samples):
    path = write_features(tmp_path / "f.ldbf", samples)
    back = read_features(path)
    assert len(back) == 3
    for a, b in zip(samples, back):
        assert a.features == b.features
        assert (a.label, a.subject) == (b.label, b.subject)
        assert a.features.values.tobytes() == b.features.values.tobytes()


def test_header_layout(samples):
    data = encode_features(samples)
    assert data[:4] == b"LDBF"
    assert struct.unpack_from("<IB", data, 4) == (1, 3)
    assert struct.unpack_from("<H3H", data, 9) == (0, 4, 4, 4)
    assert struct.unpack_from("<3d", data, 17) == (1.0, 1.0, 1.0)
    assert struct.unpack_from("<4HB", data, 41) == (6, 6, 12, 12, 0)
    assert struct.unpack_from("<I", data, 50) == (3,)
    label, slen = struct.unpack_from("<HH", data, 54)
    assert label == 3 and data[58:58 + slen].decode() == "S000é"
    (count,) = struct.unpack_from("<I", data, 58 + slen)
    assert count == 4 * 48
    first = np.frombuffer(data, "<f8", count=count, offset=62 + slen)
    np.testing.assert_array_equal(first, samples[0].features.values)


def test_vldbp_meta(rng, tmp_path):
    vol = VideoVolume(rng.integers(0, 256, (5, 10, 10)))
    fv = vldbp_feature(vol, partition_blocks(10, 10, 10, 10), VldbpParams(L=2), "mean")
    (back,) = decode_features(encode_features([LabeledSample(fv, "Sadness", "x")]))
    assert back.features.meta == fv.meta
    assert back.features.meta.L == 2 and back.features.meta.center_stat == "mean"


def test_bad_magic(samples):
    data = b"LBPF" + encode_features(samples)[4:]
    with pytest.raises(FeatureFileError, match="bad magic"):
        decode_features(data)


def test_bad_version(samples):
    data = bytearray(encode_features(samples))
    data[4] = 2
    with pytest.raises(FeatureFileError, match="version 2"):
        decode_features(bytes(data))


@pytest.mark.parametrize("cut", [10, 52, 60, 200, -1])
def test_truncation(samples, cut):
    data = encode_features(samples)
    with pytest.raises(FeatureFileError, match="truncated"):
        decode_features(data[:cut])


def test_trailing_bytes(samples):
    with pytest.raises(FeatureFileError, match="trailing"):
        decode_features(encode_features(samples) + b"\0")


def test_value_count_mismatch(samples):
    data = bytearray(encode_features(samples[:1]))
    slen = struct.unpack_from("<H", data, 56)[0]
    struct.pack_into("<I", data, 58 + slen, 5)
    with pytest.raises(FeatureFileError, match="5 values"):
        decode_features(bytes(data))


def test_mixed_metadata_rejected(rng, samples):
    vol = VideoVolume(rng.integers(0, 256, (4, 12, 12)))
    other = ldbp_top_feature(vol, partition_blocks(12, 12, 4, 4))
    with pytest.raises(FeatureFileError, match="sample 3"):
        encode_features(samples + [LabeledSample(other, "Fear", "z")])


def test_empty_rejected():
    with pytest.raises(FeatureFileError):
        encode_features([])
