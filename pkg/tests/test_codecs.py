import io
import struct
import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from ldbp.codecs import (
    ImageFormatError,
    encode_pgm,
    list_frame_files,
    load_frame,
    read_sequence,
    write_pgm,
)


def _chunk(ctype, body):
    return struct.pack(">I", len(body)) + ctype + body + struct.pack(">I", zlib.crc32(ctype + body))


def raw_png(img, depth=8, color=0, filter_type=0):
    """Minimal PNG writer: one IDAT, a single filter type on every row."""
    h, w = img.shape
    rows = []
    prev = np.zeros(w, np.int64)
    for row in img.astype(np.int64):
        if filter_type == 1:  # Sub
            line = (row - np.concatenate([[0], row[:-1]])) % 256
        elif filter_type == 2:  # Up
            line = (row - prev) % 256
        else:
            line = row
        rows.append(bytes([filter_type]) + bytes(line.astype(np.uint8)))
        prev = row
    ihdr = struct.pack(">IIBBBBB", w, h, depth, color, 0, 0, 0)
    return (b"\x89PNG\r\n\x1a\n" + _chunk(b"IHDR", ihdr)
            + _chunk(b"IDAT", zlib.compress(b"".join(rows))) + _chunk(b"IEND", b""))


def pillow_png(img, mode="L"):
    buf = io.BytesIO()
    Image.fromarray(img).convert(mode).save(buf, format="PNG")
    return buf.getvalue()


class TestPgm:
    def test_round_trip(self, rng):
        img = rng.integers(0, 256, (7, 11), dtype=np.uint8)
        np.testing.assert_array_equal(load_frame(encode_pgm(img)), img)

    def test_comments_and_whitespace(self):
        data = b"P5\n# a comment\n3  2\n# another\n255\n" + bytes(range(6))
        assert load_frame(data).tolist() == [[0, 1, 2], [3, 4, 5]]

    def test_sixteen_bit(self):
        data = b"P5\n2 2\n65535\n" + bytes(8)
        with pytest.raises(ImageFormatError, match="unsupported bit depth") as info:
            load_frame(data)
        assert info.value.format == "PGM"
        assert info.value.offset == 7

    def test_truncated_payload(self):
        data = b"P5\n4 4\n255\n" + bytes(10)
        with pytest.raises(ImageFormatError, match="truncated payload: 10 of 16") as info:
            load_frame(data)
        assert info.value.offset == 11 + 10

    def test_malformed_header(self):
        with pytest.raises(ImageFormatError, match="malformed header"):
            load_frame(b"P5\nab 4\n255\n")

    def test_ascii_pgm_rejected(self):
        with pytest.raises(ImageFormatError, match="unrecognized signature"):
            load_frame(b"P2\n1 1\n255\n0\n")

    @settings(max_examples=30)
    @given(arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))))
    def test_round_trip_property(self, img):
        np.testing.assert_array_equal(load_frame(encode_pgm(img)), img)


class TestPng:
    @pytest.mark.parametrize("filter_type", [0, 1, 2])
    def test_hand_written(self, rng, filter_type):
        img = rng.integers(0, 256, (9, 13), dtype=np.uint8)
        np.testing.assert_array_equal(load_frame(raw_png(img, filter_type=filter_type)), img)

    def test_pillow_written(self, rng):
        img = rng.integers(0, 256, (30, 17), dtype=np.uint8)
        np.testing.assert_array_equal(load_frame(pillow_png(img)), img)

    def test_png_and_pgm_agree(self, rng):
        img = rng.integers(0, 256, (5, 6), dtype=np.uint8)
        np.testing.assert_array_equal(load_frame(raw_png(img)), load_frame(encode_pgm(img)))

    def test_rgb_rejected(self, rng):
        img = rng.integers(0, 256, (4, 4), dtype=np.uint8)
        with pytest.raises(ImageFormatError, match="unsupported color type 2"):
            load_frame(pillow_png(img, "RGB"))

    def test_sixteen_bit_rejected(self):
        data = raw_png(np.zeros((2, 2), np.uint8), depth=16)
        with pytest.raises(ImageFormatError, match="unsupported bit depth 16") as info:
            load_frame(data)
        assert info.value.format == "PNG"

    def test_crc_mismatch(self):
        data = bytearray(raw_png(np.zeros((2, 2), np.uint8)))
        data[20] ^= 0xFF  # inside IHDR
        with pytest.raises(ImageFormatError, match="CRC mismatch") as info:
            load_frame(bytes(data))
        assert info.value.offset == 8

    def test_truncated_file(self):
        data = raw_png(np.zeros((3, 3), np.uint8))
        with pytest.raises(ImageFormatError, match="truncated"):
            load_frame(data[:-20])

    def test_short_payload(self):
        ihdr = struct.pack(">IIBBBBB", 4, 4, 8, 0, 0, 0, 0)
        data = (b"\x89PNG\r\n\x1a\n" + _chunk(b"IHDR", ihdr)
                + _chunk(b"IDAT", zlib.compress(bytes(8))) + _chunk(b"IEND", b""))
        with pytest.raises(ImageFormatError, match="truncated payload: 8 of 20"):
            load_frame(data)


class TestSequence:
    def test_lexicographic_order(self, tmp_path):
        for name, v in (("frame_10.pgm", 3), ("frame_02.pgm", 1), ("frame_09.pgm", 2)):
            write_pgm(tmp_path / name, np.full((3, 4), v, np.uint8))
        (tmp_path / "notes.txt").write_text("ignored")
        assert [p.name for p in list_frame_files(tmp_path)] == [
            "frame_02.pgm", "frame_09.pgm", "frame_10.pgm"]
        vol = read_sequence(tmp_path)
        assert [vol.voxel(0, 0, t) for t in range(3)] == [1, 2, 3]

    def test_mixed_formats(self, tmp_path):
        write_pgm(tmp_path / "a.pgm", np.zeros((2, 2), np.uint8))
        (tmp_path / "b.png").write_bytes(raw_png(np.full((2, 2), 9, np.uint8)))
        assert read_sequence(tmp_path).length == 2

    def test_size_mismatch(self, tmp_path):
        write_pgm(tmp_path / "a.pgm", np.zeros((2, 2), np.uint8))
        write_pgm(tmp_path / "b.pgm", np.zeros((3, 2), np.uint8))
        with pytest.raises(ValueError, match="frame 1"):
            read_sequence(tmp_path)

    def test_bad_frame_is_named(self, tmp_path):
        write_pgm(tmp_path / "a.pgm", np.zeros((2, 2), np.uint8))
        (tmp_path / "b.pgm").write_bytes(b"P5\n2 2\n255\n\x00")
        with pytest.raises(ImageFormatError, match="b.pgm: truncated payload"):
            read_sequence(tmp_path)

    def test_empty_dir(self, tmp_path):
        with pytest.raises(ValueError, match="no PNG/PGM frames"):
            read_sequence(tmp_path)

    def test_missing_dir(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_sequence(tmp_path / "nope")
