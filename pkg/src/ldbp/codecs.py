"""Decoding of 8-bit grayscale PNG and binary PGM frames, plus PGM writing."""

from __future__ import annotations

import io
import os
import struct
import zlib
from pathlib import Path

import numpy as np
from PIL import Image

from .volume import VideoVolume, as_gray_image, build_volume

__all__ = [
    "ImageFormatError",
    "load_frame",
    "read_frame",
    "encode_pgm",
    "write_pgm",
    "list_frame_files",
    "read_sequence",
]

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
FRAME_SUFFIXES = (".png", ".pgm")


class ImageFormatError(ValueError):
    """Raised for malformed or unsupported image data."""

    def __init__(self, fmt: str, offset: int, message: str):
        super().__init__(f"{fmt}: {message} (at byte offset {offset})")
        self.format = fmt
        self.offset = offset
        self.detail = message


def load_frame(data: bytes) -> np.ndarray:
    """Decode PNG or P5 PGM bytes into an ``(H, W)`` uint8 array."""
    data = bytes(data)
    if data.startswith(PNG_SIGNATURE):
        return _decode_png(data)
    if data[:2] == b"P5":
        return _decode_pgm(data)
    raise ImageFormatError("image", 0, "unrecognized signature, expected PNG or binary PGM (P5)")


def read_frame(path) -> np.ndarray:
    return load_frame(Path(path).read_bytes())


# --------------------------------------------------------------------------- PGM


def _pgm_token(data: bytes, pos: int) -> tuple[bytes, int, int]:
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ImageFormatError("PGM", start, "truncated header")
    return data[start:pos], start, pos


def _decode_pgm(data: bytes) -> np.ndarray:
    pos = 2
    fields = []
    for name in ("width", "height", "maxval"):
        tok, start, pos = _pgm_token(data, pos)
        if not tok.isdigit():
            raise ImageFormatError("PGM", start, f"malformed header: {name} is {tok!r}")
        fields.append((int(tok), start))
    (w, w_at), (h, h_at), (maxval, m_at) = fields
    if w < 1 or h < 1:
        raise ImageFormatError("PGM", w_at if w < 1 else h_at, f"invalid size {w}x{h}")
    if maxval != 255:
        raise ImageFormatError("PGM", m_at, f"unsupported bit depth (maxval {maxval}, need 255)")
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ImageFormatError("PGM", pos, "missing whitespace after header")
    pos += 1
    need = w * h
    payload = data[pos:pos + need]
    if len(payload) < need:
        raise ImageFormatError(
            "PGM", pos + len(payload), f"truncated payload: {len(payload)} of {need} bytes"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(h, w).copy()


def encode_pgm(image) -> bytes:
    img = as_gray_image(image)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def write_pgm(path, image) -> None:
    Path(path).write_bytes(encode_pgm(image))


# --------------------------------------------------------------------------- PNG


def _decode_png(data: bytes) -> np.ndarray:
    pos = len(PNG_SIGNATURE)
    header = None
    idat = []
    idat_at = None
    while True:
        if pos + 8 > len(data):
            raise ImageFormatError("PNG", pos, "truncated chunk header")
        length, ctype = struct.unpack(">I4s", data[pos:pos + 8])
        body = data[pos + 8:pos + 8 + length]
        crc = data[pos + 8 + length:pos + 12 + length]
        if len(body) < length or len(crc) < 4:
            raise ImageFormatError("PNG", pos, f"truncated {ctype!r} chunk")
        if zlib.crc32(ctype + body) != struct.unpack(">I", crc)[0]:
            raise ImageFormatError("PNG", pos, f"CRC mismatch in {ctype!r} chunk")
        if ctype == b"IHDR":
            if length != 13:
                raise ImageFormatError("PNG", pos, "malformed IHDR")
            header = struct.unpack(">IIBBBBB", body)
            w, h, depth, color, comp, filt, interlace = header
            if w < 1 or h < 1:
                raise ImageFormatError("PNG", pos + 8, f"invalid size {w}x{h}")
            if color != 0:
                raise ImageFormatError("PNG", pos + 17, f"unsupported color type {color}, need grayscale (0)")
            if depth != 8:
                raise ImageFormatError("PNG", pos + 16, f"unsupported bit depth {depth}, need 8")
            if comp != 0 or filt != 0:
                raise ImageFormatError("PNG", pos + 18, "unsupported compression or filter method")
            if interlace != 0:
                raise ImageFormatError("PNG", pos + 20, "interlaced PNG is not supported")
        elif header is None:
            raise ImageFormatError("PNG", pos, "first chunk is not IHDR")
        elif ctype == b"IDAT":
            if idat_at is None:
                idat_at = pos
            idat.append(body)
        elif ctype == b"IEND":
            break
        pos += 12 + length
    if not idat:
        raise ImageFormatError("PNG", pos, "no IDAT chunk")
    w, h = header[0], header[1]
    try:
        raw = zlib.decompress(b"".join(idat))
    except zlib.error as exc:
        raise ImageFormatError("PNG", idat_at, f"corrupt image data: {exc}") from None
    if len(raw) < (w + 1) * h:
        raise ImageFormatError(
            "PNG", idat_at, f"truncated payload: {len(raw)} of {(w + 1) * h} decompressed bytes"
        )
    # structure is validated above; Pillow does the scanline unfiltering
    with Image.open(io.BytesIO(data)) as im:
        im.load()
        return np.asarray(im, dtype=np.uint8).copy()


# --------------------------------------------------------------------------- sequences


def list_frame_files(directory) -> list[Path]:
    """Frame files in a sequence directory, in lexicographic name order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"sequence directory not found: {directory}")
    return sorted(
        (p for p in directory.iterdir() if p.suffix.lower() in FRAME_SUFFIXES and p.is_file()),
        key=lambda p: p.name,
    )


def read_sequence(directory) -> VideoVolume:
    files = list_frame_files(directory)
    if not files:
        raise ValueError(f"no PNG/PGM frames in {os.fspath(directory)}")
    frames = []
    for f in files:
        try:
            frames.append(read_frame(f))
        except ImageFormatError as exc:
            raise ImageFormatError(exc.format, exc.offset, f"{f.name}: {exc.detail}") from None
    return build_volume(frames)
