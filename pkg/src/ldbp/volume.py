"""Grayscale frames, video volumes, block grids and plane patches.

A frame is a 2-D ``uint8`` array indexed ``[y, x]`` (row-major, top-left
origin, y grows downward). A :class:`VideoVolume` stacks frames into a
``(T, H, W)`` array indexed ``[t, y, x]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "PlaneKind",
    "BlockRect",
    "BlockGrid",
    "VideoVolume",
    "as_gray_image",
    "build_volume",
    "canonicalize",
    "resize_bilinear",
    "partition_blocks",
    "plane_patch",
]


class PlaneKind(enum.IntEnum):
    """Orthogonal plane through a voxel. The value is the histogram index."""

    XY = 0
    XT = 1
    YT = 2


@dataclass(frozen=True)
class BlockRect:
    x0: int
    y0: int
    w: int
    h: int

    @property
    def x1(self) -> int:
        return self.x0 + self.w

    @property
    def y1(self) -> int:
        return self.y0 + self.h


@dataclass(frozen=True)
class BlockGrid:
    """Row-major tiling of a frame by equally sized blocks.

    ``remainder`` is the ``(columns, rows)`` of pixels on the right/bottom
    edge that no whole block covers; those pixels are not described.
    """

    width: int
    height: int
    block_w: int
    block_h: int

    @property
    def cols(self) -> int:
        return self.width // self.block_w

    @property
    def rows(self) -> int:
        return self.height // self.block_h

    @property
    def remainder(self) -> tuple[int, int]:
        return self.width - self.cols * self.block_w, self.height - self.rows * self.block_h

    @property
    def blocks(self) -> list[BlockRect]:
        return [
            BlockRect(c * self.block_w, r * self.block_h, self.block_w, self.block_h)
            for r in range(self.rows)
            for c in range(self.cols)
        ]

    def __len__(self) -> int:
        return self.rows * self.cols

    def __iter__(self):
        return iter(self.blocks)

    def label_map(self) -> np.ndarray:
        """``(H, W)`` int array: block index per pixel, -1 outside every block."""
        ys = np.arange(self.height) // self.block_h
        xs = np.arange(self.width) // self.block_w
        labels = ys[:, None] * self.cols + xs[None, :]
        labels[ys >= self.rows, :] = -1
        labels[:, xs >= self.cols] = -1
        return labels


def partition_blocks(width: int, height: int, block_w: int, block_h: int) -> BlockGrid:
    """Tile a ``width x height`` frame with non-overlapping blocks.

    >>> len(partition_blocks(20, 20, 10, 10))
    4
    >>> partition_blocks(25, 20, 10, 10).remainder
    (5, 0)
    """
    if block_w < 1 or block_h < 1:
        raise ValueError(f"block size must be positive, got {block_w}x{block_h}")
    if block_w > width or block_h > height:
        raise ValueError(
            f"block {block_w}x{block_h} is larger than the {width}x{height} frame"
        )
    return BlockGrid(width, height, block_w, block_h)


def as_gray_image(pixels) -> np.ndarray:
    """Validate and return a frame as a C-contiguous ``(H, W)`` uint8 array."""
    arr = np.asarray(pixels)
    if arr.ndim != 2:
        raise ValueError(f"grayscale image must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"grayscale image must be at least 1x1, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise TypeError(f"pixels must be integers, got dtype {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("pixel intensities must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


class VideoVolume:
    """Immutable stack of equally sized grayscale frames.

    Parameters
    ----------
    data : array_like, shape (T, H, W)
        Intensities in [0, 255].
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.asarray(data)
        if arr.ndim != 3:
            raise ValueError(f"volume must be 3-D (T, H, W), got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValueError(f"volume has an empty axis: shape {arr.shape}")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise TypeError(f"voxels must be integers, got dtype {arr.dtype}")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("voxel intensities must lie in [0, 255]")
        arr = np.array(arr, dtype=np.uint8, order="C")
        arr.flags.writeable = False
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        """Read-only ``(T, H, W)`` uint8 view."""
        return self._data

    @property
    def width(self) -> int:
        return self._data.shape[2]

    @property
    def height(self) -> int:
        return self._data.shape[1]

    @property
    def length(self) -> int:
        return self._data.shape[0]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self._data.shape

    @property
    def frames(self) -> list[np.ndarray]:
        return list(self._data)

    def voxel(self, x: int, y: int, t: int) -> int:
        return int(self._data[t, y, x])

    def shifted(self, c: int) -> "VideoVolume":
        """Volume with ``c`` added to every voxel; raises if any value leaves [0, 255]."""
        return VideoVolume(self._data.astype(np.int16) + c)

    def __eq__(self, other):
        if not isinstance(other, VideoVolume):
            return NotImplemented
        return np.array_equal(self._data, other._data)

    def __repr__(self):
        return f"VideoVolume(T={self.length}, H={self.height}, W={self.width})"


def build_volume(frames: Sequence) -> VideoVolume:
    """Stack frames in order. Every frame must share the first frame's size."""
    if len(frames) == 0:
        raise ValueError("cannot build a volume from an empty frame sequence")
    images = [as_gray_image(f) for f in frames]
    h, w = images[0].shape
    for i, img in enumerate(images):
        if img.shape != (h, w):
            raise ValueError(
                f"frame {i} is {img.shape[1]}x{img.shape[0]}, expected {w}x{h}"
            )
    return VideoVolume(np.stack(images))


def _sample_positions(src: int, dst: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Exact source positions as ``(floor, remainder, denominator)``.

    Corner-aligned: output 0 maps to input 0 and output ``dst-1`` to input
    ``src-1``. A single output sample sits at the source centre.
    """
    if dst == 1:
        num, den = np.array([src - 1], dtype=np.int64), 2
    else:
        num, den = np.arange(dst, dtype=np.int64) * (src - 1), dst - 1
    base = np.minimum(num // den, src - 1)
    return base, num - base * den, den


def resize_bilinear(image: np.ndarray, width: int, height: int) -> np.ndarray:
    """Bilinear resize with corner-aligned sampling and round-half-up output.

    Weights are kept as integers over a common denominator, so ties round
    up exactly rather than at the mercy of floating point.
    """
    if width < 1 or height < 1:
        raise ValueError(f"target size must be positive, got {width}x{height}")
    img = as_gray_image(image)
    h, w = img.shape
    if (w, h) == (width, height):
        return img.copy()
    y0, ry, dy = _sample_positions(h, height)
    x0, rx, dx = _sample_positions(w, width)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    ry = ry[:, None]
    rx = rx[None, :]
    f = img.astype(np.int64)
    top = f[y0][:, x0] * (dx - rx) + f[y0][:, x1] * rx
    bottom = f[y1][:, x0] * (dx - rx) + f[y1][:, x1] * rx
    num = top * (dy - ry) + bottom * ry
    den = dx * dy
    return np.clip((2 * num + den) // (2 * den), 0, 255).astype(np.uint8)


def canonicalize(volume: VideoVolume, width: int, height: int) -> VideoVolume:
    """Resize every frame to ``width x height``; the frame count is unchanged."""
    if (volume.width, volume.height) == (width, height):
        return volume
    return VideoVolume(np.stack([resize_bilinear(f, width, height) for f in volume.data]))


def plane_patch(volume: VideoVolume, plane: PlaneKind, x: int, y: int, t: int) -> np.ndarray:
    """3x3 patch centred on voxel ``(x, y, t)`` in the requested plane.

    Rows follow the plane's second axis and columns its first: XY is
    ``[y, x]``, XT is ``[t, x]`` and YT is ``[t, y]``.
    """
    plane = PlaneKind(plane)
    d = volume.data
    T, H, W = d.shape
    axes = {
        PlaneKind.XY: ((x, W, "x"), (y, H, "y")),
        PlaneKind.XT: ((x, W, "x"), (t, T, "t")),
        PlaneKind.YT: ((y, H, "y"), (t, T, "t")),
    }[plane]
    if not (0 <= t < T and 0 <= y < H and 0 <= x < W):
        raise IndexError(f"voxel ({x}, {y}, {t}) lies outside volume {W}x{H}x{T}")
    for c, n, name in axes:
        if not 1 <= c <= n - 2:
            raise IndexError(
                f"{plane.name} patch at ({x}, {y}, {t}) crosses the {name} border"
            )
    if plane is PlaneKind.XY:
        patch = d[t, y - 1:y + 2, x - 1:x + 2]
    elif plane is PlaneKind.XT:
        patch = d[t - 1:t + 2, y, x - 1:x + 2]
    else:
        patch = d[t - 1:t + 2, y - 1:y + 2, x]
    return patch.astype(np.int64)
