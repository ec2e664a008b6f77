"""Single-image local binary patterns on circular neighbourhoods.

Neighbour ``i`` of ``P`` sits at angle ``2*pi*i/P`` counter-clockwise from
east, i.e. at ``(x + R cos, y - R sin)`` since image rows grow downward.
Off-grid positions are bilinearly interpolated. Only pixels whose whole
circle lies inside the image are coded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .features import CodeHistogram, FeatureMeta, FeatureVector, assemble, block_histograms
from .volume import BlockGrid, BlockRect, as_gray_image

__all__ = [
    "LbpParams",
    "neighbor_offsets",
    "sample_neighbors",
    "lbp_code",
    "lbp_code_map",
    "lbp_histogram",
    "lbp_feature",
]

_SNAP = 1e-9


@dataclass(frozen=True)
class LbpParams:
    P: int = 8
    R: float = 1.0

    def __post_init__(self):
        if int(self.P) != self.P or self.P < 1:
            raise ValueError(f"P must be a positive integer, got {self.P}")
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R}")

    @property
    def margin(self) -> int:
        return math.ceil(self.R - _SNAP)


def _snap(v: float) -> float:
    r = round(v)
    return float(r) if abs(v - r) < _SNAP else v


def neighbor_offsets(params: LbpParams) -> list[tuple[float, float]]:
    """``(dx, dy)`` of each neighbour; values within 1e-9 of an integer are snapped."""
    out = []
    for i in range(params.P):
        theta = 2 * math.pi * i / params.P
        out.append((_snap(params.R * math.cos(theta)), _snap(-params.R * math.sin(theta))))
    return out


def _codable(shape: tuple[int, int], x: int, y: int, params: LbpParams) -> bool:
    h, w = shape
    m = params.margin
    return m <= x <= w - 1 - m and m <= y <= h - 1 - m


def _bilinear(img: np.ndarray, fx: float, fy: float) -> float:
    x0, y0 = math.floor(fx), math.floor(fy)
    ax, ay = fx - x0, fy - y0
    x1 = min(x0 + 1, img.shape[1] - 1)
    y1 = min(y0 + 1, img.shape[0] - 1)
    a, b = float(img[y0, x0]), float(img[y0, x1])
    c, d = float(img[y1, x0]), float(img[y1, x1])
    top = a + ax * (b - a)
    bottom = c + ax * (d - c)
    return top + ay * (bottom - top)


def sample_neighbors(image, x: int, y: int, params: LbpParams) -> list[float]:
    img = as_gray_image(image)
    if not _codable(img.shape, x, y, params):
        raise IndexError(f"circle of radius {params.R} around ({x}, {y}) leaves the image")
    return [_bilinear(img, x + dx, y + dy) for dx, dy in neighbor_offsets(params)]


def lbp_code(center: float, neighbors) -> int:
    """``sum_i S(g_i - g_c) 2^i`` with ``S(v) = 1`` for ``v >= 0``."""
    return sum(1 << i for i, g in enumerate(neighbors) if g - center >= 0)


def lbp_code_map(image, params: LbpParams = LbpParams()) -> np.ndarray:
    """Codes of all codable pixels, shape ``(H - 2m, W - 2m)`` with ``m = ceil(R)``.

    Interpolation runs on differences to the centre pixel, which keeps the
    codes exactly invariant to a global intensity offset.
    """
    img = as_gray_image(image).astype(np.int32)
    h, w = img.shape
    m = params.margin
    if h - 2 * m < 1 or w - 2 * m < 1:
        raise ValueError(f"{w}x{h} image has no pixel with a full radius-{params.R} circle")
    center = img[m:h - m, m:w - m]

    def shifted(dx: int, dy: int) -> np.ndarray:
        return img[m + dy:h - m + dy, m + dx:w - m + dx] - center

    codes = np.zeros(center.shape, dtype=np.int64)
    for i, (dx, dy) in enumerate(neighbor_offsets(params)):
        x0, y0 = math.floor(dx), math.floor(dy)
        ax, ay = dx - x0, dy - y0
        a = shifted(x0, y0)
        if ax == 0 and ay == 0:
            diff = a
        else:
            x1 = x0 + 1 if ax else x0
            y1 = y0 + 1 if ay else y0
            b, c, d = shifted(x1, y0), shifted(x0, y1), shifted(x1, y1)
            top = a + ax * (b - a)
            bottom = c + ax * (d - c)
            diff = top + ay * (bottom - top)
        codes |= (diff >= 0).astype(np.int64) << i
    return codes


def _region_labels(shape, m: int, grid: BlockGrid) -> np.ndarray:
    h, w = shape
    return grid.label_map()[m:h - m, m:w - m]


def lbp_histogram(image, region: BlockRect, params: LbpParams = LbpParams()) -> CodeHistogram:
    """Raw ``2^P``-bin histogram over the codable pixels of ``region``."""
    img = as_gray_image(image)
    h, w = img.shape
    if region.x0 < 0 or region.y0 < 0 or region.x1 > w or region.y1 > h:
        raise ValueError(f"{region} lies outside the {w}x{h} image")
    m = params.margin
    x0, x1 = max(region.x0, m), min(region.x1, w - m)
    y0, y1 = max(region.y0, m), min(region.y1, h - m)
    if x0 >= x1 or y0 >= y1:
        raise ValueError(f"{region} has no codable pixel for radius {params.R}")
    codes = lbp_code_map(img, params)[y0 - m:y1 - m, x0 - m:x1 - m]
    return CodeHistogram(np.bincount(codes.ravel(), minlength=2 ** params.P))


def lbp_feature(image, grid: BlockGrid, params: LbpParams = LbpParams()) -> FeatureVector:
    img = as_gray_image(image)
    if img.shape != (grid.height, grid.width):
        raise ValueError(f"grid is for {grid.width}x{grid.height}, image is {img.shape[1]}x{img.shape[0]}")
    labels = _region_labels(img.shape, params.margin, grid)
    table = block_histograms(lbp_code_map(img, params), labels, len(grid), 2 ** params.P)
    meta = FeatureMeta(
        "lbp", (params.P, 0, 0), (float(params.R), 0.0, 0.0),
        (grid.block_w, grid.block_h), (grid.width, grid.height),
    )
    return assemble([table], meta)
