"""LDBP on three orthogonal planes, and the single-image LDBP descriptor.

Each voxel gets three independent codes, one per plane through it (XY,
XT, YT). Every code thresholds the Kirsch responses of that plane's 3x3
patch against the same patch's centre statistic. Per block the three code
histograms are normalized separately and concatenated XY, XT, YT.

A voxel contributes to a block's histograms when it is at least one pixel
from every spatial border; XT and YT additionally skip the first and last
frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .features import CodeHistogram, FeatureMeta, FeatureVector, assemble, block_histograms
from .kirsch import kirsch_response_grid, ldbp_code, ldbp_code_map
from .volume import BlockGrid, BlockRect, PlaneKind, VideoVolume, as_gray_image, plane_patch

__all__ = [
    "LdbpTopParams",
    "PlaneHistograms",
    "ldbp_plane_code",
    "ldbp_top_code_maps",
    "ldbp_top_histograms",
    "ldbp_top_feature",
    "ldbp_feature",
]


@dataclass(frozen=True)
class LdbpTopParams:
    P_XY: int = 4
    P_XT: int = 4
    P_YT: int = 4
    R_X: int = 1
    R_Y: int = 1
    R_T: int = 1

    def __post_init__(self):
        for name in ("P_XY", "P_XT", "P_YT"):
            if getattr(self, name) not in (4, 8):
                raise ValueError(f"{name} must be 4 or 8, got {getattr(self, name)}")
        for name in ("R_X", "R_Y", "R_T"):
            if getattr(self, name) != 1:
                raise ValueError(f"LDBP-TOP is defined for radius 1 only, got {name}={getattr(self, name)}")

    @property
    def P(self) -> tuple[int, int, int]:
        return (self.P_XY, self.P_XT, self.P_YT)

    @property
    def bins_per_block(self) -> int:
        return sum(2 ** p for p in self.P)


class PlaneHistograms(NamedTuple):
    """Raw code histograms of one block, indexable by plane (0=XY, 1=XT, 2=YT)."""

    xy: CodeHistogram
    xt: CodeHistogram
    yt: CodeHistogram


def ldbp_plane_code(volume: VideoVolume, plane: PlaneKind, x: int, y: int, t: int,
                    P: int = 4, stat: str = "median") -> int:
    grid = kirsch_response_grid(plane_patch(volume, plane, x, y, t), stat)
    return ldbp_code(grid, P)


def _check_volume(volume: VideoVolume) -> None:
    T, H, W = volume.shape
    if T < 3:
        raise ValueError(f"planes XT and YT have no codable voxel: need at least 3 frames, got {T}")
    if H < 3 or W < 3:
        raise ValueError(f"LDBP-TOP needs frames of at least 3x3 pixels, got {W}x{H}")


def ldbp_top_code_maps(volume: VideoVolume, params: LdbpTopParams = LdbpTopParams(),
                       stat: str = "median") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-plane code maps over the spatial interior.

    XY has shape ``(T, H-2, W-2)`` indexed ``[t, y-1, x-1]``; XT and YT have
    shape ``(T-2, H-2, W-2)`` indexed ``[t-1, y-1, x-1]``.
    """
    _check_volume(volume)
    d = volume.data
    xy = ldbp_code_map(d, params.P_XY, stat)
    # rows t, columns x, one slice per y
    xt = ldbp_code_map(d.transpose(1, 0, 2), params.P_XT, stat)[1:-1].transpose(1, 0, 2)
    # rows t, columns y, one slice per x
    yt = ldbp_code_map(d.transpose(2, 0, 1), params.P_YT, stat)[1:-1].transpose(1, 2, 0)
    return xy, xt, yt


def ldbp_top_histograms(volume: VideoVolume, block: BlockRect,
                        params: LdbpTopParams = LdbpTopParams(),
                        stat: str = "median") -> PlaneHistograms:
    _check_volume(volume)
    T, H, W = volume.shape
    if block.x0 < 0 or block.y0 < 0 or block.x1 > W or block.y1 > H:
        raise ValueError(f"{block} lies outside the {W}x{H} frame")
    x0, x1 = max(block.x0, 1), min(block.x1, W - 1)
    y0, y1 = max(block.y0, 1), min(block.y1, H - 1)
    if x0 >= x1 or y0 >= y1:
        raise ValueError(f"{block} has no codable voxel in plane XY")
    hists = []
    for p, codes in zip(params.P, ldbp_top_code_maps(volume, params, stat)):
        sub = codes[:, y0 - 1:y1 - 1, x0 - 1:x1 - 1]
        hists.append(CodeHistogram(np.bincount(sub.ravel(), minlength=2 ** p)))
    return PlaneHistograms(*hists)


def ldbp_top_feature(volume: VideoVolume, grid: BlockGrid, params: LdbpTopParams = LdbpTopParams(),
                     stat: str = "median") -> FeatureVector:
    T, H, W = volume.shape
    if (grid.width, grid.height) != (W, H):
        raise ValueError(f"grid is for {grid.width}x{grid.height}, volume frames are {W}x{H}")
    labels = grid.label_map()[1:H - 1, 1:W - 1][None]
    tables = [
        block_histograms(codes, labels, len(grid), 2 ** p)
        for p, codes in zip(params.P, ldbp_top_code_maps(volume, params, stat))
    ]
    meta = FeatureMeta(
        "ldbp-top", params.P, (float(params.R_X), float(params.R_Y), float(params.R_T)),
        (grid.block_w, grid.block_h), (W, H), stat,
    )
    return assemble(tables, meta)


def ldbp_feature(image, grid: BlockGrid, P: int = 4, stat: str = "median") -> FeatureVector:
    """Single-image LDBP: per-block normalized histograms of 2-D LDBP codes."""
    img = as_gray_image(image)
    H, W = img.shape
    if (grid.width, grid.height) != (W, H):
        raise ValueError(f"grid is for {grid.width}x{grid.height}, image is {W}x{H}")
    labels = grid.label_map()[1:H - 1, 1:W - 1]
    table = block_histograms(ldbp_code_map(img, P, stat), labels, len(grid), 2 ** P)
    meta = FeatureMeta("ldbp", (P, 0, 0), (1.0, 0.0, 0.0), (grid.block_w, grid.block_h), (W, H), stat)
    return assemble([table], meta)
