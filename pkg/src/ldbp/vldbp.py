"""Volume local directional binary patterns.

The code of voxel ``(x, y, t)`` combines Kirsch response grids of the frames
``t-L``, ``t`` and ``t+L`` at ``(x, y)``. Every sampled response is
thresholded against the centre statistic of the middle frame. Bits, from
least significant:

====== ==============================================
bit    source
====== ==============================================
0      previous frame, centre statistic
1-4    previous frame, right / top / left / bottom
5-8    middle frame, right / top / left / bottom
9-12   posterior frame, right / top / left / bottom
13     posterior frame, centre statistic
====== ==============================================

For ``P=4`` this gives ``3P+2 = 14`` bits and a 16384-bin histogram.

With ``R > 1`` the directional sample for "right" is the ``m_3`` response
of the 3x3 patch centred ``R-1`` pixels to the right (likewise for the
other directions), so the outermost pixel read lies ``R`` pixels away and
``R=1`` reduces to reading the central patch's own grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import CodeHistogram, FeatureMeta, FeatureVector, assemble, block_histograms
from .kirsch import CARDINAL_MASKS, kirsch_response_grid, kirsch_response_maps, scaled_center
from .volume import BlockGrid, BlockRect, VideoVolume

__all__ = ["VldbpParams", "vldbp_code", "vldbp_code_map", "vldbp_histogram", "vldbp_feature"]

# (dx, dy) per cardinal sample: right, top, left, bottom; y grows downward
_DIRECTIONS = ((1, 0), (0, -1), (-1, 0), (0, 1))


@dataclass(frozen=True)
class VldbpParams:
    L: int = 1
    P: int = 4
    R: int = 1

    def __post_init__(self):
        if self.P != 4:
            raise ValueError(f"VLDBP is defined for P=4 only, got P={self.P}")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if int(self.R) != self.R or self.R < 1:
            raise ValueError(f"R must be a positive integer, got {self.R}")

    @property
    def bits(self) -> int:
        return 3 * self.P + 2

    @property
    def n_bins(self) -> int:
        return 2 ** self.bits


def _check_volume(volume: VideoVolume, params: VldbpParams) -> None:
    T, H, W = volume.shape
    if T < 2 * params.L + 1:
        raise ValueError(f"VLDBP with L={params.L} needs at least {2 * params.L + 1} frames, got {T}")
    if W < 2 * params.R + 1 or H < 2 * params.R + 1:
        raise ValueError(f"VLDBP with R={params.R} needs frames of at least {2 * params.R + 1} pixels")


def vldbp_code(volume: VideoVolume, x: int, y: int, t: int,
               params: VldbpParams = VldbpParams(), stat: str = "median") -> int:
    """Code of a single voxel, computed directly from 3x3 patches."""
    _check_volume(volume, params)
    T, H, W = volume.shape
    L, R = params.L, params.R
    if not (R <= x <= W - 1 - R and R <= y <= H - 1 - R):
        raise IndexError(f"({x}, {y}) is within {R} pixels of the frame border")
    if not L <= t <= T - 1 - L:
        raise IndexError(f"t={t} is outside [{L}, {T - 1 - L}]")
    d = volume.data
    grids = {}

    def grid(frame, cx, cy):
        if (frame, cx, cy) not in grids:
            grids[frame, cx, cy] = kirsch_response_grid(d[frame, cy - 1:cy + 2, cx - 1:cx + 2], stat)
        return grids[frame, cx, cy]

    def samples(frame):
        out = []
        for (dx, dy), k in zip(_DIRECTIONS, CARDINAL_MASKS):
            g = grid(frame, x + (R - 1) * dx, y + (R - 1) * dy)
            out.append(g.responses[k])
        return out

    k_c = grid(t, x, y).center
    values = [grid(t - L, x, y).center, *samples(t - L), *samples(t), *samples(t + L),
              grid(t + L, x, y).center]
    return sum(1 << i for i, v in enumerate(values) if v >= k_c)


def vldbp_code_map(volume: VideoVolume, params: VldbpParams = VldbpParams(),
                   stat: str = "median") -> np.ndarray:
    """Codes of all codable voxels.

    Returns shape ``(T - 2L, H - 2R, W - 2R)``; entry ``[k, j, i]`` is the
    code of voxel ``(R + i, R + j, L + k)``.
    """
    _check_volume(volume, params)
    T, H, W = volume.shape
    L, R = params.L, params.R
    resp = kirsch_response_maps(volume.data)  # [m, t, y-1, x-1]
    scale, center = scaled_center(resp, stat)

    def rows(frames: slice, dx: int = 0, dy: int = 0):
        oy, ox = (R - 1) * dy, (R - 1) * dx
        return (frames, slice(R - 1 + oy, H - 1 - R + oy), slice(R - 1 + ox, W - 1 - R + ox))

    prev, mid, post = slice(0, T - 2 * L), slice(L, T - L), slice(2 * L, T)
    k_c = center[rows(mid)]
    codes = np.zeros(k_c.shape, dtype=np.int64)
    bit = 0

    def put(values):
        nonlocal bit, codes
        codes |= (values >= k_c).astype(np.int64) << bit
        bit += 1

    put(center[rows(prev)])
    for frames in (prev, mid, post):
        for (dx, dy), k in zip(_DIRECTIONS, CARDINAL_MASKS):
            put(scale * resp[k][rows(frames, dx, dy)].astype(np.int64))
    put(center[rows(post)])
    return codes


def vldbp_histogram(volume: VideoVolume, block: BlockRect, params: VldbpParams = VldbpParams(),
                    stat: str = "median") -> CodeHistogram:
    """Raw histogram over the codable voxels of ``block`` along the full usable time span."""
    _check_volume(volume, params)
    T, H, W = volume.shape
    R = params.R
    if block.x0 < 0 or block.y0 < 0 or block.x1 > W or block.y1 > H:
        raise ValueError(f"{block} lies outside the {W}x{H} frame")
    x0, x1 = max(block.x0, R), min(block.x1, W - R)
    y0, y1 = max(block.y0, R), min(block.y1, H - R)
    if x0 >= x1 or y0 >= y1:
        raise ValueError(f"{block} has no codable voxel for R={R}")
    codes = vldbp_code_map(volume, params, stat)[:, y0 - R:y1 - R, x0 - R:x1 - R]
    return CodeHistogram(np.bincount(codes.ravel(), minlength=params.n_bins))


def vldbp_feature(volume: VideoVolume, grid: BlockGrid, params: VldbpParams = VldbpParams(),
                  stat: str = "median") -> FeatureVector:
    """Per-block normalized VLDBP histograms, concatenated in row-major block order."""
    T, H, W = volume.shape
    if (grid.width, grid.height) != (W, H):
        raise ValueError(f"grid is for {grid.width}x{grid.height}, volume frames are {W}x{H}")
    R = params.R
    codes = vldbp_code_map(volume, params, stat)
    labels = grid.label_map()[R:H - R, R:W - R]
    table = block_histograms(codes, labels[None], len(grid), params.n_bins)
    meta = FeatureMeta(
        "vldbp", (params.P, 0, 0), (float(R), 0.0, 0.0),
        (grid.block_w, grid.block_h), (W, H), stat, params.L,
    )
    return assemble([table], meta)
