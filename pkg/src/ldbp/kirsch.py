"""Kirsch compass masks, directional response grids and the 2-D LDBP code.

Response ``i`` of a 3x3 patch is ``|sum(patch * m_i)|``. Responses are laid
out on the eight outer cells of a 3x3 grid clockwise from the top-left
corner, so ``m_0`` sits at TL, ``m_1`` at TM, ... and ``m_7`` at ML. The
centre cell holds the median (or mean) of the eight responses.

Comparisons against a median or mean are done in exact integer arithmetic:
``K >= median`` is evaluated as ``2 K >= s[3] + s[4]`` and ``K >= mean`` as
``8 K >= sum``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = [
    "CENTER_STATS",
    "GRID_POSITIONS",
    "CARDINAL_MASKS",
    "ResponseGrid",
    "kirsch_masks",
    "kirsch_response_grid",
    "center_statistic",
    "ldbp_code",
    "kirsch_response_maps",
    "scaled_center",
    "ldbp_code_map",
]

CenterStat = Literal["median", "mean"]
CENTER_STATS = ("median", "mean")

#: grid cell of each response, clockwise from top-left: m_i -> GRID_POSITIONS[i]
GRID_POSITIONS = ("TL", "TM", "TR", "MR", "BR", "BM", "BL", "ML")

#: responses read by the 4-neighbour code, counter-clockwise from east:
#: right (MR), top (TM), left (ML), bottom (BM)
CARDINAL_MASKS = (3, 1, 7, 5)

_MASKS = np.array(
    [
        [[-3, -3, 5], [-3, 0, 5], [-3, -3, 5]],
        [[-3, 5, 5], [-3, 0, 5], [-3, -3, -3]],
        [[5, 5, 5], [-3, 0, -3], [-3, -3, -3]],
        [[5, 5, -3], [5, 0, -3], [-3, -3, -3]],
        [[5, -3, -3], [5, 0, -3], [5, -3, -3]],
        [[-3, -3, -3], [5, 0, -3], [5, 5, -3]],
        [[-3, -3, -3], [-3, 0, -3], [5, 5, 5]],
        [[-3, -3, -3], [-3, 0, 5], [-3, 5, 5]],
    ],
    dtype=np.int64,
)
_MASKS.flags.writeable = False

_CELL = {"TL": (0, 0), "TM": (0, 1), "TR": (0, 2), "MR": (1, 2),
         "BR": (2, 2), "BM": (2, 1), "BL": (2, 0), "ML": (1, 0)}


def kirsch_masks() -> np.ndarray:
    """The eight Kirsch compass templates, shape ``(8, 3, 3)``, ``m_0`` first."""
    return _MASKS.copy()


def _check_stat(stat: str) -> None:
    if stat not in CENTER_STATS:
        raise ValueError(f"center statistic must be 'median' or 'mean', got {stat!r}")


def center_statistic(responses, stat: CenterStat = "median") -> float:
    """Median (mean of the 4th and 5th order statistics) or mean of 8 responses."""
    _check_stat(stat)
    r = sorted(int(v) for v in responses)
    if stat == "median":
        return (r[3] + r[4]) / 2
    return sum(r) / 8


@dataclass(frozen=True)
class ResponseGrid:
    """Eight absolute Kirsch responses of one patch and their centre statistic.

    ``responses[i]`` is the response to mask ``m_i``.
    """

    responses: tuple[int, ...]
    center: float

    def __getitem__(self, position: str) -> int:
        return self.responses[GRID_POSITIONS.index(position)]

    def as_matrix(self) -> np.ndarray:
        """3x3 float matrix in grid layout with the centre statistic in the middle."""
        out = np.empty((3, 3))
        for i, pos in enumerate(GRID_POSITIONS):
            out[_CELL[pos]] = self.responses[i]
        out[1, 1] = self.center
        return out


def kirsch_response_grid(patch, stat: CenterStat = "median") -> ResponseGrid:
    patch = np.asarray(patch, dtype=np.int64)
    if patch.shape != (3, 3):
        raise ValueError(f"Kirsch patch must be 3x3, got shape {patch.shape}")
    responses = tuple(int(v) for v in np.abs(np.tensordot(_MASKS, patch, axes=([1, 2], [0, 1]))))
    return ResponseGrid(responses, center_statistic(responses, stat))


def ldbp_code(grid: ResponseGrid, P: int = 4, threshold: float | None = None) -> int:
    """Threshold a response grid into a ``P``-bit LDBP code.

    ``P=4`` reads the cardinal cells right, top, left, bottom as bits 0..3;
    ``P=8`` reads ``m_0 .. m_7`` as bits 0..7. The threshold defaults to the
    grid's own centre statistic. A bit is set when the response is ``>=``
    the threshold.
    """
    if threshold is None:
        threshold = grid.center
    if P == 4:
        idx = CARDINAL_MASKS
    elif P == 8:
        idx = range(8)
    else:
        raise ValueError(f"LDBP supports P=4 or P=8, got P={P}")
    return sum(1 << bit for bit, i in enumerate(idx) if grid.responses[i] >= threshold)


# --------------------------------------------------------------------------- dense maps


def kirsch_response_maps(a: np.ndarray) -> np.ndarray:
    """Absolute Kirsch responses for every interior pixel of the last two axes.

    ``a`` has shape ``(..., R, C)``; the result has shape ``(8, ..., R-2, C-2)``
    and dtype int32, with entry ``[i, ..., r, c]`` the response to ``m_i`` of
    the 3x3 patch centred on ``a[..., r+1, c+1]``.
    """
    a = np.asarray(a, dtype=np.int32)
    R, C = a.shape[-2:]
    if R < 3 or C < 3:
        raise ValueError(f"need at least 3x3 samples, got {R}x{C}")

    def cell(dy, dx):
        return a[..., 1 + dy:R - 1 + dy, 1 + dx:C - 1 + dx]

    # neighbours clockwise from TL; mask m_i puts +5 on ring cells 2-i, 3-i, 4-i
    ring = [cell(-1, -1), cell(-1, 0), cell(-1, 1), cell(0, 1),
            cell(1, 1), cell(1, 0), cell(1, -1), cell(0, -1)]
    total = sum(ring)
    pair = [ring[k] + ring[(k + 1) % 8] for k in range(8)]
    out = np.empty((8,) + total.shape, dtype=np.int32)
    for i in range(8):
        k = (2 - i) % 8
        strong = pair[k] + ring[(k + 2) % 8]
        # 5*strong - 3*(total - strong)
        np.abs(8 * strong - 3 * total, out=out[i])
    return out


def scaled_center(responses: np.ndarray, stat: CenterStat = "median") -> tuple[int, np.ndarray]:
    """Centre statistic as ``(scale, scale * statistic)`` in exact integers."""
    _check_stat(stat)
    if stat == "median":
        s = np.sort(responses, axis=0)
        return 2, s[3].astype(np.int64) + s[4]
    return 8, responses.sum(axis=0, dtype=np.int64)


def ldbp_code_map(a: np.ndarray, P: int = 4, stat: CenterStat = "median") -> np.ndarray:
    """LDBP code of every interior pixel of the last two axes of ``a``."""
    if P == 4:
        idx = CARDINAL_MASKS
    elif P == 8:
        idx = tuple(range(8))
    else:
        raise ValueError(f"LDBP supports P=4 or P=8, got P={P}")
    resp = kirsch_response_maps(a)
    scale, center = scaled_center(resp, stat)
    codes = np.zeros(resp.shape[1:], dtype=np.int64)
    for bit, i in enumerate(idx):
        codes |= (scale * resp[i].astype(np.int64) >= center).astype(np.int64) << bit
    return codes
