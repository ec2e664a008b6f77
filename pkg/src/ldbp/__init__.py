"""Local directional binary pattern descriptors for grayscale video.

Single-image LBP and LDBP, the volume descriptor VLDBP and the
three-orthogonal-planes descriptor LDBP-TOP, with chi-square KNN
classification. See :mod:`ldbp.harness` for dataset evaluation.
"""

from .classify import LABELS, LabeledSample, chi_square, knn_predict, rank_neighbors
from .codecs import ImageFormatError, load_frame, read_sequence
from .features import CodeHistogram, FeatureMeta, FeatureVector, normalize
from .kirsch import ResponseGrid, kirsch_masks, kirsch_response_grid, ldbp_code
from .lbp import LbpParams, lbp_code, lbp_feature, lbp_histogram, sample_neighbors
from .ldbp_top import (
    LdbpTopParams,
    PlaneHistograms,
    ldbp_feature,
    ldbp_plane_code,
    ldbp_top_feature,
    ldbp_top_histograms,
)
from .vldbp import VldbpParams, vldbp_code, vldbp_feature, vldbp_histogram
from .volume import (
    BlockGrid,
    BlockRect,
    PlaneKind,
    VideoVolume,
    build_volume,
    canonicalize,
    partition_blocks,
    plane_patch,
)

__version__ = "0.1.0"
