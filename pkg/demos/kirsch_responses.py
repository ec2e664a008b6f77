"""
Directional responses and the 14-bit volume code
================================================

Walks one voxel through the whole VLDBP(1, 4, 1) computation: three 3x3
gray patches, their Kirsch response grids, and the final code.
"""

import numpy as np

from ldbp import VideoVolume, kirsch_masks, kirsch_response_grid, ldbp_code, vldbp_code

# The eight compass masks. Each is the previous-but-one rotated by 90 degrees.
masks = kirsch_masks()
print(masks[0])
print(np.array_equal(masks[2], np.rot90(masks[0])))

# Three consecutive frames around one pixel
previous = [[65, 154, 34], [187, 131, 131], [78, 56, 243]]
middle = [[45, 86, 21], [96, 89, 87], [176, 85, 241]]
posterior = [[32, 189, 245], [45, 230, 230], [252, 9, 42]]

# Response i sits on the ring clockwise from the top-left corner; the
# centre cell holds the median of the eight.
for name, patch in (("previous", previous), ("middle", middle), ("posterior", posterior)):
    grid = kirsch_response_grid(patch)
    print(name)
    print(grid.as_matrix().astype(int))

# Thresholding the middle grid against its own centre gives the 2-D code.
mid = kirsch_response_grid(middle)
print("LDBP, 4 neighbours:", ldbp_code(mid, 4))
print("LDBP, 8 neighbours:", ldbp_code(mid, 8))

# The volume code thresholds all three frames against the middle centre.
volume = VideoVolume(np.array([previous, middle, posterior]))
code = vldbp_code(volume, 1, 1, 1)
print(code, format(code, "014b"))
