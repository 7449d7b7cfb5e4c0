"""Minimum distance of the BEC reliability design as the channel improves.

As the erasure probability falls the reliability ranking moves toward the
Reed-Muller order, so the minimum selected row weight climbs in steps and
settles on 2^(m - r*), where r* is the smallest RM order whose dimension
reaches K.
"""

import numpy as np

from polarforge.construction import rm_rstar, staircase_sweep

m, K = 8, 128
rho = -np.log(np.geomspace(0.5, 1e-6, 50))
points = staircase_sweep(m, K, "bec", rho)

print(f"N = {1 << m}, K = {K}, plateau 2^(m - r*) = {1 << (m - rm_rstar(m, K))}")
for p in points:
    if p.jump or p is points[0]:
        print(f"  erasure {np.exp(-p.rho):9.3g}: wmin {p.wmin:3d}  row weights {p.row_weight_hist}")
print(f"  erasure {np.exp(-points[-1].rho):9.3g}: wmin {points[-1].wmin:3d}")
