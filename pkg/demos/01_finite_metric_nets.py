"""
Coverings, packings, and certified nets on finite metric spaces
===============================================================

A greedy maximal packing is automatically a covering at the same scale,
which makes it a cheap certified net. Exact covering and packing numbers
from branch-and-bound search sandwich each other across scales.
"""

import numpy as np

from dynnets import (
    FiniteMetricSpace,
    ball_covering_bounds,
    brute_force_covering_number,
    brute_force_packing_number,
    greedy_maximal_packing,
)

# Eight points equally spaced on the unit circle, chordal distances.
angles = 2.0 * np.pi * np.arange(8) / 8
points = [(float(np.cos(a)), float(np.sin(a))) for a in angles]
circle8 = FiniteMetricSpace.from_coords(points)
print("adjacent chord length:", round(float(circle8.matrix[0, 1]), 4))

# A greedy maximal packing at eps = 0.8: every selected pair is more than
# 0.8 apart, and every point of the space is within 0.8 of a selection.
net = greedy_maximal_packing(circle8, 0.8, seed=0)
print("greedy net size:", len(net.selected))
print("certified covering:", net.is_covering, "| packing:", net.is_packing)

# Exact numbers bracket the greedy result.
cover = brute_force_covering_number(circle8, 0.8)
pack = brute_force_packing_number(circle8, 0.8)
print("exact covering number N(0.8):", cover)
print("exact packing number N_pack(0.8):", pack)

# The sandwich N_pack(2 eps) <= N(eps) <= N_pack(eps) on random spaces.
rng = np.random.default_rng(11)
for trial in range(3):
    pts = [tuple(row) for row in rng.normal(size=(10, 3))]
    space = FiniteMetricSpace.from_coords(pts)
    eps = 0.5 * float(space.matrix.max()) / 2
    lo = brute_force_packing_number(space, 2 * eps)
    mid = brute_force_covering_number(space, eps)
    hi = brute_force_packing_number(space, eps)
    print(f"trial {trial}: N_pack(2e)={lo} <= N(e)={mid} <= N_pack(e)={hi}")

# Volumetric bounds for a Euclidean ball: (R/eps)^D <= N <= (1 + 2R/eps)^D.
lower, upper = ball_covering_bounds(radius=np.pi, dim=4, epsilon=0.1)
print(f"ball covering bounds, R=pi, D=4, eps=0.1: "
      f"[{lower:.4g}, {upper:.4g}]")
