"""
Principal angles and the Grassmann graph
========================================

Two k-subspaces of C^n are compared through their principal angles.  The
number of nonzero angles is the graph distance, and a geodesic swaps one
principal direction per step.
"""

import numpy as np

from wignerkit.grassmann import geodesic, grassmann_distance, is_compatible, principal_angles
from wignerkit.hilbert import coordinate_subspace, dim, intersect
from wignerkit.sampling import random_pair_with_intersection

rng = np.random.default_rng(7)

# %%
# A pair of 3-subspaces of C^7 meeting in a line
x, y = random_pair_with_intersection(7, 3, 1, rng)
pa = principal_angles(x, y)
print("angles:", np.round(pa.angles, 6))
print("dim of intersection:", dim(intersect(x, y)))
print("graph distance:", grassmann_distance(x, y))

# %%
# The geodesic keeps the common line and rotates the other two directions
path = geodesic(x, y)
for i, node in enumerate(path):
    print(f"step {i}: distance to x = {grassmann_distance(x, node)}")

# %%
# Between orthogonal subspaces every node of the geodesic is compatible with
# every other one (their projections commute)
a, b = coordinate_subspace(5, [0, 1]), coordinate_subspace(5, [2, 3])
nodes = list(geodesic(a, b))
print("pairwise compatible:", all(is_compatible(p, q) for p in nodes for q in nodes))
