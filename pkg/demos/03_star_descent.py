"""
From subspaces down to rays
===========================

A map of 3-subspaces of C^7 is known only as a black box.  Intersecting
the images of a few members of each star gives a map of 2-subspaces, then
of rays, and the ray map is enough to rebuild the operator.
"""

import numpy as np

from wignerkit.hilbert import subspace_distance
from wignerkit.operators import Isometry, OperatorClass
from wignerkit.reconstruct import GrassmannOracle, check_conditions_AB, descend_full
from wignerkit.sampling import random_subspace

rng = np.random.default_rng(3)
n, k = 7, 3

secret = Isometry.random(n, rng, OperatorClass.LINEAR)
f = GrassmannOracle.from_isometry(secret, k)

# %%
# Adjacency and ortho-adjacency are kept, as they must be for an induced map
ab = check_conditions_AB(f, samples=40)
print("A:", ab.details["A"], " B:", ab.details["B"])

# %%
result = descend_full(f, seed=1)
print("levels:", result.details["levels"])
print("containments checked:", result.details["containments_checked"])
print("class:", result.op_class)

# %%
# Compare with the black box on subspaces it was never asked about
worst = max(
    subspace_distance(result.isometry.apply_subspace(x), f(x))
    for x in (random_subspace(n, k, rng) for _ in range(50))
)
print(f"max projection deviation on 50 fresh subspaces: {worst:.1e}")

# %%
# A constant map breaks ortho-adjacency at once
const = GrassmannOracle.constant(random_subspace(n, k, rng))
print("constant map A:", check_conditions_AB(const, samples=10).details["A"])
