"""
Reading an isometry off a ray map
=================================

A map of rays induced by a unitary or an anti-unitary operator is tabulated
on a handful of anchor rays.  The operator is recovered up to a phase, and
the table decides which of the two kinds it was.
"""

import numpy as np

from wignerkit.hilbert import Ray, complement
from wignerkit.operators import Isometry, OperatorClass, required_rays
from wignerkit.reconstruct import classify_and_reconstruct, tabulate, verify_induced
from wignerkit.sampling import random_ray

rng = np.random.default_rng(11)
n = 4

# %%
# An anti-unitary: complex conjugation followed by a random unitary
secret = Isometry.random(n, rng, OperatorClass.CONJUGATE_LINEAR)
rays = required_rays(n) + [random_ray(n, rng) for _ in range(20)]
table = tabulate(secret, rays)
print(f"{len(table)} tabulated rays, {len(required_rays(n))} of them anchors")

# %%
result = classify_and_reconstruct(table)
print("class:", result.op_class)
print("worst ray deviation:", f"{result.residual:.1e}")

# the matrices agree up to a global phase
overlap = result.matrix.conj().T @ secret.matrix
print("phase:", np.round(overlap[0, 0], 6), " off-diagonal:", f"{np.abs(overlap - overlap[0, 0] * np.eye(n)).max():.1e}")

# %%
# Corrupt one entry; the certificate points at it
table.images[-1] = Ray(complement(table.images[-1]).basis[:, 0])
report = verify_induced(table, result)
print("passes:", report.passed, " flagged rows:", [v["index"] for v in report.violations])
