"""Seeded generators for random unitaries, subspaces and rays."""

import numpy as np

from .hilbert import Ray, Subspace, orthonormalize


def make_rng(seed=None):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n, rng):
    """Haar-distributed n x n unitary (QR of a Ginibre matrix with phase fix)."""
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_ray(n, rng):
    return Ray(complex_gaussian(rng, n))


def random_subspace(n, k, rng):
    return Subspace(random_unitary(n, rng)[:, :k])


def random_subspace_in(s, k, rng):
    """Random k-dimensional subspace of the subspace ``s``."""
    coeffs = random_unitary(s.k, rng)[:, :k]
    return Subspace(s.basis @ coeffs)


def random_pair_with_intersection(n, k, j, rng):
    """Two k-subspaces of C^n whose intersection has dimension exactly ``j``.

    Requires ``2k - j <= n``.
    """
    if not 0 <= j <= k or 2 * k - j > n:
        raise ValueError(f"no such pair for n={n}, k={k}, j={j}")
    w = random_unitary(n, rng)
    common = w[:, :j]
    x_rest = w[:, j:k]
    # the Y-only directions are mixed with X-only ones so the angles are generic
    y_rest = w[:, k:2 * k - j]
    if k > j:
        c = random_unitary(k - j, rng)
        theta = rng.uniform(0.2, 1.4, size=k - j)
        y_rest = (x_rest @ c) * np.cos(theta) + (y_rest @ c) * np.sin(theta)
    x = Subspace(np.hstack([common, x_rest]))
    y = orthonormalize(np.hstack([common, y_rest]))
    return x, y


def random_orthogonal_pair(n, k, rng):
    if 2 * k > n:
        raise ValueError("orthogonal k-subspaces need 2k <= n")
    w = random_unitary(n, rng)
    return Subspace(w[:, :k]), Subspace(w[:, k:2 * k])
