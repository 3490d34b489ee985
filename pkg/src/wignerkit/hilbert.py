"""
Complex linear algebra on C^n: rays, subspaces and the subspace lattice.

All subspaces are stored as matrices with orthonormal columns.  Numerical
rank is decided by a scale-relative singular-value cutoff, and subspace
equality is decided by the Frobenius distance between orthogonal
projections, so nothing here depends on the particular basis chosen.
"""

import dataclasses
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, EmptySpanError, ZeroComplementError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Ray",
    "Subspace",
    "as_vector",
    "canonical_phase",
    "inner",
    "numerical_rank",
    "orthonormalize",
    "complement",
    "subspace_sum",
    "intersect",
    "dim",
    "projection_of",
    "subspace_distance",
    "same_subspace",
    "is_contained",
    "ray_distance",
    "coordinate_subspace",
    "basis_vector",
]

PHASE_CUTOFF = 1e-12


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used across the toolkit.

    Parameters
    ----------
    eps_rank : float
        Relative singular-value cutoff for numerical rank.
    eps_orth : float
        Threshold below which an inner product or commutator counts as zero.
    eps_eq : float
        Projection distance below which two subspaces are equal.
    eps_angle : float
        Principal angles at or below this value (radians) count as zero.
    eps_reconstruct : float
        Maximal ray deviation accepted when certifying a reconstruction.
    """

    eps_rank: float = 1e-9
    eps_orth: float = 1e-8
    eps_eq: float = 1e-8
    eps_angle: float = 1e-7
    eps_reconstruct: float = 1e-8

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"tolerance {name} must be positive, got {value!r}")
        if self.eps_rank > 1e-6:
            raise ValueError("eps_rank must not exceed 1e-6")

    def as_dict(self):
        return dataclasses.asdict(self)

    def replace(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)


DEFAULT_TOL = Tolerance()


def as_vector(x):
    """Coerce ``x`` to a finite 1-D complex array."""
    v = np.asarray(x, dtype=complex)
    if v.ndim == 2 and 1 in v.shape:
        v = v.reshape(-1)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"expected a nonempty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def canonical_phase(v):
    """Rotate ``v`` so that its first entry of modulus > 1e-12 is real positive."""
    idx = np.flatnonzero(np.abs(v) > PHASE_CUTOFF)
    if idx.size == 0:
        return v
    a = v[idx[0]]
    return v * (abs(a) / a)


@dataclass(frozen=True, eq=False)
class Ray:
    """A 1-dimensional subspace of C^n stored as a phase-canonical unit vector.

    Any nonzero vector is accepted; it is normalized and phase-fixed on
    construction.
    """

    vector: np.ndarray

    def __post_init__(self):
        v = as_vector(self.vector)
        nv = np.linalg.norm(v)
        if nv == 0:
            raise EmptySpanError("empty span")
        v = canonical_phase(v / nv)
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    @property
    def n(self):
        return self.vector.shape[0]

    @cached_property
    def subspace(self):
        return Subspace(self.vector[:, None])

    @cached_property
    def projection(self):
        return np.outer(self.vector, self.vector.conj())

    def __repr__(self):
        return f"Ray({np.array2string(self.vector, precision=4)})"


@dataclass(frozen=True, eq=False)
class Subspace:
    """A k-dimensional subspace of C^n with an orthonormal basis.

    Use :func:`orthonormalize` (or :meth:`Subspace.span`) to build one from
    arbitrary spanning vectors; the constructor itself only validates.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b[:, None]
        if b.ndim != 2:
            raise ValueError("basis must be a 2-D array")
        n, k = b.shape
        if not 1 <= k <= n:
            raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis has non-finite entries")
        if np.linalg.norm(b.conj().T @ b - np.eye(k)) > DEFAULT_TOL.eps_orth:
            raise ValueError("basis columns are not orthonormal")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, *vectors, tol=DEFAULT_TOL):
        return orthonormalize(vectors, tol)

    @property
    def n(self):
        return self.basis.shape[0]

    @property
    def k(self):
        return self.basis.shape[1]

    @cached_property
    def projection(self):
        return self.basis @ self.basis.conj().T

    def contains(self, x, tol=DEFAULT_TOL):
        """True if the vector ``x`` lies in this subspace (relative test)."""
        v = as_vector(x)
        r = v - self.projection @ v
        return np.linalg.norm(r) <= tol.eps_eq * max(np.linalg.norm(v), 1.0)

    def __repr__(self):
        return f"Subspace(n={self.n}, k={self.k})"


def _check_same_n(a, b):
    if a != b:
        raise DimensionMismatch(f"ambient dimensions differ: {a} != {b}")


def inner(x, y):
    """Hermitian product, linear in ``x`` and conjugate-linear in ``y``."""
    x, y = as_vector(x), as_vector(y)
    _check_same_n(x.size, y.size)
    return complex(np.vdot(y, x))


def _singular_values(a):
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(a, tol=DEFAULT_TOL):
    """Number of singular values above ``eps_rank`` times the largest one."""
    s = _singular_values(np.asarray(a, dtype=complex))
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol.eps_rank * s[0]))


def _column_matrix(vectors):
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        return np.asarray(vectors, dtype=complex)
    cols = [as_vector(v) for v in vectors]
    if not cols:
        raise ValueError("need at least one vector")
    n = cols[0].size
    for c in cols:
        _check_same_n(n, c.size)
    return np.column_stack(cols)


def orthonormalize(vectors, tol=DEFAULT_TOL):
    """Orthonormal basis of the span of ``vectors``.

    ``vectors`` is a sequence of equal-length vectors or an n x m matrix whose
    columns are the vectors.  Gram-Schmidt is run with a second
    reorthogonalization pass per column; its output dimension is checked
    against the SVD rank and replaced by the SVD basis if the two ever
    disagree.

    Raises
    ------
    EmptySpanError
        If the input has numerical rank 0.
    """
    a = _column_matrix(vectors)
    if not np.all(np.isfinite(a)):
        raise ValueError("input has non-finite entries")
    r = numerical_rank(a, tol)
    if r == 0:
        raise EmptySpanError("empty span")

    scale = np.max(np.linalg.norm(a, axis=0))
    n = a.shape[0]
    q = np.empty((n, min(n, a.shape[1])), dtype=complex)
    m = 0
    for col in a.T:
        v = col.copy()
        for _ in range(2):
            v -= q[:, :m] @ (q[:, :m].conj().T @ v)
        nv = np.linalg.norm(v)
        if nv > tol.eps_rank * scale and m < q.shape[1]:
            q[:, m] = v / nv
            m += 1
    if m == r:
        basis = q[:, :m]
    else:
        u, _, _ = np.linalg.svd(a, full_matrices=False)
        basis = u[:, :r]
    return Subspace(basis)


def _as_subspace(s):
    return s.subspace if isinstance(s, Ray) else s


def complement(s, tol=DEFAULT_TOL):
    """Orthogonal complement of ``s`` in C^n.

    Raises
    ------
    ZeroComplementError
        If ``s`` is the whole space.
    """
    s = _as_subspace(s)
    if s.k == s.n:
        raise ZeroComplementError("zero complement")
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(u[:, s.k:])


def subspace_sum(s, t, tol=DEFAULT_TOL):
    """Span of the union of two subspaces."""
    s, t = _as_subspace(s), _as_subspace(t)
    _check_same_n(s.n, t.n)
    return orthonormalize(np.hstack([s.basis, t.basis]), tol)


def intersect(s, t, tol=DEFAULT_TOL):
    """Intersection of two subspaces, or ``None`` when it is zero.

    Computed as the complement of the sum of complements, so its rank is
    decided by the same singular-value cutoff as :func:`subspace_sum`.
    """
    s, t = _as_subspace(s), _as_subspace(t)
    _check_same_n(s.n, t.n)
    if s.k == s.n:
        return t
    if t.k == t.n:
        return s
    w = subspace_sum(complement(s, tol), complement(t, tol), tol)
    if w.k == w.n:
        return None
    return complement(w, tol)


def dim(s):
    """Dimension of a subspace, with ``None`` standing for the zero space."""
    return 0 if s is None else _as_subspace(s).k


def projection_of(s):
    """Orthogonal projection onto ``s`` as an n x n Hermitian matrix."""
    return _as_subspace(s).projection


def subspace_distance(s, t):
    """Frobenius distance between the orthogonal projections onto ``s`` and ``t``."""
    s, t = _as_subspace(s), _as_subspace(t)
    _check_same_n(s.n, t.n)
    return float(np.linalg.norm(s.projection - t.projection))


def same_subspace(s, t, tol=DEFAULT_TOL):
    return subspace_distance(s, t) < tol.eps_eq


def is_contained(s, t, tol=DEFAULT_TOL):
    """True if ``s`` is a subspace of ``t`` (within ``eps_eq``)."""
    s, t = _as_subspace(s), _as_subspace(t)
    _check_same_n(s.n, t.n)
    if s.k > t.k:
        return False
    r = s.basis - t.projection @ s.basis
    return float(np.linalg.norm(r)) < tol.eps_eq


def ray_distance(p, q):
    """Projection distance between two rays.

    Equal to ``sqrt(2) * sin(angle)``; evaluated from the orthogonal residual
    rather than from ``1 - |<p,q>|**2`` to keep full precision near zero.
    """
    p = p.vector if isinstance(p, Ray) else Ray(p).vector
    q = q.vector if isinstance(q, Ray) else Ray(q).vector
    _check_same_n(p.size, q.size)
    r = q - p * np.vdot(p, q)
    return float(np.sqrt(2.0) * np.linalg.norm(r))


def basis_vector(n, j):
    """The j-th standard basis vector of C^n (0-based)."""
    e = np.zeros(n, dtype=complex)
    e[j] = 1.0
    return e


def coordinate_subspace(n, indices):
    """Span of the standard basis vectors with the given 0-based indices."""
    return Subspace(np.eye(n, dtype=complex)[:, list(indices)])
