"""
Grassmannians G_k(C^n): principal angles, adjacency, compatibility,
graph distance and geodesics, stars and tops, and compatible cliques.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    PreconditionError,
    RankInstability,
    ToleranceBreakdown,
    ZeroComplementError,
)
from .hilbert import (
    DEFAULT_TOL,
    Subspace,
    canonical_phase,
    complement,
    dim,
    intersect,
    is_contained,
    orthonormalize,
    same_subspace,
    subspace_sum,
)
from .sampling import complex_gaussian, make_rng, random_unitary

HALF_PI = np.pi / 2


def _check_pair(x, y, same_k=True):
    if x.n != y.n:
        raise DimensionMismatch(f"ambient dimensions differ: {x.n} != {y.n}")
    if same_k and x.k != y.k:
        raise DimensionMismatch(f"subspace dimensions differ: {x.k} != {y.k}")


@dataclass(frozen=True, eq=False)
class PrincipalAngles:
    """Principal angles in ascending order, each in [0, pi/2]."""

    angles: np.ndarray

    def __len__(self):
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)

    def nonzero_count(self, tol=DEFAULT_TOL):
        return int(np.count_nonzero(self.angles > tol.eps_angle))

    def marginal(self, tol=DEFAULT_TOL):
        """True if an angle sits within a factor 10 of the zero or right-angle threshold."""
        lo, hi = tol.eps_angle / 10, tol.eps_angle * 10
        near_zero = (self.angles >= lo) & (self.angles <= hi)
        gap = HALF_PI - self.angles
        near_right = (gap >= lo) & (gap <= hi)
        return bool(np.any(near_zero | near_right))


def principal_angles(x, y, tol=DEFAULT_TOL):
    """Principal angles between two k-dimensional subspaces.

    The cosines are the singular values of ``X* Y``.  Angles below pi/4 are
    taken instead from the sines (singular values of ``(I - P_X) Y``), where
    ``arccos`` would lose half the digits.
    """
    _check_pair(x, y)
    cos = np.linalg.svd(x.basis.conj().T @ y.basis, compute_uv=False)
    theta = np.arccos(np.clip(cos, 0.0, 1.0))
    small = theta < np.pi / 4
    if np.any(small):
        resid = y.basis - x.projection @ y.basis
        sin = np.sort(np.linalg.svd(resid, compute_uv=False))
        theta = np.where(small, np.arcsin(np.clip(sin, 0.0, 1.0)), theta)
    return PrincipalAngles(np.clip(np.sort(theta), 0.0, HALF_PI))


def is_adjacent(x, y, tol=DEFAULT_TOL):
    """Exactly one principal angle is nonzero, i.e. dim(X ∩ Y) = k - 1."""
    return principal_angles(x, y, tol).nonzero_count(tol) == 1


def is_orthogonal(x, y, tol=DEFAULT_TOL):
    _check_pair(x, y, same_k=False)
    return float(np.linalg.norm(x.basis.conj().T @ y.basis)) < tol.eps_orth


def commutator_norm(x, y):
    p, q = x.projection, y.projection
    return float(np.linalg.norm(p @ q - q @ p))


def is_compatible(x, y, tol=DEFAULT_TOL):
    """The orthogonal projections onto ``x`` and ``y`` commute."""
    _check_pair(x, y, same_k=False)
    return commutator_norm(x, y) < tol.eps_orth


def is_ortho_adjacent(x, y, tol=DEFAULT_TOL):
    """Adjacent with the single nonzero principal angle equal to pi/2.

    Cross-checked against ``is_adjacent and is_compatible``.

    Raises
    ------
    ToleranceBreakdown
        If the angle test and the commutator test disagree.
    """
    pa = principal_angles(x, y, tol)
    adjacent = pa.nonzero_count(tol) == 1
    by_angle = adjacent and bool(abs(HALF_PI - pa.angles[-1]) <= tol.eps_angle)
    by_commutator = adjacent and is_compatible(x, y, tol)
    if by_angle != by_commutator:
        raise ToleranceBreakdown(
            "tolerance breakdown",
            angles=pa.angles.tolist(),
            commutator=commutator_norm(x, y),
        )
    return by_angle


def grassmann_distance(x, y, tol=DEFAULT_TOL):
    """Distance in the Grassmann graph, ``k - dim(X ∩ Y)``.

    Also computed as ``dim(X + Y) - k`` and as the number of nonzero
    principal angles; all three must agree.

    Raises
    ------
    RankInstability
        If the three counts disagree.
    """
    _check_pair(x, y)
    k = x.k
    by_meet = k - dim(intersect(x, y, tol))
    by_join = subspace_sum(x, y, tol).k - k
    by_angles = principal_angles(x, y, tol).nonzero_count(tol)
    if not by_meet == by_join == by_angles:
        raise RankInstability(
            "rank instability", by_meet=by_meet, by_join=by_join, by_angles=by_angles
        )
    return by_meet


@dataclass(frozen=True, eq=False)
class GrassmannPath:
    nodes: list

    @property
    def length(self):
        return len(self.nodes) - 1

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]

    def is_valid(self, tol=DEFAULT_TOL):
        """Consecutive nodes adjacent, all of the same k and n."""
        first = self.nodes[0]
        if any(s.n != first.n or s.k != first.k for s in self.nodes):
            return False
        return all(is_adjacent(a, b, tol) for a, b in zip(self.nodes, self.nodes[1:]))


def _canonical_basis(w, tol=DEFAULT_TOL):
    """Deterministic orthonormal basis of span(w).

    Gram-Schmidt over the columns of the projection onto the span, in index
    order, so a coordinate subspace gets its standard basis back.
    """
    n, m = w.shape
    p = w @ w.conj().T
    q = []
    for j in range(n):
        v = p[:, j].copy()
        for _ in range(2):
            for u in q:
                v -= np.vdot(u, v) * u
        nv = np.linalg.norm(v)
        if nv > 1e-3:
            q.append(canonical_phase(v / nv))
            if len(q) == m:
                return np.column_stack(q)
    return w


def _angle_clusters(angles, tol):
    clusters, start = [], 0
    for i in range(1, len(angles) + 1):
        if i == len(angles) or angles[i] - angles[i - 1] > tol.eps_angle:
            clusters.append((start, i))
            start = i
    return clusters


def principal_vectors(x, y, tol=DEFAULT_TOL):
    """Paired principal vectors of ``x`` and ``y`` with their angles.

    Returns ``(xs, ys, angles)`` where column i of ``xs`` and of ``ys`` form
    the i-th principal pair.  Inside a block of equal angles the X-side
    basis is the canonical one from :func:`_canonical_basis`, and the Y-side
    vectors are the normalized projections of the X-side ones (or, for
    right angles, the canonical basis of the Y-side block).
    """
    _check_pair(x, y)
    u, _, vh = np.linalg.svd(x.basis.conj().T @ y.basis)
    xv, yv = x.basis @ u, y.basis @ vh.conj().T
    angles = principal_angles(x, y, tol).angles
    xs, ys = [], []
    for a, b in _angle_clusters(angles, tol):
        bx = _canonical_basis(xv[:, a:b], tol)
        if angles[a] >= HALF_PI - tol.eps_angle:
            by = _canonical_basis(yv[:, a:b], tol)
        else:
            by = y.projection @ bx
            by = by / np.linalg.norm(by, axis=0)
        xs.append(bx)
        ys.append(by)
    return np.hstack(xs), np.hstack(ys), angles


def geodesic(x, y, tol=DEFAULT_TOL):
    """A shortest path from ``x`` to ``y`` in the Grassmann graph.

    The common directions (zero angles) are kept throughout; the remaining
    principal directions of ``x`` are replaced one per step by their
    partners in ``y``, starting from the largest angle.
    """
    d = grassmann_distance(x, y, tol)
    if d == 0:
        return GrassmannPath([x])
    xs, ys, _ = principal_vectors(x, y, tol)
    k = x.k
    nodes = [x]
    for t in range(1, d):
        cols = np.hstack([xs[:, : k - t], ys[:, k - t:]])
        nodes.append(orthonormalize(cols, tol))
    nodes.append(y)
    return GrassmannPath(nodes)


def geodesic_through(x, y, tol=DEFAULT_TOL):
    """Geodesic from ``x`` to a subspace orthogonal to ``x`` that passes through ``y``.

    ``x`` and ``y`` must be compatible k-subspaces with 2k <= n.  The path
    first turns ``x`` into ``y`` and then continues to ``C + D`` where ``C``
    is the part of ``y`` orthogonal to ``x`` and ``D`` is taken from
    ``(x + y)``-perp.
    """
    _check_pair(x, y)
    n, k = x.n, x.k
    if 2 * k > n:
        raise PreconditionError("orthogonal k-subspaces need 2k <= n")
    if not is_compatible(x, y, tol):
        raise PreconditionError("subspaces are not compatible")

    def part(s):
        return np.zeros((n, 0), dtype=complex) if s is None else _canonical_basis(s.basis, tol)

    common = part(intersect(x, y, tol))
    x_only = part(intersect(x, complement(y, tol), tol)) if y.k < n else part(None)
    y_only = part(intersect(y, complement(x, tol), tol)) if x.k < n else part(None)
    if common.shape[1] + x_only.shape[1] != k or x_only.shape[1] != y_only.shape[1]:
        raise RankInstability("compatible decomposition has wrong dimensions")
    j = common.shape[1]
    if j:
        outside = _canonical_basis(complement(subspace_sum(x, y, tol), tol).basis, tol)[:, :j]
    else:
        outside = np.zeros((n, 0), dtype=complex)

    # current basis: common + x_only; swap x_only -> y_only, then common -> outside
    cur = [common[:, i] for i in range(j)] + [x_only[:, i] for i in range(k - j)]
    targets = [y_only[:, i] for i in range(k - j)] + [outside[:, i] for i in range(j)]
    slots = list(range(j, k)) + list(range(j))
    nodes = [x]
    for slot, v in zip(slots, targets):
        cur[slot] = v
        nodes.append(orthonormalize(np.column_stack(cur), tol))
    return GrassmannPath(nodes)


def _unit_columns(a):
    return a / np.linalg.norm(a, axis=0)


def star_members(x, count, seed=None, tol=DEFAULT_TOL):
    """``count`` seeded members of the star of ``x``: (k-1)-subspace plus a ray of x-perp."""
    if count < 2:
        raise PreconditionError("a star sample needs count >= 2")
    try:
        c = complement(x, tol)
    except ZeroComplementError:
        raise PreconditionError("complement too small for a star") from None
    rng = make_rng(seed)
    dirs = _unit_columns(c.basis @ complex_gaussian(rng, (c.k, count)))
    return [Subspace(np.column_stack([x.basis, dirs[:, i]])) for i in range(count)]


def top_members(y, count, seed=None, tol=DEFAULT_TOL):
    """``count`` seeded k-subspaces of the (k+1)-subspace ``y``.

    Each is the orthogonal complement inside ``y`` of a sampled ray of ``y``.
    """
    if y.k < 2:
        raise PreconditionError("a top needs an anchor of dimension >= 2")
    rng = make_rng(seed)
    out = []
    for _ in range(count):
        coeff = complex_gaussian(rng, y.k)
        u, _, _ = np.linalg.svd(coeff[:, None], full_matrices=True)
        out.append(Subspace(y.basis @ u[:, 1:]))
    return out


def in_star(s, anchor, tol=DEFAULT_TOL):
    return s.k == anchor.k + 1 and is_contained(anchor, s, tol)


def in_top(s, anchor, tol=DEFAULT_TOL):
    return s.k == anchor.k - 1 and is_contained(s, anchor, tol)


def max_compatible_clique(kind, anchor, tol=DEFAULT_TOL):
    """A maximal compatible subset of a star or a top.

    For a top (anchor of dimension k+1) these are the k+1 coordinate
    k-subspaces of the anchor's basis; for a star (anchor of dimension k-1)
    the n-k+1 subspaces ``anchor + <b_j>`` over an orthonormal basis of the
    anchor's complement.
    """
    if kind == "top":
        if anchor.k < 2:
            raise PreconditionError("a top needs an anchor of dimension >= 2")
        b = anchor.basis
        return [Subspace(np.delete(b, j, axis=1)) for j in range(anchor.k)]
    if kind == "star":
        try:
            c = complement(anchor, tol)
        except ZeroComplementError:
            raise PreconditionError("complement too small for a star") from None
        return [Subspace(np.column_stack([anchor.basis, c.basis[:, j]])) for j in range(c.k)]
    raise ValueError(f"kind must be 'star' or 'top', got {kind!r}")


def clique_candidates(kind, anchor, count, seed=None, tol=DEFAULT_TOL):
    """Seeded candidate pool for testing maximality of a compatible clique.

    Mixes generic members, members rotated in a single coordinate plane of
    the clique's basis, and re-based copies of clique members.
    """
    rng = make_rng(seed)
    clique = max_compatible_clique(kind, anchor, tol)
    member = in_star if kind == "star" else in_top
    third = count // 3
    if kind == "star":
        generic = star_members(anchor, max(third, 2), rng, tol)[:third]
        frame = complement(anchor, tol).basis
    else:
        generic = top_members(anchor, third, rng, tol)
        frame = anchor.basis
    pool = list(generic)
    m = frame.shape[1]
    while len(pool) < count - third:
        i, j = rng.choice(m, size=2, replace=False)
        t = rng.uniform(0.05, HALF_PI - 0.05)
        phase = np.exp(2j * np.pi * rng.uniform())
        v = np.cos(t) * frame[:, i] + phase * np.sin(t) * frame[:, j]
        if kind == "star":
            pool.append(Subspace(np.column_stack([anchor.basis, v])))
        else:
            coeff = anchor.basis.conj().T @ v
            u, _, _ = np.linalg.svd(coeff[:, None], full_matrices=True)
            pool.append(Subspace(anchor.basis @ u[:, 1:]))
    while len(pool) < count:
        s = clique[rng.integers(len(clique))]
        pool.append(Subspace(s.basis @ random_unitary(s.k, rng)))
    assert all(member(s, anchor, tol) for s in pool)
    return pool


def extend_clique(kind, anchor, clique, candidates, tol=DEFAULT_TOL):
    """Greedily add candidates that keep the set compatible and inside the star/top.

    Returns the list of candidates that were added; empty means no
    enlargement was found.
    """
    member = in_star if kind == "star" else in_top
    current = list(clique)
    added = []
    for s in candidates:
        if not member(s, anchor, tol):
            continue
        if any(same_subspace(s, t, tol) for t in current):
            continue
        if all(is_compatible(s, t, tol) for t in current):
            current.append(s)
            added.append(s)
    return added


def bridge(x, y, tol=DEFAULT_TOL):
    """Two k-subspaces ``X' = (X ∩ Y) + P`` and ``Y' = (X ∩ Y) + Q``.

    ``P`` and ``Q`` are orthogonal rays of ``(X + Y)``-perp, so that
    ``{X, X', Y'}`` and ``{Y, X', Y'}`` are both pairwise ortho-adjacent.
    Requires adjacent ``x, y`` and ``n > 2k > 2``.
    """
    _check_pair(x, y)
    n, k = x.n, x.k
    if not n > 2 * k > 2:
        raise PreconditionError(f"precondition dim H > 2k > 2 violated (n={n}, k={k})")
    if not is_adjacent(x, y, tol):
        raise PreconditionError("subspaces are not adjacent")
    c = complement(subspace_sum(x, y, tol), tol)
    if c.k < 2:
        raise PreconditionError("complement of X + Y has dimension < 2")
    z = intersect(x, y, tol)
    pq = _canonical_basis(c.basis, tol)
    x2 = Subspace(np.column_stack([z.basis, pq[:, 0]]))
    y2 = Subspace(np.column_stack([z.basis, pq[:, 1]]))
    return x2, y2
