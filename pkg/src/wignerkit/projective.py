"""
The projective space P(C^n): ray relations, lines, and checks on tabulated
ray maps (orthogonality preservation, lineation, non-degeneracy).
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    MissingRaysError,
    NotOrthogonalityPreserving,
    PreconditionError,
)
from .hilbert import (
    DEFAULT_TOL,
    Ray,
    Subspace,
    complement,
    inner,
    numerical_rank,
    orthonormalize,
    ray_distance,
)
from .report import Report
from .sampling import complex_gaussian, make_rng, random_subspace


@dataclass(frozen=True, eq=False)
class Line:
    """The rays of a 2-dimensional subspace."""

    carrier: Subspace

    def __post_init__(self):
        if self.carrier.k != 2:
            raise ValueError(f"a line needs a 2-dimensional carrier, got k={self.carrier.k}")

    @property
    def n(self):
        return self.carrier.n

    def contains(self, ray, tol=DEFAULT_TOL):
        return self.carrier.contains(ray.vector, tol)


def ray_orthogonal(p, q, tol=DEFAULT_TOL):
    return abs(inner(p.vector, q.vector)) < tol.eps_orth


def transition_probability(p, q):
    """``|<p, q>|**2``, the trace of the product of the two rank-one projections."""
    return min(abs(inner(p.vector, q.vector)) ** 2, 1.0)


def line_through(p, q, tol=DEFAULT_TOL):
    if p.n != q.n:
        raise DimensionMismatch(f"ambient dimensions differ: {p.n} != {q.n}")
    if ray_distance(p, q) < tol.eps_eq:
        raise PreconditionError("coincident rays do not determine a line")
    return Line(orthonormalize([p.vector, q.vector], tol))


def sample_line(line, m, seed=None):
    """``m`` distinct rays of ``line``: its two basis rays plus seeded random ones."""
    if m < 3:
        raise PreconditionError("a line sample needs at least 3 rays")
    rng = make_rng(seed)
    b = line.carrier.basis
    rays = [Ray(b[:, 0]), Ray(b[:, 1])]
    while len(rays) < m:
        r = Ray(b @ complex_gaussian(rng, 2))
        if all(ray_distance(r, s) >= DEFAULT_TOL.eps_eq for s in rays):
            rays.append(r)
    return rays


def sample_lines(n, count, m, seed=None):
    """``count`` random lines of P(C^n), each with ``m`` sampled rays."""
    rng = make_rng(seed)
    out = []
    for _ in range(count):
        line = Line(random_subspace(n, 2, rng))
        out.append((line, sample_line(line, m, rng)))
    return out


class RayMapTable:
    """A finite ray map ``source -> image`` with lookup by projection distance."""

    def __init__(self, pairs=(), tol=DEFAULT_TOL):
        self.tol = tol
        self.sources = []
        self.images = []
        self._stack = None
        for s, t in pairs:
            self.add(s, t)

    @classmethod
    def from_function(cls, func, rays, tol=DEFAULT_TOL):
        """Tabulate ``func`` (vector -> vector) on ``rays``."""
        return cls(((r, Ray(func(r.vector))) for r in rays), tol)

    @property
    def n(self):
        return self.sources[0].n if self.sources else None

    def __len__(self):
        return len(self.sources)

    def __iter__(self):
        return iter(zip(self.sources, self.images))

    def add(self, source, image):
        source = source if isinstance(source, Ray) else Ray(source)
        image = image if isinstance(image, Ray) else Ray(image)
        if self.sources and (source.n != self.n or image.n != self.n):
            raise DimensionMismatch("all rays in a table must share the ambient dimension")
        if self.index_of(source) is not None:
            raise ValueError("duplicate source ray in table")
        self.sources.append(source)
        self.images.append(image)
        self._stack = None

    def _source_matrix(self):
        if self._stack is None:
            self._stack = np.array([s.vector for s in self.sources])
        return self._stack

    def index_of(self, ray):
        if not self.sources:
            return None
        v = ray.vector
        s = self._source_matrix()
        resid = v[None, :] - s * (s.conj() @ v)[:, None]
        dist = np.sqrt(2.0) * np.linalg.norm(resid, axis=1)
        i = int(np.argmin(dist))
        return i if dist[i] < self.tol.eps_eq else None

    def lookup(self, ray):
        i = self.index_of(ray)
        return None if i is None else self.images[i]

    def image_of(self, ray):
        """Like :meth:`lookup` but raise if the ray is absent."""
        img = self.lookup(ray)
        if img is None:
            raise MissingRaysError("ray not in table", ray=ray.vector.tolist())
        return img

    def __repr__(self):
        return f"RayMapTable(n={self.n}, size={len(self)})"


def check_orthogonality_preserving(table, tol=DEFAULT_TOL):
    """Every orthogonal pair of sources has orthogonal images."""
    src = np.array([s.vector for s in table.sources])
    img = np.array([t.vector for t in table.images])
    gs = np.abs(src.conj() @ src.T)
    gi = np.abs(img.conj() @ img.T)
    bad = np.argwhere(np.triu((gs < tol.eps_orth) & (gi >= tol.eps_orth), 1))
    violations = [
        {"pair": [int(i), int(j)], "image_overlap": float(gi[i, j])} for i, j in bad
    ]
    return Report(
        "orthogonality-preserving",
        not violations,
        violations,
        {"pairs_checked": int(np.count_nonzero(np.triu(gs < tol.eps_orth, 1)))},
    )


def induced_line_image(table, line, tol=DEFAULT_TOL):
    """The line that must contain the image of ``line``.

    Uses n-2 mutually orthogonal tabulated rays spanning the complement of
    the carrier; the result is the complement of the span of their images.

    Raises
    ------
    MissingRaysError
        If the table lacks such a family.
    NotOrthogonalityPreserving
        If their images are not mutually orthogonal.
    """
    n = line.n
    basis = line.carrier.basis
    chosen = []
    for i, s in enumerate(table.sources):
        if np.linalg.norm(basis.conj().T @ s.vector) >= tol.eps_orth:
            continue
        if all(ray_orthogonal(s, table.sources[j], tol) for j in chosen):
            chosen.append(i)
            if len(chosen) == n - 2:
                break
    if len(chosen) < n - 2:
        raise MissingRaysError(
            f"table holds only {len(chosen)} of the {n - 2} orthogonal rays spanning the line's complement"
        )
    images = [table.images[i] for i in chosen]
    for a, b in combinations(range(len(images)), 2):
        if not ray_orthogonal(images[a], images[b], tol):
            raise NotOrthogonalityPreserving(
                "not orthogonality preserving on S⊥", pair=[chosen[a], chosen[b]]
            )
    c = complement(orthonormalize([r.vector for r in images], tol), tol)
    if c.k != 2:
        raise NotOrthogonalityPreserving("not orthogonality preserving on S⊥")
    return Line(c)


def _member_images(table, lines, tol):
    out = []
    for idx, (line, members) in enumerate(lines):
        if len(members) < 3:
            raise PreconditionError(f"line {idx} has fewer than 3 member rays")
        imgs = []
        for r in members:
            if not line.contains(r, tol):
                raise PreconditionError(f"line {idx} lists a ray outside its carrier")
            img = table.lookup(r)
            if img is None:
                raise MissingRaysError(f"line {idx} has a member ray missing from the table")
            imgs.append(img)
        out.append(imgs)
    return out


def check_lineation(table, lines, tol=DEFAULT_TOL):
    """Each listed line's member images span at most a 2-dimensional subspace.

    ``lines`` is a list of ``(Line, member_rays)`` pairs.
    """
    violations = []
    for idx, imgs in enumerate(_member_images(table, lines, tol)):
        r = numerical_rank(np.column_stack([t.vector for t in imgs]), tol)
        if r > 2:
            violations.append({"line": idx, "image_rank": r})
    return Report("lineation", not violations, violations, {"lines_checked": len(lines)})


def _distinct_count(rays, tol):
    distinct = []
    for r in rays:
        if all(ray_distance(r, s) >= tol.eps_eq for s in distinct):
            distinct.append(r)
    return len(distinct)


def check_nondegenerate(table, lines, tol=DEFAULT_TOL):
    """(L1) the image is not inside one line; (L2) every line has >= 3 image rays."""
    per_line = _member_images(table, lines, tol)
    total_rank = numerical_rank(np.column_stack([t.vector for t in table.images]), tol)
    l1 = total_rank >= 3
    violations = []
    if not l1:
        violations.append({"condition": "L1", "image_rank": total_rank})
    l2 = True
    for idx, imgs in enumerate(per_line):
        count = _distinct_count(imgs, tol)
        if count < 3:
            l2 = False
            violations.append({"condition": "L2", "line": idx, "distinct_images": count})
    return Report("nondegenerate", l1 and l2, violations, {"L1": l1, "L2": l2})


def lines_from_table(table, tol=DEFAULT_TOL):
    """Lines spanned by pairs of tabulated sources that hold >= 3 tabulated sources."""
    src = np.array([s.vector for s in table.sources])
    m = len(src)
    found = []
    covered = set()
    for i, j in combinations(range(m), 2):
        if (i, j) in covered:
            continue
        if ray_distance(table.sources[i], table.sources[j]) < tol.eps_eq:
            continue
        carrier = orthonormalize([src[i], src[j]], tol)
        resid = src.T - carrier.projection @ src.T
        members = np.flatnonzero(np.linalg.norm(resid, axis=0) < tol.eps_eq)
        for a, b in combinations(members, 2):
            covered.add((int(a), int(b)))
        if len(members) >= 3:
            found.append((Line(carrier), [table.sources[t] for t in members]))
    return found
