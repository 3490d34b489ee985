"""
Recovering the isometry behind a ray map or a Grassmann map.

``classify_and_reconstruct`` reads a linear or conjugate-linear isometry off
a tabulated ray map from a small set of anchor rays.  For maps of G_k the
star descent builds maps of G_{k-1}, ..., G_1 by intersecting images of
star members, and then reconstructs from the resulting ray map.
"""

import zlib
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    DescentError,
    MissingRaysError,
    NotInducedByIsometry,
    NotOrthogonalityPreserving,
    PreconditionError,
    TableInconsistent,
    ToleranceBreakdown,
)
from .grassmann import is_adjacent, is_orthogonal, is_ortho_adjacent
from .hilbert import (
    DEFAULT_TOL,
    Ray,
    Subspace,
    complement,
    intersect,
    is_contained,
    orthonormalize,
    ray_distance,
    same_subspace,
    subspace_distance,
    subspace_sum,
)
from .operators import Isometry, OperatorClass, required_rays
from .projective import RayMapTable
from .report import Report
from .sampling import (
    make_rng,
    random_orthogonal_pair,
    random_pair_with_intersection,
    random_ray,
    random_subspace,
    random_subspace_in,
    random_unitary,
)


@dataclass
class ReconstructionResult:
    matrix: np.ndarray
    op_class: OperatorClass
    residual: float
    certificate: list
    details: dict = field(default_factory=dict)

    @property
    def isometry(self):
        return Isometry(self.matrix, self.op_class)

    def to_dict(self):
        from .io import matrix_to_json

        out = {
            "matrix": matrix_to_json(self.matrix),
            "class": self.op_class.value,
            "residual": self.residual,
            "certificate": list(self.certificate),
        }
        out.update(self.details)
        return out


def tabulate(isometry, rays, tol=DEFAULT_TOL):
    """Ray map table of the map induced by ``isometry`` on ``rays``."""
    return RayMapTable(((r, isometry.apply_ray(r)) for r in rays), tol)


def _deviations(table, iso):
    return [ray_distance(img, iso.apply_ray(src)) for src, img in table]


def classify_and_reconstruct(table, n=None, tol=DEFAULT_TOL):
    """Recover the isometry inducing a tabulated ray map.

    Representatives ``u_j`` of the images of the basis rays are fixed, their
    phases are matched on the images of ``[e_1 + e_j]``, and the image of
    ``[e_1 + i e_2]`` decides between linear and conjugate-linear.  The
    residual is then measured over the whole table.

    Raises
    ------
    MissingRaysError
        If an anchor ray is not tabulated.
    NotOrthogonalityPreserving
        If the basis images are not orthonormal.
    NotInducedByIsometry
        If the twist ray fits neither class.
    TableInconsistent
        If some table entry deviates by more than ``eps_reconstruct``.
    """
    n = table.n if n is None else n
    if n is None or n < 3:
        raise PreconditionError("reconstruction needs n >= 3")
    anchors = required_rays(n)
    missing = [i for i, r in enumerate(anchors) if table.lookup(r) is None]
    if missing:
        raise MissingRaysError(
            "missing required rays", missing=[anchors[i].vector.tolist() for i in missing]
        )
    img = [table.lookup(r).vector for r in anchors]
    u = np.column_stack(img[:n])

    gram = u.conj().T @ u
    off = np.abs(gram - np.eye(n))
    if off.max() >= tol.eps_orth:
        bad = np.argwhere(np.triu(off >= tol.eps_orth, 1))
        raise NotOrthogonalityPreserving(
            "not orthogonality preserving", pairs=[[int(i), int(j)] for i, j in bad]
        )

    for j in range(1, n):
        w = img[n - 1 + j]
        a, b = np.vdot(u[:, 0], w), np.vdot(u[:, j], w)
        if abs(a) < tol.eps_orth or abs(b) < tol.eps_orth:
            raise NotInducedByIsometry(f"image of [e_1 + e_{j + 1}] misses u_1 or u_{j + 1}")
        c = b / a
        u[:, j] *= c / abs(c)

    twist = Ray(img[-1])
    d_lin = ray_distance(twist, Ray(u[:, 0] + 1j * u[:, 1]))
    d_anti = ray_distance(twist, Ray(u[:, 0] - 1j * u[:, 1]))
    if d_lin < tol.eps_reconstruct:
        op_class = OperatorClass.LINEAR
    elif d_anti < tol.eps_reconstruct:
        op_class = OperatorClass.CONJUGATE_LINEAR
    else:
        raise NotInducedByIsometry(
            "not induced by an isometry", linear_deviation=d_lin, antilinear_deviation=d_anti
        )

    iso = Isometry(u, op_class)
    cert = _deviations(table, iso)
    result = ReconstructionResult(u, op_class, float(max(cert)), cert)
    if result.residual > tol.eps_reconstruct:
        worst = int(np.argmax(cert))
        raise TableInconsistent(
            "table inconsistent with any isometry",
            result=result,
            worst_index=worst,
            worst_source=table.sources[worst].vector.tolist(),
        )
    return result


def verify_induced(table, result, tol=DEFAULT_TOL):
    """Round-trip certificate: every table image matches the reconstructed isometry."""
    iso = result.isometry if isinstance(result, ReconstructionResult) else result
    dev = _deviations(table, iso)
    violations = [
        {"index": i, "source": _vec_json(table.sources[i].vector), "deviation": d}
        for i, d in enumerate(dev)
        if not d < tol.eps_reconstruct
    ]
    return Report(
        "induced",
        not violations,
        violations,
        {"max_deviation": float(max(dev)) if dev else 0.0, "entries": len(dev)},
    )


def _vec_json(v):
    return [[float(z.real), float(z.imag)] for z in v]


def subspace_key(s, decimals=12):
    """Hashable key of a subspace: its rounded projection matrix."""
    p = np.round(s.projection, decimals) + 0.0
    return (s.n, s.k, p.tobytes())


class GrassmannOracle:
    """A deterministic map G_k(C^n) -> G_k(C^n) with memoized evaluation.

    Parameters
    ----------
    evaluate : callable
        ``Subspace -> Subspace``; must be deterministic.
    k, n : int
    domain : list of Subspace, optional
        Finite domain for tabulated maps; descent then probes only domain
        members instead of random subspaces.
    """

    def __init__(self, evaluate, k, n, domain=None, name="oracle"):
        self._evaluate = evaluate
        self.k = k
        self.n = n
        self.domain = domain
        self.name = name
        self._cache = {}

    def __call__(self, x):
        if x.k != self.k or x.n != self.n:
            raise PreconditionError(
                f"{self.name} expects a {self.k}-subspace of C^{self.n}, got k={x.k}, n={x.n}"
            )
        key = subspace_key(x)
        y = self._cache.get(key)
        if y is None:
            y = self._evaluate(x)
            if y.k != self.k or y.n != self.n:
                raise PreconditionError(f"{self.name} returned a subspace of the wrong dimension")
            self._cache[key] = y
        return y

    @classmethod
    def from_isometry(cls, iso, k):
        return cls(iso.apply_subspace, k, iso.n, name=f"{iso.op_class.value} isometry")

    @classmethod
    def from_pairs(cls, pairs, tol=DEFAULT_TOL):
        """Tabulated map from ``(source, image)`` subspace pairs."""
        pairs = list(pairs)
        if not pairs:
            raise ValueError("empty Grassmann map")
        k, n = pairs[0][0].k, pairs[0][0].n
        sources = [s for s, _ in pairs]
        projs = np.array([s.projection for s in sources])

        def evaluate(x):
            d = np.linalg.norm(projs - x.projection[None], axis=(1, 2))
            i = int(np.argmin(d))
            if d[i] >= tol.eps_eq:
                raise MissingRaysError("subspace not in tabulated Grassmann map")
            return pairs[i][1]

        return cls(evaluate, k, n, domain=sources, name="tabulated map")

    @classmethod
    def constant(cls, target, n=None):
        return cls(lambda x: target, target.k, target.n if n is None else n, name="constant map")


def _probe_rng(seed, x):
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, zlib.crc32(subspace_key(x, 8)[2])])


def _distinct(subspaces, tol):
    out = []
    for s in subspaces:
        if all(not same_subspace(s, t, tol) for t in out):
            out.append(s)
    return out


def descend_star(f, x, probes=3, seed=0, retries=20, tol=DEFAULT_TOL):
    """The (k-1)-subspace whose star contains the image of the star of ``x``.

    Evaluates ``f`` on ``probes`` members of the star of ``x`` (mutually
    ortho-adjacent where possible) with pairwise-distinct images, resampling
    up to ``retries`` times, and intersects the images.

    Raises
    ------
    DescentError
        If the images do not share a common (k-1)-subspace.
    """
    k = f.k
    if k < 2 or x.k != k - 1:
        raise PreconditionError(f"descent from G_{k} needs a {k - 1}-subspace, got k={x.k}")
    if probes < 2:
        raise PreconditionError("descent needs probes >= 2")

    if f.domain is not None:
        members = [s for s in f.domain if is_contained(x, s, tol)]
        images = _distinct([f(s) for s in members], tol)[:probes]
    else:
        rng = _probe_rng(seed, x)
        c = complement(x, tol)
        images = []
        for _ in range(retries + 1):
            frame = c.basis @ random_unitary(c.k, rng)
            dirs = [frame[:, i] for i in range(min(probes, c.k))]
            while len(dirs) < probes:
                dirs.append(c.basis @ random_ray(c.k, rng).vector)
            members = [Subspace(np.column_stack([x.basis, d])) for d in dirs]
            found = _distinct([f(s) for s in members], tol)
            if len(found) > len(images):
                images = found
            if len(images) == probes:
                break
    if len(images) < 2:
        raise DescentError(
            "f does not map this star into a star: fewer than two distinct images"
        )

    z = images[0]
    for s in images[1:]:
        z = intersect(z, s, tol)
        if z is None:
            break
    if z is None or z.k != k - 1 or not all(is_contained(z, s, tol) for s in images):
        raise DescentError(
            "f does not map this star into a star",
            intersection_dim=0 if z is None else z.k,
        )
    return orthonormalize(z.basis, tol)


def _derived_domain(domain, tol):
    """(k-1)-dimensional intersections of adjacent pairs of a finite domain."""
    out = []
    keys = set()
    for a, b in combinations(domain, 2):
        if subspace_sum(a, b, tol).k != a.k + 1:
            continue
        z = intersect(a, b, tol)
        key = subspace_key(z, 9)
        if key not in keys:
            keys.add(key)
            out.append(z)
    return out


def star_descent_oracle(f, probes=3, seed=0, retries=20, tol=DEFAULT_TOL):
    """The induced map of G_{k-1}: ``X -> descend_star(f, X)``."""
    domain = None if f.domain is None else _derived_domain(f.domain, tol)
    return GrassmannOracle(
        lambda x: descend_star(f, x, probes, seed, retries, tol),
        f.k - 1,
        f.n,
        domain=domain,
        name=f"level-{f.k - 1} descent",
    )


def _containment_pairs(lower, upper, count, rng, tol):
    """Pairs (X, Y) with X in G_j, Y in G_{j+1} and X inside Y."""
    if upper.domain is None:
        pairs = []
        for _ in range(count):
            y = random_subspace(upper.n, upper.k, rng)
            pairs.append((random_subspace_in(y, lower.k, rng), y))
        return pairs
    pairs = []
    for y in upper.domain:
        for x in lower.domain:
            if is_contained(x, y, tol):
                pairs.append((x, y))
                break
        if len(pairs) == count:
            break
    return pairs


def descend_full(
    f, seed=0, audit=20, probes=3, retries=20, containment=20, final_checks=50, tol=DEFAULT_TOL
):
    """Descend from G_k to P(H) and reconstruct the inducing isometry.

    Builds the level maps f_{k-1}, ..., f_1 by star descent, tabulates f_1
    on the anchor rays plus ``audit`` further rays, reconstructs, checks
    ``f_j(X) ⊆ f_{j+1}(Y)`` for ``containment`` sampled pairs ``X ⊂ Y`` at
    every level, and compares the reconstruction with ``f`` on
    ``final_checks`` k-subspaces.

    Raises
    ------
    PreconditionError
        Unless ``k >= 2`` and ``2k < n``.
    DescentError
        If a level fails to descend, a containment fails, or the
        reconstruction disagrees with ``f``.
    """
    n, k = f.n, f.k
    if k < 2 or not 2 * k < n:
        raise PreconditionError(f"descent needs k >= 2 and 2k < n (n={n}, k={k})")
    rng = make_rng(seed)
    levels = {k: f}
    for j in range(k - 1, 0, -1):
        levels[j] = star_descent_oracle(levels[j + 1], probes, seed, retries, tol)
    f1 = levels[1]

    rays = required_rays(n)
    if f1.domain is None:
        rays += [random_ray(n, rng) for _ in range(audit)]
    else:
        extra = [Ray(s.basis[:, 0]) for s in f1.domain]
        rays += [r for r in extra if all(ray_distance(r, a) >= tol.eps_eq for a in rays)][:audit]
    try:
        table = RayMapTable(((r, Ray(f1(r.subspace).basis[:, 0])) for r in rays), tol)
    except MissingRaysError as exc:
        raise MissingRaysError(f"tabulated map too small for descent: {exc}") from None
    result = classify_and_reconstruct(table, n, tol)
    iso = result.isometry

    checked = {}
    for j in range(1, k):
        pairs = _containment_pairs(levels[j], levels[j + 1], containment, rng, tol)
        for x, y in pairs:
            if not is_contained(levels[j](x), levels[j + 1](y), tol):
                raise DescentError(f"level containment fails at level {j}")
        checked[str(j)] = len(pairs)

    if f.domain is None:
        samples = [random_subspace(n, k, rng) for _ in range(final_checks)]
    else:
        samples = f.domain[:final_checks]
    worst = max(subspace_distance(f(x), iso.apply_subspace(x)) for x in samples)
    if worst > tol.eps_reconstruct:
        raise DescentError(
            "final reconstruction inconsistent with f on sampled k-subspaces", deviation=worst
        )
    result.details = {
        "levels": list(range(k, 0, -1)),
        "containments_checked": checked,
        "final_checks": len(samples),
        "final_deviation": worst,
        "table_size": len(table),
    }
    return result


def tabulate_grassmann_map(iso, k, audit=0, seed=0):
    """A finite Grassmann map table rich enough for :func:`descend_full`.

    For every anchor ray ``r`` (plus ``audit`` random rays) it lists the
    k-subspaces ``r + span(b_S)`` with ``S`` running over the (k-1)-subsets
    of k+1 vectors ``b`` of an orthonormal basis of ``r``-perp.
    """
    n = iso.n
    if n < k + 2:
        raise PreconditionError("need n >= k + 2")
    rng = make_rng(seed)
    bases = required_rays(n) + [random_ray(n, rng) for _ in range(audit)]
    pairs, keys = [], set()
    for r in bases:
        frame = complement(r.subspace).basis[:, : k + 1]
        for sub in combinations(range(k + 1), k - 1):
            s = Subspace(np.column_stack([r.vector, frame[:, list(sub)]]))
            key = subspace_key(s, 9)
            if key in keys:
                continue
            keys.add(key)
            pairs.append((s, iso.apply_subspace(s)))
    return pairs


def _ortho_adjacent_pair(n, k, rng):
    w = random_unitary(n, rng)
    x = Subspace(w[:, :k])
    y = Subspace(np.column_stack([w[:, : k - 1], w[:, k]]))
    return x, y


def _domain_pairs(domain, relation, limit):
    out = []
    for a, b in combinations(domain, 2):
        if relation(a, b):
            out.append((a, b))
            if len(out) == limit:
                break
    return out


def check_conditions_AB(f, samples=50, seed=0, tol=DEFAULT_TOL):
    """Sampled verdicts on ortho-adjacency preservation (A) and adjacency-or-equality (B).

    Orthogonality preservation of ``f`` is checked alongside, since both
    conditions only characterize induced maps among orthogonality
    preserving ones.
    """
    n, k = f.n, f.k
    if not 2 * k < n:
        raise PreconditionError(f"conditions (A)/(B) need 2k < n (n={n}, k={k})")
    rng = make_rng(seed)

    def safe(pred, a, b):
        try:
            return pred(a, b, tol)
        except ToleranceBreakdown:
            return False

    if f.domain is None:
        oa_pairs = [_ortho_adjacent_pair(n, k, rng) for _ in range(samples)]
        adj_pairs = [random_pair_with_intersection(n, k, k - 1, rng) for _ in range(samples)]
        orth_pairs = [random_orthogonal_pair(n, k, rng) for _ in range(samples)]
    else:
        oa_pairs = _domain_pairs(f.domain, lambda a, b: safe(is_ortho_adjacent, a, b), samples)
        adj_pairs = _domain_pairs(f.domain, lambda a, b: is_adjacent(a, b, tol), samples)
        orth_pairs = _domain_pairs(f.domain, lambda a, b: is_orthogonal(a, b, tol), samples)

    violations = []
    for i, (x, y) in enumerate(oa_pairs):
        if not safe(is_ortho_adjacent, f(x), f(y)):
            violations.append({"condition": "A", "sample": i})
    for i, (x, y) in enumerate(adj_pairs):
        fx, fy = f(x), f(y)
        if not (same_subspace(fx, fy, tol) or is_adjacent(fx, fy, tol)):
            violations.append({"condition": "B", "sample": i})
    for i, (x, y) in enumerate(orth_pairs):
        if not is_orthogonal(f(x), f(y), tol):
            violations.append({"condition": "orthogonality", "sample": i})

    verdict = {c: not any(v["condition"] == c for v in violations) for c in ("A", "B", "orthogonality")}
    return Report(
        "conditions-AB",
        verdict["A"] and verdict["B"],
        violations,
        {
            "A": verdict["A"],
            "B": verdict["B"],
            "orthogonality": verdict["orthogonality"],
            "samples": {"A": len(oa_pairs), "B": len(adj_pairs), "orthogonality": len(orth_pairs)},
        },
    )
