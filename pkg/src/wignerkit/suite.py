"""
One-shot property battery.

Every anchor exercises one constructive step on seeded random instances
and records pass/fail with a trial count.  ``inject_fault`` corrupts the
fixture of exactly one anchor, which must then fail.
"""

import zlib

import numpy as np

from .errors import WignerKitError
from .grassmann import (
    clique_candidates,
    extend_clique,
    geodesic,
    grassmann_distance,
    is_compatible,
    max_compatible_clique,
)
from .hilbert import (
    DEFAULT_TOL,
    Ray,
    complement,
    dim,
    intersect,
    orthonormalize,
    subspace_sum,
)
from .measure import build_hypergraph, find_two_valued_measure, load_fixture
from .operators import Isometry, OperatorClass, required_rays
from .projective import (
    RayMapTable,
    check_lineation,
    check_nondegenerate,
    check_orthogonality_preserving,
    induced_line_image,
    sample_lines,
)
from .reconstruct import (
    GrassmannOracle,
    check_conditions_AB,
    classify_and_reconstruct,
    descend_full,
    subspace_key,
    tabulate,
    verify_induced,
)
from .sampling import (
    random_orthogonal_pair,
    random_pair_with_intersection,
    random_ray,
    random_subspace,
    random_unitary,
)

ANCHORS = (
    "dimension-formula",
    "orthogonality-preserving",
    "lineation",
    "nondegenerate",
    "wigner-round-trip",
    "negative-detection",
    "clique-sizes",
    "distance-formula",
    "geodesic-compatibility",
    "star-descent",
    "conditions-ab",
    "ks-unsat",
)


def _rotate_slightly(s, angle, rng):
    """Tilt the last basis vector of ``s`` out of ``s`` by ``angle``."""
    out = random_unitary(s.n, rng)[:, 0]
    out = out - s.projection @ out
    out /= np.linalg.norm(out)
    b = np.array(s.basis)
    b[:, -1] = np.cos(angle) * b[:, -1] + np.sin(angle) * out
    return orthonormalize(b)


def _isometries(n, trials, rng):
    classes = [OperatorClass.LINEAR, OperatorClass.CONJUGATE_LINEAR]
    return [Isometry.random(n, rng, classes[t % 2]) for t in range(trials)]


def _dimension_formula(dims, trials, rng, tol, fault):
    count = 0
    for n, k in dims:
        for t in range(trials):
            j = int(rng.integers(max(0, 2 * k - n), k + 1))
            x, y = random_pair_with_intersection(n, k, j, rng)
            if fault and t == 0 and j > 0:
                y = _tilt_common(x, y, rng)
            meet, join = dim(intersect(x, y, tol)), subspace_sum(x, y, tol).k
            count += 1
            if meet != j or meet + join != 2 * k:
                return False, count
    return True, count


def _tilt_common(x, y, rng):
    """Rotate ``y`` so one shared direction with ``x`` is lost."""
    z = intersect(x, y)
    v = z.basis[:, 0]
    out = random_unitary(x.n, rng)[:, 0]
    out -= subspace_sum(x, y).projection @ out
    out /= np.linalg.norm(out)
    b = y.basis - np.outer(v, v.conj()) @ y.basis
    b = np.column_stack([b, np.cos(1e-3) * v + np.sin(1e-3) * out])
    return orthonormalize(b)


def _ns(dims):
    return sorted({n for n, _ in dims})


def _orthogonality_preserving(dims, trials, rng, tol, fault):
    count = 0
    for n in _ns(dims):
        for t, iso in enumerate(_isometries(n, trials, rng)):
            rays = [Ray(c) for c in np.eye(n)] + [random_ray(n, rng) for _ in range(10)]
            rays += [Ray(c) for c in random_unitary(n, rng).T]
            table = tabulate(iso, rays, tol)
            if fault and t == 0:
                table.images[1] = table.images[0]
            count += 1
            if not check_orthogonality_preserving(table, tol).passed:
                return False, count
    return True, count


def _line_family_table(iso, n, lines, rng, tol):
    rays = [r for _, members in lines for r in members]
    table = RayMapTable(tol=tol)
    for r in rays:
        if table.index_of(r) is None:
            table.add(r, iso.apply_ray(r))
    return table


def _lineation(dims, trials, rng, tol, fault):
    count = 0
    for n in _ns(dims):
        for t, iso in enumerate(_isometries(n, trials, rng)):
            lines = sample_lines(n, 5, 7, rng)
            table = _line_family_table(iso, n, lines, rng, tol)
            if fault and t == 0:
                members = lines[0][1]
                for idx, r in enumerate(members[:3]):
                    table.images[table.index_of(r)] = Ray(np.eye(n)[idx])
            count += 1
            if not check_lineation(table, lines, tol).passed:
                return False, count
            # the line image predicted from the orthogonal complement
            line, members = lines[1]
            for c in complement(line.carrier, tol).basis.T:
                table.add(Ray(c), iso.apply_ray(Ray(c)))
            target = induced_line_image(table, line, tol)
            if not all(target.contains(table.lookup(r), tol) for r in members):
                return False, count
    return True, count


def _two_image_table(n, lines, tol):
    table = RayMapTable(tol=tol)
    e = np.eye(n)
    for line, members in lines:
        b = line.carrier.basis
        for r in members:
            if table.index_of(r) is None:
                w = abs(np.vdot(b[:, 0], r.vector)) ** 2
                table.add(r, Ray(e[0] if w >= 0.5 else e[1]))
    return table


def _nondegenerate(dims, trials, rng, tol, fault):
    count = 0
    for n in _ns(dims):
        for t, iso in enumerate(_isometries(n, trials, rng)):
            lines = sample_lines(n, 5, 7, rng)
            if fault and t == 0:
                table = _two_image_table(n, lines, tol)
            else:
                table = _line_family_table(iso, n, lines, rng, tol)
            count += 1
            if not check_nondegenerate(table, lines, tol).passed:
                return False, count
        # negative control: collapsing lines to two images must be caught
        lines = sample_lines(n, 5, 7, rng)
        count += 1
        if check_nondegenerate(_two_image_table(n, lines, tol), lines, tol).details["L2"]:
            return False, count
    return True, count


def _round_trip(dims, trials, rng, tol, fault):
    count = 0
    for n in _ns(dims):
        for t, iso in enumerate(_isometries(n, trials, rng)):
            rays = required_rays(n) + [random_ray(n, rng) for _ in range(20)]
            table = tabulate(iso, rays, tol)
            if fault and t == 0:
                table.images[-1] = random_ray(n, rng)
            count += 1
            try:
                res = classify_and_reconstruct(table, n, tol)
            except WignerKitError:
                return False, count
            if res.op_class is not iso.op_class:
                return False, count
    return True, count


def _negative_detection(dims, trials, rng, tol, fault):
    count = 0
    for n in _ns(dims):
        for t, iso in enumerate(_isometries(n, trials, rng)):
            rays = required_rays(n) + [random_ray(n, rng) for _ in range(20)]
            table = tabulate(iso, rays, tol)
            res = classify_and_reconstruct(table, n, tol)
            i = int(rng.integers(len(table)))
            img = table.images[i].vector
            if not (fault and t == 0):
                w = random_unitary(n, rng)[:, 0]
                w -= img * np.vdot(img, w)
                w /= np.linalg.norm(w)
                img = np.cos(2e-3) * img + np.sin(2e-3) * w
            table.images[i] = Ray(img)
            rep = verify_induced(table, res, tol)
            count += 1
            if rep.passed or [v["index"] for v in rep.violations] != [i]:
                return False, count
    return True, count


def _clique_sizes(dims, trials, rng, tol, fault):
    count = 0
    for n, k in dims:
        for kind, anchor_dim, expected in (("top", k + 1, k + 1), ("star", k - 1, n - k + 1)):
            anchor = random_subspace(n, anchor_dim, rng)
            clique = max_compatible_clique(kind, anchor, tol)
            if fault and count == 0:
                clique = clique[:-1]
            count += 1
            pool = clique_candidates(kind, anchor, 3 * trials, rng, tol)
            ok = len(clique) == expected and all(
                is_compatible(a, b, tol) for i, a in enumerate(clique) for b in clique[i + 1:]
            )
            if not ok or extend_clique(kind, anchor, clique, pool, tol):
                return False, count
    return True, count


def _distance_formula(dims, trials, rng, tol, fault):
    count = 0
    for n, k in dims:
        for t in range(trials):
            j = int(rng.integers(max(0, 2 * k - n), k + 1))
            x, y = random_pair_with_intersection(n, k, j, rng)
            if fault and t == 0:
                y = _rotate_slightly(x, 1e-8, rng)
            count += 1
            try:
                d = grassmann_distance(x, y, tol)
            except WignerKitError:
                return False, count
            if not (fault and t == 0) and d != k - j:
                return False, count
    return True, count


def _geodesic_compatibility(dims, trials, rng, tol, fault):
    count = 0
    for n, k in dims:
        if 2 * k > n:
            continue
        for t in range(trials):
            x, y = random_orthogonal_pair(n, k, rng)
            if fault and t == 0:
                y = _mix_into(y, x, 0.3)
            count += 1
            path = geodesic(x, y, tol)
            nodes = path.nodes
            if path.length != grassmann_distance(x, y, tol) or not path.is_valid(tol):
                return False, count
            if not all(is_compatible(a, b, tol) for i, a in enumerate(nodes) for b in nodes[i + 1:]):
                return False, count
    return True, count


def _mix_into(y, x, angle):
    b = np.array(y.basis)
    b[:, 0] = np.cos(angle) * b[:, 0] + np.sin(angle) * x.basis[:, 0]
    return orthonormalize(b)


class _Wobble:
    """A map close to an induced one that is not induced by any isometry."""

    def __init__(self, iso, seed):
        self.iso = iso
        self.seed = seed

    def __call__(self, x):
        y = self.iso.apply_subspace(x)
        rng = np.random.default_rng([self.seed, zlib.crc32(subspace_key(x, 8)[2])])
        return _rotate_slightly(y, 1e-3, rng)


def _oracles(n, k, count, rng):
    return [GrassmannOracle.from_isometry(iso, k) for iso in _isometries(n, count, rng)]


def _star_descent(dims, trials, rng, tol, fault):
    count = 0
    for n, k in dims:
        for t, f in enumerate(_oracles(n, k, 2, rng)):
            if fault and t == 0:
                iso = Isometry.random(n, rng)
                f = GrassmannOracle(_Wobble(iso, 7), k, n)
            count += 1
            try:
                res = descend_full(f, seed=int(rng.integers(2**31)), audit=trials, containment=trials,
                                   final_checks=trials, tol=tol)
            except WignerKitError:
                return False, count
            if res.residual > tol.eps_reconstruct:
                return False, count
    return True, count


def _conditions_ab(dims, trials, rng, tol, fault):
    count = 0
    for n, k in dims:
        for t, f in enumerate(_oracles(n, k, 2, rng)):
            if fault and t == 0:
                f = GrassmannOracle.constant(random_subspace(n, k, rng))
            count += 1
            rep = check_conditions_AB(f, trials, int(rng.integers(2**31)), tol)
            if not (rep.details["A"] and rep.details["B"]):
                return False, count
    return True, count


def _ks_unsat(dims, trials, rng, tol, fault):
    count = 0
    for name in ("peres33", "cabello18"):
        h = load_fixture(name, tol)
        if fault and name == "peres33":
            h = build_hypergraph([h.rays[i] for i in h.contexts[0]], h.d, tol)
        for s in range(5):
            count += 1
            if find_two_valued_measure(h, seed=s).sat:
                return False, count
    return True, count


CHECKS = {
    "dimension-formula": _dimension_formula,
    "orthogonality-preserving": _orthogonality_preserving,
    "lineation": _lineation,
    "nondegenerate": _nondegenerate,
    "wigner-round-trip": _round_trip,
    "negative-detection": _negative_detection,
    "clique-sizes": _clique_sizes,
    "distance-formula": _distance_formula,
    "geodesic-compatibility": _geodesic_compatibility,
    "star-descent": _star_descent,
    "conditions-ab": _conditions_ab,
    "ks-unsat": _ks_unsat,
}


def verify_suite(seed=0, dims=((5, 2), (7, 3)), trials=10, inject_fault=None, tol=DEFAULT_TOL):
    """Run every anchor and return ``{"pass", "anchors", ...}``.

    ``dims`` lists ``(n, k)`` pairs with ``2k < n``.  Each anchor gets its own
    generator derived from ``seed`` so results do not depend on which
    anchors run before it.
    """
    dims = [tuple(int(v) for v in d) for d in dims]
    if not dims:
        raise ValueError("dims must not be empty")
    for n, k in dims:
        if not (k >= 2 and 2 * k < n):
            raise ValueError(f"each (n, k) needs k >= 2 and 2k < n, got ({n}, {k})")
    if inject_fault is not None and inject_fault not in CHECKS:
        raise ValueError(f"unknown anchor {inject_fault!r}")
    anchors = {}
    for idx, name in enumerate(ANCHORS):
        rng = np.random.default_rng([int(seed), idx])
        ok, count = CHECKS[name](dims, trials, rng, tol, inject_fault == name)
        anchors[name] = {"pass": bool(ok), "trials": count}
    return {
        "check": "verify-suite",
        "pass": all(a["pass"] for a in anchors.values()),
        "anchors": anchors,
        "seed": int(seed),
        "dims": [list(d) for d in dims],
        "trials": trials,
        "injected_fault": inject_fault,
        "tolerances": tol.as_dict(),
    }
