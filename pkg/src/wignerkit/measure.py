"""
Two-valued measures on finite sets of rays.

A finite ray set in C^d is turned into an orthogonality hypergraph whose
contexts are the complete orthogonal d-tuples.  A two-valued measure puts a
1 on exactly one ray of every context and never on both rays of an
orthogonal pair.  Kochen-Specker sets admit none.
"""

import itertools
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import PreconditionError
from .hilbert import DEFAULT_TOL, Ray, ray_distance
from .sampling import make_rng

SAT = "SAT"
UNSAT = "UNSAT"


@dataclass(frozen=True, eq=False)
class OrthoHypergraph:
    """Rays of C^d with their orthogonal pairs and complete orthogonal d-tuples.

    ``rays`` is an m x d array of unit vectors; ``contexts`` and ``edges``
    hold ray indices.
    """

    rays: np.ndarray
    d: int
    contexts: list
    edges: list
    tol: object = DEFAULT_TOL

    def __post_init__(self):
        rays = np.asarray(self.rays, dtype=complex)
        if rays.ndim != 2 or rays.shape[1] != self.d:
            raise ValueError(f"rays must be an m x {self.d} array")
        gram = np.abs(rays.conj() @ rays.T)
        for c in self.contexts:
            if len(c) != self.d or len(set(c)) != self.d:
                raise ValueError(f"context {c} must list {self.d} distinct rays")
            for i, j in itertools.combinations(c, 2):
                if gram[i, j] >= self.tol.eps_orth:
                    raise ValueError(f"context {c} has non-orthogonal rays {i}, {j}")
        edge_set = {tuple(sorted(e)) for e in self.edges}
        for c in self.contexts:
            for e in itertools.combinations(sorted(c), 2):
                if e not in edge_set:
                    raise ValueError(f"edge {e} of context {c} is missing from edges")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "contexts", [tuple(c) for c in self.contexts])
        object.__setattr__(self, "edges", sorted(edge_set))

    @property
    def size(self):
        return len(self.rays)

    def neighbours(self):
        nb = [set() for _ in range(self.size)]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb


def _cliques_of_size(nb, d):
    """All d-cliques, each listed once in increasing index order."""
    out = []

    def grow(clique, cands):
        if len(clique) == d:
            out.append(tuple(clique))
            return
        for v in sorted(cands):
            grow(clique + [v], {u for u in cands if u > v} & nb[v])

    grow([], set(range(len(nb))))
    return out


def build_hypergraph(rays, d, tol=DEFAULT_TOL):
    """Orthogonality hypergraph of ``rays`` (duplicates removed, order kept)."""
    if d < 3:
        raise PreconditionError("two-valued measures are only meaningful for d >= 3")
    unique = []
    for r in rays:
        r = r if isinstance(r, Ray) else Ray(r)
        if r.n != d:
            raise PreconditionError(f"ray of dimension {r.n} in a C^{d} hypergraph")
        if all(ray_distance(r, s) >= tol.eps_eq for s in unique):
            unique.append(r)
    vecs = np.array([r.vector for r in unique])
    gram = np.abs(vecs.conj() @ vecs.T)
    edges = [(int(i), int(j)) for i, j in np.argwhere(np.triu(gram < tol.eps_orth, 1))]
    nb = [set() for _ in unique]
    for i, j in edges:
        nb[i].add(j)
        nb[j].add(i)
    return OrthoHypergraph(vecs, d, _cliques_of_size(nb, d), edges, tol)


@dataclass
class MeasureResult:
    status: str
    assignment: list = None
    nodes_explored: int = 0

    @property
    def sat(self):
        return self.status == SAT

    def to_dict(self):
        out = {"status": self.status, "nodes_explored": self.nodes_explored}
        if self.assignment is not None:
            out["assignment"] = list(self.assignment)
        return out


class _Search:
    def __init__(self, h, order):
        self.nb = h.neighbours()
        self.contexts = [np.array(c) for c in h.contexts]
        self.ray_contexts = [[] for _ in range(h.size)]
        for ci, c in enumerate(h.contexts):
            for i in c:
                self.ray_contexts[i].append(ci)
        self.order = order
        self.nodes = 0

    def propagate(self, values, queue):
        while queue:
            i, v = queue.pop()
            if values[i] == v:
                continue
            if values[i] != -1:
                return False
            values[i] = v
            if v == 1:
                queue.extend((j, 0) for j in self.nb[i])
            for ci in self.ray_contexts[i]:
                vals = values[self.contexts[ci]]
                ones = np.count_nonzero(vals == 1)
                if ones > 1:
                    return False
                if ones == 0:
                    free = self.contexts[ci][vals == -1]
                    if free.size == 0:
                        return False
                    if free.size == 1:
                        queue.append((int(free[0]), 1))
        return True

    def solutions(self, values):
        self.nodes += 1
        free = [i for i in self.order if values[i] == -1]
        if not free:
            yield values
            return
        i = free[0]
        for v in (1, 0):
            trial = values.copy()
            if self.propagate(trial, [(i, v)]):
                yield from self.solutions(trial)


def _ordering(h, order, seed):
    if order is not None:
        order = [int(i) for i in order]
        if sorted(order) != list(range(h.size)):
            raise ValueError("order must be a permutation of the ray indices")
        return order
    if seed is not None:
        return [int(i) for i in make_rng(seed).permutation(h.size)]
    return list(range(h.size))


def find_two_valued_measure(h, order=None, seed=None):
    """First two-valued measure in backtracking order, or UNSAT.

    Unit propagation on the exactly-one contexts plus chronological
    backtracking, branching on 1 before 0.  ``order`` fixes the variable
    order explicitly; otherwise ``seed`` selects a random permutation, and
    without either the index order is used.
    """
    search = _Search(h, _ordering(h, order, seed))
    values = -np.ones(h.size, dtype=np.int8)
    for sol in search.solutions(values):
        return MeasureResult(SAT, [int(v) for v in sol], search.nodes)
    return MeasureResult(UNSAT, None, search.nodes)


def enumerate_two_valued_measures(h, order=None, seed=None):
    """Every two-valued measure, as lists of 0/1 values."""
    search = _Search(h, _ordering(h, order, seed))
    values = -np.ones(h.size, dtype=np.int8)
    return [[int(v) for v in sol] for sol in search.solutions(values)]


def verify_assignment(h, assignment):
    """Check both measure constraints; ``assignment`` maps every ray index to 0 or 1."""
    if isinstance(assignment, dict):
        if set(assignment) != set(range(h.size)):
            raise PreconditionError("partial assignment")
        values = [assignment[i] for i in range(h.size)]
    else:
        values = list(assignment)
        if len(values) != h.size:
            raise PreconditionError("partial assignment")
    if any(v not in (0, 1) for v in values):
        raise PreconditionError("assignment values must be 0 or 1")
    if any(sum(values[i] for i in c) != 1 for c in h.contexts):
        return False
    return not any(values[i] and values[j] for i, j in h.edges)


def peres33_vectors():
    """Peres' 33 rays of R^3 with coordinates in {0, ±1, ±√2}.

    The permutations of (0,0,1), (0,1,±1), (0,1,±√2) and (1,±1,±√2), up to
    sign.
    """
    s = np.sqrt(2.0)
    patterns = [(0, 0, 1), (0, 1, 1), (0, 1, -1), (0, 1, s), (0, 1, -s), (1, 1, s), (1, 1, -s), (1, -1, s), (1, -1, -s)]
    out = []
    for p in patterns:
        for q in itertools.permutations(p):
            r = Ray(q)
            if all(ray_distance(r, t) >= 1e-9 for t in out):
                out.append(r)
    return [r.vector.real.copy() for r in out]


def cabello18_vectors():
    """The 18 rays of C^4 forming 9 orthogonal bases, each ray in two bases."""
    return [
        np.array(v, dtype=float) / np.linalg.norm(v)
        for v in [
            (0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0), (0, 1, 0, 0), (1, 0, 1, 0),
            (1, 0, -1, 0), (1, -1, 1, -1), (1, -1, -1, 1), (0, 0, 1, 1), (1, 1, 1, 1), (0, 1, 0, -1),
            (1, 0, 0, 1), (1, 0, 0, -1), (0, 1, -1, 0), (1, 1, -1, 1), (1, 1, 1, -1), (-1, 1, 1, 1),
        ]
    ]


FIXTURES = {"peres33": ("peres33.json", 3), "cabello18": ("cabello18.json", 4)}


def load_fixture(name, tol=DEFAULT_TOL):
    """Hypergraph of a shipped ray-set fixture (``peres33`` or ``cabello18``)."""
    from .io import hypergraph_from_json

    fname, _ = FIXTURES[name]
    text = resources.files("wignerkit").joinpath("data").joinpath(fname).read_text()
    return hypergraph_from_json(json.loads(text), tol)
