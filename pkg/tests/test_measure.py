import itertools
import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wignerkit.errors import PreconditionError
from wignerkit.hilbert import Ray
from wignerkit.io import hypergraph_from_json, hypergraph_to_json
from wignerkit.measure import (
    OrthoHypergraph,
    build_hypergraph,
    cabello18_vectors,
    enumerate_two_valued_measures,
    find_two_valued_measure,
    load_fixture,
    peres33_vectors,
    verify_assignment,
)
from wignerkit.sampling import random_unitary

seeds = st.integers(0, 2**32 - 1)


def brute_cliques(vecs, d, eps=1e-8):
    # independent oracle: test every d-subset directly
    out = []
    for c in itertools.combinations(range(len(vecs)), d):
        if all(abs(np.vdot(vecs[i], vecs[j])) < eps for i, j in itertools.combinations(c, 2)):
            out.append(c)
    return out


def graph_has_measure(h):
    # independent oracle: a two-valued measure is an independent set of the
    # orthogonality graph meeting every context; search maximal ones
    g = nx.Graph()
    g.add_nodes_from(range(h.size))
    g.add_edges_from(h.edges)
    contexts = [set(c) for c in h.contexts]
    for s in nx.find_cliques(nx.complement(g)):
        s = set(s)
        if all(len(s & c) == 1 for c in contexts):
            return True
    return False


def exhaustive(h):
    return [
        list(bits)
        for bits in itertools.product((0, 1), repeat=h.size)
        if verify_assignment(h, list(bits))
    ]


def small_hypergraph(seed):
    """Up to 12 rays of C^3 taken from a few rotated and overlapping bases."""
    r = np.random.default_rng(seed)
    u = random_unitary(3, r)
    rays = [u[:, i] for i in range(3)]
    while len(rays) < int(r.integers(4, 13)):
        a, b = r.choice(len(rays), 2, replace=False)
        t = r.uniform(0.2, 1.3)
        # a ray in the plane of two existing rays, sometimes with its partner
        v = np.cos(t) * rays[a] + np.sin(t) * rays[b]
        rays.append(v)
        if r.random() < 0.5 and len(rays) < 12 and abs(np.vdot(rays[a], rays[b])) < 1e-9:
            rays.append(-np.sin(t) * rays[a] + np.cos(t) * rays[b])
    return build_hypergraph(rays, 3)


class TestBuild:
    def test_standard_basis(self):
        h = build_hypergraph(np.eye(3), 3)
        assert h.contexts == [(0, 1, 2)]
        assert len(h.edges) == 3

    def test_extra_ray(self):
        h = build_hypergraph(list(np.eye(3)) + [[1, 1, 0]], 3)
        assert len(h.contexts) == 1
        assert len(h.edges) == 4
        assert (2, 3) in h.edges

    def test_deduplication(self):
        h = build_hypergraph([[1, 0, 0], [1j, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
        assert h.size == 3

    def test_d_below_three(self):
        with pytest.raises(PreconditionError):
            build_hypergraph(np.eye(2), 2)

    def test_inconsistent_context_rejected(self):
        with pytest.raises(ValueError):
            OrthoHypergraph(np.eye(3)[[0, 1, 1]], 3, [(0, 1, 2)], [(0, 1)])

    @pytest.mark.parametrize("name,d,rays,contexts,edges", [("peres33", 3, 33, 16, 72), ("cabello18", 4, 18, 9, 63)])
    def test_fixtures(self, name, d, rays, contexts, edges):
        h = load_fixture(name)
        assert (h.d, h.size, len(h.contexts), len(h.edges)) == (d, rays, contexts, edges)
        assert sorted(h.contexts) == brute_cliques(h.rays, d)

    def test_fixture_files_match_generators(self):
        for name, gen in (("peres33", peres33_vectors), ("cabello18", cabello18_vectors)):
            h = load_fixture(name)
            fresh = build_hypergraph(gen(), h.d)
            assert all(
                np.allclose(Ray(a).vector, Ray(b).vector) for a, b in zip(h.rays, fresh.rays)
            )

    def test_cabello_each_ray_in_two_contexts(self):
        h = load_fixture("cabello18")
        counts = np.bincount(np.concatenate(h.contexts), minlength=18)
        assert np.all(counts == 2)

    def test_json_round_trip(self):
        h = load_fixture("peres33")
        h2 = hypergraph_from_json(json.loads(json.dumps(hypergraph_to_json(h))))
        assert h2.contexts == h.contexts and h2.edges == h.edges
        obj = hypergraph_to_json(h)
        del obj["contexts"]
        assert hypergraph_from_json(obj).contexts == h.contexts


class TestSearch:
    def test_single_context(self):
        h = build_hypergraph(np.eye(3), 3)
        res = find_two_valued_measure(h)
        assert res.sat and res.assignment == [1, 0, 0]
        assert verify_assignment(h, res.assignment)
        assert len(enumerate_two_valued_measures(h)) == 3

    @pytest.mark.parametrize("d", [3, 4, 5, 6])
    def test_rotated_single_contexts(self, rng, d):
        h = build_hypergraph(random_unitary(d, rng).T, d)
        for seed in range(5):
            res = find_two_valued_measure(h, seed=seed)
            assert res.sat and verify_assignment(h, res.assignment)

    @pytest.mark.parametrize("name", ["peres33", "cabello18"])
    def test_ks_sets_unsat(self, name):
        h = load_fixture(name)
        for seed in [None, 0, 1, 2, 3, 4]:
            res = find_two_valued_measure(h, seed=seed)
            assert res.status == "UNSAT" and res.assignment is None
            assert res.nodes_explored > 0
        assert not graph_has_measure(h)

    def test_cabello_parity(self):
        # each ray lies in two contexts, so the number of contexts hit by a
        # measure is twice the number of 1s: even, while there are 9 contexts
        h = load_fixture("cabello18")
        assert len(h.contexts) % 2 == 1
        assert find_two_valued_measure(h).status == "UNSAT"

    def test_dropping_a_context_ray_set_becomes_sat(self):
        # removing rays breaks the obstruction; check search agrees with networkx
        full = load_fixture("cabello18")
        h = build_hypergraph(full.rays[:-3], 4)
        assert find_two_valued_measure(h).sat == graph_has_measure(h)

    def test_explicit_order(self):
        h = build_hypergraph(np.eye(3), 3)
        assert find_two_valued_measure(h, order=[2, 1, 0]).assignment == [0, 0, 1]
        with pytest.raises(ValueError):
            find_two_valued_measure(h, order=[0, 0, 1])

    @given(seeds)
    def test_matches_exhaustive_enumeration(self, seed):
        h = small_hypergraph(seed)
        assert h.size <= 12
        expected = exhaustive(h)
        found = enumerate_two_valued_measures(h)
        assert sorted(found) == sorted(expected)
        res = find_two_valued_measure(h, seed=seed)
        assert res.sat == bool(expected)
        if res.sat:
            assert verify_assignment(h, res.assignment)

    @given(seeds)
    def test_order_independence(self, seed):
        h = small_hypergraph(seed)
        verdicts = {find_two_valued_measure(h, seed=s).sat for s in range(5)}
        assert len(verdicts) == 1


class TestVerify:
    def test_all_zeros(self):
        h = build_hypergraph(np.eye(3), 3)
        assert not verify_assignment(h, [0, 0, 0])

    def test_flip_breaks(self):
        h = build_hypergraph(list(np.eye(4)) + [[1, 1, 0, 0], [1, -1, 0, 0]], 4)
        res = find_two_valued_measure(h)
        for i in range(h.size):
            flipped = list(res.assignment)
            flipped[i] ^= 1
            assert not verify_assignment(h, flipped)

    def test_two_ones_on_edge(self):
        h = build_hypergraph(list(np.eye(3)) + [[1, 1, 0], [1, -1, 0]], 3)
        # contexts {e3, +, -} and {e1, e2, e3}; e1 and e2 share an edge
        assert not verify_assignment(h, [1, 1, 0, 0, 0])

    def test_partial(self):
        h = build_hypergraph(np.eye(3), 3)
        with pytest.raises(PreconditionError):
            verify_assignment(h, [1, 0])
        with pytest.raises(PreconditionError):
            verify_assignment(h, {0: 1, 1: 0})
        assert verify_assignment(h, {0: 0, 1: 1, 2: 0})
