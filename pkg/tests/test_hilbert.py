import numpy as np
import pytest
from hypothesis import given, strategies as st

from wignerkit.errors import DimensionMismatch, EmptySpanError, ZeroComplementError
from wignerkit.hilbert import (
    DEFAULT_TOL,
    Ray,
    Subspace,
    Tolerance,
    basis_vector,
    complement,
    coordinate_subspace,
    dim,
    inner,
    intersect,
    is_contained,
    numerical_rank,
    orthonormalize,
    projection_of,
    ray_distance,
    same_subspace,
    subspace_sum,
)
from wignerkit.sampling import random_pair_with_intersection, random_subspace

e = basis_vector
seeds = st.integers(0, 2**32 - 1)


def svd_rank(a):
    # independent of numerical_rank: absolute cutoff on normalized columns
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > 1e-6 * s[0]))


class TestInner:
    def test_orthonormal_basis(self):
        assert inner(e(3, 0), e(3, 1)) == 0

    def test_linear_in_first_argument(self):
        assert inner([1j, 0], [1, 0]) == 1j
        assert inner([1, 0], [1j, 0]) == -1j

    def test_unit_self_product(self):
        v = np.array([1, 1j]) / np.sqrt(2)
        assert inner(v, v) == pytest.approx(1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            inner([1, 0], [1, 0, 0])


class TestOrthonormalize:
    def test_independent_pair(self):
        s = orthonormalize([[1, 0, 0], [1, 1, 0]])
        assert s.k == 2
        assert same_subspace(s, coordinate_subspace(3, [0, 1]))

    def test_dependent_pair_collapses(self):
        s = orthonormalize([[1, 0], [2, 0]])
        assert s.k == 1
        assert same_subspace(s, coordinate_subspace(2, [0]))

    def test_zero_input(self):
        with pytest.raises(EmptySpanError, match="empty span"):
            orthonormalize([[0, 0, 0]])

    def test_nearly_dependent_columns(self):
        a = np.array([[1, 1, 0], [0, 1e-13, 0], [0, 0, 1]], dtype=complex)
        assert orthonormalize(a).k == 2

    @given(seeds, st.integers(2, 7), st.integers(1, 9))
    def test_orthonormal_and_rank(self, seed, n, m):
        r = np.random.default_rng(seed)
        rank = min(n, m, int(r.integers(1, min(n, m) + 1)))
        a = (r.normal(size=(n, rank)) + 1j * r.normal(size=(n, rank))) @ (
            r.normal(size=(rank, m)) + 1j * r.normal(size=(rank, m))
        )
        s = orthonormalize(a)
        assert s.k == svd_rank(a)
        assert np.linalg.norm(s.basis.conj().T @ s.basis - np.eye(s.k)) < DEFAULT_TOL.eps_orth
        # same span: every input column lies in s
        assert np.linalg.norm(a - s.projection @ a) < 1e-9 * np.linalg.norm(a)


class TestComplement:
    def test_coordinate_examples(self):
        assert same_subspace(complement(coordinate_subspace(3, [0])), coordinate_subspace(3, [1, 2]))
        assert same_subspace(complement(coordinate_subspace(4, [0, 1])), coordinate_subspace(4, [2, 3]))

    def test_full_space(self):
        with pytest.raises(ZeroComplementError, match="zero complement"):
            complement(coordinate_subspace(3, [0, 1, 2]))

    @given(seeds, st.integers(2, 7))
    def test_involution(self, seed, n):
        r = np.random.default_rng(seed)
        s = random_subspace(n, int(r.integers(1, n)), r)
        c = complement(s)
        assert c.k == n - s.k
        assert np.max(np.abs(c.basis.conj().T @ s.basis)) < DEFAULT_TOL.eps_orth
        assert same_subspace(complement(c), s)


class TestLattice:
    def test_intersection_example(self):
        x = intersect(coordinate_subspace(3, [0, 1]), coordinate_subspace(3, [1, 2]))
        assert same_subspace(x, coordinate_subspace(3, [1]))

    def test_sum_example(self):
        s = subspace_sum(coordinate_subspace(3, [0]), coordinate_subspace(3, [1]))
        assert same_subspace(s, coordinate_subspace(3, [0, 1]))

    def test_zero_intersection_is_none(self):
        assert intersect(coordinate_subspace(4, [0]), coordinate_subspace(4, [1])) is None
        assert dim(None) == 0

    def test_generic_pair_sum_dimension(self, rng):
        x, y = random_subspace(5, 2, rng), random_subspace(5, 2, rng)
        assert intersect(x, y) is None
        assert subspace_sum(x, y).k == svd_rank(np.hstack([x.basis, y.basis])) == 4

    def test_dimension_formula_1000_pairs(self, rng):
        # independent oracle: SVD rank of the stacked bases and of the
        # stacked complements
        for _ in range(1000):
            n = int(rng.integers(3, 8))
            k = int(rng.integers(1, n))
            j = int(rng.integers(max(0, 2 * k - n), k + 1))
            x, y = random_pair_with_intersection(n, k, j, rng)
            ds, di = subspace_sum(x, y).k, dim(intersect(x, y))
            assert ds + di == 2 * k
            assert di == j
            assert ds == svd_rank(np.hstack([x.basis, y.basis]))

    def test_mismatched_ambient(self):
        with pytest.raises(DimensionMismatch):
            subspace_sum(coordinate_subspace(3, [0]), coordinate_subspace(4, [0]))


class TestProjection:
    def test_examples(self):
        assert np.allclose(projection_of(coordinate_subspace(2, [0])), [[1, 0], [0, 0]])
        assert np.allclose(projection_of(coordinate_subspace(2, [0, 1])), np.eye(2))

    @given(seeds, st.integers(2, 7))
    def test_projection_properties(self, seed, n):
        r = np.random.default_rng(seed)
        s = random_subspace(n, int(r.integers(1, n)), r)
        p = projection_of(s)
        assert np.allclose(p, p.conj().T, atol=1e-12)
        assert np.linalg.norm(p @ p - p) < 1e-10
        assert abs(np.trace(p) - s.k) < 1e-10
        v = s.basis @ (r.normal(size=s.k) + 1j * r.normal(size=s.k))
        w = complement(s).basis @ r.normal(size=n - s.k)
        assert np.linalg.norm(p @ v - v) < DEFAULT_TOL.eps_orth * np.linalg.norm(v)
        assert np.linalg.norm(p @ w) < DEFAULT_TOL.eps_orth * np.linalg.norm(w)


class TestTypes:
    def test_ray_canonical_phase(self):
        r = Ray([0, 1j, 1])
        assert r.vector[1].real > 0 and r.vector[1].imag == 0
        assert abs(np.linalg.norm(r.vector) - 1) < 1e-12

    def test_ray_equality_up_to_phase(self):
        v = np.array([1 + 2j, 3, -1j])
        assert np.allclose(Ray(v).vector, Ray(np.exp(0.7j) * 5 * v).vector)
        assert ray_distance(v, np.exp(1.1j) * v) < 1e-12

    def test_ray_distance_small_angle(self):
        t = 1e-10
        d = ray_distance([1, 0], [np.cos(t), np.sin(t)])
        assert d == pytest.approx(np.sqrt(2) * t, rel=1e-6)

    def test_zero_ray(self):
        with pytest.raises(EmptySpanError):
            Ray([0, 0])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            Ray([np.nan, 1])

    def test_subspace_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            Subspace(np.array([[1, 1], [0, 1]], dtype=complex))

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            Tolerance(eps_rank=1e-3)
        with pytest.raises(ValueError):
            Tolerance(eps_orth=0)
        assert Tolerance().replace(eps_eq=None, eps_orth=1e-6).eps_orth == 1e-6

    def test_containment(self):
        assert is_contained(coordinate_subspace(4, [1]), coordinate_subspace(4, [0, 1]))
        assert not is_contained(coordinate_subspace(4, [0, 1]), coordinate_subspace(4, [1]))

    def test_rank_is_scale_invariant(self):
        a = np.diag([1.0, 1e-5, 1e-12])
        assert numerical_rank(a) == numerical_rank(1e8 * a) == 2
