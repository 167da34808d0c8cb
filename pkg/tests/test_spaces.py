import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from njconst import (
    INF,
    DegenerateInputError,
    DimensionMismatchError,
    SpaceSpec,
    dual_space,
    extreme_points,
    norm,
    project_to_sphere,
    sample_sphere,
    tuple_l2X_norm,
)
from njconst._backend import kernels

from .conftest import gaussian_tuples

P_GRID = [1, Fraction(3, 2), 2, 3, INF]


class TestSpaceSpec:
    def test_exponent_canonicalization(self):
        assert SpaceSpec(1.5, 2).p == Fraction(3, 2)
        assert SpaceSpec("inf", 2).p == INF
        assert SpaceSpec("3/2", 2).p == Fraction(3, 2)
        assert SpaceSpec(2, 5).p == Fraction(2)

    def test_invalid_exponent(self):
        with pytest.raises(ValueError):
            SpaceSpec(0.5, 2)
        with pytest.raises(ValueError):
            SpaceSpec(-math.inf, 2)

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            SpaceSpec(2, 0)


class TestNorm:
    def test_unit_basis_vector(self):
        assert norm(SpaceSpec(2, 3), [1, 0, 0]) == 1.0

    def test_l1_sum_of_abs(self):
        assert norm(SpaceSpec(1, 2), [1, -1]) == 2.0

    def test_sup_norm(self):
        assert norm(SpaceSpec(INF, 4), [1, 1, 1, 1]) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            norm(SpaceSpec(2, 3), [1, 0])

    def test_zero_iff_zero(self):
        for p in P_GRID:
            assert norm(SpaceSpec(p, 3), [0, 0, 0]) == 0.0
            assert norm(SpaceSpec(p, 3), [0, 1e-300, 0]) > 0.0

    @settings(max_examples=60, deadline=None)
    @given(
        lam=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        seed=st.integers(min_value=0, max_value=2**31),
        pidx=st.integers(min_value=0, max_value=len(P_GRID) - 1),
    )
    def test_absolute_homogeneity(self, lam, seed, pidx):
        space = SpaceSpec(P_GRID[pidx], 4)
        v = np.random.default_rng(seed).standard_normal(4)
        lhs = norm(space, lam * v)
        rhs = abs(lam) * norm(space, v)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("p", P_GRID)
    def test_triangle_inequality_sampled(self, p):
        space = SpaceSpec(p, 5)
        pairs = gaussian_tuples(space, 2, 10_000, seed=42)
        x, y = pairs[:, 0, :], pairs[:, 1, :]
        ns = np.asarray(kernels.batch_norms(x + y, space.p_float))
        nx = np.asarray(kernels.batch_norms(x, space.p_float))
        ny = np.asarray(kernels.batch_norms(y, space.p_float))
        assert (ns <= nx + ny + 1e-10).all()

    @pytest.mark.parametrize("p", P_GRID)
    @pytest.mark.parametrize("n", [2, 3])
    def test_sum_of_norms_vs_quadratic_mean(self, p, n):
        space = SpaceSpec(p, 4)
        tuples = gaussian_tuples(space, n, 10_000, seed=7)
        norms = np.asarray(kernels.batch_norms(tuples, space.p_float))
        lhs = norms.sum(axis=1)
        rhs = math.sqrt(n) * np.sqrt((norms**2).sum(axis=1))
        assert (lhs <= rhs + 1e-10).all()


class TestDualSpace:
    def test_self_dual(self):
        assert dual_space(SpaceSpec(2, 3)) == SpaceSpec(2, 3)

    def test_one_inf_pair(self):
        assert dual_space(SpaceSpec(1, 2)) == SpaceSpec(INF, 2)
        assert dual_space(SpaceSpec(INF, 2)) == SpaceSpec(1, 2)

    def test_conjugate_value(self):
        assert dual_space(SpaceSpec(4, 2)).p == Fraction(4, 3)

    @pytest.mark.parametrize(
        "p", [1, Fraction(3, 2), 2, 3, 4, Fraction(7, 5), INF, Fraction(100)]
    )
    def test_involution_exact(self, p):
        s = SpaceSpec(p, 3)
        assert dual_space(dual_space(s)) == s


class TestProjectToSphere:
    def test_euclidean(self):
        np.testing.assert_allclose(
            project_to_sphere(SpaceSpec(2, 2), [3, 4]), [0.6, 0.8]
        )

    def test_l1(self):
        np.testing.assert_allclose(
            project_to_sphere(SpaceSpec(1, 2), [1, 1]), [0.5, 0.5]
        )

    def test_sup(self):
        np.testing.assert_allclose(
            project_to_sphere(SpaceSpec(INF, 2), [2, 1]), [1.0, 0.5]
        )

    def test_zero_vector(self):
        with pytest.raises(DegenerateInputError):
            project_to_sphere(SpaceSpec(2, 2), [0, 0])


class TestSampleSphere:
    def test_deterministic(self):
        space = SpaceSpec(3, 4)
        np.testing.assert_array_equal(sample_sphere(space, 9), sample_sphere(space, 9))

    @pytest.mark.parametrize("p", P_GRID)
    def test_unit_norm(self, p):
        space = SpaceSpec(p, 5)
        for seed in range(20):
            assert norm(space, sample_sphere(space, seed)) == pytest.approx(
                1.0, abs=1e-12
            )

    def test_distinct_seeds_distinct_vectors(self):
        # pinned seed pair; distinct with overwhelming probability
        space = SpaceSpec(2, 3)
        assert not np.array_equal(sample_sphere(space, 0), sample_sphere(space, 1))


class TestExtremePoints:
    def test_l1_signed_basis(self):
        pts = extreme_points(SpaceSpec(1, 2))
        expected = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
        np.testing.assert_array_equal(pts, expected)

    def test_sup_vertices(self):
        pts = extreme_points(SpaceSpec(INF, 2))
        assert pts.shape == (4, 2)
        assert {tuple(v) for v in pts.tolist()} == {
            (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)
        }

    def test_strictly_convex_unsupported(self):
        assert extreme_points(SpaceSpec(3, 2)) is None

    @pytest.mark.parametrize("p", [1, INF])
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_unit_norm_and_negation_closed(self, p, d):
        space = SpaceSpec(p, d)
        pts = extreme_points(space)
        for v in pts:
            assert norm(space, v) == 1.0
        as_set = {tuple(v) for v in pts.tolist()}
        assert {tuple(-v for v in row) for row in as_set} == as_set


class TestTupleNorm:
    def test_orthonormal_pair(self):
        assert tuple_l2X_norm(SpaceSpec(2, 2), np.eye(2)) == pytest.approx(
            math.sqrt(2), rel=1e-15
        )

    def test_zero_tuple(self):
        assert tuple_l2X_norm(SpaceSpec(2, 2), np.zeros((3, 2))) == 0.0

    def test_repeated_vector(self):
        t = np.tile([1.0, 0.0], (3, 1))
        assert tuple_l2X_norm(SpaceSpec(1, 2), t) == pytest.approx(
            math.sqrt(3), rel=1e-15
        )
