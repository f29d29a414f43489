import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kinvol.minkowski import (
    DegenerateSubspace,
    Hyperplane,
    Isometry,
    IsometryError,
    Tolerances,
    as_hpoint,
    bisector_reflection,
    is_isometry,
    j_orthonormalize,
    lie_algebra_basis,
    minkowski_inner,
    numerical_rank,
    random_isometry,
    reflect_in_hyperplane,
    vector_kind,
)

from conftest import assert_isometry, form_residual, jform

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=8)


def e(i, n):
    v = np.zeros(n + 1)
    v[i] = 1.0
    return v


class TestInner:
    def test_signature(self):
        assert minkowski_inner(e(0, 3), e(0, 3)) == -1.0
        assert minkowski_inner(e(1, 3), e(1, 3)) == 1.0
        assert minkowski_inner(e(0, 3), e(1, 3)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            minkowski_inner(np.zeros(3), np.zeros(4))

    def test_matches_matrix_form(self, rng):
        x, y = rng.standard_normal((2, 5))
        assert minkowski_inner(x, y) == pytest.approx(x @ jform(4) @ y)
        assert minkowski_inner(x, y) == pytest.approx(minkowski_inner(y, x))

    def test_vector_kind(self):
        assert vector_kind([1, 0, 0]) == "timelike"
        assert vector_kind([0, 1, 0]) == "spacelike"
        assert vector_kind([1, 1, 0]) == "null"

    @settings(max_examples=30, deadline=None)
    @given(n=dims, seed=seeds)
    def test_invariance_under_isometries(self, n, seed):
        M = random_isometry(n, 1 if seed % 2 else -1, seed).matrix
        x, y = np.random.default_rng(seed).standard_normal((2, n + 1))
        assert minkowski_inner(M @ x, M @ y) == pytest.approx(minkowski_inner(x, y), abs=1e-9 * (1 + np.abs(x).sum() * np.abs(y).sum()) * np.abs(M).max() ** 2)


class TestIsIsometry:
    def test_identity(self):
        check = is_isometry(np.eye(4))
        assert check.ok and check.residual == 0.0

    def test_reflection_matrix(self):
        assert is_isometry(np.diag([1.0, -1, 1, 1]))

    def test_lower_sheet(self):
        check = is_isometry(np.diag([-1.0, 1, 1, 1]))
        assert not check
        assert check.residual == 0.0 and not check.upper_sheet

    def test_not_square(self):
        assert not is_isometry(np.ones((3, 4)))

    def test_euclidean_rotation_with_boost_part_fails(self):
        c, s = np.cos(0.3), np.sin(0.3)
        M = np.eye(3)
        M[:2, :2] = [[c, -s], [s, c]]  # rotates the timelike axis: not Lorentz
        assert not is_isometry(M)

    def test_constructor_rejects(self):
        with pytest.raises(IsometryError):
            Isometry(np.diag([-1.0, 1, 1]))
        Isometry(np.diag([-1.0, 1, 1]), check=False)

    def test_composition_closed(self):
        A = random_isometry(5, 1, 1)
        B = random_isometry(5, -1, 2)
        C = A @ B
        assert is_isometry(C.matrix).residual <= 4 * max(A.residual, B.residual, 1e-15) + 1e-13
        assert C.orientation == -1

    def test_inverse(self):
        A = random_isometry(4, -1, 7)
        assert np.allclose((A @ A.inverse()).matrix, np.eye(5), atol=1e-12)


class TestReflection:
    def test_coordinate(self):
        assert np.array_equal(reflect_in_hyperplane(Hyperplane(e(1, 2))).matrix, np.diag([1.0, -1, 1]))

    def test_direct_formula(self):
        w = np.array([0.0, 3 / 5, 4 / 5])
        S = reflect_in_hyperplane(Hyperplane(w)).matrix
        # spatial block I - 2 w w^T, worked by hand
        expected = np.array([[1.0, 0, 0], [0, 7 / 25, -24 / 25], [0, -24 / 25, -7 / 25]])
        assert np.allclose(S, expected, atol=1e-15)
        assert np.allclose(S @ w, -w)

    def test_rejects_timelike(self):
        with pytest.raises(ValueError):
            Hyperplane(e(0, 3))
        with pytest.raises(ValueError):
            Hyperplane.from_vector([2.0, 1.0, 0.0])

    def test_canonical_sign(self):
        a = Hyperplane([0.0, -0.6, 0.8])
        b = Hyperplane([0.0, 0.6, -0.8])
        assert a == b and a.normal[1] > 0

    @settings(max_examples=40, deadline=None)
    @given(n=dims, seed=seeds)
    def test_eigenstructure(self, n, seed):
        r = np.random.default_rng(seed)
        v = r.standard_normal(n + 1)
        v[0] = r.uniform(-0.95, 0.95) * np.linalg.norm(v[1:])
        w = Hyperplane.from_vector(v)
        S = reflect_in_hyperplane(w).matrix
        assert_isometry(S)
        assert np.allclose(S @ S, np.eye(n + 1), atol=1e-10)
        assert np.linalg.det(S) == pytest.approx(-1.0)
        evals = np.sort(np.linalg.eigvals(S).real)
        assert np.allclose(evals, [-1.0] + [1.0] * n, atol=1e-8)
        assert np.allclose(S @ w.normal, -w.normal, atol=1e-10)


class TestBisector:
    def test_moves_p_to_q(self):
        p = e(0, 3)
        q = np.array([np.cosh(1.0), np.sinh(1.0), 0.0, 0.0])
        S = bisector_reflection(p, q).matrix
        assert np.allclose(S @ p, q, atol=1e-12)
        assert np.allclose(S @ q, p, atol=1e-12)
        assert np.allclose(S @ S, np.eye(4), atol=1e-12)

    def test_symmetric(self):
        p = random_isometry(4, 1, 3).matrix[:, 0]
        q = random_isometry(4, 1, 4).matrix[:, 0]
        assert np.allclose(bisector_reflection(p, q).matrix, bisector_reflection(q, p).matrix)

    def test_equal_points(self):
        with pytest.raises(ValueError):
            bisector_reflection(e(0, 2), e(0, 2))

    def test_hpoint_validation(self):
        as_hpoint([np.cosh(2.0), np.sinh(2.0), 0.0])
        with pytest.raises(ValueError):
            as_hpoint([-1.0, 0.0, 0.0])


class TestRandomIsometry:
    def test_deterministic(self):
        assert np.array_equal(random_isometry(5, 1, 11).matrix, random_isometry(5, 1, 11).matrix)
        assert not np.array_equal(random_isometry(5, 1, 11).matrix, random_isometry(5, 1, 12).matrix)

    @settings(max_examples=50, deadline=None)
    @given(n=dims, seed=seeds, orientation=st.sampled_from([1, -1]))
    def test_valid_and_oriented(self, n, seed, orientation):
        M = random_isometry(n, orientation, seed).matrix
        assert form_residual(M) <= 1e-9 and M[0, 0] > 0
        assert np.sign(np.linalg.det(M)) == orientation

    def test_lie_basis(self):
        for n in range(2, 7):
            B = lie_algebra_basis(n)
            J = jform(n)
            assert B.shape == (n * (n + 1) // 2, n + 1, n + 1)
            for X in B:
                assert np.array_equal((J @ X).T, -(J @ X))
            assert numerical_rank(B.reshape(len(B), -1)) == len(B)

    def test_rejects(self):
        with pytest.raises(ValueError):
            random_isometry(1, 1, 0)
        with pytest.raises(ValueError):
            random_isometry(3, 0, 0)


class TestRank:
    def test_identity_and_zero(self):
        assert numerical_rank(np.eye(7)) == 7
        assert numerical_rank(np.zeros((4, 5))) == 0

    def test_outer_product(self, rng):
        u, v = rng.standard_normal((2, 6))
        assert numerical_rank(np.outer(u, v)) == 1

    def test_cutoff_is_relative(self):
        # ratio 1e-7 sits between the two cutoffs
        assert numerical_rank(np.diag([1e6, 1e-1])) == 2
        assert numerical_rank(np.diag([1e6, 1e-1]), tol_rank=1e-6) == 1
        assert numerical_rank(np.diag([1e6, 1e-3])) == 1


class TestJOrthonormalize:
    def gram(self, vs):
        V = np.array(vs)
        return V @ jform(V.shape[1] - 1) @ V.T

    def test_unchanged(self):
        out = j_orthonormalize([e(0, 3), e(1, 3)])
        assert np.allclose(out, [e(0, 3), e(1, 3)])

    def test_euclidean_like(self):
        out = j_orthonormalize([e(1, 3), e(1, 3) + e(2, 3)])
        assert np.allclose(out, [e(1, 3), e(2, 3)])

    def test_noisy_spacelike_plane(self, rng):
        a = e(1, 4) + 1e-3 * rng.standard_normal(5) * np.array([0, 1, 1, 1, 1])
        b = e(1, 4) + e(3, 4) + 1e-3 * rng.standard_normal(5) * np.array([0, 1, 1, 1, 1])
        out = j_orthonormalize([a, b])
        assert np.allclose(self.gram(out), np.eye(2), atol=1e-12)

    def test_null_pair_spans_lorentz_plane(self):
        out = j_orthonormalize([e(0, 2) + e(1, 2), e(0, 2) - e(1, 2)])
        assert np.allclose(np.sort(np.diag(self.gram(out))), [-1, 1])
        assert np.allclose(self.gram(out) - np.diag(np.diag(self.gram(out))), 0, atol=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateSubspace):
            j_orthonormalize([e(0, 3) + e(1, 3), e(2, 3)])
        with pytest.raises(DegenerateSubspace):
            j_orthonormalize([e(1, 3), 2 * e(1, 3)])

    @settings(max_examples=30, deadline=None)
    @given(n=dims, seed=seeds)
    def test_random_full_basis(self, n, seed):
        V = np.random.default_rng(seed).standard_normal((n + 1, n + 1))
        out = j_orthonormalize(list(V))
        G = self.gram(out)
        assert np.allclose(np.abs(G), np.eye(n + 1), atol=1e-7)
        assert int(np.sum(np.diag(G) < 0)) == 1


def test_tolerances_positive():
    with pytest.raises(ValueError):
        Tolerances(tol_form=0.0)
    assert Tolerances().replace(tol_recon=1e-6).tol_recon == 1e-6


def test_tolerances_env(monkeypatch):
    monkeypatch.setenv("KINVOL_TOL", "1e-7")
    assert Tolerances.from_env().tol_recon == 1e-7
