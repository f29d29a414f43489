import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kinvol.bounds import lower_bound, upper_bound
from kinvol.factorization import (
    DimensionTooSmall,
    FactorizationResult,
    IdenticalHyperplanes,
    ParityError,
    UnsupportedK,
    cancel_adjacent,
    compose,
    factor_into_k_involutions,
    halfturn_split_signs,
    odd_split_signs,
    orthogonal_hyperplane,
    reflection_pair_to_halfturns,
    reflections_of,
    split_halfturn,
    split_reflection_odd,
    verify_factorization,
)
from kinvol.involutions import KInvolution, SignVector, canonical_k_involution, classify_involution, random_k_involution
from kinvol.minkowski import Hyperplane, Isometry, minkowski_inner, random_isometry, reflect_in_hyperplane


def e(i, n):
    v = np.zeros(n + 1)
    v[i] = 1.0
    return v


def sigma(h):
    return reflect_in_hyperplane(h).matrix


def random_hyperplane(n, rng):
    v = rng.standard_normal(n + 1)
    v[0] = rng.uniform(-0.9, 0.9) * np.linalg.norm(v[1:])
    return Hyperplane.from_vector(v)


def target_cases(n_values, seeds):
    for n in n_values:
        for k in range(1, n):
            for orientation in (1, -1):
                if k % 2 == 0 and orientation == -1:
                    continue
                for seed in seeds:
                    yield n, k, orientation, seed


class TestSignIdentities:
    def test_odd_example(self):
        C = odd_split_signs(4, 3)
        assert C == [
            SignVector((-1, 1, -1, -1)),
            SignVector((-1, -1, 1, -1)),
            SignVector((-1, -1, -1, 1)),
        ]
        assert C[0] * C[1] * C[2] == SignVector((-1, 1, 1, 1))

    def test_halfturn_example(self):
        R, S = halfturn_split_signs(4, 2)
        assert R == SignVector((1, -1, -1, 1))
        assert S == SignVector((-1, 1, -1, 1))
        assert R * S == SignVector((-1, -1, 1, 1))

    def test_odd_rejects_even(self):
        with pytest.raises(ValueError):
            odd_split_signs(5, 2)


class TestReflections:
    def test_identity(self):
        assert reflections_of(Isometry.identity(4)) == []

    def test_single_reflection(self, rng):
        for _ in range(10):
            h = random_hyperplane(4, rng)
            planes = reflections_of(reflect_in_hyperplane(h))
            assert len(planes) == 1
            assert planes[0].isclose(h, 1e-9)

    def test_reflection_through_basepoint(self):
        h = Hyperplane([0.0, 0.6, 0.0, 0.8])
        planes = reflections_of(reflect_in_hyperplane(h))
        assert len(planes) == 1 and planes[0].isclose(h)

    @pytest.mark.parametrize("orientation", [1, -1])
    def test_random_reconstruction(self, orientation):
        for seed in range(30):
            g = random_isometry(4, orientation, seed)
            planes = reflections_of(g)
            assert len(planes) <= 5
            assert len(planes) % 2 == (0 if orientation == 1 else 1)
            P = compose([sigma(p) for p in planes], 5)
            assert np.linalg.norm(P - g.matrix) <= 1e-8

    def test_other_basepoint(self):
        o = random_isometry(3, 1, 99).matrix[:, 0]
        for seed in range(10):
            g = random_isometry(3, -1, seed)
            planes = reflections_of(g, o)
            assert len(planes) <= 4
            assert np.linalg.norm(compose([sigma(p) for p in planes], 4) - g.matrix) <= 1e-8

    def test_cancel_adjacent(self):
        a, b = Hyperplane(e(1, 3)), Hyperplane(e(2, 3))
        assert cancel_adjacent([a, b, b, a]) == []
        assert cancel_adjacent([a, b, Hyperplane(-e(2, 3))]) == [a]


class TestOrthogonalHyperplane:
    def test_coordinate(self):
        w = orthogonal_hyperplane(Hyperplane(e(1, 3)), Hyperplane(e(2, 3)))
        assert np.allclose(w.normal, e(3, 3))

    def test_ultraparallel(self):
        t = 0.8
        u, v = Hyperplane(e(1, 3)), Hyperplane([np.sinh(t), np.cosh(t), 0.0, 0.0])
        assert abs(minkowski_inner(u.normal, v.normal)) > 1
        w = orthogonal_hyperplane(u, v).normal
        assert abs(minkowski_inner(w, u.normal)) < 1e-12
        assert abs(minkowski_inner(w, v.normal)) < 1e-12
        assert minkowski_inner(w, w) == pytest.approx(1.0)

    def test_tangent(self):
        u, v = Hyperplane(e(1, 3)), Hyperplane([1.0, 1.0, 1.0, 0.0])
        assert minkowski_inner(u.normal, v.normal) == pytest.approx(1.0)
        w = orthogonal_hyperplane(u, v).normal
        assert abs(minkowski_inner(w, u.normal)) < 1e-9
        assert abs(minkowski_inner(w, v.normal)) < 1e-9

    def test_errors(self):
        with pytest.raises(DimensionTooSmall):
            orthogonal_hyperplane(Hyperplane(e(1, 2)), Hyperplane(e(2, 2)))
        with pytest.raises(IdenticalHyperplanes):
            orthogonal_hyperplane(Hyperplane(e(1, 3)), Hyperplane(-e(1, 3)))


class TestHalfturns:
    def test_coordinate(self):
        h, k = reflection_pair_to_halfturns(Hyperplane(e(1, 3)), Hyperplane(e(2, 3)))
        assert np.allclose(h.matrix, np.diag([1.0, -1, 1, -1]))
        assert np.allclose(k.matrix, np.diag([1.0, 1, -1, -1]))
        assert np.allclose(h.matrix @ k.matrix, np.diag([1.0, -1, -1, 1]))

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_random_intersecting(self, n, rng):
        for _ in range(20):
            a, b = random_hyperplane(n, rng), random_hyperplane(n, rng)
            h, k = reflection_pair_to_halfturns(a, b)
            assert classify_involution(h.iso).k == 2 and classify_involution(k.iso).k == 2
            assert np.linalg.norm(h.matrix @ k.matrix - sigma(a) @ sigma(b)) <= 1e-9
            assert np.linalg.norm(h.matrix @ h.matrix - np.eye(n + 1)) <= 1e-9


class TestSplitReflection:
    def test_k1(self):
        rho = Hyperplane(e(2, 4))
        (only,) = split_reflection_odd(rho, 1)
        assert np.allclose(only.matrix, sigma(rho))

    def test_diagonal_n4_k3(self):
        rho = Hyperplane(e(1, 4))
        C = split_reflection_odd(rho, 3)
        assert len(C) == 3
        assert all(classify_involution(c.iso).k == 3 for c in C)
        assert np.allclose(compose([c.matrix for c in C], 5), np.diag([1.0, -1, 1, 1, 1]), atol=1e-12)

    def test_random_n6_k5(self, rng):
        rho = random_hyperplane(6, rng)
        C = split_reflection_odd(rho, 5)
        assert len(C) == 5
        assert all(classify_involution(c.iso).k == 5 for c in C)
        assert np.linalg.norm(compose([c.matrix for c in C], 7) - sigma(rho)) <= 1e-9

    def test_errors(self):
        with pytest.raises(ParityError):
            split_reflection_odd(Hyperplane(e(1, 5)), 2)
        with pytest.raises(UnsupportedK):
            split_reflection_odd(Hyperplane(e(1, 4)), 5)


class TestSplitHalfturn:
    def test_diagonal_n4_k2(self):
        h = canonical_k_involution(4, {1, 2})
        R, S = split_halfturn(h, 2)
        assert R.k == S.k == 2
        assert np.allclose(R.matrix @ S.matrix, h.matrix, atol=1e-12)

    @pytest.mark.parametrize("k_target", [1, 2, 3, 4])
    def test_random_n5(self, k_target):
        h = random_k_involution(5, 2, 17)
        R, S = split_halfturn(h, k_target)
        assert classify_involution(R.iso).k == k_target
        assert classify_involution(S.iso).k == k_target
        assert np.linalg.norm(R.matrix @ S.matrix - h.matrix) <= 1e-9

    def test_errors(self):
        with pytest.raises(UnsupportedK):
            split_halfturn(canonical_k_involution(4, {1, 2}), 4)
        with pytest.raises(ValueError):
            split_halfturn(canonical_k_involution(4, {1}), 2)


class TestPipeline:
    def test_identity(self):
        r = factor_into_k_involutions(Isometry.identity(5), 2)
        assert r.length == 0 and r.residual == 0.0
        assert verify_factorization(r).ok

    @pytest.mark.parametrize("n,k", [(4, 1), (4, 2), (5, 3), (6, 4)])
    def test_self_factorisation(self, n, k):
        alpha = random_k_involution(n, k, 2)
        r = factor_into_k_involutions(alpha.iso, k)
        assert r.length == 1
        assert np.allclose(r.factors[0].matrix, alpha.matrix)

    def test_n5_k2(self):
        for seed in range(10):
            r = factor_into_k_involutions(random_isometry(5, 1, seed), 2)
            assert r.length <= 14 and r.residual <= 1e-8
            assert verify_factorization(r).ok

    def test_n5_k3_reversing(self):
        for seed in range(10):
            r = factor_into_k_involutions(random_isometry(5, -1, seed), 3)
            assert r.length <= 15 and r.bound == 15
            assert verify_factorization(r).ok

    def test_parity_error(self):
        for k in (2, 4):
            with pytest.raises(ParityError):
                factor_into_k_involutions(random_isometry(6, -1, 0), k)

    def test_unsupported_k(self):
        g = random_isometry(4, 1, 0)
        for k in (0, -1, 4, 5):
            with pytest.raises(UnsupportedK):
                factor_into_k_involutions(g, k)

    @pytest.mark.parametrize("n,k,orientation,seed", list(target_cases(range(2, 8), range(8))))
    def test_round_trip_and_bounds(self, n, k, orientation, seed):
        g = random_isometry(n, orientation, seed)
        r = factor_into_k_involutions(g, k)
        report = verify_factorization(r)
        assert report.ok, report.lines()
        assert (-1) ** (k * r.length) == orientation
        assert r.length <= (2 * n + 4 if orientation == 1 else 2 * n + 2 + k)
        assert r.length <= upper_bound(n, k) or (k % 2 == 1 and orientation == 1)
        if k in (1, 2):
            assert r.length <= n + 1
        assert lower_bound(n, k) <= upper_bound(n, k)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(3, 8), seed=st.integers(0, 2**31), data=st.data())
    def test_hypothesis_round_trip(self, n, seed, data):
        k = data.draw(st.integers(1, n - 1))
        orientation = data.draw(st.sampled_from([1] if k % 2 == 0 else [1, -1]))
        r = factor_into_k_involutions(random_isometry(n, orientation, seed), k)
        assert verify_factorization(r).ok


class TestVerify:
    def good(self):
        return factor_into_k_involutions(random_isometry(4, 1, 3), 2)

    def test_pass(self):
        report = verify_factorization(self.good())
        assert report.ok and not report.failures()

    def test_identity_factor(self):
        r = self.good()
        bad = list(r.factors)
        bad[1] = KInvolution(Isometry.identity(4), 2)
        report = verify_factorization(FactorizationResult(bad, r.target, r.residual, r.k, r.bound))
        assert not report.ok
        assert any(c.name == "factor[1].involution" and "NotInvolution" in c.detail for c in report.failures())

    def test_reordered_noncommuting(self):
        a = Hyperplane(e(1, 3))
        b = Hyperplane.from_vector([0.0, 1.0, 1.0, 0.0])
        A = canonical_k_involution(3, {1})
        B = classify_involution(sigma(b))
        target = Isometry(A.matrix @ B.matrix)
        assert not np.allclose(A.matrix @ B.matrix, B.matrix @ A.matrix)
        ok = FactorizationResult([A, B], target, 0.0, 1, 2 * 3 + 4)
        assert verify_factorization(ok).ok
        swapped = FactorizationResult([B, A], target, 0.0, 1, 2 * 3 + 4)
        failed = {c.name for c in verify_factorization(swapped).failures()}
        assert failed == {"residual"}
        assert a.isclose(Hyperplane(A.minus_basis[0]))

    def test_wrong_codimension(self):
        r = self.good()
        report = verify_factorization(FactorizationResult(r.factors, r.target, r.residual, 3, r.bound))
        assert any(c.name.endswith("codimension") for c in report.failures())

    def test_length_exceeds_bound(self):
        r = self.good()
        report = verify_factorization(FactorizationResult(r.factors, r.target, r.residual, r.k, 1))
        assert {c.name for c in report.failures()} >= {"length", "bound"}
