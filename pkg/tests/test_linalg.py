"""Numerical kernel tests: matrix exponential, Hermitian eigensolver, null spaces,
superoperator assembly, and the column-stacking vec convention."""

import numpy as np
import pytest
import scipy.linalg

from ctoqw import mat_exp, hermitian_eig, null_space, superop_matrix, vec, unvec
from ctoqw import internal_lindblad_matrix, stationary_states
from ctoqw.coins import scalar_coin, three_level_coin

from helpers import random_matrix, random_hermitian


class TestMatExp:
    def test_t_zero_is_identity(self):
        rng = np.random.default_rng(1)
        m = random_matrix(rng, 3)
        assert np.allclose(mat_exp(m, 0.0), np.eye(3), atol=1e-14)

    def test_nilpotent_series_truncates(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]])
        for t in (0.3, 1.0, 7.5):
            expected = np.array([[1.0, t], [0.0, 1.0]])
            assert np.allclose(mat_exp(m, t), expected, atol=1e-13)

    def test_scalar_exponential(self):
        m = np.array([[-2.5]])
        assert abs(mat_exp(m, 1.0)[0, 0] - np.exp(-2.5)) < 1e-14

    def test_small_norm_relative_error(self):
        # reference: spectral evaluation on a normal matrix is exact up to roundoff
        rng = np.random.default_rng(2)
        h = random_hermitian(rng, 4)
        h *= 0.9 / np.linalg.norm(h, 1)
        w, v = np.linalg.eigh(h)
        ref = (v * np.exp(w)) @ v.conj().T
        err = np.linalg.norm(mat_exp(h, 1.0) - ref) / np.linalg.norm(ref)
        assert err < 1e-12

    def test_matches_scipy_on_nonnormal(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            m = random_matrix(rng, 3)
            m /= np.linalg.norm(m, 1)
            diff = np.linalg.norm(mat_exp(m, 1.0) - scipy.linalg.expm(m))
            assert diff < 1e-12

    def test_semigroup_property(self):
        rng = np.random.default_rng(4)
        m = random_matrix(rng, 3)
        m *= 4.0 / np.linalg.norm(m, 2)
        s, t = 0.7, 1.1
        lhs = mat_exp(m, s) @ mat_exp(m, t)
        rhs = mat_exp(m, s + t)
        assert np.linalg.norm(lhs - rhs) < 1e-10

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            mat_exp(np.zeros((2, 3)))

    def test_rejects_nonfinite(self):
        m = np.array([[0.0, np.inf], [0.0, 0.0]])
        with pytest.raises(ValueError):
            mat_exp(m)

    def test_noncontiguous_input(self):
        rng = np.random.default_rng(5)
        m = random_matrix(rng, 3)
        assert np.allclose(mat_exp(m.conj().T, 1.0), mat_exp(m.conj().T.copy(), 1.0))


class TestHermitianEig:
    def test_diagonal_case(self):
        w, v = hermitian_eig(np.diag([1.0, 0.0]))
        assert np.allclose(w, [0.0, 1.0])
        assert abs(v[1, 0]) == pytest.approx(1.0) and abs(v[0, 1]) == pytest.approx(1.0)

    def test_pauli_x(self):
        w, _ = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(w, [-1.0, 1.0], atol=1e-14)

    def test_reconstruction_and_unitarity(self):
        rng = np.random.default_rng(6)
        m = random_hermitian(rng, 5)
        w, v = hermitian_eig(m)
        scale = np.linalg.norm(m)
        assert np.linalg.norm((v * w) @ v.conj().T - m) < 1e-10 * scale
        assert np.linalg.norm(v.conj().T @ v - np.eye(5)) < 1e-10
        assert np.all(np.diff(w) >= 0)

    def test_stationary_density_spectrum(self):
        # unique stationary state of the three-level fixture is PSD with unit trace
        sa = stationary_states(three_level_coin(0.0))
        w, _ = hermitian_eig(sa.rho_inv)
        assert w.min() >= -1e-12
        assert abs(w.sum() - 1.0) < 1e-12

    def test_rejects_nonhermitian(self):
        with pytest.raises(ValueError):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestNullSpace:
    def test_rank_one_projector(self):
        basis = null_space(np.diag([1.0, 0.0]))
        assert len(basis) == 1
        assert abs(abs(basis[0][1]) - 1.0) < 1e-14
        assert abs(basis[0][0]) < 1e-14

    def test_identity_has_empty_kernel(self):
        assert null_space(np.eye(3)) == []

    def test_scalar_walk_generator_kernel(self):
        # d=1 internal generator is the zero map on C^1
        s = internal_lindblad_matrix(scalar_coin(2.0, 1.0))
        basis = null_space(s)
        assert len(basis) == 1

    def test_orthonormal_and_annihilating(self):
        rng = np.random.default_rng(7)
        u = random_matrix(rng, 4)
        m = u @ np.diag([1.0, 2.0, 0.0, 0.0]) @ np.linalg.inv(u)
        basis = null_space(m)
        assert len(basis) == 2
        g = np.array([[np.vdot(a, b) for b in basis] for a in basis])
        assert np.allclose(g, np.eye(2), atol=1e-10)
        smax = np.linalg.svd(m, compute_uv=False)[0]
        for vker in basis:
            assert np.linalg.norm(m @ vker) <= 1e-10 * smax * 2.0


class TestSuperoperator:
    def test_identity_pair(self):
        s = superop_matrix([(np.eye(2), np.eye(2))])
        assert np.allclose(s, np.eye(4))

    def test_kron_identity(self):
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        s = superop_matrix([(x, np.eye(2))])
        assert np.allclose(s, np.kron(np.eye(2), x))

    def test_matches_direct_product(self):
        rng = np.random.default_rng(8)
        for d in (2, 3):
            left = random_matrix(rng, d)
            right = random_matrix(rng, d)
            s = superop_matrix([(left, right)])
            rho = random_matrix(rng, d)
            direct = left @ rho @ right
            assert np.linalg.norm(s @ vec(rho) - vec(direct)) < 1e-12

    def test_linear_in_pairs(self):
        rng = np.random.default_rng(9)
        l1, r1 = random_matrix(rng, 2), random_matrix(rng, 2)
        l2, r2 = random_matrix(rng, 2), random_matrix(rng, 2)
        s = superop_matrix([(l1, r1), (l2, r2)])
        assert np.allclose(s, superop_matrix([(l1, r1)]) + superop_matrix([(l2, r2)]))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            superop_matrix([(np.eye(2), np.eye(3))])


class TestVec:
    def test_column_stacking_order(self):
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert np.allclose(vec(m), [1.0, 3.0, 2.0, 4.0])

    def test_round_trip(self):
        rng = np.random.default_rng(10)
        m = random_matrix(rng, 3)
        assert np.allclose(unvec(vec(m)), m)

    def test_kron_convention(self):
        # vec(L rho R) = (R^T kron L) vec(rho) under column stacking
        rng = np.random.default_rng(11)
        left, right, rho = (random_matrix(rng, 2) for _ in range(3))
        lhs = vec(left @ rho @ right)
        rhs = np.kron(right.T, left) @ vec(rho)
        assert np.allclose(lhs, rhs, atol=1e-13)
