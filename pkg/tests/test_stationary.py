"""Internal-generator tests: trace annihilation, adjoint pairing, stationary states,
drift values, the drift operator equation, and shared eigenstructure extraction."""

import numpy as np
import pytest

from ctoqw import (
    internal_lindblad,
    internal_lindblad_matrix,
    stationary_states,
    drift,
    solve_drift_operator,
    common_eigenstructure,
    validate_coin,
    vec,
    unvec,
)
from ctoqw.coins import (
    scalar_coin,
    diagonal_jumps_coin,
    shared_eigenbasis_coin,
    shared_basis_vectors,
    tilted_pair_coin,
    three_level_coin,
    three_level_stationary,
)

from helpers import random_coin, random_hermitian, random_unitary


class TestInternalLindblad:
    def test_scalar_coin_annihilates_everything(self):
        coin = scalar_coin(2.0, 1.0)
        assert abs(internal_lindblad(coin, np.array([[1.0]]))[0, 0]) < 1e-15

    def test_identity_jumps_reduce_to_commutator(self):
        h = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, -0.4]])
        coin = validate_coin(np.eye(2), np.eye(2), h)
        rng = np.random.default_rng(30)
        rho = random_hermitian(rng, 2)
        expected = -1j * (h @ rho - rho @ h)
        assert np.allclose(internal_lindblad(coin, rho), expected, atol=1e-13)
        # ham proportional to identity kills the commutator too
        coin2 = validate_coin(np.eye(2), np.eye(2), np.eye(2))
        assert np.linalg.norm(internal_lindblad(coin2, rho)) < 1e-13

    def test_annihilates_stationary_fixture(self):
        coin = three_level_coin(0.0)
        out = internal_lindblad(coin, three_level_stationary(0.0))
        assert np.max(np.abs(out)) <= 1e-9

    def test_trace_annihilation_random(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            coin = random_coin(rng, int(rng.integers(2, 4)))
            for _ in range(10):
                rho = random_hermitian(rng, coin.dim)
                out = internal_lindblad(coin, rho)
                assert abs(np.trace(out)) <= 1e-12
                assert np.linalg.norm(out - out.conj().T) < 1e-12

    def test_matrix_representation_agrees(self):
        rng = np.random.default_rng(32)
        coin = random_coin(rng, 2)
        s = internal_lindblad_matrix(coin)
        for _ in range(10):
            rho = random_hermitian(rng, 2)
            direct = internal_lindblad(coin, rho)
            assert np.linalg.norm(s @ vec(rho) - vec(direct)) < 1e-12

    def test_scalar_matrix_is_zero(self):
        s = internal_lindblad_matrix(scalar_coin(1.0, 2.0))
        assert s.shape == (1, 1)
        assert abs(s[0, 0]) < 1e-15

    def test_trace_dual_row_property(self):
        rng = np.random.default_rng(33)
        for d in (2, 3):
            coin = random_coin(rng, d)
            s = internal_lindblad_matrix(coin)
            assert np.linalg.norm(vec(np.eye(d)).conj() @ s) < 1e-12

    def test_adjoint_pairing(self):
        # Tr(L(rho) X) = Tr(rho L*(X)) with L* the conjugate transpose in vec form
        rng = np.random.default_rng(34)
        for d in (2, 3):
            coin = random_coin(rng, d)
            s = internal_lindblad_matrix(coin)
            g0 = -1j * coin.ham - 0.5 * coin.rate_operator()
            for _ in range(5):
                rho = random_hermitian(rng, d)
                x = random_hermitian(rng, d)
                lhs = np.trace(internal_lindblad(coin, rho) @ x)
                rhs = np.trace(rho @ unvec(s.conj().T @ vec(x)))
                assert abs(lhs - rhs) < 1e-10
                # explicit adjoint formula
                adj = (
                    g0.conj().T @ x
                    + x @ g0
                    + coin.left.conj().T @ x @ coin.left
                    + coin.right.conj().T @ x @ coin.right
                )
                assert np.linalg.norm(unvec(s.conj().T @ vec(x)) - adj) < 1e-10
            # identity is fixed by the adjoint (dual of trace annihilation)
            assert np.linalg.norm(s.conj().T @ vec(np.eye(d))) < 1e-12


class TestStationaryStates:
    def test_three_level_transient_fixture(self):
        sa = stationary_states(three_level_coin(0.0))
        assert sa.unique_stationary
        assert sa.kernel_dim == 1
        assert np.max(np.abs(sa.rho_inv - three_level_stationary(0.0))) < 1e-9

    def test_three_level_recurrent_fixture(self):
        sa = stationary_states(three_level_coin(1.0))
        assert sa.unique_stationary
        assert np.max(np.abs(sa.rho_inv - np.diag([0.5, 0.5, 0.0]))) < 1e-9

    def test_zero_generator_full_kernel(self):
        coin = validate_coin(np.eye(2), np.eye(2), np.zeros((2, 2)))
        sa = stationary_states(coin)
        assert sa.kernel_dim == 4
        assert not sa.unique_stationary
        assert sa.rho_inv is None

    def test_diagonal_coin_half_identity(self):
        sa = stationary_states(diagonal_jumps_coin())
        assert sa.unique_stationary
        assert np.max(np.abs(sa.rho_inv - np.eye(2) / 2)) < 1e-9

    def test_stationarity_residual_random(self):
        rng = np.random.default_rng(35)
        for _ in range(25):
            coin = random_coin(rng, int(rng.integers(2, 4)))
            sa = stationary_states(coin)
            if sa.unique_stationary:
                assert np.linalg.norm(internal_lindblad(coin, sa.rho_inv)) <= 1e-9
                assert abs(np.trace(sa.rho_inv) - 1.0) < 1e-12

    def test_basis_is_hermitian(self):
        coin = shared_eigenbasis_coin(1.5, 1.0)
        sa = stationary_states(coin)
        assert sa.kernel_dim >= 2
        for b in sa.stationary_basis:
            assert np.linalg.norm(b - b.conj().T) < 1e-10


class TestDrift:
    def test_three_level_value(self):
        coin = three_level_coin(0.0)
        sa = stationary_states(coin)
        assert abs(drift(coin, sa.rho_inv) - (-6.0 / 53.0)) < 1e-9

    def test_tilted_pair_value(self):
        coin = tilted_pair_coin(0.0, 1.0)
        sa = stationary_states(coin)
        assert abs(drift(coin, sa.rho_inv) - (-2.0 / 17.0)) < 1e-9

    def test_scalar_rate_difference(self):
        coin = scalar_coin(2.0, 1.0)
        sa = stationary_states(coin)
        assert drift(coin, sa.rho_inv) == pytest.approx(3.0, abs=1e-12)

    def test_rejects_non_stationary_state(self):
        coin = three_level_coin(0.0)
        with pytest.raises(ValueError):
            drift(coin, np.eye(3) / 3.0)

    def test_bounded_by_total_rate(self):
        rng = np.random.default_rng(36)
        for _ in range(20):
            coin = random_coin(rng, 2)
            sa = stationary_states(coin)
            if not sa.unique_stationary:
                continue
            m = drift(coin, sa.rho_inv)
            a, c = coin.right, coin.left
            bound = np.trace(a @ sa.rho_inv @ a.conj().T).real
            bound += np.trace(c @ sa.rho_inv @ c.conj().T).real
            assert abs(m) <= bound + 1e-12

    def test_unitary_covariance(self):
        rng = np.random.default_rng(37)
        for d in (2, 3):
            for _ in range(10):
                coin = random_coin(rng, d)
                sa = stationary_states(coin)
                if not sa.unique_stationary:
                    continue
                u = random_unitary(rng, d)
                rotated = validate_coin(
                    u @ coin.left @ u.conj().T,
                    u @ coin.right @ u.conj().T,
                    u @ coin.ham @ u.conj().T,
                )
                sb = stationary_states(rotated)
                assert sb.unique_stationary
                assert np.max(np.abs(sb.rho_inv - u @ sa.rho_inv @ u.conj().T)) < 1e-8
                m0 = drift(coin, sa.rho_inv)
                m1 = drift(rotated, sb.rho_inv)
                assert abs(m0 - m1) < 1e-10


class TestDriftOperator:
    def test_scalar_trivial(self):
        coin = scalar_coin(2.0, 1.0)
        j, res = solve_drift_operator(coin, 3.0)
        assert abs(j[0, 0]) < 1e-12
        assert res < 1e-12

    def test_identity_jumps_trivial(self):
        coin = validate_coin(np.eye(2), np.eye(2), np.zeros((2, 2)))
        j, res = solve_drift_operator(coin, 0.0)
        assert np.linalg.norm(j) < 1e-10
        assert res < 1e-12

    def test_three_level_residual(self):
        coin = three_level_coin(0.0)
        sa = stationary_states(coin)
        m = drift(coin, sa.rho_inv)
        j, res = solve_drift_operator(coin, m)
        assert res <= 1e-8
        assert abs(np.trace(j)) < 1e-10
        assert np.linalg.norm(j - j.conj().T) < 1e-10

    def test_residual_small_under_unique_stationary(self):
        rng = np.random.default_rng(38)
        for _ in range(15):
            coin = random_coin(rng, int(rng.integers(2, 4)))
            sa = stationary_states(coin)
            if not sa.unique_stationary:
                continue
            m = drift(coin, sa.rho_inv)
            _, res = solve_drift_operator(coin, m)
            assert res <= 1e-8

    def test_gauge_freedom_is_identity_multiple(self):
        # least-squares solutions with different gauges differ by a multiple of I
        coin = three_level_coin(0.0)
        sa = stationary_states(coin)
        m = drift(coin, sa.rho_inv)
        j, _ = solve_drift_operator(coin, m)
        s = internal_lindblad_matrix(coin)
        rhs = -(
            coin.right.conj().T @ coin.right
            - coin.left.conj().T @ coin.left
            - m * np.eye(3)
        )
        raw, *_ = np.linalg.lstsq(s.conj().T, vec(rhs), rcond=None)
        j_minnorm = unvec(raw)
        j_minnorm = (j_minnorm + j_minnorm.conj().T) / 2
        diff = j_minnorm - j
        off = diff - (np.trace(diff) / 3.0) * np.eye(3)
        assert np.linalg.norm(off) < 1e-8
        # adjoint kills the identity, so shifting the gauge keeps the residual
        assert np.linalg.norm(s.conj().T @ vec(np.eye(3))) < 1e-10


class TestCommonEigenstructure:
    def test_diagonal_pair(self):
        out = common_eigenstructure(np.diag([1.0, 3.0]), np.diag([2.0, 5.0]))
        assert out is not None
        u, c_diag, a_diag = out
        assert sorted(np.round(c_diag.real, 9)) == [1.0, 3.0]
        assert sorted(np.round(a_diag.real, 9)) == [2.0, 5.0]
        # columns are standard basis vectors up to order and phase
        assert np.allclose(np.abs(u), np.eye(2), atol=1e-10) or np.allclose(
            np.abs(u), np.fliplr(np.eye(2)), atol=1e-10
        )

    def test_shared_basis_family(self):
        a, c = 1.7, 2.0
        coin = shared_eigenbasis_coin(a, c)
        out = common_eigenstructure(coin.left, coin.right)
        assert out is not None
        u, c_diag, a_diag = out
        assert np.max(np.abs(u.conj().T @ coin.left @ u - np.diag(c_diag))) < 1e-10
        assert np.max(np.abs(u.conj().T @ coin.right @ u - np.diag(a_diag))) < 1e-10
        assert sorted(np.round(np.abs(c_diag), 9).tolist()) == [1.0, c]
        assert sorted(np.round(np.abs(a_diag), 9).tolist()) == [a, 2.0]
        # columns match the designated vectors as projectors
        ref = shared_basis_vectors()
        for k in range(2):
            p = np.outer(u[:, k], u[:, k].conj())
            matches = [
                np.max(np.abs(p - np.outer(ref[:, j], ref[:, j].conj()))) < 1e-9
                for j in range(2)
            ]
            assert any(matches)

    def test_no_shared_eigenvector(self):
        coin = tilted_pair_coin(0.5, 1.0)
        assert common_eigenstructure(coin.left, coin.right) is None

    def test_nonnormal_rejected(self):
        c = np.array([[1.0, 1.0], [0.0, 1.0]])
        assert common_eigenstructure(c, np.eye(2)) is None

    def test_normal_noncommuting_rejected(self):
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        z = np.diag([1.0, -1.0])
        assert common_eigenstructure(x, z) is None

    def test_scalar_pair_any_basis(self):
        out = common_eigenstructure(np.eye(2), 2.0 * np.eye(2))
        assert out is not None
        _, c_diag, a_diag = out
        assert np.allclose(c_diag, [1.0, 1.0])
        assert np.allclose(a_diag, [2.0, 2.0])

    def test_rejects_wrong_dimension(self):
        with pytest.raises(ValueError):
            common_eigenstructure(np.eye(3), np.eye(3))
