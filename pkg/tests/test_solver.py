import numpy as np
import pytest
from conftest import random_pencil, random_symmetric

from qae.errors import (
    DegenerateConstraint,
    NotSymmetric,
    OracleSizeExceeded,
    ParseError,
    ShapeMismatch,
)
from qae.solver import (
    QcqpSolution,
    SolveOptions,
    _jacobi_eigh_colmajor,
    certify_global,
    dump_matrix_pair,
    jacobi_eigh,
    kkt_residuals,
    load_matrix_pair,
    oracle_min,
    pencil_eigenpairs,
    second_order_check,
    solve_p1,
)

D_H2 = np.array([[-0.8, 0.5, 0.5], [0.5, -0.2, 0.0], [0.5, 0.0, -0.2]])
E_H2 = np.array([[1.0, -0.5, -0.5], [-0.5, 1.0, 0.0], [-0.5, 0.0, 1.0]])
ALPHA_PAPER = np.array([-0.87033111, 0.1221769, 0.1221776])
ENERGY_PAPER = -0.824621
ENERGY_EXACT = -np.sqrt(0.68)


def canon_sign(v):
    return -v if v[np.argmax(np.abs(v))] < 0 else v


@pytest.mark.parametrize("kernel", [jacobi_eigh, _jacobi_eigh_colmajor])
def test_jacobi_against_lapack(kernel):
    rng = np.random.default_rng(2)
    for _ in range(40):
        n = int(rng.integers(1, 10))
        A = random_symmetric(n, rng, scale=float(rng.uniform(0.1, 5.0)))
        vals, vecs = kernel(A.copy())
        ref = np.linalg.eigvalsh(A)
        scale = max(1.0, np.max(np.abs(ref)))
        np.testing.assert_allclose(vals, ref, atol=1e-12 * scale)
        np.testing.assert_allclose(vecs.T @ vecs, np.eye(n), atol=1e-12)
        np.testing.assert_allclose(A @ vecs, vecs * vals, atol=1e-11 * scale)


def test_jacobi_handles_degenerate_spectra():
    vals, vecs = jacobi_eigh(np.eye(4) * 3.0)
    np.testing.assert_allclose(vals, 3.0)
    np.testing.assert_allclose(vecs.T @ vecs, np.eye(4), atol=1e-14)


class TestSolve:
    def test_fixture_energy_and_vector(self):
        sol = solve_p1(D_H2, E_H2)
        assert abs(sol.energy - ENERGY_PAPER) < 1e-6
        assert abs(sol.energy - ENERGY_EXACT) < 1e-9
        np.testing.assert_allclose(
            canon_sign(sol.alpha), canon_sign(ALPHA_PAPER), atol=1e-5
        )
        assert sol.lam == -sol.energy
        assert sol.global_certificate and sol.second_order_ok
        assert not sol.degenerate

    def test_decoupled(self):
        sol = solve_p1(np.diag([1.0, 2.0]), np.eye(2))
        assert sol.energy == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(sol.alpha, [1.0, 0.0], atol=1e-12)

    def test_matches_oracle_on_random_instances(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            D, E = random_pencil(4, rng)
            sol = solve_p1(D, E)
            assert abs(sol.energy - oracle_min(D, E)) < 1e-10

    def test_feasibility_and_multiplier_identity(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            m = int(rng.integers(1, 9))
            D, E = random_pencil(m, rng)
            sol = solve_p1(D, E)
            assert abs(sol.alpha @ E @ sol.alpha - 1.0) < 1e-10
            assert abs(sol.lam + sol.alpha @ D @ sol.alpha) < 1e-10
            assert sol.kkt_stationarity < 1e-8

    def test_never_beaten_by_random_feasible_points(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            m = int(rng.integers(2, 9))
            D, E = random_pencil(m, rng)
            sol = solve_p1(D, E)
            Z = rng.normal(size=(10**4, m))
            norms = np.einsum("ij,jk,ik->i", Z, E, Z)
            Z = Z / np.sqrt(norms)[:, None]
            energies = np.einsum("ij,jk,ik->i", Z, D, Z)
            assert sol.energy <= energies.min() + 1e-10

    def test_monotone_under_nested_instances(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            D, E = random_pencil(6, rng)
            energies = [solve_p1(D[:k, :k], E[:k, :k]).energy for k in range(1, 7)]
            for small, big in zip(energies, energies[1:]):
                assert big <= small + 1e-10

    def test_sign_convention(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            D, E = random_pencil(5, rng)
            alpha = solve_p1(D, E).alpha
            assert alpha[np.argmax(np.abs(alpha))] > 0

    def test_truncation_keeps_span(self):
        # rank-2 constraint matrix on 3 coefficients: solve on the span
        Q = np.linalg.qr(np.random.default_rng(17).normal(size=(3, 3)))[0]
        E = (Q[:, :2] * [1.0, 0.5]) @ Q[:, :2].T
        D = np.diag([1.0, -1.0, 3.0])
        sol = solve_p1(D, E)
        assert abs(sol.alpha @ E @ sol.alpha - 1.0) < 1e-10
        assert sol.kkt_feasibility < 1e-10

    def test_degenerate_flag(self):
        sol = solve_p1(np.eye(2), np.eye(2))
        assert sol.degenerate
        assert sol.energy == pytest.approx(1.0)

    def test_zero_constraint_matrix(self):
        with pytest.raises(DegenerateConstraint):
            solve_p1(np.eye(2), np.zeros((2, 2)))

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            solve_p1(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            solve_p1(np.eye(2), np.eye(3))

    def test_invalid_options(self):
        with pytest.raises(ShapeMismatch):
            SolveOptions(kkt_tol=0.0)


class TestKktResiduals:
    def test_solver_output_is_stationary(self):
        sol = solve_p1(D_H2, E_H2)
        s, f, g = kkt_residuals(D_H2, E_H2, sol.alpha, sol.lam)
        assert s < 1e-8 and f < 1e-8 and g < 1e-8

    def test_diagonal_analytic(self):
        D = np.diag([1.0, 2.0])
        s, f, g = kkt_residuals(D, np.eye(2), np.array([1.0, 0.0]), -1.0)
        assert s == 0.0 and f == 0.0 and g == 0.0

    def test_printed_solution_residuals(self):
        # the six-decimal published values are stationary only to ~1e-6
        s, f, g = kkt_residuals(D_H2, E_H2, ALPHA_PAPER, -ENERGY_PAPER)
        assert max(s, f, g) < 1e-5
        assert s > 1e-7

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            kkt_residuals(D_H2, E_H2, np.ones(2), 0.0)


class TestSecondOrder:
    def test_true_at_fixture_optimum(self):
        sol = solve_p1(D_H2, E_H2)
        assert second_order_check(D_H2, E_H2, sol.alpha, sol.lam)

    def test_false_at_excited_point(self):
        # tangent direction e1 has curvature 1 - 2 = -1
        D = np.diag([1.0, 2.0])
        assert not second_order_check(D, np.eye(2), np.array([0.0, 1.0]), -2.0)

    def test_true_at_random_optima(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            D, E = random_pencil(5, rng)
            sol = solve_p1(D, E)
            assert second_order_check(D, E, sol.alpha, sol.lam)

    def test_degenerate_gradient(self):
        E = np.diag([1.0, 0.0])
        with pytest.raises(DegenerateConstraint):
            second_order_check(np.eye(2), E, np.array([0.0, 1.0]), 0.0)

    def test_single_coefficient_vacuous(self):
        assert second_order_check(
            np.array([[2.0]]), np.array([[1.0]]), np.array([1.0]), -2.0
        )


class TestCertificate:
    def test_true_at_fixture_optimum(self):
        sol = solve_p1(D_H2, E_H2)
        assert certify_global(D_H2, E_H2, sol.lam)

    def test_false_at_excited_point(self):
        assert not certify_global(np.diag([1.0, 2.0]), np.eye(2), -2.0)

    def test_separates_ground_from_excited(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            m = int(rng.integers(2, 7))
            D, E = random_pencil(m, rng)
            energies, _ = pencil_eigenpairs(D, E)
            assert certify_global(D, E, -energies[0])
            for mu in energies[1:]:
                if mu - energies[0] > 1e-6:
                    assert not certify_global(D, E, -mu)

    def test_certified_energies_agree(self):
        # matching constraint and objective: every stationary value is 1 and
        # every stationary pair is certified
        rng = np.random.default_rng(29)
        for _ in range(10):
            m = int(rng.integers(2, 6))
            E = random_pencil(m, rng)[1]
            energies, alphas = pencil_eigenpairs(E, E)
            certified = [
                float(alphas[:, k] @ E @ alphas[:, k])
                for k, mu in enumerate(energies)
                if certify_global(E, E, -mu)
            ]
            assert len(certified) == len(energies)
            assert np.ptp(certified) < 1e-9


class TestPencilEigenpairs:
    def test_stationarity_of_every_pair(self):
        rng = np.random.default_rng(31)
        D, E = random_pencil(5, rng)
        energies, alphas = pencil_eigenpairs(D, E)
        assert np.all(np.diff(energies) >= -1e-12)
        for k in range(5):
            s, f, _ = kkt_residuals(D, E, alphas[:, k], -energies[k])
            assert s < 1e-9 and f < 1e-10


class TestOracle:
    def test_fixture_value(self):
        assert abs(oracle_min(D_H2, E_H2) - (-0.8246211)) < 1e-7
        assert abs(oracle_min(D_H2, E_H2) - ENERGY_EXACT) < 1e-12

    def test_zero_objective(self):
        assert oracle_min(np.zeros((3, 3)), np.eye(3)) == pytest.approx(0.0, abs=1e-14)

    def test_matching_matrices(self):
        rng = np.random.default_rng(37)
        E = random_pencil(4, rng)[1]
        assert abs(oracle_min(E, E) - 1.0) < 1e-11

    def test_size_cap(self):
        with pytest.raises(OracleSizeExceeded):
            oracle_min(np.eye(17), np.eye(17))


class TestMatrixPairFormat:
    def test_real_round_trip(self):
        text = dump_matrix_pair(D_H2, E_H2)
        D, E = load_matrix_pair(text)
        assert np.array_equal(D, D_H2) and np.array_equal(E, E_H2)
        assert not text.startswith("COMPLEX")

    def test_complex_round_trip(self):
        rng = np.random.default_rng(41)
        D = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        D = (D + D.conj().T) / 2
        E = np.eye(2, dtype=complex)
        text = dump_matrix_pair(D, E)
        assert text.startswith("COMPLEX")
        D2, E2 = load_matrix_pair(text)
        assert np.array_equal(D, D2) and np.array_equal(E, E2)

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            load_matrix_pair("not a size\n")
        with pytest.raises(ParseError):
            load_matrix_pair("2\n1.0 0.0\n0.0 1.0\n\n1.0 0.0\n")
        with pytest.raises(ParseError):
            load_matrix_pair("2\n1.0 0.0 3.0\n0.0 1.0\n\n1.0 0.0\n0.0 1.0\n")


def test_solution_record_fields():
    sol = solve_p1(D_H2, E_H2)
    assert isinstance(sol, QcqpSolution)
    assert sol.kkt_feasibility < 1e-10
    assert isinstance(sol.global_certificate, bool)
    assert isinstance(sol.second_order_ok, bool)
