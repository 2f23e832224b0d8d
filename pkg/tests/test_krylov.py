import numpy as np
import pytest

from saddlebounds.bounds import gamma_opt_general, minres_iteration_bound, witness_general
from saddlebounds.densecore import generalized_hermitian_eig
from saddlebounds.fem import build_mesh, parabolic_reduced, stokes_system
from saddlebounds.krylov import (
    LinearOperator,
    estimate_intervals,
    lanczos_tridiagonal,
    minres_solve,
    residual_history_csv,
    ritz_intervals,
    stagnation_profile,
)
from conftest import random_hermitian, random_spd


def hermitian_with_spectrum(rng, eigenvalues):
    n = len(eigenvalues)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q @ np.diag(np.asarray(eigenvalues, dtype=float)) @ q.conj().T


class TestMinresBasics:
    def test_identity_converges_in_one_step(self):
        rhs = np.zeros(4, dtype=complex)
        rhs[0] = 1.0
        report = minres_solve(np.eye(4, dtype=complex), None, rhs)
        assert report.converged
        assert report.iterations == 1
        assert np.allclose(report.x, rhs)

    def test_witness_finite_termination(self):
        sys = witness_general(0.5, 1.0, 1.0)
        rhs = np.array([1.0, 2.0, -1.0], dtype=complex)
        report = minres_solve(sys.assemble(), None, rhs, eps=1e-12)
        assert report.converged
        assert report.iterations <= 3
        assert np.linalg.norm(sys.assemble() @ report.x - rhs) < 1e-10

    def test_finite_termination_random(self, rng):
        for n in (6, 11):
            a = random_hermitian(rng, n) + 0j
            rhs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            report = minres_solve(a, None, rhs, eps=1e-10, maxit=n + 2)
            assert report.converged
            assert report.iterations <= n

    def test_preconditioned_solve(self, rng):
        a = random_hermitian(rng, 8)
        p = random_spd(rng, 8)
        p_inv = np.linalg.inv(p)
        rhs = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        report = minres_solve(a, p_inv, rhs, eps=1e-10)
        assert report.converged
        assert np.linalg.norm(a @ report.x - rhs) <= 1e-7 * np.linalg.norm(rhs)

    def test_residual_history_monotone(self, rng):
        a = random_hermitian(rng, 12)
        rhs = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        report = minres_solve(a, None, rhs, eps=1e-10)
        h = report.residual_history
        assert np.all(h[1:] <= h[:-1] * (1.0 + 1e-13))

    def test_recurrence_matches_true_residual(self, rng):
        a = random_hermitian(rng, 20)
        p = random_spd(rng, 20)
        rhs = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        report = minres_solve(a, np.linalg.inv(p), rhs, eps=1e-9, true_residual_every=5)
        for step, true_norm in report.true_residual_checks:
            rec = report.residual_history[step]
            assert true_norm == pytest.approx(rec, rel=1e-6, abs=1e-12)
        assert report.true_residual == pytest.approx(
            report.residual_history[-1], rel=1e-6, abs=1e-12
        )

    def test_lanczos_scalars_real_and_positive_offdiag(self, rng):
        a = random_hermitian(rng, 10)
        rhs = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        report = minres_solve(a, None, rhs, eps=1e-10)
        assert np.isrealobj(report.lanczos_alphas)
        assert np.all(report.lanczos_betas[:-1] > 0.0)

    def test_non_hermitian_rejected(self, rng):
        bad = rng.standard_normal((5, 5))
        rhs = np.ones(5, dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            minres_solve(bad, None, rhs)

    def test_negative_preconditioner_rejected_by_probe(self, rng):
        a = random_hermitian(rng, 5)
        rhs = np.ones(5, dtype=complex)
        with pytest.raises(ValueError, match="positive"):
            minres_solve(a, -np.eye(5), rhs)

    def test_indefinite_preconditioner_rejected_in_iteration(self, rng):
        a = random_hermitian(rng, 5)
        rhs = np.zeros(5, dtype=complex)
        rhs[1] = 1.0
        with pytest.raises(ValueError, match="positive"):
            minres_solve(
                a, np.diag([1.0, -1.0, 1.0, 1.0, 1.0]), rhs, check_operators=False
            )

    def test_maxit_reports_unconverged(self, rng):
        a = random_hermitian(rng, 30)
        rhs = rng.standard_normal(30) + 1j * rng.standard_normal(30)
        report = minres_solve(a, None, rhs, eps=1e-14, maxit=3)
        assert not report.converged
        assert report.iterations == 3

    def test_operator_linearity_probe(self, rng):
        op = LinearOperator(dim=4, apply=lambda x: x + 1.0)
        with pytest.raises(ValueError, match="linear"):
            op.check_linearity(rng=1)


class TestRitzIntervals:
    def test_two_by_two_exact(self):
        a = np.diag([-1.0, 2.0]).astype(complex)
        rhs = np.array([1.0, 1.0], dtype=complex)
        report = minres_solve(a, None, rhs, eps=1e-14, maxit=2)
        est = ritz_intervals(report)
        assert est.neg_lo == pytest.approx(-1.0, abs=1e-10)
        assert est.pos_hi == pytest.approx(2.0, abs=1e-10)

    def test_known_spectrum_endpoints(self, rng):
        lam = np.concatenate([-np.linspace(0.7, 2.3, 10), np.linspace(0.9, 3.1, 10)])
        a = hermitian_with_spectrum(rng, lam)
        rhs = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        report = minres_solve(a, None, rhs, eps=1e-300, maxit=20, check_operators=False)
        est = ritz_intervals(report)
        assert est.neg_lo == pytest.approx(-2.3, abs=1e-8)
        assert est.neg_hi == pytest.approx(-0.7, abs=1e-8)
        assert est.pos_lo == pytest.approx(0.9, abs=1e-8)
        assert est.pos_hi == pytest.approx(3.1, abs=1e-8)

    def test_contained_in_spectral_hull(self, rng):
        lam = np.concatenate([-np.linspace(0.5, 2.0, 8), np.linspace(0.4, 1.8, 8)])
        a = hermitian_with_spectrum(rng, lam)
        rhs = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        for steps in (4, 8, 12, 16):
            report = minres_solve(a, None, rhs, eps=1e-300, maxit=steps, check_operators=False)
            est = ritz_intervals(report)
            assert est.pos_hi <= 1.8 + 1e-8
            assert est.neg_lo >= -2.0 - 1e-8
            assert est.pos_lo >= 0.4 - 1e-8
            assert est.neg_hi <= -0.5 + 1e-8

    def test_needs_two_steps(self):
        report = minres_solve(np.eye(3, dtype=complex), None, np.ones(3, dtype=complex))
        with pytest.raises(ValueError, match="2 Lanczos steps"):
            ritz_intervals(report)

    def test_tridiagonal_shape(self, rng):
        a = random_hermitian(rng, 9)
        rhs = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        report = minres_solve(a, None, rhs, eps=1e-300, maxit=5, check_operators=False)
        t, beta = lanczos_tridiagonal(report)
        assert t.shape == (5, 5)
        assert beta >= 0.0

    def test_estimation_run_matches_dense(self, rng):
        problem = stokes_system(build_mesh(1), nu=1.0, omega=1.0)
        est = estimate_intervals(problem.operator(), problem.preconditioner())
        spec = generalized_hermitian_eig(
            problem.saddle_system().assemble(), problem.inner_product().assemble()
        )
        pos = spec.eigenvalues[spec.eigenvalues > 0]
        assert est.pos_lo == pytest.approx(pos.min(), abs=2e-4)
        assert est.pos_hi == pytest.approx(pos.max(), abs=2e-4)


class TestIterationBoundConsistency:
    def test_counts_within_bound(self, rng):
        # observed iterations never exceed the two-interval bound computed
        # from the exact extreme eigenvalues
        for trial in range(5):
            neg = -np.linspace(0.6, 1.9, 7)
            pos = np.linspace(0.5, 2.1, 7)
            a = hermitian_with_spectrum(rng, np.concatenate([neg, pos]))
            rhs = rng.standard_normal(14) + 1j * rng.standard_normal(14)
            report = minres_solve(a, None, rhs, eps=1e-8, maxit=200)
            mu3 = min(0.5, 0.6)
            mu4 = max(2.1, 1.9)
            assert report.iterations <= minres_iteration_bound(mu3, mu4, 1e-8)

    def test_witness_within_bound(self):
        sys = witness_general(0.4, 1.2, 1.0)
        rhs = np.array([0.3, -1.0, 0.8], dtype=complex)
        report = minres_solve(sys.assemble(), None, rhs, eps=1e-8)
        spec = generalized_hermitian_eig(sys.assemble(), np.eye(3))
        pos = np.abs(spec.eigenvalues)
        bound = minres_iteration_bound(pos.min(), pos.max(), 1e-8)
        assert report.iterations <= bound


class TestStagnation:
    def test_plus_minus_one_balanced(self, rng):
        a = np.diag([-1.0, 1.0]).astype(complex)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=2))
        report = minres_solve(a, None, phases, eps=1e-12)
        factors, flag = stagnation_profile(report)
        assert factors[0] == pytest.approx(1.0, abs=1e-12)
        assert factors[1] == pytest.approx(0.0, abs=1e-10)
        assert flag

    def test_spd_no_flag(self):
        report = minres_solve(np.eye(5, dtype=complex), None, np.ones(5, dtype=complex))
        factors, flag = stagnation_profile(report)
        assert not flag

    def test_reduced_parabolic_staircase(self):
        problem = parabolic_reduced(build_mesh(2), nu=1.0, omega=100.0)
        report = minres_solve(
            problem.operator(), problem.preconditioner(), problem.rhs, eps=1e-8
        )
        factors, flag = stagnation_profile(report, threshold=0.999)
        odd = factors[0 : len(factors) - 1 : 2]
        assert odd.size > 0
        assert np.all(odd >= 0.999)
        assert flag

    def test_csv_export(self, rng, tmp_path):
        a = random_hermitian(rng, 6)
        rhs = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        report = minres_solve(a, None, rhs, eps=1e-10)
        path = tmp_path / "history.csv"
        residual_history_csv(report, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "iteration,residual,reduction_factor"
        assert len(lines) == len(report.residual_history) + 1
