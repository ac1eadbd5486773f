import numpy as np
import pytest

from unpredictable.bounded import (bounded_solution, residual_certificate,
                                   residual_series, truncation_horizon)
from unpredictable.errors import DomainError, PreconditionError
from unpredictable.linalg import spectral_split
from unpredictable.signals import (Constant, Scaled, Sinusoid, VectorSignal,
                                   sum_signals)
from unpredictable.sim import rk4_integrate


class TestTruncationHorizon:
    def test_inverting_the_formula(self):
        assert truncation_horizon(1.0, 1.0, 1.0, 8.0 * np.exp(-10.0)) == pytest.approx(10.0, rel=1e-12)

    def test_doubling_tol_shifts_by_log_two(self):
        t1 = truncation_horizon(1.3, 0.7, 5.0, 1e-6)
        t2 = truncation_horizon(1.3, 0.7, 5.0, 2e-6)
        assert t1 - t2 == pytest.approx(np.log(2.0) / 0.7, rel=1e-12)

    def test_showcase_scale(self):
        T = truncation_horizon(1.0, 1.0, 131.0, 1e-6)
        assert T == pytest.approx(np.log(1.048e9), abs=1e-2)
        assert T == pytest.approx(20.77, abs=0.01)
        # tail integral bound: 2 M K e^{-alpha T}/alpha <= tol/4 (numerically)
        tail = 2 * 131.0 * np.exp(-T)
        assert tail <= 1e-6 / 4 * (1 + 1e-12)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            truncation_horizon(0.5, 1.0, 1.0, 1e-6)
        with pytest.raises(PreconditionError):
            truncation_horizon(1.0, -1.0, 1.0, 1e-6)


class TestScalarOracles:
    def test_stable_constant_forcing_steady_state(self):
        split = spectral_split(np.array([[-1.0]]))
        g = VectorSignal([Constant(1.0)])
        sol = bounded_solution(split, g, (0.0, 5.0), tol=1e-9)
        assert np.abs(sol.values - 1.0).max() < 1e-8

    def test_unstable_constant_forcing(self):
        # phi' = 0 = A(-1) + 1 via the backward branch
        split = spectral_split(np.array([[1.0]]))
        g = VectorSignal([Constant(1.0)])
        sol = bounded_solution(split, g, (0.0, 5.0), tol=1e-9)
        assert np.abs(sol.values + 1.0).max() < 1e-8

    def test_mixed_hyperbolic_steady_state(self):
        split = spectral_split(np.diag([-1.0, 1.0]))
        g = VectorSignal([Constant(1.0), Constant(1.0)])
        sol = bounded_solution(split, g, (0.0, 4.0), tol=1e-9)
        assert np.abs(sol.values[:, 0] - 1.0).max() < 1e-8
        assert np.abs(sol.values[:, 1] + 1.0).max() < 1e-8

    def test_matrix_steady_state(self):
        A = np.array([[-2.0, 2.0], [1.0, -3.0]])
        split = spectral_split(A)
        c = np.array([1.0, 2.0])
        g = VectorSignal([Constant(1.0), Constant(2.0)])
        sol = bounded_solution(split, g, (0.0, 3.0), tol=1e-9)
        expected = -np.linalg.solve(A, c)
        assert np.abs(sol.values - expected).max() < 1e-8

    def test_mixed_unordered_matrix_steady_state(self):
        # stable eigenvalue listed second: exercises the basis reordering
        A = np.array([[0.5, 1.0], [0.0, -1.0]])
        split = spectral_split(A)
        assert split.q == 1
        g = VectorSignal([Constant(1.0), Constant(-2.0)])
        sol = bounded_solution(split, g, (0.0, 4.0), tol=1e-9)
        expected = -np.linalg.solve(A, [1.0, -2.0])
        assert np.abs(sol.values - expected).max() < 1e-8

    def test_harmonic_response(self):
        # x' = -2x + sin(10t)  ->  phi = (sin 10t - 5 cos 10t)/52
        split = spectral_split(np.array([[-2.0]]))
        g = VectorSignal([Sinusoid(1.0, 10.0, "sin")])
        sol = bounded_solution(split, g, (0.0, 10.0), tol=1e-8, h=1e-3)
        expected = (np.sin(10 * sol.times) - 5 * np.cos(10 * sol.times)) / 52.0
        assert np.abs(sol.values[:, 0] - expected).max() < 1e-6


class TestStructuralProperties:
    def test_superposition(self):
        split = spectral_split(np.array([[-1.0, 0.5], [0.0, -2.0]]))
        g1 = VectorSignal([Sinusoid(1.0, 3.0, "sin"), Constant(0.5)])
        g2 = VectorSignal([Constant(-0.2), Sinusoid(0.7, 1.0, "cos")])
        tol = 1e-7
        s1 = bounded_solution(split, g1, (0.0, 6.0), tol=tol)
        s2 = bounded_solution(split, g2, (0.0, 6.0), tol=tol)
        s12 = bounded_solution(split, sum_signals(g1, g2), (0.0, 6.0), tol=tol)
        assert np.abs(s12.values - (s1.values + s2.values)).max() <= 2 * tol

    def test_horizon_robustness(self):
        # exponential forgetting of the truncation point: T vs T + 5
        split = spectral_split(np.array([[-1.0, 0.5], [0.0, -2.0]]))
        g = VectorSignal([Sinusoid(1.0, 3.0, "sin"), Constant(0.5)])
        tol = 1e-7
        base = bounded_solution(split, g, (0.0, 6.0), tol=tol)
        T = base.certificate.T_minus
        longer = bounded_solution(split, g, (0.0, 6.0), tol=tol, horizon_override=T + 5.0)
        assert np.abs(base.values - longer.values).max() <= tol

    def test_periodic_forcing_gives_periodic_response(self):
        split = spectral_split(np.array([[-2.0, 2.0], [1.0, -3.0]]))
        g = VectorSignal([Sinusoid(1.0, 10.0, "sin"), Sinusoid(1.0, 10.0, "cos")])
        tol = 1e-8
        period = 2 * np.pi / 10
        # snap the shift onto the solution grid to compare like with like
        sol = bounded_solution(split, g, (0.0, 4.0), tol=tol, h=1e-3)
        k = int(round(period / 1e-3))
        shifted = sol.values[k:]
        gap = np.linalg.norm(shifted - sol.values[:-k], axis=1)
        # grid offset from the true period adds h-level phase error
        phase_err = abs(k * 1e-3 - period) * 10.0 * np.abs(sol.values).max() * 2
        assert gap.max() <= 10 * tol + phase_err

    def test_stable_case_attraction(self):
        # any IVP solution contracts onto the bounded one at dichotomy rate
        A = np.array([[-2.0, 2.0], [1.0, -3.0]])
        split = spectral_split(A)
        g = VectorSignal([Sinusoid(1.0, 2.0, "sin"), Constant(0.3)])
        sol = bounded_solution(split, g, (0.0, 10.0), tol=1e-8, h=1e-3)
        x0 = np.array([2.0, -1.0])
        traj = rk4_integrate(A, g, 0.0, x0, 1e-3, 10000)
        gap = np.linalg.norm(traj.states - sol.values, axis=1)
        envelope = split.K * np.exp(-split.alpha * sol.times) * gap[0] * 1.01
        assert np.all(gap <= envelope + 1e-7)

    def test_boundedness_invariant(self):
        split = spectral_split(np.diag([-1.0, 2.0]))
        g = VectorSignal([Sinusoid(1.0, 1.0, "sin"), Constant(1.0)])
        sol = bounded_solution(split, g, (0.0, 20.0), tol=1e-6)
        norms = np.linalg.norm(sol.values, axis=1)
        assert norms.max() <= 2.0 * split.K * g.bound / split.alpha


class TestThetaForcing:
    def test_showcase_window_solution(self, example1_split, small_theta):
        g = VectorSignal([
            Scaled(small_theta, 259.0),
            Scaled(small_theta, -150.0),
        ])
        sol = bounded_solution(example1_split, g, (50.0, 60.0), tol=1e-6, h=1e-3)
        assert np.all(np.isfinite(sol.values))
        # residual certificate on a theta-forced solution skips the kink nodes
        res = residual_certificate(sol)
        assert res < 1e-2

    def test_domain_shortfall_raises(self, example1_split, small_theta):
        g = VectorSignal([Scaled(small_theta, 1.0), Constant(0.0)])
        with pytest.raises(DomainError):
            bounded_solution(example1_split, g, (5.0, 10.0), tol=1e-9)  # needs t < 0

    def test_theta_through_unstable_branch(self, small_theta):
        # saddle system forced by theta in both components: the unstable
        # branch integrates theta in reversed time, kinks grid-aligned
        split = spectral_split(np.diag([-1.0, 1.0]))
        g = VectorSignal([Scaled(small_theta, 1.0), Scaled(small_theta, 1.0)])
        sol = bounded_solution(split, g, (100.0, 120.0), tol=1e-8, h=1e-3)
        res = residual_certificate(sol)
        assert res < 1e-5
        # both components bounded by the dc gain of their branch
        assert np.abs(sol.values).max() <= 0.5 * (1 + 1e-6)


class TestResidualCertificate:
    def test_steady_state_residual_tiny(self):
        split = spectral_split(np.array([[-1.0]]))
        g = VectorSignal([Constant(1.0)])
        sol = bounded_solution(split, g, (0.0, 5.0), tol=1e-9)
        assert residual_certificate(sol) <= 1e-10

    def test_harmonic_residual_scale(self):
        # centered difference truncation ~ h^2/6 * |phi'''|, phi''' ~ 1e3 * amp
        split = spectral_split(np.array([[-2.0]]))
        g = VectorSignal([Sinusoid(1.0, 10.0, "sin")])
        sol = bounded_solution(split, g, (0.0, 5.0), tol=1e-8, h=1e-3)
        res = residual_certificate(sol)
        amp = np.sqrt(26.0) / 52.0
        bound = (1e-3) ** 2 / 6.0 * (10.0 ** 3) * amp * 1.5  # slack 1.5
        assert res <= bound

    def test_residual_series_endpoints_nan(self):
        split = spectral_split(np.array([[-1.0]]))
        g = VectorSignal([Constant(1.0)])
        sol = bounded_solution(split, g, (0.0, 2.0), tol=1e-6)
        series = residual_series(sol)
        assert np.isnan(series[0]) and np.isnan(series[-1])
        assert np.nanmax(series) <= 1e-10

    def test_updates_certificate(self):
        split = spectral_split(np.array([[-1.0]]))
        g = VectorSignal([Constant(1.0)])
        sol = bounded_solution(split, g, (0.0, 5.0), tol=1e-9)
        assert sol.certificate.max_residual is None
        residual_certificate(sol)
        assert sol.certificate.max_residual is not None


class TestHorizonCap:
    def test_near_neutral_eigenvalue_reports_honest_tail(self, example2_split):
        # the unstable eigenvalue 3.25e-8 would need T ~ 1e9; the cap keeps the
        # computation desk-scale and the certificate must admit the wide band
        g = VectorSignal([Constant(0.1), Constant(0.1)])
        sol = bounded_solution(example2_split, g, (0.0, 1.0), tol=1e-6,
                               horizon_cap=50.0, h=1.0 / 104200)
        assert sol.certificate.T_plus == pytest.approx(50.0, abs=1e-9)
        assert sol.certificate.tail_bound > 1.0  # honest: tolerance not met

    def test_certificate_serializes(self, tmp_path, example2_split):
        g = VectorSignal([Constant(0.1), Constant(0.1)])
        sol = bounded_solution(example2_split, g, (0.0, 1.0), tol=1e-6,
                               horizon_cap=50.0, h=1.0 / 104200)
        path = tmp_path / "cert.json"
        sol.certificate.to_json(path)
        import json
        doc = json.loads(path.read_text())
        for key in ("window", "tol", "h", "K", "alpha", "T_minus", "T_plus",
                    "tail_bound", "max_residual"):
            assert key in doc
