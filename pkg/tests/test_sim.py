import numpy as np
import pytest

from unpredictable.errors import (DomainError, PreconditionError,
                                  StabilityGuardError)
from unpredictable.signals import Constant, Sinusoid, VectorSignal
from unpredictable.sim import contraction_probe, rk4_integrate, stage_matrices


def reference_rk4(A, g, t0, x0, h, steps):
    """Textbook 4-stage loop; independent of the production stage-matrix path."""
    x = np.asarray(x0, dtype=float).copy()
    out = [x.copy()]
    t = t0
    for _ in range(steps):
        def f(tt, xx):
            return A @ xx + (g(tt) if g is not None else 0.0)
        k1 = f(t, x)
        k2 = f(t + h / 2, x + h / 2 * k1)
        k3 = f(t + h / 2, x + h / 2 * k2)
        k4 = f(t + h, x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        out.append(x.copy())
    return np.array(out)


class TestRk4Basics:
    def test_zero_system_constant_trajectory(self):
        traj = rk4_integrate(np.zeros((2, 2)), None, 0.0, np.array([1.0, -2.0]), 0.1, 50)
        assert np.abs(traj.states - np.array([1.0, -2.0])).max() == 0.0

    def test_scalar_exponential(self):
        traj = rk4_integrate(np.array([[1.0]]), None, 0.0, np.array([1.0]), 0.1, 10)
        assert abs(traj.states[-1, 0] - np.e) < 3e-6

    def test_rotation_period_and_energy(self):
        A = np.array([[0.0, 1.0], [-1.0, 0.0]])
        steps = 6283
        h = 2 * np.pi / steps
        traj = rk4_integrate(A, None, 0.0, np.array([1.0, 0.0]), h, steps)
        assert np.linalg.norm(traj.states[-1] - np.array([1.0, 0.0])) < 1e-9
        energy = (traj.states ** 2).sum(axis=1)
        assert np.abs(energy - 1.0).max() < 1e-9

    def test_uniform_grid(self):
        traj = rk4_integrate(np.array([[-1.0]]), None, 2.0, np.array([1.0]), 0.25, 8)
        assert np.array_equal(traj.times, 2.0 + 0.25 * np.arange(9))


class TestRk4Correctness:
    def test_matches_reference_loop_forced(self):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((3, 3)) * 0.4
        g = VectorSignal([Sinusoid(1.0, 3.0, "sin"), Constant(0.5), Sinusoid(2.0, 1.0, "cos")])
        traj = rk4_integrate(A, g, 0.0, np.array([0.1, -0.2, 0.3]), 0.05, 200)
        ref = reference_rk4(A, g, 0.0, np.array([0.1, -0.2, 0.3]), 0.05, 200)
        assert np.abs(traj.states - ref).max() < 1e-11

    def test_order_four_convergence(self):
        # halving h reduces the error vs the analytic exponential ~16x
        A = np.array([[1.0]])
        errs = []
        for h, steps in ((0.1, 10), (0.05, 20)):
            traj = rk4_integrate(A, None, 0.0, np.array([1.0]), h, steps)
            errs.append(abs(traj.states[-1, 0] - np.e))
        ratio = errs[0] / errs[1]
        assert 12.0 <= ratio <= 20.0

    def test_linearity(self):
        A = np.array([[-0.5, 0.2], [0.1, -0.8]])
        g1 = VectorSignal([Sinusoid(1.0, 2.0, "sin"), Constant(0.0)])
        g2 = VectorSignal([Constant(0.3), Sinusoid(0.5, 5.0, "cos")])
        from unpredictable.signals import sum_signals
        x0a, x0b = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        ta = rk4_integrate(A, g1, 0.0, x0a, 0.02, 300)
        tb = rk4_integrate(A, g2, 0.0, x0b, 0.02, 300)
        tc = rk4_integrate(A, sum_signals(g1, g2), 0.0, x0a + x0b, 0.02, 300)
        scale = np.abs(tc.states).max()
        assert np.abs(tc.states - (ta.states + tb.states)).max() <= 1e-9 * scale

    def test_record_every_consistency(self):
        A = np.array([[-0.3, 1.0], [-1.0, -0.3]])
        g = VectorSignal([Sinusoid(1.0, 2.0, "cos"), Constant(0.1)])
        full = rk4_integrate(A, g, 0.0, np.array([1.0, 0.0]), 0.01, 400, record_every=1)
        strided = rk4_integrate(A, g, 0.0, np.array([1.0, 0.0]), 0.01, 400, record_every=8)
        assert np.array_equal(full.states[::8], strided.states)
        assert np.array_equal(full.times[::8], strided.times)

    def test_defective_update_matrix_falls_back(self):
        # A nilpotent: R = I + hA (+ higher zero terms) is defective; the loop
        # path must agree with the reference
        A = np.array([[0.0, 1.0], [0.0, 0.0]])
        g = VectorSignal([Constant(0.0), Sinusoid(1.0, 1.0, "sin")])
        traj = rk4_integrate(A, g, 0.0, np.array([0.0, 0.0]), 0.05, 100)
        ref = reference_rk4(A, g, 0.0, np.array([0.0, 0.0]), 0.05, 100)
        assert np.abs(traj.states - ref).max() < 1e-12


class TestGuards:
    def test_stability_guard_trips(self):
        with pytest.raises(StabilityGuardError):
            rk4_integrate(np.array([[-52098.0]]), None, 0.0, np.array([1.0]), 0.01, 10)

    def test_signal_domain_shortfall(self, small_theta):
        g = VectorSignal([small_theta])
        with pytest.raises(DomainError):
            rk4_integrate(np.array([[-1.0]]), g, 0.0, np.array([0.0]), 0.5,
                          2 * len(small_theta.orbit) + 10)

    def test_record_every_must_divide(self):
        with pytest.raises(PreconditionError):
            rk4_integrate(np.eye(1) * -1, None, 0.0, np.array([1.0]), 0.1, 10, record_every=3)


class TestStageMatrices:
    def test_update_matrix_is_truncated_exponential(self):
        A = np.array([[-2.0, 2.0], [1.0, -3.0]])
        h = 0.01
        R, _, _ = stage_matrices(A, h)
        hA = h * A
        expected = (np.eye(2) + hA + hA @ hA / 2 + hA @ hA @ hA / 6
                    + hA @ hA @ hA @ hA / 24)
        assert np.abs(R - expected).max() == 0.0


class TestContractionProbe:
    def test_identical_starts_zero_gap(self):
        A = np.array([[-1.0, 0.5], [0.0, -2.0]])
        probe = contraction_probe(A, None, np.array([1.0, 1.0]), np.array([1.0, 1.0]),
                                  0.0, 0.01, 100)
        assert np.abs(probe.gaps).max() == 0.0

    def test_scalar_analytic_decay(self):
        probe = contraction_probe(np.array([[-1.0]]), None, np.array([1.0]),
                                  np.array([0.0]), 0.0, 0.01, 1000)
        assert np.abs(probe.gaps - np.exp(-probe.times)).max() < 1e-8

    def test_example_matrix_log_slope(self, example1_split):
        # asymptotic decay rate equals the slowest eigenvalue (-1)
        A = example1_split.A
        g = VectorSignal([Sinusoid(1.0, 10.0, "sin"), Constant(0.2)])
        probe = contraction_probe(A, g, np.array([2.0, 1.0]), np.array([1.0, 1.0]),
                                  0.0, 0.01, 1200)
        t, gap = probe.times, probe.gaps
        slope = (np.log(gap[-1]) - np.log(gap[600])) / (t[-1] - t[600])
        assert slope == pytest.approx(-1.0, abs=0.05)

    def test_rejects_non_hurwitz(self):
        with pytest.raises(PreconditionError):
            contraction_probe(np.array([[1.0]]), None, np.array([1.0]),
                              np.array([0.0]), 0.0, 0.01, 10)

    def test_fits_dichotomy_envelope(self, example1_split):
        A = example1_split.A
        probe = contraction_probe(A, None, np.array([0.18, 0.01]), np.array([1.0, -1.0]),
                                  0.0, 0.01, 1000)
        gap0 = probe.gaps[0]
        envelope = example1_split.K * np.exp(-example1_split.alpha * probe.times) * gap0 * 1.01
        assert np.all(probe.gaps <= envelope)
