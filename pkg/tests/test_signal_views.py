"""Views and adapters used by the solver and detector plumbing."""

import numpy as np
import pytest

from unpredictable.bounded import bounded_solution
from unpredictable.errors import DomainError
from unpredictable.linalg import spectral_split
from unpredictable.signals import (Constant, PiecewiseGridSignal,
                                   ReflectedSignal, Scaled, SlicedSignal,
                                   Sinusoid, VectorSignal)


class TestSlicedAndReflected:
    def test_sliced_components(self, small_theta):
        g = VectorSignal([Scaled(small_theta, 2.0), Constant(1.0), Sinusoid(1.0, 3.0, "cos")])
        s = SlicedSignal(g, 1, 3)
        ts = np.linspace(0, 20, 101)
        assert np.array_equal(s.eval_many(ts), g.eval_many(ts)[:, 1:3])
        assert s.dim == 2

    def test_reflected_values_and_domain(self, small_theta):
        g = VectorSignal([small_theta])
        r = ReflectedSignal(g, pivot=50.0, sign=-1.0)
        ts = np.linspace(0.0, 20.0, 41)
        expected = -g.eval_many(50.0 - ts)
        assert np.array_equal(r.eval_many(ts), expected)
        lo, hi = r.domain
        assert lo == 50.0 - g.domain[1] and hi == 50.0

    def test_reflected_breakpoints_mirror(self, small_theta):
        g = VectorSignal([small_theta])
        r = ReflectedSignal(g, pivot=50.0)
        # base kinks at integers 45..50 map into reflected time pivot - k
        bp = r.breakpoints(0.0, 5.0)
        assert np.array_equal(bp, np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0]))
        bp2 = r.breakpoints(0.5, 2.5)
        assert np.array_equal(bp2, np.array([1.0, 2.0]))


class TestBoundedEvaluation:
    def test_interpolation_between_grid_points(self):
        split = spectral_split(np.array([[-1.0]]))
        g = VectorSignal([Constant(2.0)])
        sol = bounded_solution(split, g, (0.0, 5.0), tol=1e-9)
        # steady state 2.0 everywhere; interpolation must not wiggle
        ts = np.array([0.005, 1.2345, 4.9999, 5.0])
        assert np.abs(sol.eval_many(ts) - 2.0).max() < 1e-8

    def test_outside_window_rejected(self):
        split = spectral_split(np.array([[-1.0]]))
        g = VectorSignal([Constant(2.0)])
        sol = bounded_solution(split, g, (0.0, 5.0), tol=1e-9)
        with pytest.raises(DomainError):
            sol.eval_many(np.array([5.5]))


class TestPiecewiseGridSignal:
    def make(self):
        seg1 = (0.0, np.arange(11, dtype=float)[:, None])          # t in [0, 1]
        seg2 = (5.0, 100.0 + np.arange(11, dtype=float)[:, None])  # t in [5, 6]
        return PiecewiseGridSignal([seg2, seg1], step=0.1)

    def test_lookup_in_each_segment(self):
        sig = self.make()
        out = sig.eval_many(np.array([0.0, 0.5, 1.0, 5.0, 5.3, 6.0]))
        assert out[:, 0].tolist() == [0.0, 5.0, 10.0, 100.0, 103.0, 110.0]

    def test_gap_rejected(self):
        sig = self.make()
        with pytest.raises(DomainError):
            sig.eval_many(np.array([2.5]))

    def test_off_grid_rejected(self):
        sig = self.make()
        with pytest.raises(DomainError):
            sig.eval_many(np.array([0.5003]))

    def test_covers_is_per_segment(self):
        sig = self.make()
        assert sig.covers(0.0, 1.0)
        assert sig.covers(5.2, 5.9)
        assert not sig.covers(0.5, 5.5)
