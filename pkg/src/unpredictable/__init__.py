"""Unpredictable signals and bounded solutions of hyperbolic linear systems.

The package builds chaotic driving signals from logistic-map orbits, computes
the unique bounded solution of x' = A x + g(t) for hyperbolic A through
exponential-dichotomy convolution integrals, and numerically certifies the
recurrence-plus-separation structure that makes signals and solutions
unpredictable.  See the demos/ directory of the source distribution for
worked examples of each capability, or use the `unpredictable` CLI.
"""

from .bounded import (BoundedCertificate, BoundedSolution, bounded_solution,
                      residual_certificate, truncation_horizon)
from .detect import (DetectConfig, DetectionReport, find_return_shifts,
                     poisson_check, separation_scan, verify_unpredictable)
from .errors import (DomainError, NotHyperbolicError, NumericalError,
                     PreconditionError, SingularMatrixError, StabilityGuardError)
from .linalg import (SpectralSplit, dichotomy_constants, eigenvalues, expm,
                     invert, parse_matrix, solve_linear, spectral_split)
from .signals import (Constant, LogisticOrbit, SampledScalar, Scaled,
                      ScalarSum, Sinusoid, StepSignal, ThetaSignal,
                      VectorSignal, add_periodic, linear_transform,
                      logistic_iterate, sum_signals, theta_build, theta_eval)
from .sim import Trajectory, contraction_probe, rk4_integrate

__version__ = "0.1.0"

__all__ = [
    "BoundedCertificate", "BoundedSolution", "bounded_solution",
    "residual_certificate", "truncation_horizon",
    "DetectConfig", "DetectionReport", "find_return_shifts", "poisson_check",
    "separation_scan", "verify_unpredictable",
    "DomainError", "NotHyperbolicError", "NumericalError", "PreconditionError",
    "SingularMatrixError", "StabilityGuardError",
    "SpectralSplit", "dichotomy_constants", "eigenvalues", "expm", "invert",
    "parse_matrix", "solve_linear", "spectral_split",
    "Constant", "LogisticOrbit", "SampledScalar", "Scaled", "ScalarSum",
    "Sinusoid", "StepSignal", "ThetaSignal", "VectorSignal", "add_periodic",
    "linear_transform", "logistic_iterate", "sum_signals", "theta_build",
    "theta_eval",
    "Trajectory", "contraction_probe", "rk4_integrate",
]
