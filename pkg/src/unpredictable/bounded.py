"""The unique bounded solution of x' = A x + g(t) on a time window.

In split coordinates y = B^{-1} x the solution decomposes into a forward
convolution over the stable block and a backward convolution over the
unstable block.  Both are computed by integrating an initial-value problem
from a zeroed truncation point: starting the stable branch at t_lo - T with
y = 0 reproduces the truncated integral exactly, and the unstable branch is
the same trick run in reversed time from t_hi + T.  The truncation horizon T
comes from the dichotomy constants so that each neglected tail is below
tol/4; the remaining budget is left to the integrator.

The horizon is capped at `horizon_cap` (default 1e4): a near-neutral
unstable eigenvalue can demand astronomically long horizons, in which case
the certificate reports the resulting tail bound honestly instead of
pretending the requested tolerance was met.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import csvio
from .errors import DomainError, PreconditionError, StabilityGuardError
from .linalg import SpectralSplit
from .signals import ReflectedSignal, SlicedSignal, transform_with_inverse
from .sim import STABILITY_LIMIT, rk4_integrate, spectral_abscissa

_DEFAULT_STEP = 0.01
_MIN_STEP = 1e-9
DEFAULT_HORIZON_CAP = 1e4


def truncation_horizon(K, alpha, M, tol):
    """Horizon T with neglected convolution tail 2 M K e^{-alpha T}/alpha <= tol/4."""
    if K < 1.0 or alpha <= 0 or M <= 0 or tol <= 0:
        raise PreconditionError(
            "bounded.truncation_horizon: need K >= 1 and positive alpha, M, tol"
        )
    return math.log(8.0 * M * K / (alpha * tol)) / alpha


def _tail_bound(K, alpha, M, T):
    with np.errstate(under="ignore"):
        return 2.0 * M * K * math.exp(-alpha * T) / alpha


def _snap_step(h, rho):
    """Largest step of the form 1/m satisfying both h and the stiffness guard."""
    limit = h
    if rho > 0:
        limit = min(limit, STABILITY_LIMIT / rho)
    if limit < _MIN_STEP:
        raise StabilityGuardError(
            f"bounded: required integrator step {limit:.3e} underflows {_MIN_STEP:.0e}"
        )
    return 1.0 / int(np.ceil(1.0 / limit - 1e-12))


@dataclass
class BoundedCertificate:
    """Accuracy accounting for a computed bounded solution."""

    window: tuple
    tol: float
    h: float
    K: float
    alpha: float
    T_minus: float
    T_plus: float
    tail_bound: float
    max_residual: float = None

    def to_dict(self):
        return {
            "window": [self.window[0], self.window[1]],
            "tol": self.tol,
            "h": self.h,
            "K": self.K,
            "alpha": self.alpha,
            "T_minus": self.T_minus,
            "T_plus": self.T_plus,
            "tail_bound": self.tail_bound,
            "max_residual": self.max_residual,
        }

    def to_json(self, path):
        csvio.write_json(path, csvio.jsonable(self.to_dict()))


@dataclass
class BoundedSolution:
    """Grid evaluation of the bounded solution over [t_lo, t_hi]."""

    split: SpectralSplit
    forcing: object
    times: np.ndarray
    values: np.ndarray
    h: float
    tol: float
    certificate: BoundedCertificate
    recurrence_periods: tuple = field(default=())

    @property
    def dim(self):
        return self.values.shape[1]

    @property
    def window(self):
        return (float(self.times[0]), float(self.times[-1]))

    @property
    def bound(self):
        """A-priori sup bound 2 K M / alpha from the convolution estimates."""
        return 2.0 * self.split.K * self.forcing.bound / self.split.alpha

    @property
    def domain(self):
        return self.window

    def covers(self, lo, hi):
        return self.times[0] - 1e-12 <= lo and hi <= self.times[-1] + 1e-12

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        lo, hi = self.window
        if ts.size and (ts.min() < lo - 1e-9 or ts.max() > hi + 1e-9):
            raise DomainError(
                f"bounded.BoundedSolution: evaluation outside window [{lo:.6g}, {hi:.6g}]"
            )
        pos = (ts - lo) / self.h
        idx = np.clip(np.floor(pos).astype(np.int64), 0, self.values.shape[0] - 2)
        w = (pos - idx)[:, None]
        return (1.0 - w) * self.values[idx] + w * self.values[idx + 1]

    def __call__(self, t):
        return self.eval_many(np.atleast_1d(float(t)))[0]

    def breakpoints(self, lo, hi):
        return self.forcing.breakpoints(lo, hi)

    def to_csv(self, path, residuals=None):
        header = ["t"] + [f"phi{j + 1}" for j in range(self.dim)]
        cols = [self.times] + [self.values[:, j] for j in range(self.dim)]
        if residuals is not None:
            header.append("residual")
            cols.append(residuals)
        csvio.write_columns(path, header, cols)


def bounded_solution(split, g, window, tol, h=None, horizon_cap=DEFAULT_HORIZON_CAP,
                     horizon_override=None):
    """Compute the bounded solution of x' = A x + g over `window` = (t_lo, t_hi).

    Converts g to split coordinates (f = B^{-1} g), runs the forward IVP for
    the stable components and the reversed-time IVP for the unstable ones,
    and maps back through B.  Guaranteed accuracy: truncation tail (certified)
    plus the RK4 integration error.
    """
    if not isinstance(split, SpectralSplit):
        raise PreconditionError("bounded.bounded_solution: first argument must be a SpectralSplit")
    t_lo, t_hi = float(window[0]), float(window[1])
    if not (t_hi > t_lo):
        raise PreconditionError(
            f"bounded.bounded_solution: empty window [{t_lo}, {t_hi}]"
        )
    if tol <= 0:
        raise PreconditionError("bounded.bounded_solution: tol must be positive")
    n, q = split.dim, split.q
    if g.dim != n:
        raise PreconditionError(
            f"bounded.bounded_solution: forcing dimension {g.dim} != system dimension {n}"
        )

    f = transform_with_inverse(g, split.Binv)
    M = f.bound
    K = split.K

    rho = spectral_abscissa(split.A)
    h = _snap_step(_DEFAULT_STEP if h is None else float(h), rho)
    # snap the window onto the h-grid (integer-aligned so step forcing stays aligned)
    t_lo = math.floor(t_lo / h + 1e-9) * h
    t_hi = math.ceil(t_hi / h - 1e-9) * h
    n_out = int(round((t_hi - t_lo) / h))

    def branch_horizon(alpha_branch):
        if horizon_override is not None:
            T = float(horizon_override)
        elif M <= 0.0:
            T = 0.0  # zero forcing: the bounded solution is identically zero
        else:
            T = truncation_horizon(K, alpha_branch, M, tol)
        T = max(min(T, horizon_cap), 0.0)
        return math.ceil(T / h - 1e-9) * h

    times = t_lo + h * np.arange(n_out + 1)
    y = np.zeros((n_out + 1, n))
    T_minus = 0.0
    T_plus = 0.0
    tail = 0.0

    if q > 0:
        T_minus = branch_horizon(split.alpha_minus)
        tail = max(tail, _tail_bound(K, split.alpha_minus, M, T_minus))
        t_start = t_lo - T_minus
        if not f.covers(t_start, t_hi):
            raise DomainError(
                f"bounded.bounded_solution: forcing must cover [{t_start:.6g}, {t_hi:.6g}] "
                "for the stable branch (signal domain too short)"
            )
        steps = int(round((t_hi - t_start) / h))
        traj = rk4_integrate(split.Aminus, SlicedSignal(f, 0, q),
                             t_start, np.zeros(q), h, steps)
        y[:, :q] = traj.states[steps - n_out:]

    if q < n:
        T_plus = branch_horizon(split.alpha_plus)
        tail = max(tail, _tail_bound(K, split.alpha_plus, M, T_plus))
        t_end = t_hi + T_plus
        if not f.covers(t_lo, t_end):
            raise DomainError(
                f"bounded.bounded_solution: forcing must cover [{t_lo:.6g}, {t_end:.6g}] "
                "for the unstable branch (signal domain too short)"
            )
        # w(tau) = y(t_end - tau) solves w' = -Aplus w - f_plus(t_end - tau)
        g_rev = ReflectedSignal(SlicedSignal(f, q, n), t_end, sign=-1.0)
        steps = int(round((t_end - t_lo) / h))
        traj = rk4_integrate(-split.Aplus, g_rev, 0.0, np.zeros(n - q), h, steps)
        y[:, q:] = traj.states[::-1][:n_out + 1]

    values = y @ split.B.T
    cert = BoundedCertificate(window=(t_lo, t_hi), tol=tol, h=h, K=K,
                              alpha=split.alpha, T_minus=T_minus, T_plus=T_plus,
                              tail_bound=tail)
    return BoundedSolution(split=split, forcing=g, times=times, values=values,
                           h=h, tol=tol, certificate=cert,
                           recurrence_periods=getattr(g, "recurrence_periods", ()))


def residual_certificate(sol, grid_step=None):
    """Max centered-difference residual of the computed solution.

    residual(t) = ||(phi(t+h) - phi(t-h))/(2h) - A phi(t) - g(t)|| over
    interior grid points, skipping points where the forcing jumps (the
    centered stencil straddles a kink there and the residual would measure
    the jump, not the solution quality).  Updates the certificate in place.
    """
    h = sol.h
    times = sol.times
    if times.shape[0] < 3:
        raise PreconditionError("bounded.residual_certificate: window too short for centered differences")
    stride = 1
    if grid_step is not None:
        stride = max(1, int(round(float(grid_step) / h)))
    interior = np.arange(1, times.shape[0] - 1, stride)

    bp = sol.forcing.breakpoints(times[0], times[-1])
    if np.size(bp):
        bp_idx = np.round((np.asarray(bp) - times[0]) / h).astype(np.int64)
        mask = ~np.isin(interior, bp_idx)
        interior = interior[mask]
    if interior.size == 0:
        raise PreconditionError("bounded.residual_certificate: no interior points left to check")

    A = sol.split.A
    deriv = (sol.values[interior + 1] - sol.values[interior - 1]) / (2.0 * h)
    res = deriv - sol.values[interior] @ A.T - sol.forcing.eval_many(times[interior])
    max_res = float(np.linalg.norm(res, axis=1).max())
    sol.certificate.max_residual = max_res
    return max_res


def residual_series(sol):
    """Per-point residual column for CSV export (nan at skipped points)."""
    h = sol.h
    times = sol.times
    out = np.full(times.shape[0], np.nan)
    if times.shape[0] < 3:
        return out
    interior = np.arange(1, times.shape[0] - 1)
    bp = sol.forcing.breakpoints(times[0], times[-1])
    if np.size(bp):
        bp_idx = np.round((np.asarray(bp) - times[0]) / h).astype(np.int64)
        interior = interior[~np.isin(interior, bp_idx)]
    if interior.size == 0:
        return out
    A = sol.split.A
    deriv = (sol.values[interior + 1] - sol.values[interior - 1]) / (2.0 * h)
    res = deriv - sol.values[interior] @ A.T - sol.forcing.eval_many(times[interior])
    out[interior] = np.linalg.norm(res, axis=1)
    return out
