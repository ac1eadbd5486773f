"""Chaotic driving signals and their algebra.

The chain is: a logistic-map orbit psi_i  ->  the unit-step sample-and-hold
signal Omega(t) = psi_i on [i, i+1)  ->  the exponentially smoothed signal
Theta(t) obtained by filtering Omega through theta' = -gamma theta + Omega.
Theta is continuous, bounded by sup(Omega)/gamma, and inherits the orbit's
recurrence structure, which is what the detect module later certifies.

Vector signals combine scalar components (Theta terms, sinusoids, constants,
sampled data) and support the two closure operations used downstream:
multiplication by B^{-1} and addition of a periodic signal.

All signal objects are immutable after construction and safe to share
between threads.
"""

from dataclasses import dataclass

import numpy as np

from . import csvio
from .errors import DomainError, PreconditionError
from .linalg import invert, matrix_norm

# Tolerance when snapping query times onto the unit-interval breakpoints;
# absorbs accumulated grid rounding without moving interior points.
_EDGE_SNAP = 1e-12


@dataclass(frozen=True)
class LogisticOrbit:
    """Finite orbit psi_{i+1} = mu psi_i (1 - psi_i), stored as values[0..count-1]."""

    mu: float
    seed: float
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    def __len__(self):
        return self.values.shape[0]

    def to_csv(self, path):
        csvio.write_columns(path, ["i", "psi"], [np.arange(len(self)), self.values])

    @classmethod
    def from_csv(cls, path, mu=float("nan"), seed=float("nan")):
        _, cols = csvio.read_columns(path)
        if len(cols) < 2 or cols[1].shape[0] == 0:
            raise PreconditionError(f"signals.LogisticOrbit.from_csv: no orbit values in {path}")
        values = np.asarray(cols[1])
        return cls(mu=mu, seed=seed if not np.isnan(seed) else float(values[0]), values=values)


def logistic_iterate(seed, mu, count):
    """Iterate the logistic map `count` times (the seed is value 0).

    Restricted to 0 < seed < 1 and 0 < mu <= 4 so the orbit cannot escape
    [0, 1].  Uses only *, -, + on binary64 values, hence bit-reproducible.
    """
    seed = float(seed)
    mu = float(mu)
    if not (0.0 < seed < 1.0):
        raise PreconditionError(f"signals.logistic_iterate: seed must lie in (0, 1), got {seed}")
    if not (0.0 < mu <= 4.0):
        raise PreconditionError(f"signals.logistic_iterate: mu must lie in (0, 4], got {mu}")
    count = int(count)
    if count <= 0:
        raise PreconditionError(f"signals.logistic_iterate: count must be positive, got {count}")
    values = np.empty(count)
    x = seed
    for i in range(count):
        values[i] = x
        x = mu * x * (1.0 - x)
    return LogisticOrbit(mu=mu, seed=seed, values=values)


def _floor_index(ts, n_pieces):
    """Piece index for times in [0, n_pieces], snapping fp-noise at breakpoints."""
    idx = np.floor(ts + _EDGE_SNAP).astype(np.int64)
    return np.clip(idx, 0, n_pieces - 1)


class StepSignal:
    """Sample-and-hold signal Omega(t) = psi_i for t in [i, i+1)."""

    def __init__(self, orbit):
        self.orbit = orbit
        self.bound = 1.0
        self.period = None
        self.recurrence_periods = ()

    @property
    def domain(self):
        return (0.0, float(len(self.orbit)))

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        _check_domain(ts, self.domain, "signals.StepSignal")
        return self.orbit.values[_floor_index(ts, len(self.orbit))]

    def __call__(self, t):
        return float(self.eval_many(np.atleast_1d(t))[0])

    def breakpoints(self, lo, hi):
        return np.arange(np.ceil(lo), np.floor(hi) + 1.0)


def _check_domain(ts, domain, op):
    if ts.size == 0:
        return
    lo, hi = domain
    tmin, tmax = float(ts.min()), float(ts.max())
    if tmin < lo - _EDGE_SNAP or tmax > hi + _EDGE_SNAP:
        raise DomainError(
            f"{op}: evaluation range [{tmin:.6g}, {tmax:.6g}] outside covered domain "
            f"[{lo:.6g}, {hi:.6g}]"
        )


class ThetaSignal:
    """Continuous smoothing of the step signal: theta' = -gamma theta + Omega.

    Integer-node values obey theta(i+1) = e^{-gamma} theta(i)
    + psi_i (1 - e^{-gamma})/gamma exactly; between nodes the same closed form
    applies with the fractional exponent.  With Omega in [0, 1] and
    theta0 in [0, 1/gamma], theta stays in [0, 1/gamma] for all time.
    """

    def __init__(self, orbit, gamma, theta0, nodes):
        self.orbit = orbit
        self.step = StepSignal(orbit)
        self.gamma = gamma
        self.theta0 = theta0
        self.nodes = nodes
        nodes.setflags(write=False)
        self.bound = 1.0 / gamma
        self.period = None
        self.recurrence_periods = ()
        # |theta'| <= gamma * sup(theta) + sup(Omega)
        self.derivative_bound = gamma * self.bound + 1.0

    @property
    def domain(self):
        return (0.0, float(len(self.orbit)))

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        _check_domain(ts, self.domain, "signals.ThetaSignal")
        idx = _floor_index(ts, len(self.orbit))
        frac = ts - idx
        decay = np.exp(-self.gamma * frac)
        psi = self.orbit.values[idx]
        return decay * self.nodes[idx] + psi * (1.0 - decay) / self.gamma

    def __call__(self, t):
        return float(self.eval_many(np.atleast_1d(t))[0])

    def breakpoints(self, lo, hi):
        return self.step.breakpoints(lo, hi)

    def to_csv(self, path, t_max=None, step=0.01):
        hi = self.domain[1] if t_max is None else float(t_max)
        ts = sample_grid(0.0, hi, step)
        csvio.write_columns(path, ["t", "theta"], [ts, self.eval_many(ts)])


def theta_build(orbit, decay=2.0, theta0=None):
    """Build ThetaSignal from an orbit; theta0 defaults to psi_0/decay.

    The default initialization equals the filter equilibrium for a constant
    extension of Omega into the past, so any initialization error decays like
    e^{-decay * t}; discard a burn-in window before analysis.
    """
    decay = float(decay)
    if decay <= 0:
        raise PreconditionError(f"signals.theta_build: decay rate must be positive, got {decay}")
    if theta0 is None:
        theta0 = float(orbit.values[0]) / decay
    theta0 = float(theta0)
    if not (0.0 <= theta0 <= 1.0 / decay + 1e-15):
        raise PreconditionError(
            f"signals.theta_build: theta0 must lie in [0, {1.0 / decay:.6g}], got {theta0}"
        )
    n = len(orbit)
    a = np.exp(-decay)
    gain = (1.0 - a) / decay
    nodes = np.empty(n + 1)
    nodes[0] = theta0
    x = theta0
    vals = orbit.values
    for i in range(n):
        x = a * x + vals[i] * gain
        nodes[i + 1] = x
    return ThetaSignal(orbit=orbit, gamma=decay, theta0=theta0, nodes=nodes)


def theta_eval(theta, t):
    """Evaluate a ThetaSignal at scalar or array times (closed form per piece)."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = theta.eval_many(ts)
    return float(out[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else out


def sample_grid(lo, hi, step):
    """Inclusive uniform grid; empty when hi <= lo."""
    if hi <= lo:
        return np.zeros(0)
    n = int(round((hi - lo) / step))
    if abs(lo + n * step - hi) > 1e-9 * max(1.0, abs(hi)):
        n = int(np.floor((hi - lo) / step + 1e-12))
    return lo + step * np.arange(n + 1)


# ---------------------------------------------------------------------------
# scalar components

class Constant:
    def __init__(self, value):
        self.value = float(value)
        self.bound = abs(self.value)
        self.period = 0.0          # periodic with every period
        self.domain = (-np.inf, np.inf)
        self.recurrence_periods = ()
        self.derivative_bound = 0.0

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        return np.full(ts.shape, self.value)

    def breakpoints(self, lo, hi):
        return np.zeros(0)


class Sinusoid:
    """coef * sin(omega t) or coef * cos(omega t)."""

    def __init__(self, coef, omega, kind="sin"):
        if kind not in ("sin", "cos"):
            raise PreconditionError(f"signals.Sinusoid: kind must be sin or cos, got {kind!r}")
        if omega == 0:
            raise PreconditionError("signals.Sinusoid: omega must be nonzero (use Constant)")
        self.coef = float(coef)
        self.omega = float(omega)
        self.kind = kind
        self.func = np.sin if kind == "sin" else np.cos
        self.bound = abs(self.coef)
        self.period = 2.0 * np.pi / abs(self.omega)
        self.domain = (-np.inf, np.inf)
        self.recurrence_periods = (self.period,)
        self.derivative_bound = abs(self.coef * self.omega)

    def eval_many(self, ts):
        return self.coef * self.func(self.omega * np.asarray(ts, dtype=float))

    def breakpoints(self, lo, hi):
        return np.zeros(0)


class Scaled:
    """coef * inner(t) for any scalar component."""

    def __init__(self, inner, coef):
        self.inner = inner
        self.coef = float(coef)
        self.bound = abs(self.coef) * inner.bound
        self.period = getattr(inner, "period", None)
        self.domain = inner.domain
        self.recurrence_periods = getattr(inner, "recurrence_periods", ())
        db = getattr(inner, "derivative_bound", None)
        self.derivative_bound = None if db is None else abs(self.coef) * db

    def eval_many(self, ts):
        return self.coef * self.inner.eval_many(ts)

    def breakpoints(self, lo, hi):
        return self.inner.breakpoints(lo, hi)


class ScalarSum:
    """Pointwise sum of scalar components."""

    def __init__(self, parts):
        self.parts = list(parts)
        if not self.parts:
            raise PreconditionError("signals.ScalarSum: needs at least one part")
        self.bound = sum(p.bound for p in self.parts)
        self.domain = _intersect_domains(p.domain for p in self.parts)
        self.period = None
        self.recurrence_periods = _union_periods(self.parts)
        dbs = [getattr(p, "derivative_bound", None) for p in self.parts]
        self.derivative_bound = None if any(d is None for d in dbs) else sum(dbs)

    def eval_many(self, ts):
        out = self.parts[0].eval_many(ts).copy()
        for p in self.parts[1:]:
            out += p.eval_many(ts)
        return out

    def breakpoints(self, lo, hi):
        pts = [p.breakpoints(lo, hi) for p in self.parts]
        return np.unique(np.concatenate(pts)) if pts else np.zeros(0)


class SampledScalar:
    """Linear interpolation through sampled (t, value) data."""

    def __init__(self, ts, values):
        ts = np.asarray(ts, dtype=float)
        values = np.asarray(values, dtype=float)
        if ts.ndim != 1 or ts.shape != values.shape or ts.size < 2:
            raise PreconditionError("signals.SampledScalar: need matching 1-d arrays, length >= 2")
        if not np.all(np.diff(ts) > 0):
            raise PreconditionError("signals.SampledScalar: times must be strictly increasing")
        self.ts = ts
        self.values = values
        self.bound = float(np.abs(values).max())
        self.period = None
        self.domain = (float(ts[0]), float(ts[-1]))
        self.recurrence_periods = ()
        self.derivative_bound = float(np.abs(np.diff(values) / np.diff(ts)).max())

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        _check_domain(ts, self.domain, "signals.SampledScalar")
        return np.interp(ts, self.ts, self.values)

    def breakpoints(self, lo, hi):
        return np.zeros(0)


def _intersect_domains(domains):
    lo, hi = -np.inf, np.inf
    for d in domains:
        lo = max(lo, d[0])
        hi = min(hi, d[1])
    return (lo, hi)


def _union_periods(parts):
    seen = []
    for p in parts:
        for T in getattr(p, "recurrence_periods", ()):
            if not any(abs(T - s) <= 1e-12 * max(T, s) for s in seen):
                seen.append(T)
    return tuple(seen)


# ---------------------------------------------------------------------------
# vector signals

class VectorSignal:
    """Fixed-dimension signal with per-component scalar evaluators.

    `bound` is the declared sup of the Euclidean norm; by default the
    root-sum-square of component bounds.  It is a contract checked on dense
    grids by the tests, not recomputed at evaluation time.
    """

    def __init__(self, components, bound=None, period=None):
        self.components = [c if hasattr(c, "eval_many") else Constant(c) for c in components]
        if not self.components:
            raise PreconditionError("signals.VectorSignal: needs at least one component")
        self.dim = len(self.components)
        if bound is None:
            bound = float(np.sqrt(sum(c.bound ** 2 for c in self.components)))
        self.bound = float(bound)
        if period is None and all(getattr(c, "period", None) == 0.0 for c in self.components):
            period = 0.0  # all-constant signal is periodic with any period
        self.period = period
        self.domain = _intersect_domains(c.domain for c in self.components)
        self.recurrence_periods = _union_periods(self.components)

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        out = np.empty((ts.shape[0], self.dim))
        for j, c in enumerate(self.components):
            out[:, j] = c.eval_many(ts)
        return out

    def __call__(self, t):
        return self.eval_many(np.atleast_1d(float(t)))[0]

    def covers(self, lo, hi):
        return self.domain[0] - _EDGE_SNAP <= lo and hi <= self.domain[1] + _EDGE_SNAP

    def breakpoints(self, lo, hi):
        pts = [c.breakpoints(lo, hi) for c in self.components]
        pts = [p for p in pts if p.size]
        return np.unique(np.concatenate(pts)) if pts else np.zeros(0)

    def to_csv(self, path, t0, t1, step):
        ts = sample_grid(t0, t1, step)
        vals = self.eval_many(ts) if ts.size else np.zeros((0, self.dim))
        header = ["t"] + [f"g{j + 1}" for j in range(self.dim)]
        csvio.write_columns(path, header, [ts] + [vals[:, j] for j in range(self.dim)])


class _TransformedSignal(VectorSignal):
    """t -> Minv @ base(t); used for the B^{-1} g change of coordinates."""

    def __init__(self, base, Minv):
        self.base = base
        self.Minv = np.asarray(Minv, dtype=float)
        self.components = None
        self.dim = base.dim
        self.bound = matrix_norm(Minv) * base.bound
        self.period = base.period
        self.domain = base.domain
        self.recurrence_periods = base.recurrence_periods

    def eval_many(self, ts):
        return self.base.eval_many(ts) @ self.Minv.T

    def breakpoints(self, lo, hi):
        return self.base.breakpoints(lo, hi)


class SumSignal(VectorSignal):
    """Pointwise sum of two vector signals; bound adds."""

    def __init__(self, a, b, period=None):
        if a.dim != b.dim:
            raise PreconditionError(
                f"signals.SumSignal: dimension mismatch {a.dim} vs {b.dim}"
            )
        self.a = a
        self.b = b
        self.components = None
        self.dim = a.dim
        self.bound = a.bound + b.bound
        self.period = period
        self.domain = _intersect_domains([a.domain, b.domain])
        self.recurrence_periods = _union_periods([a, b])

    def eval_many(self, ts):
        return self.a.eval_many(ts) + self.b.eval_many(ts)

    def breakpoints(self, lo, hi):
        pts = [self.a.breakpoints(lo, hi), self.b.breakpoints(lo, hi)]
        pts = [p for p in pts if p.size]
        return np.unique(np.concatenate(pts)) if pts else np.zeros(0)


class SlicedSignal(VectorSignal):
    """Component range [lo, hi) of a vector signal."""

    def __init__(self, base, lo, hi):
        self.base = base
        self.lo = lo
        self.hi = hi
        self.components = None
        self.dim = hi - lo
        self.bound = base.bound
        self.period = base.period
        self.domain = base.domain
        self.recurrence_periods = base.recurrence_periods

    def eval_many(self, ts):
        return self.base.eval_many(ts)[:, self.lo:self.hi]

    def breakpoints(self, lo, hi):
        return self.base.breakpoints(lo, hi)


class ReflectedSignal(VectorSignal):
    """t -> sign * base(pivot - t); used for the reversed-time branch."""

    def __init__(self, base, pivot, sign=-1.0):
        self.base = base
        self.pivot = float(pivot)
        self.sign = float(sign)
        self.components = None
        self.dim = base.dim
        self.bound = base.bound
        self.period = base.period
        lo, hi = base.domain
        self.domain = (self.pivot - hi, self.pivot - lo)
        self.recurrence_periods = base.recurrence_periods

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        return self.sign * self.base.eval_many(self.pivot - ts)

    def breakpoints(self, lo, hi):
        pts = self.base.breakpoints(self.pivot - hi, self.pivot - lo)
        return np.sort(self.pivot - pts)


def linear_transform(g, B):
    """Signal t -> B^{-1} g(t); the sup-bound becomes ||B^{-1}|| * bound(g).

    Rejects singular B (rank deficiency within the pivot tolerance of the
    linalg module).
    """
    B = np.asarray(B, dtype=float)
    if B.shape != (g.dim, g.dim):
        raise PreconditionError(
            f"signals.linear_transform: matrix shape {B.shape} does not match signal dimension {g.dim}"
        )
    Binv = invert(B)
    return _TransformedSignal(g, Binv)


def transform_with_inverse(g, Binv):
    """Internal variant of linear_transform when B^{-1} is already available."""
    return _TransformedSignal(g, Binv)


def add_periodic(g, p, period=None, check_points=1000, tol=1e-12):
    """Sum g + p where p is periodic with the declared period.

    Periodicity is verified on a sample grid: ||p(t+T) - p(t)|| <= tol at
    `check_points` points spread over one period.
    """
    if g.dim != p.dim:
        raise PreconditionError(f"signals.add_periodic: dimension mismatch {g.dim} vs {p.dim}")
    T = period if period is not None else p.period
    if T is None:
        raise PreconditionError("signals.add_periodic: p must declare a period")
    T = float(T)
    if T == 0.0:
        T = 1.0  # constant signals are periodic with any period
    lo, hi = p.domain
    start = max(lo, 0.0) if np.isfinite(lo) else 0.0
    if hi - start < 2 * T and np.isfinite(hi):
        raise PreconditionError("signals.add_periodic: p domain too short to verify its period")
    ts = start + np.linspace(0.0, T, check_points, endpoint=False)
    gap = np.linalg.norm(p.eval_many(ts + T) - p.eval_many(ts), axis=1).max()
    if gap > tol:
        raise PreconditionError(
            f"signals.add_periodic: declared period {T} fails check, max gap {gap:.3e} > {tol:.0e}"
        )
    return SumSignal(g, p, period=T)


def sum_signals(a, b):
    """Plain pointwise sum (no periodicity contract); bound adds."""
    return SumSignal(a, b)


class PiecewiseGridSignal:
    """Vector signal sampled on several disjoint uniform segments.

    Queries must land on stored grid points (within snap tolerance); this is
    how computed bounded solutions on a base window plus shifted windows are
    fed to the detector without materializing the full span.
    """

    def __init__(self, segments, step, bound=None, recurrence_periods=()):
        # segments: list of (t_start, values array (m, dim))
        self.step = float(step)
        self.segments = sorted(((float(t0), np.asarray(v)) for t0, v in segments),
                               key=lambda s: s[0])
        self.dim = self.segments[0][1].shape[1]
        self.bound = bound
        self.period = None
        self.recurrence_periods = tuple(recurrence_periods)
        lo = self.segments[0][0]
        hi = self.segments[-1][0] + (self.segments[-1][1].shape[0] - 1) * self.step
        self.domain = (lo, hi)

    def covers(self, lo, hi):
        for t0, vals in self.segments:
            t1 = t0 + (vals.shape[0] - 1) * self.step
            if t0 - _EDGE_SNAP <= lo and hi <= t1 + _EDGE_SNAP:
                return True
        return False

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        out = np.empty((ts.shape[0], self.dim))
        done = np.zeros(ts.shape[0], dtype=bool)
        for t0, vals in self.segments:
            t1 = t0 + (vals.shape[0] - 1) * self.step
            sel = (~done) & (ts >= t0 - _EDGE_SNAP) & (ts <= t1 + _EDGE_SNAP)
            if not sel.any():
                continue
            idx = np.round((ts[sel] - t0) / self.step).astype(np.int64)
            off = np.abs(t0 + idx * self.step - ts[sel])
            if off.max() > 1e-6:
                raise DomainError(
                    "signals.PiecewiseGridSignal: query not aligned with stored grid "
                    f"(offset {off.max():.3e})"
                )
            out[sel] = vals[np.clip(idx, 0, vals.shape[0] - 1)]
            done[sel] = True
        if not done.all():
            t_bad = float(ts[~done][0])
            raise DomainError(
                f"signals.PiecewiseGridSignal: time {t_bad:.6g} falls outside every stored segment"
            )
        return out

    def __call__(self, t):
        return self.eval_many(np.atleast_1d(float(t)))[0]

    def breakpoints(self, lo, hi):
        return np.zeros(0)


def signal_from_csv(path):
    """Read a sampled vector signal from CSV columns (t, v1, ..., vn)."""
    header, cols = csvio.read_columns(path)
    if len(cols) < 2:
        raise PreconditionError(f"signals.signal_from_csv: {path} needs a time column plus data")
    comps = [SampledScalar(cols[0], c) for c in cols[1:]]
    return VectorSignal(comps)
