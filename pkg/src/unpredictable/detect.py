"""Numerical evidence for unpredictability of a signal or computed solution.

A signal is certified (never proved) unpredictable from three measurements:

* return shifts t_n of the driving orbit, found by scanning integer shifts m
  for windows where the orbit nearly repeats (optionally phase-locked to the
  periods of any sinusoidal content, which is how a shift sequence valid for
  a chaotic-plus-periodic composite is selected);
* compact-window convergence: d_n = sup over a fixed window of
  ||theta(t + t_n) - theta(t)||, which must dip below a pass tolerance;
* a separation scan locating times u_n around which the shifted and
  unshifted signal stay at least epsilon_0 apart on [u_n - delta, u_n + delta].

Divergences and separations are measured relative to the signal's sampled
sup-norm (config.normalize, on by default) so that the default thresholds
mean the same thing for a signal of magnitude 0.5 and one of magnitude 100;
the report records the scale so absolute values are recoverable.  A finite
shift list is numerical evidence, not a proof, and every report says so.
"""

import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.ndimage import minimum_filter1d

from . import csvio
from .errors import DomainError, PreconditionError
from .signals import VectorSignal, sample_grid

_SCAN_CHUNK = 1 << 16


@dataclass(frozen=True)
class DetectConfig:
    """Tunable detection parameters (all thresholds configurable).

    window_len/return_tol/lookback govern the orbit return scan; the compact
    convergence window is [burn_in, burn_in + window_len - lookback].  The
    separation scan runs over analysis_span time units split into per-shift
    sub-windows so the reported u_n increase with n.
    """

    burn_in: float = 100.0
    window_len: int = 8
    return_tol: float = 1.2e-2
    lookback: int = 6
    shift_count: int = 5
    shift_span: int = None          # max shift to scan; None = whatever fits
    analysis_span: float = 1e4
    sample_step: float = 1e-2
    pass_tol: float = 1e-2
    epsilon_min: float = 1e-3
    delta_grid: tuple = (0.05, 0.1, 0.25, 0.5)
    phase_lock_tol: float = 5e-2    # radians; applied per declared period
    lipschitz_budget: float = 100.0
    normalize: bool = True

    def to_dict(self):
        return asdict(self)


@dataclass
class ShiftScan:
    """Result of the orbit return scan; empty shifts carry a near-miss diagnostic."""

    shifts: list
    misses: list
    best_shift: int
    best_miss: float
    candidates: int


def find_return_shifts(orbit, window_len, return_tol, count, start=0, max_shift=None,
                       phase_locks=()):
    """Integer shifts m with max_{0<=i<window_len} |psi_{start+i+m} - psi_{start+i}| <= return_tol.

    Returns at most `count` shifts in increasing order.  `phase_locks` is a
    sequence of (period, tol_radians) pairs restricting candidates to shifts
    that are near-multiples of each period (the subsequence selection needed
    when the signal carries periodic content on top of the orbit).
    """
    window_len = int(window_len)
    count = int(count)
    start = int(start)
    if window_len <= 0 or count <= 0 or start < 0:
        raise PreconditionError(
            "detect.find_return_shifts: window_len, count must be positive and start >= 0"
        )
    values = orbit.values
    n = values.shape[0]
    limit = n - window_len - start
    if max_shift is not None:
        limit = min(limit, int(max_shift))
    if limit < 1:
        raise PreconditionError(
            f"detect.find_return_shifts: orbit length {n} too short for window_len "
            f"{window_len} at start {start}"
        )

    candidates = np.arange(1, limit + 1)
    for period, tol_rad in phase_locks:
        frac = np.mod(candidates / period, 1.0)
        dist = 2.0 * np.pi * np.minimum(frac, 1.0 - frac)
        candidates = candidates[dist <= tol_rad]

    base = values[start:start + window_len]
    shifts, misses = [], []
    best_shift, best_miss = 0, np.inf
    for k0 in range(0, candidates.size, _SCAN_CHUNK):
        block = candidates[k0:k0 + _SCAN_CHUNK]
        if block.size == 0:
            continue
        # gather windows for this block of shifts
        idx = (start + block)[:, None] + np.arange(window_len)[None, :]
        miss = np.abs(values[idx] - base).max(axis=1)
        jbest = int(miss.argmin())
        if miss[jbest] < best_miss:
            best_miss = float(miss[jbest])
            best_shift = int(block[jbest])
        hit = np.where(miss <= return_tol)[0]
        for j in hit:
            shifts.append(int(block[j]))
            misses.append(float(miss[j]))
            if len(shifts) >= count:
                break
        if len(shifts) >= count:
            break
    return ShiftScan(shifts=shifts, misses=misses, best_shift=best_shift,
                     best_miss=best_miss, candidates=int(candidates.size))


def _as_vector(signal):
    return signal if hasattr(signal, "dim") else VectorSignal([signal])


def _covers(signal, lo, hi):
    if hasattr(signal, "covers"):
        return signal.covers(lo, hi)
    dom = getattr(signal, "domain", (-np.inf, np.inf))
    return dom[0] <= lo and hi <= dom[1]


def _check_shift_coverage(signal, window, shifts, op):
    """The signal must cover the window and each shifted copy of it."""
    a, b = window
    ranges = [(a, b)] + [(a + tn, b + tn) for tn in shifts]
    for lo, hi in ranges:
        if not _covers(signal, lo, hi):
            raise DomainError(f"{op}: signal must be defined on [{lo:.6g}, {hi:.6g}]")


def poisson_check(signal, shifts, window, sample_step=1e-2, scale=1.0):
    """Divergences d_n = max over the window of ||theta(t + t_n) - theta(t)|| / scale."""
    signal = _as_vector(signal)
    a, b = float(window[0]), float(window[1])
    ts = sample_grid(a, b, sample_step)
    if ts.size == 0:
        raise PreconditionError(f"detect.poisson_check: empty window [{a}, {b}]")
    _check_shift_coverage(signal, (a, b), shifts, "detect.poisson_check")
    base = signal.eval_many(ts)
    out = np.empty(len(shifts))
    for i, tn in enumerate(shifts):
        diff = signal.eval_many(ts + tn) - base
        out[i] = np.linalg.norm(diff, axis=1).max() / scale
    return out


@dataclass
class SeparationResult:
    u_values: list
    eps_at_u: list
    epsilon0: float
    delta: float


def separation_scan(signal, shifts, window, delta_grid=(0.05, 0.1, 0.25, 0.5),
                    sample_step=1e-2, scale=1.0):
    """Largest common separation level over per-shift sub-windows.

    For each delta in the grid and each shift t_n, finds the center u (inside
    the n-th sub-window of `window`) maximizing the minimum of
    ||theta(t + t_n) - theta(t)||/scale over [u - delta, u + delta]; keeps the
    delta whose worst shift is best.  epsilon0 is that min-over-shifts value.
    """
    if not len(shifts):
        raise PreconditionError("detect.separation_scan: empty shift list")
    signal = _as_vector(signal)
    a, b = float(window[0]), float(window[1])
    ts = sample_grid(a, b, sample_step)
    if ts.size < 8:
        raise PreconditionError(f"detect.separation_scan: window [{a}, {b}] too short")
    _check_shift_coverage(signal, (a, b), shifts, "detect.separation_scan")
    base = signal.eval_many(ts)
    n_shifts = len(shifts)
    m = ts.shape[0]
    bounds = np.linspace(0, m - 1, n_shifts + 1).astype(int)

    diffs = np.empty((n_shifts, m))
    for i, tn in enumerate(shifts):
        diffs[i] = np.linalg.norm(signal.eval_many(ts + tn) - base, axis=1) / scale

    best = None
    for delta in delta_grid:
        # floor keeps the sampled window inside [u - delta, u + delta]; edge
        # coverage is within one Lipschitz * step of the true window minimum
        w = int(delta / sample_step + 1e-9)
        size = 2 * w + 1
        if size >= m:
            continue
        eps_d = np.inf
        us, evals = [], []
        ok = True
        for i in range(n_shifts):
            wmin = minimum_filter1d(diffs[i], size=size, mode="constant", cval=np.inf)
            lo = max(bounds[i], w)
            hi = min(bounds[i + 1], m - 1 - w)
            if lo > hi:
                ok = False
                break
            seg = wmin[lo:hi + 1]
            j = int(seg.argmax())
            us.append(float(ts[lo + j]))
            evals.append(float(seg[j]))
            eps_d = min(eps_d, float(seg[j]))
        if not ok:
            continue
        if best is None or eps_d > best.epsilon0:
            best = SeparationResult(u_values=us, eps_at_u=evals,
                                    epsilon0=eps_d, delta=float(delta))
    if best is None:
        raise PreconditionError(
            "detect.separation_scan: no delta in the grid fits inside the window"
        )
    return best


@dataclass
class DetectionReport:
    """Empirical evidence (never proof) that a signal is unpredictable."""

    shifts: list
    divergences: list
    u_values: list
    separations: list
    epsilon0: float
    delta: float
    scale: float
    sup_observed: float
    bound_declared: float
    bounded_ok: bool
    lipschitz_observed: float
    lipschitz_ok: bool
    poisson_pass: bool
    separation_pass: bool
    config: dict
    diagnostics: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return {"poisson_pass": self.poisson_pass, "separation_pass": self.separation_pass}

    @property
    def epsilon0_raw(self):
        return self.epsilon0 * self.scale

    def to_dict(self):
        return {
            "shifts": self.shifts,
            "divergences": self.divergences,
            "u_values": self.u_values,
            "separations": self.separations,
            "epsilon0": self.epsilon0,
            "epsilon0_raw": self.epsilon0_raw,
            "delta": self.delta,
            "scale": self.scale,
            "sup_observed": self.sup_observed,
            "bound_declared": self.bound_declared,
            "bounded_ok": self.bounded_ok,
            "lipschitz_observed": self.lipschitz_observed,
            "lipschitz_ok": self.lipschitz_ok,
            "verdict": self.verdict,
            "config": self.config,
            "diagnostics": self.diagnostics,
            "note": ("finite-shift numerical evidence under the running-minimum "
                     "criterion; not a proof"),
        }

    def to_json(self, path):
        csvio.write_json(path, csvio.jsonable(self.to_dict()))


def verify_unpredictable(signal, orbit, config=None, shifts=None):
    """Pipeline: find_return_shifts -> poisson_check -> separation_scan.

    The convergence verdict uses the running minimum of d_n (must sink below
    pass_tol); the separation verdict requires epsilon0 >= epsilon_min.  Also
    measures boundedness against the declared sup-bound and a uniform-
    continuity surrogate (max sampled difference quotient vs a budget).
    Passing a precomputed ShiftScan as `shifts` skips the orbit scan (used
    when the signal was materialized only on the windows those shifts need).
    """
    cfg = config or DetectConfig()
    signal = _as_vector(signal)

    dom_hi = getattr(signal, "domain", (0.0, np.inf))[1]
    a = cfg.burn_in
    compact = (a, a + max(1, cfg.window_len - cfg.lookback))
    sep_window = (a, a + cfg.analysis_span)

    start = int(math.floor(cfg.burn_in)) - cfg.lookback
    if start < 0:
        raise PreconditionError("detect.verify_unpredictable: burn_in smaller than lookback")

    phase_locks = tuple((T, cfg.phase_lock_tol)
                        for T in getattr(signal, "recurrence_periods", ()))

    if shifts is None:
        limit = None
        if np.isfinite(dom_hi):
            limit = int(math.floor(dom_hi - sep_window[1]))
        if cfg.shift_span is not None:
            limit = int(cfg.shift_span) if limit is None else min(limit, int(cfg.shift_span))
        if limit is not None and limit < 1:
            raise DomainError(
                "detect.verify_unpredictable: signal domain too short for the analysis window"
            )
        scan = find_return_shifts(orbit, cfg.window_len, cfg.return_tol, cfg.shift_count,
                                  start=start, max_shift=limit, phase_locks=phase_locks)
    else:
        scan = shifts

    # sampled sup over the analysis window: normalization scale + bound check
    ts = sample_grid(*sep_window, cfg.sample_step)
    vals = signal.eval_many(ts)
    norms = np.linalg.norm(vals, axis=1)
    sup_obs = float(norms.max())
    declared = getattr(signal, "bound", None)
    bounded_ok = True if declared is None else bool(sup_obs <= declared * (1.0 + 1e-9))
    if ts.size > 1:
        quot = float((np.linalg.norm(np.diff(vals, axis=0), axis=1) / cfg.sample_step).max())
    else:
        quot = 0.0
    lip_ok = bool(quot <= cfg.lipschitz_budget)
    scale = max(sup_obs, 1e-300) if cfg.normalize else 1.0

    diagnostics = {
        "best_shift": scan.best_shift,
        "best_miss": scan.best_miss,
        "candidates_scanned": scan.candidates,
        "orbit_misses": scan.misses,
        "compact_window": list(compact),
        "separation_window": list(sep_window),
        "phase_locks": [[T, tol] for T, tol in phase_locks],
    }

    if not scan.shifts:
        return DetectionReport(
            shifts=[], divergences=[], u_values=[], separations=[],
            epsilon0=0.0, delta=0.0, scale=scale, sup_observed=sup_obs,
            bound_declared=declared, bounded_ok=bounded_ok,
            lipschitz_observed=quot, lipschitz_ok=lip_ok,
            poisson_pass=False, separation_pass=False,
            config=cfg.to_dict(), diagnostics=diagnostics,
        )

    divergences = poisson_check(signal, scan.shifts, compact, cfg.sample_step, scale)
    running_min = np.minimum.accumulate(divergences)
    poisson_pass = bool(running_min[-1] <= cfg.pass_tol)

    sep = separation_scan(signal, scan.shifts, sep_window, cfg.delta_grid,
                          cfg.sample_step, scale)
    separation_pass = bool(sep.epsilon0 >= cfg.epsilon_min)

    return DetectionReport(
        shifts=scan.shifts, divergences=divergences.tolist(),
        u_values=sep.u_values, separations=sep.eps_at_u,
        epsilon0=sep.epsilon0, delta=sep.delta, scale=scale,
        sup_observed=sup_obs, bound_declared=declared, bounded_ok=bounded_ok,
        lipschitz_observed=quot, lipschitz_ok=lip_ok,
        poisson_pass=poisson_pass, separation_pass=separation_pass,
        config=cfg.to_dict(), diagnostics=diagnostics,
    )
