"""
Numerical evidence of unpredictability
======================================

A signal is unpredictable when some shift sequence t_n makes it return to
itself uniformly on compact windows (Poisson stability) while staying
separated by eps0 > 0 around times u_n.  The detector searches integer
shifts where the driving orbit nearly repeats, measures compact-window
divergences d_n, and scans for the separation level.

The verdict is finite-shift numerical evidence, never a proof, and the
report says so.
"""

import json

import numpy as np

from unpredictable import (DetectConfig, find_return_shifts, logistic_iterate,
                           theta_build, verify_unpredictable)

# --- build a long signal -------------------------------------------------------
orbit = logistic_iterate(seed=0.5, mu=3.91, count=21000)
theta = theta_build(orbit, decay=2.0)

# --- where does the orbit nearly repeat? ----------------------------------------
scan = find_return_shifts(orbit, window_len=8, return_tol=1.2e-2, count=5,
                          start=94, max_shift=10 ** 4)
print("return shifts:", scan.shifts)
print("window misses:", [f"{m:.2e}" for m in scan.misses])

# --- full pipeline ---------------------------------------------------------------
cfg = DetectConfig(burn_in=100.0, analysis_span=5000.0, shift_span=10 ** 4)
report = verify_unpredictable(theta, orbit, cfg)
print("\ndivergences d_n:", [f"{d:.2e}" for d in report.divergences])
print("separation eps0 =", report.epsilon0, "at delta =", report.delta)
print("u_n:", report.u_values)
print("verdict:", report.verdict)

# --- a periodic signal converges but never separates ------------------------------
class Periodic:
    dim, bound, period = 1, 1.0, 1.0
    domain = (-np.inf, np.inf)
    recurrence_periods = ()

    def covers(self, lo, hi):
        return True

    def eval_many(self, ts):
        return np.sin(2 * np.pi * np.asarray(ts))[:, None]

    def breakpoints(self, lo, hi):
        return np.zeros(0)


from unpredictable.signals import LogisticOrbit
flat = LogisticOrbit(mu=3.91, seed=0.5, values=np.full(2000, 0.5))
cfg2 = DetectConfig(analysis_span=500.0, shift_span=1000, window_len=4,
                    lookback=2, return_tol=1e-9)
rep2 = verify_unpredictable(Periodic(), flat, cfg2)
print("\nperiodic signal:", rep2.verdict, "(poisson holds, separation fails)")

print("\nreport as JSON:")
print(json.dumps({k: rep2.to_dict()[k] for k in ("epsilon0", "delta", "verdict", "note")},
                 indent=2))
