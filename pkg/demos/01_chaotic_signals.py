"""
Chaotic driving signals from the logistic map
=============================================

The signal chain: iterate the logistic map at mu = 3.91, hold each value
over a unit interval (the step signal Omega), then smooth through the
low-pass filter theta' = -2 theta + Omega.  The result is continuous,
bounded by 1/2, and inherits the recurrence structure of the orbit.
"""

import os

import numpy as np

from unpredictable import StepSignal, logistic_iterate, theta_build
from unpredictable.svgfig import line_plot

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# --- the discrete orbit ----------------------------------------------------
orbit = logistic_iterate(seed=0.5, mu=3.91, count=200)
print("first values:", np.round(orbit.values[:5], 6))
print("orbit stays inside [0,1]:", orbit.values.min() >= 0, orbit.values.max() <= 1)

# The map uses only *, -, + so reruns are bit-identical:
again = logistic_iterate(seed=0.5, mu=3.91, count=200)
print("bit-identical rerun:", np.array_equal(orbit.values, again.values))

# --- step signal and smoothed signal ---------------------------------------
omega = StepSignal(orbit)
theta = theta_build(orbit, decay=2.0)   # theta0 defaults to psi_0 / decay

ts = np.arange(0.0, 60.0, 0.005)
print("sup theta over [0,60]:", theta.eval_many(ts).max(), "(bound 0.5)")

# integer-node recursion holds exactly:
a = np.exp(-2.0)
gap = np.abs(theta.nodes[1:] - (a * theta.nodes[:-1]
                                + orbit.values * (1 - a) / 2.0)).max()
print("node recursion residual:", gap)

line_plot(os.path.join(OUT, "01_theta.svg"), ts,
          [omega.eval_many(ts), theta.eval_many(ts)],
          labels=["Omega", "theta"], title="step signal and its smoothing")
print("wrote", os.path.join(OUT, "01_theta.svg"))

# --- CSV export -------------------------------------------------------------
orbit.to_csv(os.path.join(OUT, "01_orbit.csv"))
theta.to_csv(os.path.join(OUT, "01_theta.csv"), t_max=60.0, step=0.01)
print("wrote orbit and theta CSVs")
