"""Independent numerical oracles shared by the test modules.

These deliberately avoid the library's own evaluation paths: the smoothed
signal is re-derived by composite Simpson quadrature of its defining
integral, and the matrix exponential by a plain truncated series without
scaling.
"""

import numpy as np


def theta_quadrature_oracle(theta, t, panels_per_unit=128):
    """Brute-force quadrature of the defining integral, truncated at 0 with
    theta0 carrying the tail: theta(t) = e^{-g t} theta0 + int_0^t e^{-g(t-s)} Omega(s) ds."""
    gamma = theta.gamma
    total = np.exp(-gamma * t) * theta.theta0
    whole = np.arange(0.0, np.floor(t))
    edges = np.concatenate([whole, [np.floor(t)]]) if t > np.floor(t) else whole
    for a in edges:
        b = min(a + 1.0, t)
        m = panels_per_unit
        s = np.linspace(a, b, 2 * m + 1)
        f = np.exp(-gamma * (t - s)) * theta.orbit.values[int(a)]
        w = np.ones(2 * m + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        total += (b - a) / (6.0 * m) * (w * f).sum()
    return total


def series_expm(M, terms=30):
    """Plain truncated exponential series, no scaling and squaring."""
    n = M.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, terms + 1):
        term = term @ M / k
        out = out + term
    return out
