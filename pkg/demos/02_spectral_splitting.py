"""
Hyperbolic spectral splitting and dichotomy constants
=====================================================

A matrix with no eigenvalues on the imaginary axis splits into a stable and
an unstable block through the matrix sign function (Newton iteration
S <- (S + S^{-1})/2).  The sampled constants (K, alpha) certify
||e^{A- t}|| <= K e^{-alpha t} and drive truncation horizons downstream.
"""

import numpy as np

from unpredictable import NotHyperbolicError, dichotomy_constants, expm, spectral_split

# --- a comfortable example ---------------------------------------------------
A = np.array([[-2.0, 2.0], [1.0, -3.0]])
split = spectral_split(A)
print("A eigenvalues:", np.sort(np.real(split.eigs)))   # -4 and -1
print("stable dimension q:", split.q, "(Hurwitz: the unstable block is empty)")
print("K =", split.K, " alpha =", split.alpha)

# the exponential bound in action
for t in (0.0, 1.0, 5.0, 10.0):
    nm = np.linalg.norm(expm(split.Aminus, t), 2)
    print(f"  ||e^(A t)|| = {nm:.3e}  vs  K e^(-alpha t) = "
          f"{split.K * np.exp(-split.alpha * t):.3e}")

# --- extreme eigenvalue gap ---------------------------------------------------
stiff = np.array([[-52098.0, 0.0], [9.5, 3.25e-8]])
split2 = spectral_split(stiff)
print("\nstiff system: q =", split2.q)
print("eigenvalues:", [f"{z.real:.6g}" for z in split2.eigs])
print("dichotomy:", dichotomy_constants(split2))

# --- a matrix that cannot split ----------------------------------------------
try:
    spectral_split(np.array([[0.0, 1.0], [-1.0, 0.0]]))
except NotHyperbolicError as exc:
    print("\nrotation matrix rejected as expected:\n ", exc)

# --- nonnormal transient growth ------------------------------------------------
shear = np.array([[-1.0, 100.0], [0.0, -1.0]])
K, alpha = dichotomy_constants(spectral_split(shear))
print(f"\nshear example: K = {K:.1f} (transient growth before decay), alpha = {alpha}")
