"""Small dense linear algebra for hyperbolic systems.

Provides the matrix exponential, pivoted solves, and the spectral splitting
of a hyperbolic matrix into stable/unstable blocks together with the
exponential-dichotomy constants (K, alpha) that control truncation errors
downstream.  Everything here targets desk scale (n <= 64).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NotHyperbolicError, PreconditionError, SingularMatrixError

MAX_DIM = 64

_SIGN_TOL = 1e-12
_SIGN_MAX_ITER = 100
_ALPHA_MARGIN = 0.01
_K_INFLATION = 1.1


def ensure_matrix(M, op="linalg"):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError(f"{op}: expected a square matrix, got shape {M.shape}")
    if M.size and not np.all(np.isfinite(M)):
        raise PreconditionError(f"{op}: matrix entries must be finite")
    if M.shape[0] > MAX_DIM:
        raise PreconditionError(f"{op}: dimension {M.shape[0]} exceeds supported maximum {MAX_DIM}")
    return M


def matrix_norm(M):
    """Spectral norm (norm induced by the Euclidean vector norm)."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def parse_matrix(text):
    """Parse the inline syntax "[[a,b],[c,d]]" into an ndarray."""
    s = text.strip()
    if not (s.startswith("[[") and s.endswith("]]")):
        raise PreconditionError(f"linalg.parse_matrix: expected [[...],[...]] syntax, got {text!r}")
    body = s[2:-2]
    rows = body.split("],[")
    try:
        M = np.array([[float(x) for x in row.split(",")] for row in rows])
    except ValueError as exc:
        raise PreconditionError(f"linalg.parse_matrix: bad entry in {text!r}: {exc}") from None
    if M.ndim != 2:
        raise PreconditionError(f"linalg.parse_matrix: ragged rows in {text!r}")
    return M


def format_matrix(M):
    return "[" + ",".join("[" + ",".join(repr(float(x)) for x in row) + "]" for row in np.asarray(M)) + "]"


def matrix_to_csv(path, M):
    """Plain-text CSV, one row per line, no header."""
    M = np.asarray(M, dtype=float)
    with open(path, "w", newline="") as fh:
        for row in M:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def matrix_from_csv(path):
    with open(path) as fh:
        rows = [[float(x) for x in ln.split(",")] for ln in fh if ln.strip()]
    if not rows:
        raise PreconditionError(f"linalg.matrix_from_csv: {path} is empty")
    return np.array(rows)


def _lu(M, op, tol_factor=1e-12):
    """LU-factorize with partial pivoting; reject pivots below tol_factor * ||M||."""
    M = ensure_matrix(M, op)
    n = M.shape[0]
    if n == 0:
        return None, None, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    tol = tol_factor * matrix_norm(M)
    diag = np.abs(np.diag(lu))
    bad = np.where(diag <= tol)[0]
    if bad.size:
        raise SingularMatrixError(
            f"{op}: matrix singular at pivot tolerance (pivot {bad[0]} = {diag[bad[0]]:.3e})",
            pivot_index=int(bad[0]),
        )
    return lu, piv, tol


def solve_linear(M, rhs):
    """Solve M x = rhs by partial-pivoted elimination."""
    lu, piv, _ = _lu(M, "linalg.solve_linear")
    rhs = np.asarray(rhs, dtype=float)
    if lu is None:
        return np.zeros_like(rhs)
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def invert(M):
    """Inverse of M, rejecting rank deficiency within pivot tolerance."""
    lu, piv, _ = _lu(M, "linalg.invert")
    if lu is None:
        return np.zeros((0, 0))
    return scipy.linalg.lu_solve((lu, piv), np.eye(lu.shape[0]), check_finite=False)


def _invert_loose(M, op):
    """Inverse with a machine-level pivot floor instead of the 1e-12 contract.

    The sign iteration legitimately inverts stiff hyperbolic iterates whose
    smallest eigenvalue is far below 1e-12 * ||S||; only an (almost) exactly
    singular iterate should abort it.
    """
    lu, piv, _ = _lu(M, op, tol_factor=1e-15)
    return scipy.linalg.lu_solve((lu, piv), np.eye(lu.shape[0]), check_finite=False)


def expm(M, t=1.0):
    """e^{M t} by scaling and squaring with a truncated-series core.

    The scaling power is chosen so the scaled norm is <= 0.5, which keeps the
    core series at machine precision and handles ||M t|| up to ~1e6.
    """
    M = ensure_matrix(M, "linalg.expm")
    n = M.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    X = M * float(t)
    nrm = matrix_norm(X)
    s = 0
    if nrm > 0.5:
        s = int(np.ceil(np.log2(nrm / 0.5)))
        X = X / (2.0 ** s)
    # Taylor series on the scaled matrix; terms fall below eps within ~20 steps.
    E = np.eye(n)
    term = np.eye(n)
    for k in range(1, 31):
        term = term @ X / k
        E = E + term
        if np.abs(term).max() <= 1e-17 * max(1.0, np.abs(E).max()):
            break
    with np.errstate(under="ignore"):
        for _ in range(s):
            E = E @ E
    return E


def eigenvalues(M):
    """Eigenvalues of a (possibly empty) square matrix."""
    M = ensure_matrix(M, "linalg.eigenvalues")
    if M.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    if M.shape[0] == 1:
        return np.array([M[0, 0]], dtype=complex)
    return np.linalg.eigvals(M)


@dataclass(frozen=True)
class SpectralSplit:
    """Hyperbolic splitting A = B diag(Aminus, Aplus) B^{-1}.

    Aminus (q x q) carries the eigenvalues with negative real part, Aplus the
    rest.  K and alpha are sampled exponential-dichotomy constants:
    ||e^{Aminus t}|| <= K e^{-alpha t} (t >= 0) and
    ||e^{Aplus t}||  <= K e^{+alpha t} (t <= 0).
    """

    A: np.ndarray
    B: np.ndarray
    Binv: np.ndarray
    Aminus: np.ndarray
    Aplus: np.ndarray
    q: int
    K: float
    alpha: float
    eigs: np.ndarray = field(repr=False)
    sign: np.ndarray = field(repr=False, default=None)

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def alpha_minus(self):
        """Decay-rate margin of the stable block alone (0 if empty)."""
        if self.q == 0:
            return 0.0
        re = np.abs(np.real(eigenvalues(self.Aminus)))
        return (1.0 - _ALPHA_MARGIN) * float(re.min())

    @property
    def alpha_plus(self):
        if self.q == self.dim:
            return 0.0
        re = np.abs(np.real(eigenvalues(self.Aplus)))
        return (1.0 - _ALPHA_MARGIN) * float(re.min())

    def to_dict(self):
        return {
            "q": self.q,
            "K": self.K,
            "alpha": self.alpha,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigs],
            "B": self.B.tolist(),
            "Binv": self.Binv.tolist(),
            "Aminus": self.Aminus.tolist(),
            "Aplus": self.Aplus.tolist(),
        }


def _orthonormal_range(P, rank):
    """Orthonormal basis of range(P) for a (numerical) projector of known rank."""
    if rank == 0:
        return np.zeros((P.shape[0], 0))
    Q, _, _ = scipy.linalg.qr(P, pivoting=True)
    return Q[:, :rank]


def spectral_split(A, gap_tol=1e-8):
    """Split a hyperbolic matrix via the Newton iteration for the matrix sign.

    Iterates S <- (S + S^{-1})/2 from S = A until ||S^2 - I|| <= 1e-12; the
    projector (I - S)/2 then spans the stable subspace.  Raises
    NotHyperbolicError when the iteration stalls or hits a singular iterate,
    both of which signal an eigenvalue too close to the imaginary axis.
    """
    A = ensure_matrix(A, "linalg.spectral_split")
    n = A.shape[0]
    if n == 0:
        raise PreconditionError("linalg.spectral_split: empty matrix")
    if gap_tol <= 0:
        raise PreconditionError("linalg.spectral_split: gap_tol must be positive")

    I = np.eye(n)
    S = A.copy()
    converged = False
    for _ in range(_SIGN_MAX_ITER):
        try:
            Sinv = _invert_loose(S, "linalg.spectral_split")
        except SingularMatrixError as exc:
            raise NotHyperbolicError(
                f"linalg.spectral_split: singular sign iterate ({exc}); "
                "matrix appears to have an eigenvalue on the imaginary axis"
            ) from exc
        S = 0.5 * (S + Sinv)
        if matrix_norm(S @ S - I) <= _SIGN_TOL:
            converged = True
            break
    if not converged:
        raise NotHyperbolicError(
            f"linalg.spectral_split: sign iteration did not converge in {_SIGN_MAX_ITER} steps; "
            f"no eigenvalue gap at tolerance {gap_tol}"
        )

    Pm = 0.5 * (I - S)
    tr = float(np.trace(Pm))
    q = int(round(tr))
    if abs(tr - q) > 1e-6 or q < 0 or q > n:
        raise NotHyperbolicError(
            f"linalg.spectral_split: stable projector has non-integer trace {tr:.6f}"
        )

    B = np.hstack([_orthonormal_range(Pm, q), _orthonormal_range(I - Pm, n - q)])
    Binv = invert(B)
    Ahat = Binv @ A @ B
    Aminus = Ahat[:q, :q].copy()
    Aplus = Ahat[q:, q:].copy()

    off = max(matrix_norm(Ahat[:q, q:]), matrix_norm(Ahat[q:, :q]))
    if off > 1e-8 * matrix_norm(A):
        raise NotHyperbolicError(
            f"linalg.spectral_split: off-diagonal block residual {off:.3e} "
            f"exceeds 1e-8 * ||A||; splitting unreliable"
        )

    eig_m = eigenvalues(Aminus)
    eig_p = eigenvalues(Aplus)
    if eig_m.size and np.real(eig_m).max() >= 0:
        raise NotHyperbolicError("linalg.spectral_split: stable block has a non-negative eigenvalue")
    if eig_p.size and np.real(eig_p).min() <= 0:
        raise NotHyperbolicError("linalg.spectral_split: unstable block has a non-positive eigenvalue")
    eigs = np.concatenate([eig_m, eig_p])
    if np.abs(np.real(eigs)).min() < gap_tol:
        raise NotHyperbolicError(
            f"linalg.spectral_split: eigenvalue real-part magnitude "
            f"{np.abs(np.real(eigs)).min():.3e} below gap tolerance {gap_tol}"
        )

    split = SpectralSplit(A=A, B=B, Binv=Binv, Aminus=Aminus, Aplus=Aplus,
                          q=q, K=1.0, alpha=0.0, eigs=eigs, sign=S)
    K, alpha = dichotomy_constants(split)
    return SpectralSplit(A=A, B=B, Binv=Binv, Aminus=Aminus, Aplus=Aplus,
                         q=q, K=K, alpha=alpha, eigs=eigs, sign=S)


def dichotomy_constants(split, sample_horizon=20.0):
    """Sampled (K, alpha) with alpha = 0.99 min |Re lambda| and K the smallest
    constant covering both exponential bounds on a geometric grid, inflated by
    1.1 as a safety factor (K >= 1 enforced before inflation)."""
    if sample_horizon <= 0:
        raise PreconditionError("linalg.dichotomy_constants: sample_horizon must be positive")
    alpha = (1.0 - _ALPHA_MARGIN) * float(np.abs(np.real(split.eigs)).min())
    ts = np.concatenate([[0.0], np.geomspace(1e-3, sample_horizon, 160)])
    log_k = 0.0
    with np.errstate(divide="ignore", under="ignore"):
        for t in ts:
            if split.q > 0:
                nm = matrix_norm(expm(split.Aminus, t))
                if nm > 0:
                    log_k = max(log_k, np.log(nm) + alpha * t)
            if split.q < split.dim:
                np_ = matrix_norm(expm(split.Aplus, -t))
                if np_ > 0:
                    log_k = max(log_k, np.log(np_) + alpha * t)
    K = _K_INFLATION * max(1.0, float(np.exp(log_k)))
    return K, alpha
