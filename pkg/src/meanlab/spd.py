"""Dense Hermitian / positive-definite matrix primitives.

Matrices are plain ``complex128`` numpy arrays.  Every matrix function goes
through a full Hermitian eigendecomposition; every product that is Hermitian
in exact arithmetic is re-hermitized before it is used again.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

HERM_TOL = 1e-12
EIG_TOL = 1e-10
COND_MAX = 1e14
ORDER_TOL = 1e-9


class NotPositiveDefiniteError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


class EigenPair(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class OrderResult:
    """Verdict of a Loewner comparison ``A <= B``.

    ``margin`` is the smallest eigenvalue of ``B - A`` (absolute), ``scale``
    the larger of the two spectral norms.
    """

    holds: bool
    margin: float
    scale: float
    tolerance_used: float

    @property
    def relative_margin(self) -> float:
        return self.margin / self.scale if self.scale > 0 else self.margin

    def __bool__(self) -> bool:
        return self.holds


def _square(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def hermitize(M) -> np.ndarray:
    """Return ``(M + M*) / 2``."""
    M = _square(M)
    return 0.5 * (M + M.conj().T)


def hermitian_residual(M) -> float:
    M = _square(M)
    return float(np.max(np.abs(M - M.conj().T), initial=0.0))


def as_pd(M, *, name: str = "matrix") -> np.ndarray:
    """Validate ``M`` as a positive-definite matrix and return a hermitized copy.

    Raises NotPositiveDefiniteError when the Hermitian residual exceeds
    ``1e-12 * (1 + max|M|)`` or the smallest eigenvalue is not positive.
    """
    M = _square(M)
    if not np.all(np.isfinite(M)):
        raise NotPositiveDefiniteError(f"{name} has non-finite entries")
    big = float(np.max(np.abs(M), initial=0.0))
    res = hermitian_residual(M)
    if res > HERM_TOL * (1.0 + big):
        raise NotPositiveDefiniteError(f"{name} is not Hermitian (residual {res:.3e})")
    H = hermitize(M)
    lmin = float(np.linalg.eigvalsh(H)[0])
    if not lmin > 0.0:
        raise NotPositiveDefiniteError(f"{name} is not positive definite (min eigenvalue {lmin:.3e})")
    return H


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def eig(A) -> EigenPair:
    """Hermitian eigendecomposition with ascending eigenvalues."""
    A = hermitize(A)
    try:
        w, U = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"Hermitian eigendecomposition failed for {A.shape} input: {exc}") from exc
    return EigenPair(w, U)


def _from_eig(w, U) -> np.ndarray:
    return hermitize((U * w) @ U.conj().T)


def mpow(A, r: float) -> np.ndarray:
    """Real power ``A**r`` of a positive-definite matrix via functional calculus."""
    if r == 1:
        return hermitize(A)
    w, U = eig(A)
    if r == 0:
        return identity(len(w))
    if w[0] <= 0:
        raise NotPositiveDefiniteError(f"mpow needs a positive-definite input (min eigenvalue {w[0]:.3e})")
    return _from_eig(w**r, U)


def mlog(A) -> np.ndarray:
    w, U = eig(A)
    if w[0] <= 0:
        raise NotPositiveDefiniteError("mlog needs a positive-definite input")
    return _from_eig(np.log(w), U)


def mexp(H) -> np.ndarray:
    """Exponential of a Hermitian matrix."""
    w, U = eig(H)
    return _from_eig(np.exp(w), U)


def inv(A) -> np.ndarray:
    """Inverse of a positive-definite matrix, guarded by the condition limit."""
    w, U = eig(A)
    if w[0] <= 0 or w[-1] / w[0] > COND_MAX:
        raise SingularMatrixError(f"matrix is numerically singular (eigenvalues {w[0]:.3e}..{w[-1]:.3e})")
    return _from_eig(1.0 / w, U)


def norm(A) -> float:
    """Spectral norm."""
    A = np.asarray(A, dtype=np.complex128)
    if A.size == 0:
        return 0.0
    if A.shape[0] == A.shape[1] and hermitian_residual(A) == 0.0:
        return float(np.max(np.abs(np.linalg.eigvalsh(A))))
    return float(np.linalg.norm(A, 2))


def check_invertible(C) -> np.ndarray:
    C = _square(C)
    cond = np.linalg.cond(C)
    if not np.isfinite(cond) or cond > COND_MAX:
        raise SingularMatrixError(f"matrix is singular or too ill-conditioned (cond {cond:.3e})")
    return C


def congruence(C, A) -> np.ndarray:
    """Return ``C* A C`` (hermitized)."""
    C = check_invertible(C)
    A = _square(A)
    if C.shape != A.shape:
        raise ValueError(f"dimension mismatch: {C.shape} vs {A.shape}")
    return hermitize(C.conj().T @ A @ C)


def loewner_leq(A, B, tol: float = ORDER_TOL) -> OrderResult:
    """Test ``A <= B`` in the Loewner order with a tolerance relative to scale."""
    A = _square(A)
    B = _square(B)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    margin = float(np.linalg.eigvalsh(hermitize(B - A))[0])
    scale = max(norm(hermitize(A)), norm(hermitize(B)))
    return OrderResult(margin >= -tol * scale, margin, scale, tol)


def thompson(A, B) -> float:
    """Thompson metric ``||log(A^{-1/2} B A^{-1/2})||``."""
    A = _square(A)
    B = _square(B)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    w, U = eig(A)
    isq = _from_eig(w**-0.5, U)
    lam = np.linalg.eigvalsh(hermitize(isq @ B @ isq))
    return float(np.max(np.abs(np.log(lam))))


def random_unitary(n: int, rng: np.random.Generator, *, complex_: bool = True) -> np.ndarray:
    G = rng.standard_normal((n, n))
    if complex_:
        G = G + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R)
    # phase fix makes the distribution Haar
    return (Q * (d / np.abs(d))).astype(np.complex128)


def random_pd(n: int, cond_max: float = 100.0, seed=None, *, complex_: bool = True) -> np.ndarray:
    """Random positive-definite matrix with condition number at most ``cond_max``.

    A Haar unitary conjugates a diagonal whose log-eigenvalues are uniform on
    ``[-log(cond_max)/2, log(cond_max)/2]``.  ``seed`` may be an int or a
    ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if cond_max < 1:
        raise ValueError("cond_max must be >= 1")
    rng = np.random.default_rng(seed)
    half = 0.5 * np.log(cond_max)
    lam = np.exp(rng.uniform(-half, half, size=n))
    U = random_unitary(n, rng, complex_=complex_)
    return _from_eig(lam, U)


def random_psd_bump(n: int, rng: np.random.Generator, size: float = 1.0, rank: int | None = None) -> np.ndarray:
    """Random positive semidefinite matrix of norm about ``size``."""
    rank = n if rank is None else rank
    G = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    P = G @ G.conj().T
    return hermitize(P * (size / max(norm(P), 1e-300)))
