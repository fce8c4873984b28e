"""Two-variable matrix means and the Tsallis relative operator entropy.

Orientation: ``gmean(A, B, 0) == A`` and ``gmean(A, B, 1) == B``, i.e.

    A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spd

# parsing round-off allowed outside the closed parameter interval
_CLAMP = 1e-15


@dataclass(frozen=True)
class PowerParam:
    t: float
    p: float | None = None

    def __post_init__(self):
        t = float(self.t)
        if t == 0:
            raise ValueError("t = 0 is excluded: power means are defined for t in [-1, 1] \\ {0}")
        if abs(t) > 1 + _CLAMP:
            raise ValueError(f"|t| must be at most 1, got {t}")
        object.__setattr__(self, "t", max(-1.0, min(1.0, t)))
        if self.p is not None and not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")


def _clamp(t: float, lo: float, hi: float, what: str) -> float:
    t = float(t)
    if t < lo - _CLAMP or t > hi + _CLAMP:
        raise ValueError(f"{what}: t={t} outside [{lo}, {hi}]")
    return min(hi, max(lo, t))


def _sharp(A, B, t: float) -> np.ndarray:
    if np.array_equal(A, B):
        # A #_t A = A for every t; skip the round-off of the eigen route
        return spd.as_pd(A, name="first argument of the mean")
    w, U = spd.eig(A)
    if w[0] <= 0:
        raise spd.NotPositiveDefiniteError("first argument of the mean is not positive definite")
    sq = (U * np.sqrt(w)) @ U.conj().T
    isq = (U / np.sqrt(w)) @ U.conj().T
    M = spd.mpow(spd.hermitize(isq @ B @ isq), t)
    return spd.hermitize(sq @ M @ sq)


def gmean(A, B, t: float) -> np.ndarray:
    """Weighted geometric mean ``A #_t B`` for t in [0, 1]."""
    t = _clamp(t, 0.0, 1.0, "gmean")
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if t == 0:
        return spd.hermitize(A)
    if t == 1:
        return spd.hermitize(B)
    return _sharp(A, B, t)


def qgmean(A, B, t: float) -> np.ndarray:
    """Quasi-geometric mean for t in [-1, 0); same formula as ``gmean``."""
    t = float(t)
    if not (-1 - _CLAMP <= t < 0):
        raise ValueError(f"qgmean: t={t} outside [-1, 0)")
    t = max(-1.0, t)
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return _sharp(A, B, t)


def tsallis(A, B, t: float) -> np.ndarray:
    """Tsallis relative operator entropy ``(A #_t B - A) / t``.

    For negative t the quasi-geometric mean is used.  The result is Hermitian
    but in general indefinite.
    """
    t = float(t)
    if t == 0:
        raise ValueError("tsallis: t = 0 is excluded")
    M = gmean(A, B, t) if t > 0 else qgmean(A, B, t)
    return spd.hermitize((M - spd.hermitize(A)) / t)


def _atoms_weights(mu):
    atoms = mu.atoms
    if len(atoms) == 0:
        raise ValueError("empty measure")
    return atoms, mu.weights


def mixture(X, mu, t) -> np.ndarray:
    """One Picard step ``f(X) = sum_i w_i (X #_t A_i)`` for t in (0, 1]."""
    t = t.t if isinstance(t, PowerParam) else float(t)
    t = _clamp(t, 0.0, 1.0, "mixture")
    if t == 0:
        raise ValueError("mixture: t must be positive")
    atoms, weights = _atoms_weights(mu)
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != atoms.shape[1:]:
        raise ValueError(f"dimension mismatch: X is {X.shape}, atoms are {atoms.shape[1:]}")
    if t == 1:
        return arithmetic_mean(mu)
    w, U = spd.eig(X)
    sq = (U * np.sqrt(w)) @ U.conj().T
    isq = (U / np.sqrt(w)) @ U.conj().T
    S = np.zeros_like(X)
    for a, wt in zip(atoms, weights):
        S += wt * spd.mpow(spd.hermitize(isq @ a @ isq), t)
    return spd.hermitize(sq @ S @ sq)


def arithmetic_mean(mu) -> np.ndarray:
    atoms, weights = _atoms_weights(mu)
    return spd.hermitize(np.einsum("k,kij->ij", weights, atoms))


def harmonic_mean(mu) -> np.ndarray:
    atoms, weights = _atoms_weights(mu)
    return spd.inv(sum(wt * spd.inv(a) for a, wt in zip(atoms, weights)))


def power_integral(mu, t: float) -> np.ndarray:
    """``sum_i w_i A_i^t``."""
    atoms, weights = _atoms_weights(mu)
    return spd.hermitize(sum(wt * spd.mpow(a, t) for a, wt in zip(atoms, weights)))


def tsallis_sum(X, mu, t: float) -> np.ndarray:
    """``sum_i w_i T_t(X | A_i)``."""
    t = t.t if isinstance(t, PowerParam) else float(t)
    if t == 0:
        raise ValueError("tsallis: t = 0 is excluded")
    atoms, weights = _atoms_weights(mu)
    mean2 = gmean if t > 0 else qgmean
    X = spd.hermitize(X)
    acc = np.zeros_like(X)
    for a, w in zip(atoms, weights):
        acc += w * mean2(X, a, t)
    return spd.hermitize((acc - X) / t)
