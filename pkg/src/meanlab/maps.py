"""Unital positive linear maps in Kraus form.

``phi(A) = sum_j V_j* op(A) V_j`` with ``V_j`` of shape ``(n, m)`` and
``op`` either the identity or the transpose.  Unitality is
``sum_j V_j* V_j = I_m``.  With ``pre_transpose`` the map is positive but not
completely positive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spd

UNITAL_TOL = 1e-10


class NotFaithfulError(ValueError):
    pass


def _unital_defect(kraus: np.ndarray) -> float:
    m = kraus.shape[2]
    S = np.einsum("jai,jak->ik", kraus.conj(), kraus)
    return float(np.linalg.norm(S - np.eye(m), 2)) if m else 0.0


@dataclass(frozen=True, eq=False)
class UnitalPositiveMap:
    kraus: np.ndarray
    pre_transpose: bool = False
    name: str = "kraus"

    def __post_init__(self):
        K = np.asarray(self.kraus, dtype=np.complex128)
        if K.ndim == 2:
            K = K[None]
        if K.ndim != 3 or K.shape[0] == 0:
            raise ValueError("kraus must be a nonempty stack of n x m matrices")
        K = np.ascontiguousarray(K)
        K.setflags(write=False)
        object.__setattr__(self, "kraus", K)
        defect = _unital_defect(K)
        if defect > UNITAL_TOL:
            raise ValueError(f"map {self.name!r} is not unital: ||sum V*V - I|| = {defect:.3e}")

    @property
    def in_dim(self) -> int:
        return self.kraus.shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus.shape[2]

    def linear(self, A) -> np.ndarray:
        """Apply the map to any square matrix (no positivity check)."""
        A = np.asarray(A, dtype=np.complex128)
        if A.shape != (self.in_dim, self.in_dim):
            raise ValueError(f"map {self.name!r} expects {self.in_dim}x{self.in_dim} input, got {A.shape}")
        if self.pre_transpose:
            A = A.T
        return np.einsum("jai,ab,jbk->ik", self.kraus.conj(), A, self.kraus)

    def apply(self, A) -> np.ndarray:
        """Image of a positive-definite matrix; raises if it is not strictly positive."""
        out = spd.hermitize(self.linear(A))
        lmin = float(np.linalg.eigvalsh(out)[0])
        if not lmin > 0:
            raise NotFaithfulError(f"map {self.name!r} sent a positive-definite input to min eigenvalue {lmin:.3e}")
        return out

    __call__ = apply

    def __repr__(self) -> str:
        flag = ", transpose" if self.pre_transpose else ""
        return f"UnitalPositiveMap({self.name!r}, {self.in_dim}->{self.out_dim}, r={len(self.kraus)}{flag})"


def validate_unital(phi) -> float:
    """``||sum_j V_j* V_j - I||`` for a map or a raw ``(r, n, m)`` Kraus stack."""
    if isinstance(phi, UnitalPositiveMap):
        return _unital_defect(phi.kraus)
    K = np.asarray(phi, dtype=np.complex128)
    return _unital_defect(K[None] if K.ndim == 2 else K)


def make_identity(n: int) -> UnitalPositiveMap:
    return UnitalPositiveMap(np.eye(n), name="identity")


def make_compression(V) -> UnitalPositiveMap:
    """``A -> V* A V`` for an isometry ``V`` (n x m, ``V* V = I``)."""
    V = np.asarray(V, dtype=np.complex128)
    if V.ndim == 1:
        V = V[:, None]
    defect = float(np.max(np.abs(V.conj().T @ V - np.eye(V.shape[1]))))
    if defect > UNITAL_TOL:
        raise ValueError(f"compression needs an isometry (||V*V - I|| = {defect:.3e})")
    return UnitalPositiveMap(V, name="compression")


def make_pinching(block_sizes) -> UnitalPositiveMap:
    """Block-diagonal pinching; Kraus operators are the block projections."""
    sizes = [int(b) for b in block_sizes]
    if not sizes or any(b < 1 for b in sizes):
        raise ValueError("block sizes must be positive")
    n = sum(sizes)
    kraus = []
    start = 0
    for b in sizes:
        P = np.zeros((n, n))
        P[start:start + b, start:start + b] = np.eye(b)
        kraus.append(P)
        start += b
    return UnitalPositiveMap(np.stack(kraus), name="pinching")


def make_trace_map(n: int) -> UnitalPositiveMap:
    """Normalized trace ``A -> tr(A)/n`` onto 1x1 matrices."""
    kraus = np.eye(n)[:, :, None] / np.sqrt(n)
    return UnitalPositiveMap(kraus, name="trace")


def make_transpose(n: int) -> UnitalPositiveMap:
    return UnitalPositiveMap(np.eye(n), pre_transpose=True, name="transpose")


def random_isometry(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    if m > n:
        raise ValueError("an isometry n x m needs m <= n")
    return spd.random_unitary(n, rng)[:, :m]


def random_kraus(n: int, m: int, r: int, rng: np.random.Generator) -> UnitalPositiveMap:
    """Random unital CP map: Gaussian ``V_j`` renormalized by ``S^{-1/2}``."""
    G = rng.standard_normal((r, n, m)) + 1j * rng.standard_normal((r, n, m))
    S = np.einsum("jai,jak->ik", G.conj(), G)
    return UnitalPositiveMap(G @ spd.mpow(S, -0.5), name="random-kraus")


def random_pinching(n: int, rng: np.random.Generator) -> UnitalPositiveMap:
    cuts = sorted(rng.choice(np.arange(1, n), size=rng.integers(0, n), replace=False)) if n > 1 else []
    edges = [0, *cuts, n]
    return make_pinching(np.diff(edges))


CATALOG = ("identity", "compression", "pinching", "trace", "transpose", "random-kraus")


def catalog_map(kind: str, n: int, rng: np.random.Generator) -> UnitalPositiveMap:
    """One map of the named kind on n x n inputs; random parts drawn from ``rng``."""
    if kind == "identity":
        return make_identity(n)
    if kind == "compression":
        m = max(1, n - 1)
        return make_compression(random_isometry(n, m, rng))
    if kind == "pinching":
        return random_pinching(n, rng)
    if kind == "trace":
        return make_trace_map(n)
    if kind == "transpose":
        return make_transpose(n)
    if kind == "random-kraus":
        return random_kraus(n, int(rng.integers(1, n + 1)), int(rng.integers(1, 4)), rng)
    raise KeyError(f"unknown map kind {kind!r}; choose from {', '.join(CATALOG)}")
