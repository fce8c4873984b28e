"""Finitely supported probability measures on the positive-definite cone.

Push-forwards transport the atoms and leave the weight vector untouched.
Continuous measures are represented by a curve in the cone plus a density on
``[0, 1]`` and enter the rest of the library only through :func:`discretize`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import spd

WEIGHT_SUM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """``sum_i weights[i] * delta(atoms[i])``.

    ``atoms`` is a read-only ``(k, n, n)`` complex array, ``weights`` a
    read-only ``(k,)`` array of positive reals summing to one.  Build with
    :func:`new_measure` unless the inputs are already validated.
    """

    atoms: np.ndarray
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def size(self) -> int:
        return self.atoms.shape[0]

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return iter(zip(self.atoms, self.weights))

    def __repr__(self) -> str:
        return f"AtomicMeasure(k={self.size}, n={self.dim})"


def _freeze(atoms: np.ndarray, weights: np.ndarray) -> AtomicMeasure:
    atoms = np.ascontiguousarray(atoms, dtype=np.complex128)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    atoms.setflags(write=False)
    weights.setflags(write=False)
    return AtomicMeasure(atoms, weights)


def new_measure(atoms, weights=None) -> AtomicMeasure:
    """Validate atoms and weights and build a measure.

    Weights default to uniform.  A weight sum off by at most ``1e-9`` is
    renormalized; anything larger is an error.
    """
    atoms = list(atoms)
    if not atoms:
        raise ValueError("a measure needs at least one atom")
    if weights is None:
        weights = np.full(len(atoms), 1.0 / len(atoms))
    weights = np.asarray(weights, dtype=np.float64).reshape(-1)
    if len(weights) != len(atoms):
        raise ValueError(f"{len(atoms)} atoms but {len(weights)} weights")
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
        raise ValueError("weights must be positive and finite")
    total = float(np.sum(weights))
    if abs(total - 1.0) > RENORMALIZE_TOL:
        raise ValueError(f"weights sum to {total!r}, not 1")
    weights = weights / total
    checked = [spd.as_pd(a, name=f"atoms[{i}]") for i, a in enumerate(atoms)]
    n = checked[0].shape[0]
    for i, a in enumerate(checked):
        if a.shape[0] != n:
            raise ValueError(f"atoms[{i}] has dimension {a.shape[0]}, expected {n}")
    return _freeze(np.stack(checked), weights)


def dirac(A) -> AtomicMeasure:
    return new_measure([A], [1.0])


def _map_atoms(mu: AtomicMeasure, fn) -> AtomicMeasure:
    return _freeze(np.stack([fn(a) for a in mu.atoms]), mu.weights)


def pushforward_pow(mu: AtomicMeasure, p: float) -> AtomicMeasure:
    """Atoms ``A_i -> A_i^p`` for ``p >= 1``."""
    if not p >= 1:
        raise ValueError(f"pushforward_pow needs p >= 1, got {p}")
    if p == 1:
        return mu
    return _map_atoms(mu, lambda a: spd.mpow(a, p))


def pushforward_inv(mu: AtomicMeasure) -> AtomicMeasure:
    return _map_atoms(mu, spd.inv)


def pushforward_scale(mu: AtomicMeasure, alpha: float) -> AtomicMeasure:
    if not alpha > 0:
        raise ValueError(f"scale factor must be positive, got {alpha}")
    return _freeze(mu.atoms * alpha, mu.weights)


def pushforward_congruence(mu: AtomicMeasure, C) -> AtomicMeasure:
    """Atoms ``A_i -> C* A_i C``."""
    C = spd.check_invertible(C)
    if C.shape[0] != mu.dim:
        raise ValueError(f"dimension mismatch: C is {C.shape}, measure has n={mu.dim}")
    return _map_atoms(mu, lambda a: spd.congruence(C, a))


def pushforward_map(mu: AtomicMeasure, phi) -> AtomicMeasure:
    """Atoms ``A_i -> phi(A_i)``; coincident images are kept as separate atoms."""
    if phi.in_dim != mu.dim:
        raise ValueError(f"map expects n={phi.in_dim}, measure has n={mu.dim}")
    return _map_atoms(mu, phi.apply)


def condition_remove(mu: AtomicMeasure, index: int) -> AtomicMeasure:
    """Drop one atom and renormalize the remaining weights."""
    if mu.size < 2:
        raise ValueError("cannot remove the only atom of a measure")
    if not -mu.size <= index < mu.size:
        raise IndexError(f"atom index {index} out of range for {mu.size} atoms")
    index %= mu.size
    removed = mu.weights[index]
    if not removed < 1:
        raise ValueError("removed atom carries all the mass")
    keep = np.arange(mu.size) != index
    return _freeze(mu.atoms[keep], mu.weights[keep] / (1.0 - removed))


def append_atom(mu: AtomicMeasure, A, w: float) -> AtomicMeasure:
    """``(1 - w) mu + w delta_A``."""
    if not 0 < w < 1:
        raise ValueError(f"appended weight must lie in (0, 1), got {w}")
    A = spd.as_pd(A, name="appended atom")
    if A.shape[0] != mu.dim:
        raise ValueError("appended atom has the wrong dimension")
    return _freeze(np.concatenate([mu.atoms, A[None]]), np.append(mu.weights * (1.0 - w), w))


def random_measure(rng: np.random.Generator, n: int, k: int, cond_max: float = 100.0,
                   *, complex_: bool = True) -> AtomicMeasure:
    atoms = [spd.random_pd(n, cond_max, rng, complex_=complex_) for _ in range(k)]
    weights = rng.dirichlet(np.ones(k)) if k > 1 else np.ones(1)
    # dirichlet can produce denormal weights; keep every atom visible
    weights = np.maximum(weights, 1e-3)
    return new_measure(atoms, weights / weights.sum())


@dataclass(frozen=True)
class MeasureFamily:
    """Continuous probability measure given as a curve ``[0, 1] -> PD`` and a density."""

    curve: Callable[[float], np.ndarray]
    density: Callable[[float], float]
    dim: int
    name: str = ""
    description: str = field(default="", compare=False)


def discretize(family: MeasureFamily, N: int) -> AtomicMeasure:
    """Midpoint Riemann sum of ``family`` on the uniform ``N``-cell partition."""
    if N < 1:
        raise ValueError("N must be at least 1")
    mids = (np.arange(N) + 0.5) / N
    atoms = []
    for j, s in enumerate(mids):
        A = spd.as_pd(family.curve(float(s)), name=f"{family.name or 'curve'}({s:g})")
        if A.shape[0] != family.dim:
            raise ValueError(f"curve returned dimension {A.shape[0]}, family declares {family.dim}")
        atoms.append(A)
    mass = np.array([float(family.density(float(s))) for s in mids]) / N
    if np.any(mass < 0) or not np.all(np.isfinite(mass)):
        raise ValueError("density must be nonnegative and finite")
    keep = mass > 0
    if not np.any(keep):
        raise ValueError("density vanishes at every midpoint")
    return _freeze(np.stack(atoms)[keep], mass[keep] / mass[keep].sum())


def cell_diameters(family: MeasureFamily, N: int, samples: int = 8) -> np.ndarray:
    """Thompson diameter of each cell, estimated from ``samples`` equispaced points."""
    out = np.empty(N)
    for j in range(N):
        pts = [family.curve(float(s)) for s in np.linspace(j / N, (j + 1) / N, samples)]
        out[j] = max(spd.thompson(a, b) for i, a in enumerate(pts) for b in pts[i + 1:])
    return out


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _exp_line() -> MeasureFamily:
    return MeasureFamily(
        curve=lambda s: np.exp(s) * np.eye(2, dtype=np.complex128),
        density=lambda s: 1.0,
        dim=2,
        name="exp-line",
        description="curve(s) = e^s I_2, uniform density",
    )


def _rotating_ellipse() -> MeasureFamily:
    D = np.diag([4.0, 1.0]).astype(np.complex128)

    def curve(s):
        R = _rotation(0.5 * np.pi * s)
        return R @ D @ R.T

    return MeasureFamily(
        curve=curve,
        density=lambda s: 1.0 + 0.5 * np.cos(2 * np.pi * s),
        dim=2,
        name="rotating-ellipse",
        description="curve(s) = R(pi s/2) diag(4, 1) R(pi s/2)^T, density 1 + cos(2 pi s)/2",
    )


def _geodesic() -> MeasureFamily:
    from .means import gmean

    A = np.diag([1.0, 2.0, 3.0]).astype(np.complex128)
    B = np.array([[3.0, 1.0, 0.5j], [1.0, 2.0, 0.0], [-0.5j, 0.0, 1.5]], dtype=np.complex128)
    return MeasureFamily(
        curve=lambda s: gmean(A, B, s),
        density=lambda s: 2.0 * s,
        dim=3,
        name="geodesic",
        description="curve(s) = A #_s B for fixed noncommuting 3x3 A, B; density 2s",
    )


FAMILIES: dict[str, Callable[[], MeasureFamily]] = {
    "exp-line": _exp_line,
    "rotating-ellipse": _rotating_ellipse,
    "geodesic": _geodesic,
}


def family(key: str) -> MeasureFamily:
    try:
        return FAMILIES[key]()
    except KeyError:
        raise KeyError(f"unknown family {key!r}; choose from {', '.join(FAMILIES)}") from None
