"""Fixed-point solver for power means of atomic measures.

For t in (0, 1] the power mean is the unique positive-definite solution of
``X = sum_i w_i (X #_t A_i)``; the map on the right is a strict contraction
of ratio ``1 - t`` in the Thompson metric, so plain Picard iteration is used.
Negative t goes through inversion: ``P_t(mu) = P_{-t}(mu^{-1})^{-1}``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Union

import numpy as np

from . import _kernels, spd
from .means import PowerParam, arithmetic_mean, tsallis_sum
from .measures import AtomicMeasure, pushforward_inv

SLOW_T = 0.05

Initial = Union[str, np.ndarray]


class NonConvergenceError(RuntimeError):
    def __init__(self, message: str, report: "SolveReport", iterate: np.ndarray):
        super().__init__(message)
        self.report = report
        self.iterate = iterate


@dataclass(frozen=True)
class SolveOptions:
    tol_thompson: float = 1e-12
    max_iter: int = 10_000
    # "arithmetic", "identity", or a positive-definite starting matrix
    initial: Initial = "arithmetic"

    def __post_init__(self):
        if not self.tol_thompson > 0:
            raise ValueError("tol_thompson must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if isinstance(self.initial, str) and self.initial not in ("arithmetic", "identity"):
            raise ValueError(f"unknown initial iterate {self.initial!r}")


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    final_step: float
    residual: float
    kamei_residual: float
    converged: bool
    observed_ratio: float
    first_step: float
    t: float
    slow_contraction: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _as_t(t) -> float:
    return PowerParam(t).t if not isinstance(t, PowerParam) else t.t


def _initial(mu: AtomicMeasure, initial: Initial) -> np.ndarray:
    if isinstance(initial, str):
        if initial == "arithmetic":
            return arithmetic_mean(mu)
        return spd.identity(mu.dim)
    X0 = spd.as_pd(initial, name="initial iterate")
    if X0.shape[0] != mu.dim:
        raise ValueError("initial iterate has the wrong dimension")
    return X0


def iteration_bound(first_step: float, t: float, tol: float) -> int:
    """Iterations guaranteed by the ``1 - t`` contraction, plus 10 of slack."""
    if first_step <= tol or t >= 1:
        return 10
    return math.ceil(math.log(tol / first_step) / math.log(1.0 - t)) + 10


def _solve_positive(mu: AtomicMeasure, t: float, opts: SolveOptions):
    X0 = _initial(mu, opts.initial)
    try:
        X, it, first, last = _kernels.picard(mu.atoms, mu.weights, X0, t, opts.tol_thompson, opts.max_iter)
    except np.linalg.LinAlgError as exc:
        raise spd.SingularMatrixError(f"fixed-point iteration broke down (atoms too ill-conditioned?): {exc}") from None
    X = spd.hermitize(X)
    _, _, residual, _ = _kernels.picard(mu.atoms, mu.weights, X, t, 0.0, 1)
    if it >= 2 and first > 0:
        ratio = (last / first) ** (1.0 / (it - 1))
    else:
        ratio = 0.0
    return X, int(it), float(first), float(last), float(residual), float(ratio)


def solve(mu: AtomicMeasure, t, opts: SolveOptions | None = None):
    """Compute the power mean ``P_t(mu)``.

    Returns ``(X, SolveReport)``.  Raises NonConvergenceError (carrying the
    partial report and last iterate) when the Thompson step does not drop to
    ``opts.tol_thompson`` within ``opts.max_iter`` iterations.
    """
    opts = opts or SolveOptions()
    t = _as_t(t)
    if t > 0:
        X, it, first, last, residual, ratio = _solve_positive(mu, t, opts)
    else:
        inner = opts
        if not isinstance(opts.initial, str):
            inner = replace(opts, initial=spd.inv(opts.initial))
        Y, it, first, last, residual, ratio = _solve_positive(pushforward_inv(mu), -t, inner)
        X = spd.inv(Y)
    converged = last <= opts.tol_thompson
    report = SolveReport(
        iterations=it,
        final_step=last,
        residual=residual,
        kamei_residual=residual_kamei(X, mu, t),
        converged=converged,
        observed_ratio=ratio,
        first_step=first,
        t=t,
        slow_contraction=abs(t) < SLOW_T,
    )
    if not converged:
        need = iteration_bound(first, abs(t), opts.tol_thompson)
        hint = f"; contraction ratio is 1-|t| = {1 - abs(t):.3g}, expect about {need} iterations" if need > opts.max_iter else ""
        raise NonConvergenceError(
            f"power mean did not converge for t={t}: step {last:.3e} > tol {opts.tol_thompson:.1e} "
            f"after {it} iterations{hint}",
            report,
            X,
        )
    return X, report


def power_mean(mu: AtomicMeasure, t, opts: SolveOptions | None = None) -> np.ndarray:
    return solve(mu, t, opts)[0]


def commuting_oracle(weights, eigenvalue_rows, t: float) -> np.ndarray:
    """Closed form for simultaneously diagonal atoms.

    ``eigenvalue_rows[i, j]`` is the j-th diagonal entry of atom i; the power
    mean is ``diag((sum_i w_i a_ij^t)^(1/t))``.
    """
    t = float(t)
    if t == 0:
        raise ValueError("t = 0 is excluded")
    w = np.asarray(weights, dtype=np.float64)
    a = np.asarray(eigenvalue_rows, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    return np.diag((w @ a**t) ** (1.0 / t)).astype(np.complex128)


def residual_kamei(X, mu: AtomicMeasure, t) -> float:
    """``|| sum_i w_i T_t(X | A_i) ||`` -- zero exactly at the power mean."""
    return spd.norm(tsallis_sum(X, mu, _as_t(t)))
