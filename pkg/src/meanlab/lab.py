"""Executable checks of the power-mean inequalities.

Each checker first establishes the hypothesis of its inequality by
construction (rescaling or appending atoms), then evaluates both sides and
reports the worst Loewner margin relative to the matrices' scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import spd
from .means import arithmetic_mean, harmonic_mean, power_integral, tsallis_sum
from .measures import (
    AtomicMeasure,
    MeasureFamily,
    append_atom,
    cell_diameters,
    condition_remove,
    discretize,
    pushforward_inv,
    pushforward_map,
    pushforward_pow,
    pushforward_scale,
)
from .power_mean import SolveOptions, solve

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class CheckReport:
    name: str
    premise_satisfied: bool
    holds: bool
    margin: float
    tolerance: float
    digest: str
    details: dict = field(default_factory=dict, compare=False)

    @property
    def skipped(self) -> bool:
        return not self.premise_satisfied

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "premise_satisfied": self.premise_satisfied,
            "holds": self.holds,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "digest": self.digest,
            "details": self.details,
        }


def make_digest(name: str, **params) -> str:
    parts = [name] + [f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in params.items()]
    return ";".join(parts)


def _report(name, margin, tol, digest, details=None, premise=True) -> CheckReport:
    margin = float(margin)
    if not premise:
        return CheckReport(name, False, True, 0.0, tol, digest, details or {})
    return CheckReport(name, True, margin >= -tol, margin, tol, digest, details or {})


def rel_margin(A, B) -> float:
    """Smallest eigenvalue of ``B - A`` divided by the larger spectral norm."""
    r = spd.loewner_leq(A, B, 0.0)
    return r.relative_margin


def _check_t(t, lo, hi, what):
    if not lo < t <= hi:
        raise ValueError(f"{what}: t={t} outside ({lo}, {hi}]")


def check_sandwich(mu: AtomicMeasure, t: float, s: float, *, tol: float = DEFAULT_TOL,
                   opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """``H <= P_{-s} <= P_{-t} <= P_t <= P_s <= A`` for ``0 < t <= s <= 1``."""
    if not 0 < t <= s <= 1:
        raise ValueError(f"sandwich needs 0 < t <= s <= 1, got t={t}, s={s}")
    chain = [
        ("harmonic", harmonic_mean(mu)),
        ("P(-s)", solve(mu, -s, opts)[0]),
        ("P(-t)", solve(mu, -t, opts)[0]),
        ("P(t)", solve(mu, t, opts)[0]),
        ("P(s)", solve(mu, s, opts)[0]),
        ("arithmetic", arithmetic_mean(mu)),
    ]
    links = {f"{a}<={b}": rel_margin(A, B) for (a, A), (b, B) in zip(chain, chain[1:])}
    digest = digest or make_digest("sandwich", n=mu.dim, k=mu.size, t=t, s=s)
    return _report("sandwich", min(links.values()), tol, digest, links)


def _check_p(p):
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")


def check_ando_hiai(mu: AtomicMeasure, t: float, p: float, *, tol: float = DEFAULT_TOL,
                    opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """``||P_t(mu)|| <= 1  =>  ||P_{t/p}(nu)|| <= 1`` and ``P_{t/p}(nu) <= P_t(mu)``, nu = mu^p.

    The measure is first rescaled by ``1 / ||P_t(mu)||`` so the hypothesis is
    attained with equality.
    """
    _check_t(t, 0, 1, "ando-hiai")
    _check_p(p)
    X, _ = solve(mu, t, opts)
    alpha = spd.norm(X)
    mu_n = pushforward_scale(mu, 1.0 / alpha)
    Xn, _ = solve(mu_n, t, opts)
    Y, _ = solve(pushforward_pow(mu_n, p), t / p, opts)
    xnorm = spd.norm(Xn)
    ynorm = spd.norm(Y)
    # the rescaled premise holds only up to solver round-off; by homogeneity
    # ||P_t|| = c forces the bound c**p on the transported mean
    norm_margin = max(1.0, xnorm) ** p - ynorm
    order_margin = rel_margin(Y, Xn)
    details = {"alpha": alpha, "premise_norm": xnorm, "image_norm": ynorm, "norm_margin": norm_margin,
               "order_margin": order_margin}
    digest = digest or make_digest("ando-hiai", n=mu.dim, k=mu.size, t=t, p=p)
    return _report("ando-hiai", min(norm_margin, order_margin), tol, digest, details)


def check_ando_hiai_dual(mu: AtomicMeasure, t: float, p: float, *, tol: float = DEFAULT_TOL,
                         opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """``P_{-t/p}(nu) >= P_{-t}(mu)`` after rescaling so that ``P_t(mu^{-1}) <= I``."""
    _check_t(t, 0, 1, "ando-hiai-dual")
    _check_p(p)
    Z, _ = solve(pushforward_inv(mu), t, opts)
    beta = spd.norm(Z)
    mu_n = pushforward_scale(mu, beta)
    X, _ = solve(mu_n, -t, opts)
    Y, _ = solve(pushforward_pow(mu_n, p), -t / p, opts)
    margin = rel_margin(X, Y)
    digest = digest or make_digest("ando-hiai-dual", n=mu.dim, k=mu.size, t=t, p=p)
    return _report("ando-hiai-dual", margin, tol, digest, {"beta": beta, "lambda_min_P-t": float(np.linalg.eigvalsh(X)[0])})


def dual_under_stated_premise(mu: AtomicMeasure, t: float, p: float, opts: SolveOptions | None = None) -> float:
    """Margin of ``P_{-t/p}(nu) >= P_{-t}(mu)`` when only ``||P_t(mu)|| <= 1`` is arranged.

    Recorded as data; the inequality is not claimed under this normalization.
    """
    X, _ = solve(mu, t, opts)
    mu_n = pushforward_scale(mu, 1.0 / spd.norm(X))
    A, _ = solve(mu_n, -t, opts)
    B, _ = solve(pushforward_pow(mu_n, p), -t / p, opts)
    return rel_margin(A, B)


def check_lemma_th1(mu: AtomicMeasure, t: float, *, tol: float = DEFAULT_TOL,
                    opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """``(sum w Z^t)^{1/t} <= I => P_t <= I`` (t > 0), reversed inequalities for t < 0."""
    if t == 0 or abs(t) > 1:
        raise ValueError(f"lemma-th1 needs t in [-1, 1] \\ {{0}}, got {t}")
    Q = power_integral(mu, t)
    c = spd.norm(Q) ** (-1.0 / t)
    mu_n = pushforward_scale(mu, c)
    I = spd.identity(mu.dim)
    Qn = power_integral(mu_n, t)
    premise = spd.loewner_leq(Qn, I, tol)
    X, _ = solve(mu_n, t, opts)
    margin = rel_margin(X, I) if t > 0 else rel_margin(I, X)
    digest = digest or make_digest("lemma-th1", n=mu.dim, k=mu.size, t=t)
    details = {"scale": c, "premise_margin": premise.relative_margin}
    return _report("lemma-th1", margin, tol, digest, details, premise=premise.holds)


def check_tsallis_criterion(X, mu: AtomicMeasure, t: float, *, tol: float = DEFAULT_TOL,
                            opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """Sign of ``sum w T_t(X|A_i)`` decides the side of ``P_t(mu)`` on which X lies.

    An indefinite sum says nothing and the check is skipped.
    """
    if t == 0 or abs(t) > 1:
        raise ValueError(f"tsallis needs t in [-1, 1] \\ {{0}}, got {t}")
    X = spd.as_pd(X, name="X")
    S = tsallis_sum(X, mu, t)
    lam = np.linalg.eigvalsh(S)
    scale = spd.norm(X)
    nonneg = lam[0] >= -tol * scale
    nonpos = lam[-1] <= tol * scale
    digest = digest or make_digest("tsallis", n=mu.dim, k=mu.size, t=t)
    details = {"entropy_min": float(lam[0] / scale), "entropy_max": float(lam[-1] / scale)}
    if not (nonneg or nonpos):
        return _report("tsallis", 0.0, tol, digest, details, premise=False)
    P, _ = solve(mu, t, opts)
    margins = []
    if nonneg:
        details["below_margin"] = rel_margin(X, P)
        margins.append(details["below_margin"])
    if nonpos:
        details["above_margin"] = rel_margin(P, X)
        margins.append(details["above_margin"])
    return _report("tsallis", min(margins), tol, digest, details)


def check_info_monotonicity(mu: AtomicMeasure, t: float, phi, *, tol: float = DEFAULT_TOL,
                            opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """``phi(P_t(mu)) <= P_t(phi # mu)`` for a unital positive map phi."""
    if t == 0 or abs(t) > 1:
        raise ValueError(f"info-mono needs t in [-1, 1] \\ {{0}}, got {t}")
    if phi.in_dim != mu.dim:
        raise ValueError(f"map expects n={phi.in_dim}, measure has n={mu.dim}")
    left = phi.apply(solve(mu, t, opts)[0])
    right, _ = solve(pushforward_map(mu, phi), t, opts)
    digest = digest or make_digest("info-mono", n=mu.dim, k=mu.size, t=t, map=phi.name)
    return _report("info-mono", rel_margin(left, right), tol, digest, {"map": phi.name, "out_dim": phi.out_dim})


def check_atom_reduction(nu: AtomicMeasure, t: float, w: float, *, tol: float = DEFAULT_TOL,
                         opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """Appending ``P_t(nu)`` as an atom of any weight leaves the power mean unchanged."""
    _check_t(t, 0, 1, "atom-reduction")
    X, _ = solve(nu, t, opts)
    mu = append_atom(nu, X, w)
    Xm, _ = solve(mu, t, opts)
    dist = spd.thompson(X, Xm)
    back = condition_remove(mu, mu.size - 1)
    weight_err = float(np.max(np.abs(back.weights - nu.weights)))
    atoms_same = bool(np.array_equal(back.atoms, nu.atoms))
    margin = -dist
    if weight_err > 1e-12 or not atoms_same:
        margin = min(margin, -1.0)
    digest = digest or make_digest("atom-reduction", n=nu.dim, k=nu.size, t=t, w=w)
    details = {"thompson": dist, "weight_error": weight_err, "atoms_restored": atoms_same}
    return _report("atom-reduction", margin, tol, digest, details)


def check_dominated_reduction(mu: AtomicMeasure, t: float, index: int, *, tol: float = DEFAULT_TOL,
                              opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """``P_t(mu) <= B`` for an atom B  =>  ``P_t(mu without B) <= B``."""
    _check_t(t, 0, 1, "dominated-reduction")
    B = mu.atoms[index]
    P, _ = solve(mu, t, opts)
    premise = spd.loewner_leq(P, B, tol)
    digest = digest or make_digest("dominated-reduction", n=mu.dim, k=mu.size, t=t, index=index)
    details = {"premise_margin": premise.relative_margin}
    if not premise.holds or mu.size < 2:
        return _report("dominated-reduction", 0.0, tol, digest, details, premise=False)
    Q, _ = solve(condition_remove(mu, index), t, opts)
    return _report("dominated-reduction", rel_margin(Q, B), tol, digest, details)


def check_discretization(fam: MeasureFamily, t: float, N: int, *, tol: float = DEFAULT_TOL,
                         opts: SolveOptions | None = None, digest: str | None = None) -> CheckReport:
    """Refining the partition N -> 4N moves the mean by at most twice the cell diameter."""
    _check_t(t, 0, 1, "discretization")
    if N < 2:
        raise ValueError("discretization check needs N >= 2")
    coarse, _ = solve(discretize(fam, N), t, opts)
    fine, _ = solve(discretize(fam, 4 * N), t, opts)
    eps = float(np.max(cell_diameters(fam, N)))
    dist = spd.thompson(coarse, fine)
    digest = digest or make_digest("discretization", family=fam.name, t=t, N=N)
    return _report("discretization", 2 * eps - dist, tol, digest, {"thompson": dist, "epsilon": eps})
