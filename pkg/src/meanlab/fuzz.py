"""Randomized harness running every checker on independently drawn instances.

Each trial is identified by ``(theorem, seed, trial)``.  Parameters are drawn
from one generator stream and matrices from another, and both the parameters
and the stream identifiers are written into the report digest, so
:func:`replay` rebuilds the identical instance from the digest alone.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import lab, maps, spd
from .measures import FAMILIES, append_atom, family, random_measure
from .means import arithmetic_mean
from .power_mean import NonConvergenceError, SolveOptions, solve

log = logging.getLogger(__name__)

POW_COND_LIMIT = 1e4

THEOREMS = (
    "sandwich",
    "ando-hiai",
    "ando-hiai-dual",
    "lemma-th1",
    "tsallis",
    "info-mono",
    "atom-reduction",
    "dominated-reduction",
    "discretization",
)


@dataclass(frozen=True)
class FuzzConfig:
    n_max: int = 6
    k_max: int = 8
    cond_max: float = 1e3
    t_grid: tuple = (0.25, 0.5, 0.75, 1.0)
    p_grid: tuple = (1.0, 1.5, 2.0, 3.0, 5.0)
    trials: int = 100
    seed: int = 0
    tol: float = lab.DEFAULT_TOL
    theorems: tuple = THEOREMS

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n_max < 1 or self.k_max < 1:
            raise ValueError("n_max and k_max must be positive")
        bad = [th for th in self.theorems if th not in THEOREMS]
        if bad:
            raise KeyError(f"unknown theorem(s) {bad}; choose from {', '.join(THEOREMS)}")
        if not self.t_grid or any(not 0 < abs(t) <= 1 for t in self.t_grid):
            raise ValueError("t_grid entries must satisfy 0 < |t| <= 1")


def _streams(name: str, seed: int, trial: int):
    tid = THEOREMS.index(name)
    return np.random.default_rng([seed, tid, trial, 0]), np.random.default_rng([seed, tid, trial, 1])


def _pick(rng, grid):
    return float(grid[int(rng.integers(len(grid)))])


def draw_params(name: str, cfg: FuzzConfig, seed: int, trial: int) -> dict:
    """Draw the scalar parameters of one trial."""
    rng, _ = _streams(name, seed, trial)
    pos = [abs(t) for t in cfg.t_grid]
    params = {
        "seed": seed,
        "trial": trial,
        "n": int(rng.integers(1, cfg.n_max + 1)),
        "k": int(rng.integers(1, cfg.k_max + 1)),
        "cond": float(cfg.cond_max),
    }
    sign = 1.0 if rng.random() < 0.5 else -1.0
    if name == "sandwich":
        lo = min(pos)
        t, s = sorted(rng.uniform(lo, 1.0, size=2))
        params.update(t=float(t), s=float(s))
    elif name in ("ando-hiai", "ando-hiai-dual"):
        params.update(t=_pick(rng, pos), p=_pick(rng, cfg.p_grid))
        # atoms are raised to the power p; keep cond(A^p) inside double precision
        params["cond"] = float(min(cfg.cond_max, POW_COND_LIMIT ** (1.0 / params["p"])))
    elif name == "lemma-th1":
        params.update(t=sign * _pick(rng, pos))
    elif name == "tsallis":
        params.update(t=sign * _pick(rng, pos), mode=str(rng.choice(["scale-down", "scale-up", "above", "below", "mixed", "exact"])),
                      delta=float(rng.choice([1e-3, 1e-2, 1e-1])))
    elif name == "info-mono":
        params.update(t=sign * _pick(rng, pos), map=str(rng.choice(maps.CATALOG)))
    elif name == "atom-reduction":
        params.update(t=_pick(rng, pos), w=float(rng.choice([0.1, 0.5, 0.9])))
    elif name == "dominated-reduction":
        params.update(t=_pick(rng, pos), constructed=bool(rng.random() < 0.8))
    elif name == "discretization":
        params = {"seed": seed, "trial": trial, "family": str(rng.choice(list(FAMILIES))),
                  "t": _pick(rng, pos), "N": int(rng.choice([2, 4, 8]))}
    return params


def _tsallis_point(P, mode, delta, rng):
    n = P.shape[0]
    if mode == "exact":
        return P
    if mode == "scale-down":
        return (1 - delta) * P
    if mode == "scale-up":
        return (1 + delta) * P
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = spd.hermitize(G)
    if mode == "above":
        H = spd.random_psd_bump(n, rng)
    elif mode == "below":
        H = -spd.random_psd_bump(n, rng)
    R = spd.mexp(delta * H / max(spd.norm(H), 1e-300))
    sq = spd.mpow(P, 0.5)
    return spd.hermitize(sq @ R @ sq)


def build_check(name: str, params: dict, tol: float, opts: SolveOptions | None = None) -> Callable[[], lab.CheckReport]:
    """Materialize the instance for ``params`` and return a zero-argument checker call."""
    _, rng = _streams(name, params["seed"], params["trial"])
    digest = lab.make_digest(name, **params)
    kw = {"tol": tol, "opts": opts, "digest": digest}
    if name == "discretization":
        fam = family(params["family"])
        return lambda: lab.check_discretization(fam, params["t"], params["N"], **kw)
    mu = random_measure(rng, params["n"], params["k"], params["cond"])
    t = params["t"]
    if name == "sandwich":
        return lambda: lab.check_sandwich(mu, t, params["s"], **kw)
    if name == "ando-hiai":
        return lambda: lab.check_ando_hiai(mu, t, params["p"], **kw)
    if name == "ando-hiai-dual":
        return lambda: lab.check_ando_hiai_dual(mu, t, params["p"], **kw)
    if name == "lemma-th1":
        return lambda: lab.check_lemma_th1(mu, t, **kw)
    if name == "tsallis":
        def run():
            P, _ = solve(mu, t, opts)
            X = _tsallis_point(P, params["mode"], params["delta"], rng)
            return lab.check_tsallis_criterion(X, mu, t, **kw)
        return run
    if name == "info-mono":
        phi = maps.catalog_map(params["map"], params["n"], rng)
        return lambda: lab.check_info_monotonicity(mu, t, phi, **kw)
    if name == "atom-reduction":
        return lambda: lab.check_atom_reduction(mu, t, params["w"], **kw)
    if name == "dominated-reduction":
        if params["constructed"]:
            B = arithmetic_mean(mu) + spd.random_psd_bump(mu.dim, rng, size=float(rng.uniform(0.01, 1.0)))
            B = B + 1e-3 * spd.norm(B) * spd.identity(mu.dim)
            big = append_atom(mu, B, float(rng.uniform(0.05, 0.5)))
            return lambda: lab.check_dominated_reduction(big, t, big.size - 1, **kw)
        index = int(rng.integers(mu.size))
        return lambda: lab.check_dominated_reduction(mu, t, index, **kw)
    raise KeyError(f"unknown theorem {name!r}; choose from {', '.join(THEOREMS)}")


def parse_digest(digest: str) -> tuple[str, dict]:
    name, *items = digest.split(";")
    params = {}
    for item in items:
        key, _, raw = item.partition("=")
        if raw in ("True", "False"):
            params[key] = raw == "True"
        else:
            for conv in (int, float):
                try:
                    params[key] = conv(raw)
                    break
                except ValueError:
                    continue
            else:
                params[key] = raw
    return name, params


def replay(digest: str, tol: float = lab.DEFAULT_TOL, opts: SolveOptions | None = None) -> lab.CheckReport:
    """Re-run the trial recorded in ``digest``."""
    name, params = parse_digest(digest)
    if "seed" not in params or "trial" not in params:
        raise ValueError(f"digest {digest!r} carries no seed/trial and cannot be replayed")
    if "cond" in params:
        params["cond"] = float(params["cond"])
    return build_check(name, params, tol, opts)()


def _blank():
    return {"trials": 0, "held": 0, "skipped": 0, "failures": 0, "defects": 0, "nonconverged": 0,
            "worst_margin": None}


def fuzz(cfg: FuzzConfig, opts: SolveOptions | None = None) -> dict:
    """Run ``cfg.trials`` trials of each theorem and summarize.

    A failure is a report with ``holds = False``; it counts as a defect when
    the margin is below ``-10 * tol``.  Non-convergent solves are counted and
    skipped.  Also records, as data only, the dual Ando-Hiai margin under the
    norm-only normalization.
    """
    per = {name: _blank() for name in cfg.theorems}
    defects = []
    stated = {"trials": 0, "violations": 0, "worst_margin": None}
    for name in cfg.theorems:
        stats = per[name]
        for trial in range(cfg.trials):
            params = draw_params(name, cfg, cfg.seed, trial)
            stats["trials"] += 1
            try:
                report = build_check(name, params, cfg.tol, opts)()
            except (NonConvergenceError, spd.SingularMatrixError) as exc:
                log.warning("non-convergent solve in %s trial %d: %s", name, trial, exc)
                stats["nonconverged"] += 1
                continue
            if report.skipped:
                stats["skipped"] += 1
                continue
            m = report.margin
            stats["worst_margin"] = m if stats["worst_margin"] is None else min(stats["worst_margin"], m)
            if report.holds:
                stats["held"] += 1
            else:
                stats["failures"] += 1
                if m < -10 * cfg.tol:
                    stats["defects"] += 1
                    defects.append({"name": name, "margin": m, "digest": report.digest})
            if name == "ando-hiai-dual":
                _, irng = _streams(name, params["seed"], params["trial"])
                mu = random_measure(irng, params["n"], params["k"], params["cond"])
                try:
                    dm = lab.dual_under_stated_premise(mu, params["t"], params["p"], opts)
                except (NonConvergenceError, spd.SingularMatrixError):
                    continue
                stated["trials"] += 1
                stated["violations"] += int(dm < -cfg.tol)
                stated["worst_margin"] = dm if stated["worst_margin"] is None else min(stated["worst_margin"], dm)
    cfg_dict = asdict(cfg)
    cfg_dict["t_grid"] = list(cfg.t_grid)
    cfg_dict["p_grid"] = list(cfg.p_grid)
    cfg_dict["theorems"] = list(cfg.theorems)
    return {
        "config": cfg_dict,
        "theorems": per,
        "defects": defects,
        "total_defects": len(defects),
        "dual_stated_premise": stated,
    }
