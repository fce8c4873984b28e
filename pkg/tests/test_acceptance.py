"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every criterion records a single ``ACCEPTANCE <n> PASS|FAIL`` line, shown in
the pytest terminal summary.  Run standalone with
``python3 tests/test_acceptance.py`` to print the lines directly.
"""
from __future__ import annotations

import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE_LINES  # noqa: E402

from meanlab import _kernels, cli, lab, maps, spd  # noqa: E402
from meanlab.fuzz import FuzzConfig, build_check, draw_params  # noqa: E402
from meanlab.measures import (  # noqa: E402
    FAMILIES,
    family,
    new_measure,
    pushforward_congruence,
    pushforward_inv,
    pushforward_scale,
    random_measure,
)
from meanlab.power_mean import SolveOptions, commuting_oracle, iteration_bound, solve  # noqa: E402

TOL = 1e-8
SIGNED_T = (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0)


def _rng(criterion):
    return np.random.default_rng([20261015, criterion])


def _record(n, title, ok, summary, started):
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {title} -- {summary} ({time.perf_counter() - started:.1f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _instance(rng, n_max=6, k_max=8, cond=1e3):
    return random_measure(rng, int(rng.integers(1, n_max + 1)), int(rng.integers(1, k_max + 1)), cond)


def test_1_commuting_oracle():
    t0 = time.perf_counter()
    rng = _rng(1)
    worst = 0.0
    for _ in range(200):
        n, k = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        rows = np.exp(rng.uniform(-0.5, 0.5, size=(k, n)) * math.log(1e3))
        w = np.maximum(rng.dirichlet(np.ones(k)), 1e-3)
        mu = new_measure([np.diag(r) for r in rows], w / w.sum())
        for t in SIGNED_T:
            X, _ = solve(mu, t)
            ref = commuting_oracle(mu.weights, rows, t)
            d = np.real(np.diag(ref))
            err = max(np.max(np.abs(np.diag(X) - d) / d), np.max(np.abs(X - np.diag(np.diag(X)))) / d.min())
            worst = max(worst, float(err))
    _record(1, "commuting-oracle equivalence", worst <= 1e-10,
            f"1200 solves, worst relative error {worst:.2e} (limit 1e-10)", t0)


def test_2_fixed_point_contract():
    t0 = time.perf_counter()
    rng = _rng(2)
    over_bound = 0
    worst_kamei = 0.0
    worst_step = 0.0
    unconverged = 0
    for _ in range(200):
        mu = _instance(rng, 6, 8, 1e4)
        t = float(rng.choice([0.1, 0.25, 0.5, 0.75, 1.0])) * float(rng.choice([-1, 1]))
        X, rep = solve(mu, t)
        unconverged += not rep.converged
        worst_step = max(worst_step, rep.final_step)
        over_bound += rep.iterations > iteration_bound(rep.first_step, abs(t), 1e-12)
        worst_kamei = max(worst_kamei, rep.kamei_residual / spd.norm(X))
    ok = unconverged == 0 and over_bound == 0 and worst_step <= 1e-12 and worst_kamei <= 1e-9
    _record(2, "fixed-point contract", ok,
            f"200 instances, cond<=1e4: {over_bound} over iteration bound, worst step {worst_step:.1e}, "
            f"worst relative Kamei residual {worst_kamei:.1e} (limit 1e-9)", t0)


@pytest.mark.slow
def test_3_sandwich():
    t0 = time.perf_counter()
    rng = _rng(3)
    worst = math.inf
    for _ in range(1000):
        mu = _instance(rng)
        for _ in range(5):
            t, s = sorted(rng.uniform(0.1, 1.0, size=2))
            worst = min(worst, lab.check_sandwich(mu, float(t), float(s), tol=TOL).margin)
    _record(3, "sandwich chain", worst >= -TOL, f"5000 (t,s) pairs, worst relative margin {worst:.2e}", t0)


@pytest.mark.slow
def test_4_ando_hiai():
    t0 = time.perf_counter()
    rng = _rng(4)
    worst_norm_excess = -math.inf
    worst_order = math.inf
    worst_p1 = math.inf
    worst_dual = math.inf
    worst_dual_p1 = math.inf
    for _ in range(500):
        n, k = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        t = float(rng.choice([0.25, 0.5, 0.75, 1.0]))
        base = rng.integers(2**32)
        for p in (1.0, 1.5, 2.0, 3.0, 5.0):
            # atoms are raised to the power p: keep cond(A^p) <= 1e4
            mu = random_measure(np.random.default_rng(base), n, k, 1e4 ** (1 / p))
            r = lab.check_ando_hiai(mu, t, p, tol=TOL)
            worst_norm_excess = max(worst_norm_excess, r.details["image_norm"] - 1.0)
            worst_order = min(worst_order, r.details["order_margin"])
            d = lab.check_ando_hiai_dual(mu, t, p, tol=TOL)
            worst_dual = min(worst_dual, d.margin)
            if p == 1.0:
                worst_p1 = min(worst_p1, r.margin)
                worst_dual_p1 = min(worst_dual_p1, d.margin)
    ok = (worst_norm_excess <= TOL and worst_order >= -TOL and worst_p1 >= -1e-12
          and worst_dual >= -TOL and worst_dual_p1 >= -1e-12)
    _record(4, "Ando-Hiai and dual", ok,
            f"2500 checks each: max ||P_t/p(nu)||-1 = {worst_norm_excess:.1e}, worst order margin {worst_order:.2e}, "
            f"p=1 worst {worst_p1:.1e}; dual worst {worst_dual:.2e}, dual p=1 worst {worst_dual_p1:.1e}", t0)


def test_5_lemma_checkers():
    t0 = time.perf_counter()
    cfg = FuzzConfig(trials=200, seed=5, cond_max=1e3, t_grid=(0.25, 0.5, 1.0))
    parts = []
    ok = True
    for name in ("lemma-th1", "tsallis", "atom-reduction", "dominated-reduction"):
        failures = skipped = 0
        worst = math.inf
        worst_dist = 0.0
        for trial in range(cfg.trials):
            r = build_check(name, draw_params(name, cfg, cfg.seed, trial), TOL)()
            if r.skipped:
                skipped += 1
                continue
            failures += not r.holds
            worst = min(worst, r.margin)
            if name == "atom-reduction":
                worst_dist = max(worst_dist, r.details["thompson"])
        ok &= failures == 0 and skipped < cfg.trials
        if name == "atom-reduction":
            ok &= worst_dist <= 1e-8
            parts.append(f"{name}: {failures} fail, max Thompson {worst_dist:.1e}")
        else:
            parts.append(f"{name}: {failures} fail, {skipped} skipped, worst {worst:.1e}")
    _record(5, "lemma checkers", ok, "; ".join(parts), t0)


@pytest.mark.slow
def test_6_info_monotonicity():
    t0 = time.perf_counter()
    rng = _rng(6)
    worst = {kind: math.inf for kind in maps.CATALOG}
    for _ in range(500):
        mu = _instance(rng, 5, 6)
        for kind in maps.CATALOG:
            phi = maps.catalog_map(kind, mu.dim, rng)
            for t in (-1.0, -0.5, -0.25, 0.25, 0.5, 1.0):
                worst[kind] = min(worst[kind], lab.check_info_monotonicity(mu, t, phi, tol=TOL).margin)
    ok = min(worst.values()) >= -TOL and worst["identity"] >= -1e-12
    _record(6, "information monotonicity", ok,
            "18000 checks, worst by map: " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()), t0)


def test_7_discretization():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for key in FAMILIES:
        fam = family(key)
        for t in (0.25, 0.5, 1.0):
            reps = [lab.check_discretization(fam, t, N, tol=TOL) for N in (4, 16, 64)]
            d = [r.details["thompson"] for r in reps]
            bound = all(r.details["thompson"] <= 2 * r.details["epsilon"] for r in reps)
            dec = d[0] > d[1] > d[2]
            ok &= bound and dec
            parts.append(f"{key} t={t}: d={d[0]:.1e}>{d[1]:.1e}>{d[2]:.1e}" + ("" if bound else " BOUND"))
    _record(7, "discretization convergence", ok, "; ".join(parts), t0)


def test_8_equivariance_duality():
    t0 = time.perf_counter()
    rng = _rng(8)
    hom = con = dual = uniq = 0.0
    for _ in range(200):
        mu = _instance(rng, 5, 6)
        n = mu.dim
        t = float(rng.choice(SIGNED_T))
        X, _ = solve(mu, t)
        alpha = float(np.exp(rng.uniform(-4, 4)))
        Y, _ = solve(pushforward_scale(mu, alpha), t)
        hom = max(hom, spd.norm(Y - alpha * X) / spd.norm(Y))
        C = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) + np.eye(n)
        Z, _ = solve(pushforward_congruence(mu, C), t)
        con = max(con, spd.norm(Z - spd.congruence(C, X)) / spd.norm(Z))
        W, _ = solve(pushforward_inv(mu), -t)
        dual = max(dual, spd.norm(X - spd.inv(W)) / spd.norm(X))
        tp = float(rng.uniform(0.25, 1.0))
        U1, _ = solve(mu, tp, SolveOptions(initial="identity"))
        U2, _ = solve(mu, tp, SolveOptions(initial="arithmetic"))
        uniq = max(uniq, spd.thompson(U1, U2))
    ok = hom <= 1e-9 and con <= 1e-8 and dual <= 1e-13 and uniq <= 10 * 1e-12
    _record(8, "equivariance and duality", ok,
            f"200 each: homogeneity {hom:.1e} (1e-9), congruence {con:.1e} (1e-8), "
            f"inversion {dual:.1e}, uniqueness {uniq:.1e} (1e-11)", t0)


def test_9_cli_contract(capsys):
    import test_cli

    t0 = time.perf_counter()
    problems = []
    for case, argv in sorted(test_cli.CASES.items()):
        code = cli.main(argv)
        out, _ = capsys.readouterr()
        expected = (test_cli.GOLDEN / f"{case}.json").read_text()
        if code != cli.EXIT_OK:
            problems.append(f"{case}: exit {code}")
        elif _kernels.BACKEND == "numba" and out != expected:
            problems.append(f"{case}: output differs from golden")
        elif _kernels.BACKEND != "numba":
            try:
                test_cli._numeric_equal(json.loads(expected), json.loads(out))
            except AssertionError:
                problems.append(f"{case}: output differs numerically from golden")
        cli.main(argv)
        if capsys.readouterr()[0] != out:
            problems.append(f"{case}: not byte-stable")
    data = str(test_cli.DATA / "commuting.json")
    table = {
        cli.EXIT_USAGE: ["compute", "--input", data, "--t", "0"],
        cli.EXIT_NONCONVERGED: ["compute", "--input", data, "--t", "0.001"],
    }
    for want, argv in table.items():
        got = cli.main(argv)
        capsys.readouterr()
        if got != want:
            problems.append(f"{' '.join(argv[:1])}: exit {got}, want {want}")
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(lab, "check_sandwich", lambda *a, **k: lab.CheckReport("sandwich", True, False, -1.0, TOL, ""))
        got = cli.main(test_cli.CASES["verify_sandwich"])
        capsys.readouterr()
        if got != cli.EXIT_DEFECT:
            problems.append(f"defect: exit {got}, want {cli.EXIT_DEFECT}")
    summary = f"{len(test_cli.CASES)} goldens ({_kernels.BACKEND} backend), exit codes 0/1/2/3"
    _record(9, "CLI contract", not problems, summary + ("; " + "; ".join(problems) if problems else ""), t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
