"""Time the numba and numpy Picard kernels on the same random instances.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--t 0.5] [--json out.json]

Both kernels run from the arithmetic mean to a Thompson step of 1e-12; the
report lists median wall time per solve, iterations, and the Thompson
distance between the two answers.
"""
from __future__ import annotations

import argparse
import json
import statistics
import time

import numpy as np

from meanlab import _kernels, spd
from meanlab.means import arithmetic_mean
from meanlab.measures import random_measure

SHAPES = [(2, 2), (3, 4), (4, 8), (6, 8), (8, 16), (16, 16), (32, 8)]


def _time(fn, mu, t, repeat):
    X0 = arithmetic_mean(mu)
    out = fn(mu.atoms, mu.weights, X0, t, 1e-12, 10_000)
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(mu.atoms, mu.weights, X0, t, 1e-12, 10_000)
        times.append(time.perf_counter() - start)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--t", type=float, default=0.5)
    ap.add_argument("--cond", type=float, default=1e3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None, help="also write the rows to this file")
    args = ap.parse_args(argv)
    if _kernels.picard_numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    # compile outside the timed region
    warm = random_measure(rng, 2, 2, 10)
    _kernels.picard_numba(warm.atoms, warm.weights, arithmetic_mean(warm), args.t, 1e-12, 10)

    rows = []
    print(f"{'n':>3} {'k':>3} {'iters':>6} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8} {'d_T':>9}")
    for n, k in SHAPES:
        mu = random_measure(rng, n, k, args.cond)
        t_nb, (X_nb, it, _, _) = _time(_kernels.picard_numba, mu, args.t, args.repeat)
        t_np, (X_np, _, _, _) = _time(_kernels.picard_numpy, mu, args.t, args.repeat)
        d = spd.thompson(X_nb, X_np)
        rows.append({"n": n, "k": k, "iterations": int(it), "numba_s": t_nb, "numpy_s": t_np,
                     "speedup": t_np / t_nb, "thompson": d})
        print(f"{n:>3} {k:>3} {it:>6} {1e3 * t_nb:>10.3f} {1e3 * t_np:>10.3f} {t_np / t_nb:>8.2f} {d:>9.1e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"t": args.t, "cond": args.cond, "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
