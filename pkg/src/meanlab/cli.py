"""Command-line interface: ``meanlab {compute,verify,fuzz,discretize}``.

Exit codes: 0 success (or inequality holds / skipped), 1 usage or input
error, 2 solver non-convergence, 3 inequality defect.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import jsonio, lab, maps, spd
from .fuzz import THEOREMS, FuzzConfig, _tsallis_point, fuzz
from .measures import FAMILIES, discretize, family, random_measure
from .power_mean import NonConvergenceError, SolveOptions, solve

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_DEFECT = 0, 1, 2, 3
MAX_DIM = 64
MAX_ATOMS = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common(p, *fields):
    if "input" in fields:
        p.add_argument("--input", default=None, help="JSON input file, or '-' for stdin")
    p.add_argument("--output", default="-", help="output file (default stdout)")
    if "t" in fields:
        p.add_argument("--t", type=float, default=None, help="power-mean exponent, 0 < |t| <= 1")
    if "p" in fields:
        p.add_argument("--p", type=float, default=None, help="Ando-Hiai exponent p >= 1")
    if "s" in fields:
        p.add_argument("--s", type=float, default=None, help="upper exponent of the sandwich chain")
    if "gen" in fields:
        p.add_argument("--seed", type=int, default=None, help="seed (fallback: $MEANLAB_SEED, then 0)")
        p.add_argument("--n", type=int, default=3, help="matrix dimension (max for fuzz)")
        p.add_argument("--k", type=int, default=4, help="number of atoms (max for fuzz)")
        p.add_argument("--cond", type=float, default=100.0, help="condition-number bound of random atoms")
    if "tol" in fields:
        p.add_argument("--tol", type=float, default=None, help="tolerance")
    if "family" in fields:
        p.add_argument("--family", default=None, help=f"catalog family: {', '.join(FAMILIES)}")
        p.add_argument("--cells", type=int, default=None, help="number of partition cells N")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meanlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("compute", help="power mean of a measure read from JSON")
    _add_common(p, "input", "t", "tol")
    p = sub.add_parser("verify", help="run one inequality checker")
    p.add_argument("--theorem", required=True, help=f"one of: {', '.join(THEOREMS)}")
    _add_common(p, "input", "t", "p", "s", "gen", "tol", "family")
    p = sub.add_parser("fuzz", help="randomized run of every checker")
    p.add_argument("--trials", type=int, default=20)
    _add_common(p, "gen", "tol")
    p = sub.add_parser("discretize", help="atomic measure from a catalog family")
    _add_common(p, "family")
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MEANLAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"MEANLAB_SEED must be an integer, got {env!r}") from None


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"missing parameter --{name}")


def _read_json(path):
    if path is None or path == "-":
        return jsonio.loads(sys.stdin.read(), "<stdin>")
    try:
        with open(path) as fh:
            return jsonio.loads(fh.read(), path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(args, payload):
    text = jsonio.dumps(payload)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc.strerror}") from None


def _check_size(mu):
    if mu.dim > MAX_DIM or mu.size > MAX_ATOMS:
        raise UsageError(f"measure too large: n={mu.dim}, k={mu.size} (limits n <= {MAX_DIM}, k <= {MAX_ATOMS})")


def _t(args):
    _require(args, "t")
    if args.t == 0:
        raise UsageError("t = 0 is excluded: power means are defined only for t in [-1, 1] \\ {0}")
    if abs(args.t) > 1:
        raise UsageError(f"|t| must be at most 1, got {args.t}")
    return args.t


def cmd_compute(args) -> int:
    t = _t(args)
    mu = jsonio.measure_from_json(_read_json(args.input))
    _check_size(mu)
    opts = SolveOptions(tol_thompson=args.tol) if args.tol is not None else SolveOptions()
    try:
        X, report = solve(mu, t, opts)
    except NonConvergenceError as exc:
        _write(args, {"mean": jsonio.matrix_to_json(exc.iterate), "report": exc.report.to_dict()})
        print(f"meanlab: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    _write(args, {"mean": jsonio.matrix_to_json(X), "report": report.to_dict()})
    return EXIT_OK


def _verify_instance(args, rng):
    """Measure plus optional extras from --input, or a seeded random instance."""
    if args.input is None:
        for name in ("n", "k"):
            if getattr(args, name) < 1:
                raise UsageError(f"--{name} must be positive")
        mu = random_measure(rng, args.n, args.k, args.cond)
        return mu, {}
    doc = _read_json(args.input)
    if isinstance(doc, dict) and "measure" in doc:
        mu = jsonio.measure_from_json(doc["measure"], "measure")
        extras = {k: v for k, v in doc.items() if k != "measure"}
    else:
        mu = jsonio.measure_from_json(doc)
        extras = {}
    return mu, extras


def cmd_verify(args) -> int:
    theorem = args.theorem
    if theorem not in THEOREMS:
        raise UsageError(f"unknown theorem {theorem!r}; valid keys: {', '.join(THEOREMS)}")
    tol = lab.DEFAULT_TOL if args.tol is None else args.tol
    if theorem == "discretization":
        _require(args, "family", "cells")
        try:
            fam = family(args.family)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        report = lab.check_discretization(fam, _t(args), args.cells, tol=tol)
        _write(args, report.to_dict())
        return EXIT_OK if report.holds else EXIT_DEFECT
    t = _t(args)
    rng = np.random.default_rng(_seed(args))
    mu, extras = _verify_instance(args, rng)
    _check_size(mu)
    if theorem == "sandwich":
        _require(args, "s")
        report = lab.check_sandwich(mu, t, args.s, tol=tol)
    elif theorem == "ando-hiai":
        _require(args, "p")
        report = lab.check_ando_hiai(mu, t, args.p, tol=tol)
    elif theorem == "ando-hiai-dual":
        _require(args, "p")
        report = lab.check_ando_hiai_dual(mu, t, args.p, tol=tol)
    elif theorem == "lemma-th1":
        report = lab.check_lemma_th1(mu, t, tol=tol)
    elif theorem == "tsallis":
        if "x" in extras:
            X = jsonio.matrix_from_json(extras["x"], "x")
        elif args.input is None:
            X = _tsallis_point(solve(mu, t)[0], "below", 0.01, rng)
        else:
            raise UsageError("missing parameter x: the tsallis check needs a test point in the input document")
        report = lab.check_tsallis_criterion(X, mu, t, tol=tol)
    elif theorem == "info-mono":
        if "map" in extras:
            phi = jsonio.map_from_json(extras["map"], "map")
        else:
            phi = maps.random_kraus(mu.dim, mu.dim, 2, rng)
        report = lab.check_info_monotonicity(mu, t, phi, tol=tol)
    elif theorem == "atom-reduction":
        report = lab.check_atom_reduction(mu, t, float(extras.get("w", 0.5)), tol=tol)
    else:
        report = lab.check_dominated_reduction(mu, t, int(extras.get("index", mu.size - 1)), tol=tol)
    _write(args, report.to_dict())
    return EXIT_OK if report.holds else EXIT_DEFECT


def cmd_fuzz(args) -> int:
    cfg = FuzzConfig(
        n_max=args.n,
        k_max=args.k,
        cond_max=args.cond,
        trials=args.trials,
        seed=_seed(args),
        tol=lab.DEFAULT_TOL if args.tol is None else args.tol,
    )
    summary = fuzz(cfg)
    _write(args, summary)
    return EXIT_OK if summary["total_defects"] == 0 else EXIT_DEFECT


def cmd_discretize(args) -> int:
    _require(args, "family", "cells")
    if args.cells < 1:
        raise UsageError("--cells must be at least 1")
    try:
        fam = family(args.family)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    _write(args, jsonio.measure_to_json(discretize(fam, args.cells)))
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "verify": cmd_verify, "fuzz": cmd_fuzz, "discretize": cmd_discretize}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="meanlab: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, jsonio.FormatError) as exc:
        print(f"meanlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergenceError as exc:
        print(f"meanlab: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (ValueError, KeyError, spd.NotPositiveDefiniteError) as exc:
        print(f"meanlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
