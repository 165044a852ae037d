"""Command-line front end.

    cmr verify --suite all --case rational --n 3 --mode exact
    cmr build X --case rational --n 2
    cmr evolve --case rational --n 2 --q 1,-1 --p 0,0 --dt 1e-3 --steps 10000

Exit codes: 0 when every check passes, 1 when a check fails or a
trajectory leaves the admissible domain, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import constr, dynr, gauge, lax, suites
from .errors import (ArgumentError, DegeneracyError, DomainError, EvolutionError,
                     UnsupportedCaseError)
from .potentials import KINDS, ModelCase
from .tensorcore import matrix_to_json

SCHEMA = "cmr-report/1"
OBJECTS = ("L", "r_dyn", "A", "phi", "chi", "g", "r_tilde_prime", "r_prime", "b_gln", "X",
           "r_cg", "b_cg_plus", "b_cg_minus", "Fhat")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    case: ModelCase
    n: int
    omega: object = 0.0
    family: str = "I"
    seed: int = 0
    tol: float | None = None
    mode: str = "float"
    samples: int = 20
    format: str = "json"
    out: str | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ArgumentError("n must be at least 2")
        if self.tol is not None and not self.tol > 0:
            raise ArgumentError("tol must be positive")
        if self.mode == "exact" and not self.case.supports_exact:
            raise ArgumentError("exact mode is available only for the rational case")
        if self.samples < 1:
            raise ArgumentError("samples must be positive")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _coords(text: str) -> list[Fraction]:
    return [_fraction(t.strip()) for t in text.split(",") if t.strip()]


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--case", choices=KINDS, default="rational")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--omega", type=_fraction, default=Fraction(0))
    p.add_argument("--family", choices=dynr.FAMILIES, default="I")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--mode", choices=("float", "exact"), default="float")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cmr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    _common(v)
    v.add_argument("--suite", action="append", default=None,
                   choices=list(suites.SUITES) + ["all"])

    b = sub.add_parser("build", help="export a matrix or tensor as JSON")
    _common(b)
    b.add_argument("object")
    b.add_argument("--q", type=_coords, default=None)
    b.add_argument("--p", type=_coords, default=None)
    b.add_argument("--random", action="store_true")
    b.add_argument("--k", type=int, default=1, help="index of A_k (1-based)")

    e = sub.add_parser("evolve", help="integrate the Hamiltonian flow with RK4")
    _common(e)
    e.add_argument("--q", type=_coords, default=None)
    e.add_argument("--p", type=_coords, default=None)
    e.add_argument("--random", action="store_true")
    e.add_argument("--dt", type=float, default=1e-3)
    e.add_argument("--steps", type=int, default=1000)
    return parser


def _config(args) -> RunConfig:
    n = args.n
    coords = getattr(args, "q", None)
    if n is None:
        n = len(coords) if coords else 3
    omega = args.omega if args.mode == "exact" else float(args.omega)
    return RunConfig(args.command, ModelCase(args.case, args.a), n, omega, args.family,
                     args.seed, args.tol, args.mode, args.samples, args.format, args.out)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _threads() -> int:
    """CMR_THREADS is honoured as an upper bound; suites currently run on one
    thread, which keeps every report byte-identical."""
    raw = os.environ.get("CMR_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ArgumentError(f"CMR_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ArgumentError("CMR_THREADS must be at least 1")
    return 1


# ----------------------------------------------------------------------
# verify

def cmd_verify(cfg: RunConfig, names: Sequence[str]) -> int:
    _threads()
    results = suites.run_suites(list(names), case=cfg.case, n=cfg.n, omega=cfg.omega,
                                family=cfg.family, seed=cfg.seed, samples=cfg.samples,
                                tol=cfg.tol, exact=cfg.exact)
    checks = {name: [c.to_dict() for c in cs] for name, cs in results.items()}
    failed = sum(c["status"] == "fail" for cs in checks.values() for c in cs)
    doc = {
        "schema": SCHEMA,
        "command": "verify",
        "config": {"case": cfg.case.kind, "a": cfg.case.a, "n": cfg.n, "omega": str(cfg.omega),
                   "family": cfg.family, "seed": cfg.seed, "samples": cfg.samples,
                   "mode": cfg.mode, "tol": cfg.tol},
        "suites": checks,
        "failed": failed,
        "passed": failed == 0,
    }
    _emit(_dump(doc), cfg.out)
    return 0 if failed == 0 else 1


# ----------------------------------------------------------------------
# build

def _point(cfg: RunConfig, args) -> lax.PhasePoint:
    if args.random or args.q is None:
        rng = np.random.default_rng(cfg.seed)
        if cfg.exact:
            return lax.random_exact_point(cfg.n, rng)
        return lax.random_point(cfg.case, cfg.n, rng)
    q = args.q
    p = args.p if args.p is not None else [Fraction(0)] * len(q)
    if len(q) != cfg.n or len(p) != cfg.n:
        raise ArgumentError(f"--q and --p need {cfg.n} comma-separated values")
    if not cfg.exact:
        q, p = [float(x) for x in q], [float(x) for x in p]
    return lax.PhasePoint(q, p)


def build_object(cfg: RunConfig, name: str, args) -> np.ndarray:
    n, case, ex = cfg.n, cfg.case, cfg.exact
    spec = dynr.RSpec(cfg.family, cfg.omega)
    if name in ("L", "r_dyn", "A", "phi", "chi", "g"):
        pt = _point(cfg, args)
        if name == "L":
            return lax.build_L(case, pt)
        if name == "r_dyn":
            return dynr.build_r_dynamical(case, pt.q, spec)
        if name == "A":
            if not 1 <= args.k <= n:
                raise ArgumentError(f"--k must lie in 1..{n}")
            return gauge.build_A(case, pt.q, spec).A[args.k - 1]
        if name == "phi":
            return gauge.build_phi(case, pt.q)[0]
        if name == "chi":
            return gauge.build_chi(case, pt.q)
        return gauge.build_g(case, pt.q, spec)
    if name == "r_tilde_prime":
        return constr.build_tilde_r_prime(case, n, ex)
    if name == "r_prime":
        return constr.build_r_prime(case, n, cfg.omega, family=cfg.family, exact=ex)
    if name == "b_gln":
        return constr.build_b_gln(n, ex)
    if name == "X":
        return constr.build_X(case, n, ex)
    if name == "r_cg":
        return constr.build_r_CG(n, ex)
    if name == "b_cg_plus":
        return constr.build_b_CG_plus(n, ex)
    if name == "b_cg_minus":
        return constr.build_cg_suite(case, n, ex).b_CG_minus
    if name == "Fhat":
        return constr.build_Fhat(n, ex)
    raise UsageError(f"unknown object {name!r}; choose from {', '.join(OBJECTS)}")


def cmd_build(cfg: RunConfig, name: str, args) -> int:
    if name not in OBJECTS:
        raise UsageError(f"unknown object {name!r}; choose from {', '.join(OBJECTS)}")
    M = build_object(cfg, name, args)
    doc = matrix_to_json(M, cfg.n)
    _emit(json.dumps(doc, sort_keys=True) + "\n", cfg.out)
    return 0


# ----------------------------------------------------------------------
# evolve

def cmd_evolve(cfg: RunConfig, args) -> int:
    if cfg.exact:
        raise ArgumentError("evolve runs in float mode only")
    if args.steps < 1:
        raise ArgumentError("steps must be positive")
    pt = _point(cfg, args)
    try:
        traj = lax.evolve(cfg.case, pt, args.dt, args.steps)
        code = 0
        message = None
    except EvolutionError as exc:
        traj, code, message = exc.trajectory, 1, str(exc)
    drift = traj.max_drift()
    if cfg.format == "csv":
        _emit(traj.to_csv(), cfg.out)
        summary = "max drift: " + ", ".join(f"{k}={v:.3e}" for k, v in sorted(drift.items()))
        if message:
            summary += f"; {message}"
        print(summary, file=sys.stderr)
    else:
        doc = {"schema": SCHEMA, "command": "evolve", "steps": len(traj.q) - 1, "dt": args.dt,
               "max_drift": drift, "final": {"q": traj.q[-1].tolist(), "p": traj.p[-1].tolist()},
               "error": message}
        _emit(_dump(doc), cfg.out)
    return code


# ----------------------------------------------------------------------

def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite or ["all"])
        if args.command == "build":
            return cmd_build(cfg, args.object, args)
        return cmd_evolve(cfg, args)
    except (UsageError, ArgumentError, UnsupportedCaseError) as exc:
        print(f"cmr: error: {exc}", file=sys.stderr)
        return 2
    except (DegeneracyError, DomainError) as exc:
        print(f"cmr: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
