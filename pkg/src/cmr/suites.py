"""Verification suites behind ``cmr verify``.

Each suite returns a list of :class:`Check` records.  Suites draw their own
random points from ``default_rng(seed)``, so a suite's output does not
depend on which other suites ran before it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import constr, dynr, gauge, lax
from .errors import ConvergenceError
from .potentials import ModelCase, check_identities
from .tensorcore import frobenius

ALGEBRAIC_TOL = 1e-8
FD_TOL = 1e-6


@dataclass
class Check:
    name: str
    residual: float | None
    tol: float
    status: str  # "pass" | "fail" | "skipped"
    exact: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        if self.residual is None:
            res = None
        elif self.exact and self.residual == 0:
            res = "0"
        else:
            res = float(self.residual)
        out = {"name": self.name, "residual": res, "tol": self.tol, "status": self.status}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SuiteContext:
    case: ModelCase
    n: int
    omega: object = 0.0
    family: str = "I"
    seed: int = 0
    samples: int = 20
    tol: float | None = None
    exact: bool = False
    rng: np.random.Generator = field(init=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)

    def point(self) -> lax.PhasePoint:
        if self.exact:
            return lax.random_exact_point(self.n, self.rng)
        return lax.random_point(self.case, self.n, self.rng)

    def check(self, name: str, residual: float, default_tol: float, note: str = "") -> Check:
        tol = self.tol if self.tol is not None else default_tol
        ok = residual == 0 if self.exact else residual <= tol
        return Check(name, residual, tol, "pass" if ok else "fail", self.exact, note)

    def skipped(self, name: str, why: str) -> Check:
        tol = self.tol if self.tol is not None else ALGEBRAIC_TOL
        return Check(name, None, tol, "skipped", self.exact, why)


def _worst(ctx: SuiteContext, fn: Callable) -> float:
    worst = 0.0
    for _ in range(ctx.samples):
        worst = max(worst, fn(ctx.point()))
    return worst


def suite_identities(ctx: SuiteContext) -> list[Check]:
    r = np.zeros(3)
    for _ in range(ctx.samples):
        x, y = ctx.point().q[:2]
        r = np.maximum(r, check_identities(ctx.case, y, x))
    note = "dual-number derivative" if ctx.exact else "central differences"
    return [ctx.check("F' = -w^2", r[0], FD_TOL, note),
            ctx.check("addition formula F(x)+F(y) = w(x)w(y)/w(x+y)", r[1], ALGEBRAIC_TOL),
            ctx.check("F(x-y)(F(x)-F(y)) + F(x)F(y) = B", r[2], ALGEBRAIC_TOL)]


def suite_theorem1(ctx: SuiteContext) -> list[Check]:
    out = []
    for fam in dynr.FAMILIES:
        spec = dynr.RSpec(fam, ctx.omega)
        res = _worst(ctx, lambda pt: lax.eq2_residual(
            ctx.case, pt, dynr.build_r_dynamical(ctx.case, pt.q, spec)))
        out.append(ctx.check(f"Lax bracket from r_dyn, family {fam}", res, ALGEBRAIC_TOL))
    return out


def suite_prop2(ctx: SuiteContext) -> list[Check]:
    out = []
    for fam in ("I", "II"):
        spec = dynr.RSpec(fam, ctx.omega)

        def res(pt, spec=spec):
            A = gauge.build_A(ctx.case, pt.q, spec).A
            return dynr.eq33_residual(ctx.case, pt.q, A, dynr.build_r_dynamical(ctx.case, pt.q, spec))

        out.append(ctx.check(f"constancy condition on root blocks, family {fam}",
                             _worst(ctx, res), ALGEBRAIC_TOL))
        C = {r: dynr.C_of(r, fam, ctx.n) for r in dynr.roots(ctx.n)}
        bad = dynr.check_C_constraints(C, ctx.n)
        out.append(Check(f"C_alpha constraints, family {fam}", float(bad), 0.0,
                         "pass" if bad == 0 else "fail", True, "violation count"))
    return out


def suite_appendixB(ctx: SuiteContext) -> list[Check]:
    if ctx.n not in (2, 3, 4):
        return [ctx.skipped("Newton probe of the b-system", "probe supports n in {2, 3, 4}")]
    trials = max(ctx.samples, 200 if ctx.n < 4 else 100)
    try:
        rep = dynr.appendixB_solve(ctx.n, ctx.case, trials=trials, seed=ctx.seed)
    except ConvergenceError as exc:
        return [Check("Newton probe of the b-system", None, 0.0, "fail", note=str(exc))]
    per = {"I": [], "II": []}
    for f in rep.families:
        per[f["type"]] += [f["omega"]] * f["count"]
    fams = "; ".join(f"family {k}: {len(v)}" + (f", omega in [{min(v):.3g}, {max(v):.3g}]" if v else "")
                     for k, v in per.items())
    return [
        Check("Newton probe: solutions outside families I and II", float(rep.other), 0.0,
              "pass" if rep.other == 0 else "fail", True,
              f"{rep.converged}/{trials} converged; {fams}; float Newton iteration in every mode"),
        Check("Newton probe: substitution residual of converged solutions",
              rep.max_substitution_residual, ctx.tol or ALGEBRAIC_TOL,
              "pass" if rep.max_substitution_residual <= (ctx.tol or ALGEBRAIC_TOL) else "fail"),
    ]


def _gauged(ctx: SuiteContext, name: str) -> Check | None:
    if ctx.family == "AT":
        return ctx.skipped(name, "family AT has no gauge to a constant r-matrix")
    return None


def suite_theorem3(ctx: SuiteContext) -> list[Check]:
    name = f"zero curvature of A_k, family {ctx.family}"
    skip = _gauged(ctx, name)
    if skip:
        return [skip]
    spec = dynr.RSpec(ctx.family, ctx.omega)
    res = _worst(ctx, lambda pt: gauge.zero_curvature_residual(ctx.case, pt.q, spec,
                                                                 richardson=True))
    return [ctx.check(name, res, FD_TOL)]


def suite_prop4(ctx: SuiteContext) -> list[Check]:
    name = f"d_k g + g A_k = 0 (relative to |g|), family {ctx.family}"
    skip = _gauged(ctx, name)
    if skip:
        return [skip]
    spec = dynr.RSpec(ctx.family, ctx.omega)
    res = _worst(ctx, lambda pt: gauge.g_ode_residual(ctx.case, pt.q, spec, richardson=True,
                                                      relative=True))
    return [ctx.check(name, res, FD_TOL)]


def suite_prop5(ctx: SuiteContext) -> list[Check]:
    res = _worst(ctx, lambda pt: frobenius(gauge.rho_from_chi(ctx.case, pt.q)
                                           - gauge.build_rho(ctx.case, pt.q)))
    return [ctx.check("chi-conjugated r~ equals closed-form rho", res, ALGEBRAIC_TOL)]


def suite_appendixC(ctx: SuiteContext) -> list[Check]:
    res = _worst(ctx, lambda pt: gauge.appendixC_residual(ctx.case, pt.q))
    return [ctx.check("(phi x phi) rho = r~' (phi x phi)", res, ALGEBRAIC_TOL)]


def suite_theorem6(ctx: SuiteContext) -> list[Check]:
    name = f"gauged r' equals the constant closed form, family {ctx.family}"
    skip = _gauged(ctx, name)
    if skip:
        return [skip]
    spec = dynr.RSpec(ctx.family, ctx.omega)
    target = constr.build_r_prime(ctx.case, ctx.n, ctx.omega, family=ctx.family, exact=ctx.exact)
    const = _worst(ctx, lambda pt: frobenius(gauge.gauged_r(ctx.case, pt.q, spec) - target))

    def eq2(pt):
        gg = gauge.build_gauge(ctx.case, pt.q, spec)
        return lax.eq2_residual(ctx.case, pt, target, gg.as_tuple())

    return [ctx.check(name, const, ALGEBRAIC_TOL),
            ctx.check(f"Lax bracket of g L g^-1 from constant r', family {ctx.family}",
                      _worst(ctx, eq2), ALGEBRAIC_TOL)]


def suite_cg(ctx: SuiteContext) -> list[Check]:
    cg = constr.build_cg_suite(ctx.case, ctx.n, ctx.exact)
    out = [ctx.check(f"(i) {k}", v, ALGEBRAIC_TOL) for k, v in constr.sl2_relations(cg).items()]
    out.append(ctx.check("(ii) key relation", constr.key_relation_residual(ctx.case, ctx.n, ctx.exact),
                         ALGEBRAIC_TOL))
    if ctx.case.kind == "rational":
        why = "a' is undefined at B = 0"
        return out + [ctx.skipped("(iii) u-conjugation", why), ctx.skipped("(iv) standard form", why)]
    out.append(ctx.check("(iii) u-conjugation", constr.conjugation_residual(ctx.case, ctx.n),
                         ALGEBRAIC_TOL))
    out.append(ctx.check("(iv) standard form", constr.standard_form_residual(
        ctx.case, ctx.n, float(ctx.omega)), ALGEBRAIC_TOL))
    return out


def suite_cybe(ctx: SuiteContext) -> list[Check]:
    n, case, ex = ctx.n, ctx.case, ctx.exact
    out = [ctx.check("modified CYBE for r~'", constr.cybe_residual(
        constr.build_tilde_r_prime(case, n, ex), case, n), ALGEBRAIC_TOL)]
    if ex:
        rp = constr.build_r_prime(case, n, ctx.omega, exact=True)
        label = "modified CYBE for r'(omega, g0 = 1)"
    else:
        rp = constr.build_r_prime(case, n, ctx.omega, constr.random_g0(n, ctx.rng))
        label = "modified CYBE for r'(omega, random g0)"
    out.append(ctx.check(label, constr.cybe_residual(rp, case, n), ALGEBRAIC_TOL))
    for name, T in (("b_gln", constr.build_b_gln(n, ex)),
                    ("b_CG+", constr.build_b_CG_plus(n, ex)),
                    ("b_CG-", constr.build_cg_suite(case, n, ex).b_CG_minus)):
        out.append(ctx.check(f"CYBE for {name}", constr.cybe_residual(T, None, n, B=0),
                             ALGEBRAIC_TOL))
    return out


SUITES: dict[str, Callable[[SuiteContext], list[Check]]] = {
    "identities": suite_identities,
    "theorem1": suite_theorem1,
    "prop2": suite_prop2,
    "theorem3": suite_theorem3,
    "prop4": suite_prop4,
    "prop5": suite_prop5,
    "theorem6": suite_theorem6,
    "cg": suite_cg,
    "cybe": suite_cybe,
    "appendixB": suite_appendixB,
    "appendixC": suite_appendixC,
}


def run_suites(names: list[str], **kwargs) -> dict[str, list[Check]]:
    """Run the named suites (``"all"`` expands to every suite) with a fresh
    context per suite."""
    if "all" in names:
        names = list(SUITES)
    return {name: SUITES[name](SuiteContext(**kwargs)) for name in names}
