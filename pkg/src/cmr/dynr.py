"""Momentum-independent dynamical r-matrices of the standard Lax matrix.

The general form is

    r(q) = -sum_a F_a E_a (x) E_-a + 1/2 sum_a w_a (C_a - K_a) (x) E_a + 1 (x) Q(q)

with Cartan-valued C_a.  Three families are constructible:

* ``AT``: C = 0, Q = 0 (the original Avan-Talon matrix);
* ``I``:  C_a = -H_a with the Q(q) that makes r gauge-equivalent to a constant;
* ``II``: C_a = +H_a, the image of family I under r -> -(dagger (x) dagger) r.

The module also carries the algebraic system the root part of the gauge
potential must satisfy and a random-start Newton probe of its solutions.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ArgumentError, ConvergenceError
from .lax import check_admissible
from .numdiff import coords_exact
from .potentials import ModelCase, eval_F, eval_w
from .tensorcore import (H_root, K_root, Root, basis_e, dagger2, identity, kron, positive_roots,
                         roots, zeros)

FAMILIES = ("AT", "I", "II")


@dataclass(frozen=True)
class RSpec:
    family: str = "I"
    omega: object = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArgumentError(f"unknown family {self.family!r}; choose from {FAMILIES}")

    theta = 0
    Qprime = 0


def C_of(root: Root, family: str, n: int, exact: bool = False) -> np.ndarray:
    """The Cartan element C_alpha of a family."""
    if family == "AT":
        return zeros((n, n), exact)
    sign = -1 if family == "I" else 1
    return sign * H_root(root.k, root.l, n, exact)


def cartan_A(case: ModelCase, q: Sequence, omega) -> np.ndarray:
    """A_k^l = F(q_l - q_k) + omega sum_{m != l} F(q_l - q_m), as an (n, n)
    object/float table indexed [k, l] (0-based).  F_{l-l} is taken as 0."""
    n = len(q)
    exact = coords_exact(q)
    tab = np.empty((n, n), dtype=object if exact else float)
    Fd = {}
    for k in range(n):
        for l in range(n):
            if k != l:
                Fd[l, k] = eval_F(case, q[l] - q[k])
    for l in range(n):
        row = 0
        for m in range(n):
            if m != l:
                row = row + Fd[l, m]
        for k in range(n):
            tab[k, l] = (Fd[l, k] if k != l else 0) + omega * row
    return tab


def build_Q(case: ModelCase, q: Sequence, spec: RSpec) -> np.ndarray:
    """Q(q) for the gauge-compatible families (theta = 0, Q' = 0).

    Family I:  Q = -sum_k A_k^k H_k - omega sum_a w_a E_a.
    Family II: -Q_I^dagger (real entries, so the transpose).
    """
    n = len(q)
    exact = coords_exact(q)
    if spec.family == "AT":
        return zeros((n, n), exact)
    tab = cartan_A(case, q, spec.omega)
    Q = zeros((n, n), exact)
    for k in range(n):
        Q[k, k] = -tab[k, k]
    for r in roots(n):
        Q[r.k - 1, r.l - 1] = -spec.omega * eval_w(case, r(q))
    if spec.family == "II":
        Q = -Q.T
    return Q


def build_r_general(case: ModelCase, q: Sequence, C: dict, Q: np.ndarray) -> np.ndarray:
    """r(q) from arbitrary Cartan elements ``C[root]`` and a gl_n element Q."""
    check_admissible(case, q)
    n = len(q)
    exact = coords_exact(q)
    out = zeros((n * n, n * n), exact)
    for r in roots(n):
        x = r(q)
        E = basis_e(r.k, r.l, n, exact)
        Em = basis_e(r.l, r.k, n, exact)
        out = out - eval_F(case, x) * kron(E, Em)
        out = out + (eval_w(case, x) / 2) * kron(C[r] - K_root(r.k, r.l, n, exact), E)
    return out + kron(identity(n, exact), Q)


def build_r_dynamical(case: ModelCase, q: Sequence, spec: RSpec) -> np.ndarray:
    n = len(q)
    exact = coords_exact(q)
    C = {r: C_of(r, spec.family, n, exact) for r in roots(n)}
    return build_r_general(case, q, C, build_Q(case, q, spec))


def dual_r(r: np.ndarray) -> np.ndarray:
    """r -> -(dagger (x) dagger) r, which maps solutions for a Hermitian L to solutions."""
    return -dagger2(r)


def check_C_constraints(C: dict, n: int) -> int:
    """Count violations of C_-a = -C_a and beta(C_a) = alpha(C_b) (exact integers)."""
    bad = 0
    for a in roots(n):
        Ca = np.rint(np.real(np.asarray(C[a], dtype=complex))).astype(int)
        Cma = np.rint(np.real(np.asarray(C[-a], dtype=complex))).astype(int)
        if np.any(Ca != -Cma):
            bad += 1
        for b in roots(n):
            Cb = np.rint(np.real(np.asarray(C[b], dtype=complex))).astype(int)
            if b(np.diag(Ca)) != a(np.diag(Cb)):
                bad += 1
    return bad


# ----------------------------------------------------------------------
# the algebraic system for the constants b_k^alpha

class _RootSystem:
    """Index tables for vectorised evaluation of the b-system."""

    def __init__(self, n: int):
        self.n = n
        self.roots = roots(n)
        self.pos = positive_roots(n)
        N = len(self.roots)
        self.index = {r: i for i, r in enumerate(self.roots)}
        self.V = np.array([r.vector(n) for r in self.roots])
        self.K = np.array([[(i == r.k) + (i == r.l) for i in range(1, n + 1)] for r in self.roots],
                          dtype=float)
        self.neg = np.zeros((N, N))
        self.c = np.zeros((N, N))
        self.sum_idx = np.zeros((N, N), dtype=int)
        for i, a in enumerate(self.roots):
            for j, b in enumerate(self.roots):
                if b == -a:
                    self.neg[i, j] = 1
                s = a + b
                if s is not None:
                    # [E_a, E_b] = c E_{a+b}
                    self.c[i, j] = 1 if a.l == b.k else -1
                    self.sum_idx[i, j] = self.index[s]
        # positive-root parametrisation of C: C[root] = sign * Cpos[pos index]
        self.C_src = np.array([self.pos.index(r if r.k < r.l else -r) for r in self.roots])
        self.C_sign = np.array([1.0 if r.k < r.l else -1.0 for r in self.roots])

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """Exact Jacobian J0 + T.x of the quadratic system (tables built once)."""
        if not hasattr(self, "_J0"):
            zero, eye = np.zeros(self.size), np.eye(self.size)
            cols = lambda y: np.column_stack(
                [(self.normalized_residual(y + e) - self.normalized_residual(y - e)) / 2 for e in eye])
            self._J0 = cols(zero)
            self._T = np.stack([cols(e) - self._J0 for e in eye], axis=2)
        return self._J0 + self._T @ x

    @property
    def size(self) -> int:
        return self.n * len(self.roots) + self.n * len(self.pos)

    def unpack(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        N, n = len(self.roots), self.n
        b = x[: n * N].reshape(N, n)
        Cpos = x[n * N:].reshape(len(self.pos), n)
        C = self.C_sign[:, None] * Cpos[self.C_src]
        return b, C

    def pack(self, b: np.ndarray, C: np.ndarray) -> np.ndarray:
        Cpos = np.array([C[self.index[r]] for r in self.pos])
        return np.concatenate([b.ravel(), Cpos.ravel()])

    def normalized_residual(self, x: np.ndarray) -> np.ndarray:
        """The system divided by w_a w_b (q-independent):

        -d_{b,-a} a_k - c_{a,b} b_k^{a+b} + 1/2 a.(C_b - K_b) b_k^a + (b.b^a) b_k^b,

        followed by tr C_a = 0 and b(C_a) - a(C_b) = 0 for positive roots.
        """
        b, C = self.unpack(x)
        main = (-self.neg[:, :, None] * self.V[:, None, :]
                - self.c[:, :, None] * b[self.sum_idx]
                + 0.5 * (self.V @ (C - self.K).T)[:, :, None] * b[:, None, :]
                + (b @ self.V.T)[:, :, None] * b[None, :, :])
        ip = [self.index[r] for r in self.pos]
        Cp, Vp = C[ip], self.V[ip]
        cons = Vp @ Cp.T - (Vp @ Cp.T).T  # [beta, alpha] -> beta(C_a) - alpha(C_b)
        iu = np.triu_indices(len(ip), 1)
        return np.concatenate([main.ravel(), Cp.sum(axis=1), cons[iu]])


def family_constants(family: str, n: int, omega) -> tuple[np.ndarray, np.ndarray]:
    """(b, C) tables of a family: b_k^{m-l} = delta_km + omega (I) or delta_kl + omega (II)."""
    rs = _RootSystem(n)
    b = np.empty((len(rs.roots), n))
    C = np.empty((len(rs.roots), n))
    for i, r in enumerate(rs.roots):
        hit = r.k if family == "I" else r.l
        b[i] = [(k == hit) + omega for k in range(1, n + 1)]
        C[i] = (-1 if family == "I" else 1) * r.vector(n)
    return b, C


def b_system_residual(case: ModelCase, q: Sequence, b: np.ndarray, C: np.ndarray) -> float:
    """Max-abs residual of the (unnormalised) b-system at coordinates q, with
    A_k^a = w_a b_k^a and a.r^b = 1/2 w_b a.(C_b - K_b)."""
    rs = _RootSystem(len(q))
    w = np.array([eval_w(case, r(q)) for r in rs.roots], dtype=float)
    x = rs.pack(b, C)
    main = rs.normalized_residual(x)[: len(rs.roots) ** 2 * rs.n].reshape(len(rs.roots), len(rs.roots), rs.n)
    return float(np.max(np.abs(main * (w[:, None] * w[None, :])[:, :, None])))


def eq33_residual(case: ModelCase, q: Sequence, A: list, r: np.ndarray) -> float:
    """Max-abs residual of the E_a (x) E_b components of the constancy
    condition, evaluated from built objects: A_k^a read off A_k, r_i^b read
    off the H_i (x) E_b block of r, w from the potential."""
    n = len(q)
    r = np.asarray(r).reshape(n, n, n, n)  # [a, c, b, d]
    R = roots(n)
    w = {a: eval_w(case, a(q)) for a in R}

    def Acomp(k, a):
        return A[k][a.k - 1, a.l - 1]

    def r_i(i, b):
        return r[i, b.k - 1, i, b.l - 1]

    worst = 0.0
    for a in R:
        va = [int(x) for x in a.vector(n)]
        for b in R:
            vb = [int(x) for x in b.vector(n)]
            s = a + b
            c = (1 if a.l == b.k else -1) if s is not None else 0
            a_dot_rb = sum(va[i] * r_i(i, b) for i in range(n))
            b_dot_Aa = sum(vb[j] * Acomp(j, a) for j in range(n))
            for k in range(n):
                val = a_dot_rb * Acomp(k, a) + b_dot_Aa * Acomp(k, b)
                if b == -a:
                    val += va[k] * w[a] ** 2
                if c:
                    val -= c * w[a] * w[b] / w[s] * Acomp(k, s)
                worst = max(worst, abs(complex(val)))
    return worst


@dataclass
class NewtonOutcome:
    converged: bool
    residual: float
    iterations: int
    x: np.ndarray


def damped_newton(rs: _RootSystem, x0: np.ndarray, tol: float = 1e-12,
                  max_iter: int = 200, stall_window: int = 20) -> NewtonOutcome:
    """Gauss-Newton on the normalised system; halve the step while the
    residual does not decrease.

    A run whose residual has not halved over ``stall_window`` iterations is
    creeping towards a nonzero local minimum and is stopped as unconverged.
    """
    x = x0.copy()
    res = rs.normalized_residual(x)
    nr = float(np.linalg.norm(res))
    history = [nr]
    for it in range(max_iter):
        if nr < tol:
            return NewtonOutcome(True, nr, it, x)
        if len(history) > stall_window and nr > 0.5 * history[-stall_window - 1]:
            return NewtonOutcome(False, nr, it, x)
        J = rs.jacobian(x)
        step = np.linalg.lstsq(J, -res, rcond=None)[0]
        t = 1.0
        while True:
            xn = x + t * step
            rn = rs.normalized_residual(xn)
            nn = float(np.linalg.norm(rn))
            if nn < nr or t < 2 ** -20:
                break
            t /= 2
        if nn >= nr:
            return NewtonOutcome(False, nr, it, x)
        x, res, nr = xn, rn, nn
        history.append(nr)
    return NewtonOutcome(nr < tol, nr, max_iter, x)


def classify(rs: _RootSystem, x: np.ndarray, tol: float = 1e-8) -> tuple[str, float | None]:
    b, C = rs.unpack(x)
    for family in ("I", "II"):
        b0, C0 = family_constants(family, rs.n, 0.0)
        omega = float(np.mean(b - b0))
        if np.max(np.abs(b - b0 - omega)) < tol and np.max(np.abs(C - C0)) < tol:
            return family, omega
    return "OTHER", None


@dataclass
class ClassificationReport:
    n: int
    case: str
    trials: int
    converged: int
    families: list
    other: int
    nonconverged: int
    max_substitution_residual: float

    def to_dict(self) -> dict:
        return {"n": self.n, "case": self.case, "trials": self.trials,
                "converged": self.converged, "families": self.families,
                "other": self.other}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def appendixB_solve(n: int, case: ModelCase, trials: int = 200, seed: int = 0,
                    q: Sequence | None = None) -> ClassificationReport:
    """Random-start Newton probe of the b-system.

    Starts are uniform in [-2, 2] per unknown (the b_k^alpha and the Cartan
    components of C_alpha for positive alpha).  Every converged solution is
    classified as family I(omega), II(omega) or OTHER and re-checked with
    the unnormalised residual at admissible coordinates ``q``.
    """
    if n not in (2, 3, 4):
        raise ArgumentError("the probe supports n in {2, 3, 4}")
    if trials < 100:
        raise ArgumentError("use at least 100 trials")
    rng = np.random.default_rng(seed)
    if q is None:
        from .lax import random_point
        q = random_point(case, n, rng).q
    rs = _RootSystem(n)
    found, other, nonconv = [], 0, 0
    worst = 0.0
    for _ in range(trials):
        out = damped_newton(rs, rng.uniform(-2.0, 2.0, rs.size))
        if not out.converged:
            nonconv += 1
            continue
        fam, omega = classify(rs, out.x)
        if fam == "OTHER":
            other += 1
            continue
        b, C = rs.unpack(out.x)
        worst = max(worst, b_system_residual(case, q, b, C))
        found.append((fam, round(omega, 8)))
    if nonconv > trials / 2:
        raise ConvergenceError(f"{nonconv} of {trials} Newton trials did not converge")
    counts = Counter(found)
    families = [{"type": f, "omega": om, "count": c}
                for (f, om), c in sorted(counts.items(), key=lambda t: (t[0][1], t[0][0]))]
    return ClassificationReport(n, case.kind, trials, len(found) + other, families, other,
                                nonconv, worst)
