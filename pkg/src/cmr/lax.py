"""Lax matrix, Hamiltonian, Poisson brackets and the Hamiltonian flow."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ArgumentError, DomainError, EvolutionError
from .numdiff import coords_exact
from .potentials import ModelCase, eval_dv, eval_F, eval_v, eval_w
from .tensorcore import (basis_e, commutator, frobenius, identity, imag_unit, kron,
                         roots, swap_factors, zeros)


@dataclass(frozen=True)
class PhasePoint:
    q: tuple
    p: tuple

    def __init__(self, q: Sequence, p: Sequence):
        if len(q) != len(p):
            raise ArgumentError("q and p must have the same length")
        if len(q) < 2:
            raise ArgumentError("need at least two particles")
        object.__setattr__(self, "q", tuple(q))
        object.__setattr__(self, "p", tuple(p))

    @property
    def n(self) -> int:
        return len(self.q)

    @property
    def exact(self) -> bool:
        return coords_exact(self.q) and coords_exact(self.p)


def check_admissible(case: ModelCase, q: Sequence) -> None:
    n = len(q)
    for k in range(n):
        for l in range(k + 1, n):
            try:
                eval_w(case, q[k] - q[l])
            except DomainError as exc:
                raise DomainError(f"q_{k + 1} - q_{l + 1}: {exc}") from None


def random_point(case: ModelCase, n: int, rng: np.random.Generator,
                 min_gap: float = 0.05) -> PhasePoint:
    """q sorted-uniform in [0.1, 2] with gaps >= min_gap, p uniform in [-1, 1].

    For the trigonometric case q is rescaled by pi/(4a) so that every a*q_k
    and every a*(q_k - q_l) stays inside (-pi/2, pi/2).
    """
    while True:
        q = np.sort(rng.uniform(0.1, 2.0, n))
        if np.all(np.diff(q) >= min_gap):
            break
    if case.kind == "trigonometric":
        q = q * math.pi / (4 * case.a)
    p = rng.uniform(-1.0, 1.0, n)
    return PhasePoint(tuple(float(x) for x in q), tuple(float(x) for x in p))


def random_exact_point(n: int, rng: np.random.Generator) -> PhasePoint:
    """Rational-case point: distinct q_k in {1/10, ..., 2}, p_k in {-1, ..., 1} / 10."""
    num = np.sort(rng.choice(np.arange(1, 21), size=n, replace=False))
    q = [Fraction(int(k), 10) for k in num]
    p = [Fraction(int(rng.integers(-10, 11)), 10) for _ in range(n)]
    return PhasePoint(q, p)


def build_L(case: ModelCase, point: PhasePoint) -> np.ndarray:
    """L = diag(p) + i sum_{k != l} w(q_k - q_l) e_kl."""
    check_admissible(case, point.q)
    n, exact = point.n, point.exact
    L = zeros((n, n), exact)
    i = imag_unit(exact)
    for k in range(n):
        L[k, k] = point.p[k]
    for r in roots(n):
        L[r.k - 1, r.l - 1] = i * eval_w(case, r(point.q))
    return L


def lax_derivatives(case: ModelCase, q: Sequence) -> tuple[list, list]:
    """Analytic dL/dp_k = H_k and dL/dq_k = i sum_alpha w'(alpha(q)) alpha_k E_alpha,
    with w' = -F w."""
    check_admissible(case, q)
    n, exact = len(q), coords_exact(q)
    i = imag_unit(exact)
    dp = [basis_e(k, k, n, exact) for k in range(1, n + 1)]
    dq = [zeros((n, n), exact) for _ in range(n)]
    for r in roots(n):
        x = r(q)
        dw = -eval_F(case, x) * eval_w(case, x)
        dq[r.k - 1][r.k - 1, r.l - 1] += i * dw
        dq[r.l - 1][r.k - 1, r.l - 1] -= i * dw
    return dp, dq


def bracket_from_derivatives(dp: list, dq: list) -> np.ndarray:
    """{L_1, L_2} = sum_k dL/dp_k (x) dL/dq_k - dL/dq_k (x) dL/dp_k."""
    out = kron(dp[0], dq[0]) - kron(dq[0], dp[0])
    for a, b in zip(dp[1:], dq[1:]):
        out = out + kron(a, b) - kron(b, a)
    return out


def poisson_bracket_LL(case: ModelCase, point: PhasePoint) -> np.ndarray:
    return bracket_from_derivatives(*lax_derivatives(case, point.q))


def poisson_bracket_fd(case: ModelCase, point: PhasePoint, h: float = 1e-5) -> np.ndarray:
    """Finite-difference {L_1, L_2} over the canonical coordinates."""
    q = np.asarray(point.q, dtype=float)
    p = np.asarray(point.p, dtype=float)
    n = len(q)
    dp, dq = [], []
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        dq.append((build_L(case, PhasePoint(q + e, p)) - build_L(case, PhasePoint(q - e, p))) / (2 * h))
        dp.append((build_L(case, PhasePoint(q, p + e)) - build_L(case, PhasePoint(q, p - e))) / (2 * h))
    return bracket_from_derivatives(dp, dq)


def gauged_lax(L: np.ndarray, dp: list, dq: list, g: np.ndarray, g_inv: np.ndarray,
               A: list) -> tuple[np.ndarray, list, list]:
    """L' = g L g^-1 and its derivatives, using d_k g = -g A_k:
    dL'/dq_k = g (dL/dq_k + [L, A_k]) g^-1."""
    Lp = g @ L @ g_inv
    dpp = [g @ d @ g_inv for d in dp]
    dqp = [g @ (d + commutator(L, Ak)) @ g_inv for d, Ak in zip(dq, A)]
    return Lp, dpp, dqp


def eq2_residual(case: ModelCase, point: PhasePoint, r12: np.ndarray, gauge=None) -> float:
    """|| {L_1,L_2} - [r_12, L (x) 1] + [r_21, 1 (x) L] ||_F.

    ``gauge`` is an optional ``(g, g_inv, A)`` triple; the bracket and
    commutators are then taken for ``L' = g L g^-1``.
    """
    n = point.n
    if r12.shape != (n * n, n * n):
        raise ArgumentError(f"r-matrix shape {r12.shape} does not match n={n}")
    L = build_L(case, point)
    dp, dq = lax_derivatives(case, point.q)
    if gauge is not None:
        g, g_inv, A = gauge
        L, dp, dq = gauged_lax(L, dp, dq, g, g_inv, A)
    one = identity(n, point.exact)
    L1, L2 = kron(L, one), kron(one, L)
    lhs = bracket_from_derivatives(dp, dq)
    rhs = commutator(r12, L1) - commutator(swap_factors(r12), L2)
    return frobenius(lhs - rhs)


def hamiltonian(case: ModelCase, point: PhasePoint):
    check_admissible(case, point.q)
    q, p = point.q, point.p
    h = sum(x * x for x in p) / 2
    for k in range(point.n):
        for l in range(k + 1, point.n):
            h = h + eval_v(case, q[k] - q[l])
    return h


def trace_invariants(L: np.ndarray, kmax: int) -> list:
    if kmax < 1:
        raise ArgumentError("kmax must be >= 1")
    out, P = [], L
    for _ in range(kmax):
        out.append(np.trace(P))
        P = P @ L
    return out


# ----------------------------------------------------------------------
# Hamiltonian flow

def _cells(case: ModelCase, q: np.ndarray) -> np.ndarray:
    """Which singular-wall cell each pair difference q_k - q_l lies in.

    A finite step that changes a cell has jumped across a collision, which
    the exact flow never does; the integrator treats that as leaving the
    admissible domain.
    """
    d = (q[:, None] - q[None, :])[np.triu_indices(len(q), 1)]
    if case.kind == "trigonometric":
        return np.floor(case.a * d / math.pi)
    return np.sign(d)


def _rhs(case: ModelCase, q: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(q)
    force = np.zeros(n)
    for k in range(n):
        for l in range(k + 1, n):
            f = eval_dv(case, q[k] - q[l])
            force[k] -= f
            force[l] += f
    return p.copy(), force


@dataclass
class Trajectory:
    case: ModelCase
    dt: float
    q: np.ndarray  # (steps+1, n)
    p: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.q))

    def point(self, i: int) -> PhasePoint:
        return PhasePoint(self.q[i], self.p[i])

    def invariants(self) -> np.ndarray:
        """Columns h, tr L^2, tr L^3 per step (real parts)."""
        rows = []
        for i in range(len(self.q)):
            pt = self.point(i)
            L = build_L(self.case, pt)
            t = trace_invariants(L, 3)
            rows.append((hamiltonian(self.case, pt), t[1].real, t[2].real))
        return np.array(rows)

    def max_drift(self) -> dict:
        inv = self.invariants()
        mom = self.p.sum(axis=1)
        return {
            "h": float(np.max(np.abs(inv[:, 0] - inv[0, 0]))),
            "trL2": float(np.max(np.abs(inv[:, 1] - inv[0, 1]))),
            "trL3": float(np.max(np.abs(inv[:, 2] - inv[0, 2]))),
            "momentum": float(np.max(np.abs(mom - mom[0]))),
        }

    def to_csv(self) -> str:
        n = self.q.shape[1]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"q{k}" for k in range(1, n + 1)]
                   + [f"p{k}" for k in range(1, n + 1)] + ["h", "trL2", "trL3"])
        inv = self.invariants()
        for t, q, p, row in zip(self.times, self.q, self.p, inv):
            w.writerow([repr(float(x)) for x in (t, *q, *p, *row)])
        return buf.getvalue()


def evolve(case: ModelCase, point: PhasePoint, dt: float, steps: int) -> Trajectory:
    """Classic fixed-step RK4 on dq/dt = p, dp_k/dt = -sum_l v'(q_k - q_l)."""
    if not dt > 0:
        raise ArgumentError("dt must be positive")
    check_admissible(case, point.q)
    n = point.n
    qs = np.empty((steps + 1, n))
    ps = np.empty((steps + 1, n))
    q = np.asarray(point.q, dtype=float)
    p = np.asarray(point.p, dtype=float)
    qs[0], ps[0] = q, p
    for i in range(steps):
        try:
            k1q, k1p = _rhs(case, q, p)
            k2q, k2p = _rhs(case, q + 0.5 * dt * k1q, p + 0.5 * dt * k1p)
            k3q, k3p = _rhs(case, q + 0.5 * dt * k2q, p + 0.5 * dt * k2p)
            k4q, k4p = _rhs(case, q + dt * k3q, p + dt * k3p)
            q_new = q + dt / 6 * (k1q + 2 * k2q + 2 * k3q + k4q)
            p_new = p + dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
            check_admissible(case, q_new)
            if np.any(_cells(case, q_new) != _cells(case, q)):
                raise DomainError("a pair of particles crossed a singular wall")
            if not (np.all(np.isfinite(q_new)) and np.all(np.isfinite(p_new))):
                raise DomainError("non-finite state")
        except DomainError as exc:
            traj = Trajectory(case, dt, qs[: i + 1].copy(), ps[: i + 1].copy())
            raise EvolutionError(f"left the admissible domain after step {i}: {exc}",
                                 last_step=i, trajectory=traj) from None
        q, p = q_new, p_new
        qs[i + 1], ps[i + 1] = q, p
    return Trajectory(case, dt, qs, ps)
