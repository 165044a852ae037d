"""Gauge potentials, the explicit gauge transformation and the r-matrix transform.

For family I (theta = 0, Q' = 0)

    A_k = sum_l A_k^l H_l + sum_{m != l} w(q_m - q_l) (delta_km + omega) e_ml,
    A_k^l = F(q_l - q_k) + omega sum_{m != l} F(q_l - q_m),

and d_k g = -g A_k is solved by

    g(q) = g0 exp(-X n omega sum_i q_i) phi(q) chi(q),

where phi is built from elementary symmetric polynomials of F_l = F(q_l)
and chi = diag(prod_{l != k} 1/w(q_l)).  Family II uses A -> -A^T and
g -> g0 (g_I^T)^-1 (all entries are real for real q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .constr import build_tilde_r_prime, build_X
from .dynr import RSpec, build_r_dynamical, cartan_A
from .errors import ArgumentError, DegeneracyError, DomainError
from .numdiff import FD_STEP, coords_exact, partial
from .potentials import ModelCase, eval_F, eval_w
from .tensorcore import (basis_e, commutator, expm, frobenius, identity, inverse, is_exact, kron,
                         roots, to_complex, zeros)

DEGENERACY_TOL = 1e-9


@dataclass
class GaugePotential:
    n: int
    spec: RSpec
    A: list  # A_1 ... A_n

    def __iter__(self):
        return iter(self.A)

    def __getitem__(self, k):
        return self.A[k]


def _family_I_A(case: ModelCase, q: Sequence, omega) -> list:
    n = len(q)
    exact = coords_exact(q)
    tab = cartan_A(case, q, omega)
    A = []
    for k in range(1, n + 1):
        M = zeros((n, n), exact)
        for l in range(n):
            M[l, l] = tab[k - 1, l]
        for r in roots(n):  # r = lambda_m - lambda_l -> e_ml
            M[r.k - 1, r.l - 1] = eval_w(case, r(q)) * ((k == r.k) + omega)
        A.append(M)
    return A


def build_A(case: ModelCase, q: Sequence, spec: RSpec) -> GaugePotential:
    if spec.family not in ("I", "II"):
        raise ArgumentError("gauge potentials exist only for families I and II")
    A = _family_I_A(case, q, spec.omega)
    if spec.family == "II":
        A = [-M.T for M in A]
    return GaugePotential(len(q), spec, A)


def calA(case: ModelCase, q: Sequence) -> np.ndarray:
    """sum_{l != m} (F(q_l - q_m) H_l + w(q_l - q_m) e_lm), the omega-slope of A_k."""
    n = len(q)
    M = zeros((n, n), coords_exact(q))
    for r in roots(n):
        x = r(q)
        M[r.k - 1, r.k - 1] += eval_F(case, x)
        M[r.k - 1, r.l - 1] += eval_w(case, x)
    return M


def zero_curvature_residual(case: ModelCase, q: Sequence, spec: RSpec, h: float = FD_STEP,
                            richardson: bool = False) -> float:
    """max_{k,l} || d_k A_l - d_l A_k + [A_l, A_k] ||_F."""
    n = len(q)
    A = build_A(case, q, spec).A
    dA = [[partial(lambda x, l=l: build_A(case, x, spec).A[l], q, k, h, richardson)
           for l in range(n)] for k in range(n)]
    worst = 0.0
    for k in range(n):
        for l in range(k + 1, n):
            worst = max(worst, frobenius(dA[k][l] - dA[l][k] + commutator(A[l], A[k])))
    return worst


# ----------------------------------------------------------------------
# phi, chi, g

def _elementary_symmetric(values: list, exact: bool) -> list:
    """e_0 ... e_m of the values (coefficients of prod (1 + x t))."""
    e = [Fraction(1) if exact else 1.0]
    for x in values:
        nxt = e + [0]
        for i in range(len(e), 0, -1):
            nxt[i] = nxt[i] + x * e[i - 1]
        e = nxt
    return e


def _F_single(case: ModelCase, q: Sequence) -> list:
    return [eval_F(case, x) for x in q]


def _check_distinct(F: list) -> None:
    for i in range(len(F)):
        for j in range(i + 1, len(F)):
            d = F[i] - F[j]
            dv = d.value if hasattr(d, "value") else d
            if dv == 0 or (not isinstance(dv, Fraction) and abs(complex(dv)) < DEGENERACY_TOL):
                raise DegeneracyError(f"F(q_{i + 1}) and F(q_{j + 1}) coincide")


def build_phi(case: ModelCase, q: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """phi and its explicit inverse.

    phi_jk = sum over (n-j)-subsets P of {1..n} minus {k} of prod_{l in P} F(q_l)
    (so the last row is all ones), and
    (phi^-1)_jk = (-F_j)^(k-1) prod_{l != j} 1/(F_l - F_j).
    """
    n = len(q)
    exact = coords_exact(q)
    F = _F_single(case, q)
    _check_distinct(F)
    phi = zeros((n, n), exact)
    for k in range(n):
        e = _elementary_symmetric([F[l] for l in range(n) if l != k], exact)
        for j in range(1, n + 1):
            phi[j - 1, k] = e[n - j]
    inv = zeros((n, n), exact)
    for j in range(n):
        denom = 1
        for l in range(n):
            if l != j:
                denom = denom * (F[l] - F[j])
        p = 1
        for k in range(n):
            inv[j, k] = p / denom
            p = p * (-F[j])
    return phi, inv


def build_chi(case: ModelCase, q: Sequence) -> np.ndarray:
    """diag(prod_{l != k} 1/w(q_l))."""
    n = len(q)
    exact = coords_exact(q)
    try:
        w = [eval_w(case, x) for x in q]
    except DomainError as exc:
        raise DomainError(f"chi needs every w(q_l) finite: {exc}") from None
    chi = zeros((n, n), exact)
    for k in range(n):
        v = 1
        for l in range(n):
            if l != k:
                v = v / w[l]
        chi[k, k] = v
    return chi


def _exp_factor(case: ModelCase, q: Sequence, omega, sign: int) -> np.ndarray:
    """exp(sign * (-X n omega sum q))."""
    n = len(q)
    exact = coords_exact(q)
    X = build_X(case, n, exact=exact)
    s = 0
    for x in q:
        s = s + x
    M = X * (-sign * n * omega * s)
    if omega == 0:
        return identity(n, exact)
    return expm(M)


def _as_mode(g0, exact: bool):
    g0 = np.asarray(g0)
    if exact and not is_exact(g0):
        from .tensorcore import to_exact
        return to_exact(g0)
    if not exact and is_exact(g0):
        return to_complex(g0)
    return g0


@dataclass
class Gauge:
    g: np.ndarray
    g_inv: np.ndarray
    A: list

    def as_tuple(self):
        return self.g, self.g_inv, self.A


def _g_family_I(case, q, omega, exact):
    phi, phi_inv = build_phi(case, q)
    chi = build_chi(case, q)
    chi_inv = zeros(chi.shape, exact)
    for k in range(len(q)):
        chi_inv[k, k] = 1 / chi[k, k]
    h = _exp_factor(case, q, omega, +1)
    h_inv = _exp_factor(case, q, omega, -1)
    return h @ phi @ chi, chi_inv @ phi_inv @ h_inv


def build_g(case: ModelCase, q: Sequence, spec: RSpec, g0=None) -> np.ndarray:
    return build_gauge(case, q, spec, g0).g


def build_gauge(case: ModelCase, q: Sequence, spec: RSpec, g0=None) -> Gauge:
    """g, g^-1 (from the explicit inverse formulas) and A_k."""
    n = len(q)
    exact = coords_exact(q)
    if spec.family not in ("I", "II"):
        raise ArgumentError("gauge transformations exist only for families I and II")
    g, g_inv = _g_family_I(case, q, spec.omega, exact)
    if spec.family == "II":
        g, g_inv = g_inv.T.copy(), g.T.copy()
    if g0 is not None:
        g0 = _as_mode(g0, exact)
        g0_inv = inverse(g0)
        g, g_inv = g0 @ g, g_inv @ g0_inv
    return Gauge(g, g_inv, build_A(case, q, spec).A)


def g_ode_residual(case: ModelCase, q: Sequence, spec: RSpec, g0=None, h: float = FD_STEP,
                   richardson: bool = False, relative: bool = False) -> float:
    """max_k || d_k g + g A_k ||_F, optionally divided by || g ||_F.

    The relative form is invariant under g -> g0 g and is the meaningful
    measure when g has large entries (family II, or large omega in the
    hyperbolic case), where the finite-difference error scales with |g|.
    """
    gauge = build_gauge(case, q, spec, g0)
    worst = 0.0
    for k in range(len(q)):
        dg = partial(lambda x: build_g(case, x, spec, g0), q, k, h, richardson)
        worst = max(worst, frobenius(dg + gauge.g @ gauge.A[k]))
    if relative:
        worst /= frobenius(gauge.g)
    return worst


def inhomogeneous_r(case: ModelCase, q: Sequence, spec: RSpec) -> np.ndarray:
    """r(q) + sum_k A_k (x) H_k."""
    n = len(q)
    exact = coords_exact(q)
    out = build_r_dynamical(case, q, spec)
    for k, Ak in enumerate(build_A(case, q, spec).A):
        out = out + kron(Ak, basis_e(k + 1, k + 1, n, exact))
    return out


def transform_r(r: np.ndarray, case: ModelCase, q: Sequence, spec: RSpec, g0=None) -> np.ndarray:
    """r' = (g (x) g)(r + sum_k A_k (x) H_k)(g (x) g)^-1."""
    n = len(q)
    if r.shape != (n * n, n * n):
        raise ArgumentError(f"r-matrix shape {r.shape} does not match n={n}")
    exact = coords_exact(q)
    gauge = build_gauge(case, q, spec, g0)
    M = r
    for k, Ak in enumerate(gauge.A):
        M = M + kron(Ak, basis_e(k + 1, k + 1, n, exact))
    return kron(gauge.g, gauge.g) @ M @ kron(gauge.g_inv, gauge.g_inv)


def gauged_r(case: ModelCase, q: Sequence, spec: RSpec, g0=None) -> np.ndarray:
    """transform_r applied to the family's own dynamical r-matrix."""
    return transform_r(build_r_dynamical(case, q, spec), case, q, spec, g0)


# ----------------------------------------------------------------------
# the phi-conjugation identity behind the omega = 0 constant r-matrix

def build_rho(case: ModelCase, q: Sequence) -> np.ndarray:
    """rho(q) in closed form (F_k = F(q_k)):

        -B sum_{k!=l} 1/(F_k - F_l) (e_kl - e_ll) (x) (e_lk - e_kk)
        + sum_{k!=l} F_k F_l/(F_k - F_l) (e_kl - e_ll) (x) (e_lk - e_kk)
        + sum_{k!=l} F_k e_kk (x) e_kl - sum_{k!=l} F_l e_lk (x) e_ll
    """
    n = len(q)
    exact = coords_exact(q)
    F = _F_single(case, q)
    _check_distinct(F)
    B = case.B_exact() if exact else case.B
    e = lambda i, j: basis_e(i + 1, j + 1, n, exact)
    out = zeros((n * n, n * n), exact)
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            pair = kron(e(k, l) - e(l, l), e(l, k) - e(k, k))
            out = out + ((F[k] * F[l] - B) / (F[k] - F[l])) * pair
            out = out + F[k] * kron(e(k, k), e(k, l)) - F[l] * kron(e(l, k), e(l, l))
    return out


def rho_from_chi(case: ModelCase, q: Sequence) -> np.ndarray:
    """(chi (x) chi)(r~ + sum A~_k (x) H_k)(chi (x) chi)^-1 at omega = 0."""
    chi = build_chi(case, q)
    chi_inv = inverse(chi)
    M = inhomogeneous_r(case, q, RSpec("I", Fraction(0) if coords_exact(q) else 0.0))
    return kron(chi, chi) @ M @ kron(chi_inv, chi_inv)


def appendixC_residual(case: ModelCase, q: Sequence, n: int | None = None) -> float:
    """|| (phi (x) phi) rho - r~' (phi (x) phi) ||_F."""
    if n is not None and n != len(q):
        raise ArgumentError("n does not match len(q)")
    n = len(q)
    exact = coords_exact(q)
    phi, _ = build_phi(case, q)
    PP = kron(phi, phi)
    rt = build_tilde_r_prime(case, n, exact=exact)
    return frobenius(PP @ build_rho(case, q) - rt @ PP)
