"""Degenerate Calogero-Moser potentials and the identities of F = -w'/w.

Rational:      v = 1/x^2,           w = 1/x,           F = 1/x
Hyperbolic:    v = a^2/sinh^2(ax),  w = a/sinh(ax),    F = a coth(ax)
Trigonometric: v = a^2/sin^2(ax),   w = a/sin(ax),     F = a cot(ax)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ArgumentError, DomainError, UnsupportedCaseError
from .tensorcore import Dual

KINDS = ("rational", "hyperbolic", "trigonometric")

# |argument| below this is treated as a singularity in float mode
SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class ModelCase:
    kind: str
    a: float = 1.0
    B: float = field(init=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown case {self.kind!r}; choose from {KINDS}")
        if self.kind != "rational" and not self.a > 0:
            raise ArgumentError("coupling a must be positive")
        B = {"rational": 0, "hyperbolic": self.a ** 2, "trigonometric": -self.a ** 2}[self.kind]
        object.__setattr__(self, "B", B)

    @property
    def a_prime(self) -> complex:
        """a for hyperbolic, i*a for trigonometric; undefined when B = 0."""
        if self.kind == "rational":
            raise UnsupportedCaseError("a' is undefined in the rational case (B = 0)")
        return complex(self.a) if self.kind == "hyperbolic" else 1j * self.a

    @property
    def supports_exact(self) -> bool:
        return self.kind == "rational"

    def B_exact(self):
        """B as an exact scalar (only the rational case is exact)."""
        if self.kind != "rational":
            raise UnsupportedCaseError("exact mode is only available for the rational case")
        return Fraction(0)


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (Fraction, int, Dual))


def _primal(x):
    while isinstance(x, Dual):
        x = x.value
    return x


def _check(case: ModelCase, x) -> None:
    x0 = _primal(x)
    if isinstance(x0, (Fraction, int)):
        if case.kind != "rational":
            raise UnsupportedCaseError("exact arguments need the rational case")
        if x0 == 0:
            raise DomainError("argument 0 is singular")
        return
    x0 = float(x0)
    if not math.isfinite(x0):
        raise DomainError(f"non-finite argument {x0}")
    if case.kind == "trigonometric":
        t = case.a * x0 / math.pi
        if abs(t - round(t)) * math.pi < SINGULAR_TOL:
            raise DomainError(f"a*x = {case.a * x0} is a multiple of pi")
    elif abs(case.a * x0 if case.kind == "hyperbolic" else x0) < SINGULAR_TOL:
        raise DomainError(f"argument {x0} is singular")


def eval_w(case: ModelCase, x):
    _check(case, x)
    if case.kind == "rational":
        return Fraction(1) / x if _is_exact_scalar(x) else 1.0 / x
    a = case.a
    if case.kind == "hyperbolic":
        return a / math.sinh(a * x)
    return a / math.sin(a * x)


def eval_v(case: ModelCase, x):
    w = eval_w(case, x)
    return w * w


def eval_F(case: ModelCase, x):
    _check(case, x)
    if case.kind == "rational":
        return Fraction(1) / x if _is_exact_scalar(x) else 1.0 / x
    a = case.a
    if case.kind == "hyperbolic":
        return a / math.tanh(a * x)
    return a / math.tan(a * x)


def eval_dv(case: ModelCase, x):
    """v'(x) = -2 F w^2, from v = w^2 and w' = -F w."""
    w = eval_w(case, x)
    return -2 * eval_F(case, x) * w * w


def check_identities(case: ModelCase, x, y, h: float = 1e-5) -> tuple[float, float, float]:
    """Residuals of F' = -w^2, F(x)+F(y) = w(x)w(y)/w(x+y) and
    F(x-y)(F(x)-F(y)) + F(x)F(y) = B.

    With exact (Fraction) arguments the derivative is taken with a dual
    number, so all three residuals are exact.
    """
    for arg in (x, y, x + y, x - y):
        _check(case, arg)
    Fx, Fy = eval_F(case, x), eval_F(case, y)
    if _is_exact_scalar(x) and _is_exact_scalar(y):
        dF = eval_F(case, Dual(Fraction(x), Fraction(1))).deriv
        wx = eval_w(case, x)
        r1 = abs(dF + wx * wx)
        B = case.B_exact()
    else:
        dF = (eval_F(case, x + h) - eval_F(case, x - h)) / (2 * h)
        r1 = abs(dF + eval_w(case, x) ** 2)
        B = case.B
    r2 = abs(Fx + Fy - eval_w(case, x) * eval_w(case, y) / eval_w(case, x + y))
    r3 = abs(eval_F(case, x - y) * (Fx - Fy) + Fx * Fy - B)
    return r1, r2, r3
