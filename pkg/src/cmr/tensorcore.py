"""Scalars, gl_n basis matrices and tensor-product plumbing.

Every matrix is a plain 2-d numpy array.  Float mode uses ``complex128``;
exact mode uses ``dtype=object`` arrays whose entries are ``int``,
``Fraction``, :class:`GaussianRational` or :class:`Dual` values.

Tensor layout: ``e_ab (x) e_cd`` sits at row ``a*n + c`` and column
``b*n + d`` (0-based), i.e. the ``np.kron`` convention.  Triple tensors
follow the same rule with three factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import ArgumentError

__all__ = [
    "GaussianRational", "Dual", "Root", "I_EXACT",
    "is_exact", "zeros", "identity", "to_exact", "to_complex", "exact_scalar",
    "imag_unit", "basis_e", "H", "E", "H_root", "K_root", "roots", "positive_roots",
    "kron", "kron3", "wedge", "swap_factors", "embed3", "commutator",
    "partial_trace", "transpose2", "dagger2", "conjugate_tensor", "sigma",
    "sigma2", "frobenius", "is_zero", "inverse", "expm", "expm_nilpotent",
    "matrix_to_json", "matrix_from_json",
]


# ----------------------------------------------------------------------
# exact scalars

def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussianRational:
    """Complex number ``re + i*im`` with ``Fraction`` parts; no rounding."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return GaussianRational(x, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out = GaussianRational(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"


I_EXACT = GaussianRational(0, 1)


class Dual:
    """Forward-mode dual number ``value + eps*deriv`` over exact scalars.

    Used to take exact partial derivatives of rational-case objects.
    """

    __slots__ = ("value", "deriv")

    def __init__(self, value, deriv=0):
        self.value = value
        self.deriv = deriv

    @staticmethod
    def _parts(x):
        if isinstance(x, Dual):
            return x.value, x.deriv
        return x, 0

    def __add__(self, other):
        v, d = self._parts(other)
        return Dual(self.value + v, self.deriv + d)

    __radd__ = __add__

    def __sub__(self, other):
        v, d = self._parts(other)
        return Dual(self.value - v, self.deriv - d)

    def __rsub__(self, other):
        v, d = self._parts(other)
        return Dual(v - self.value, d - self.deriv)

    def __mul__(self, other):
        v, d = self._parts(other)
        return Dual(self.value * v, self.value * d + self.deriv * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v, d = self._parts(other)
        return Dual(self.value / v, (self.deriv * v - self.value * d) / (v * v))

    def __rtruediv__(self, other):
        v, d = self._parts(other)
        return Dual(v / self.value,
                    (d * self.value - v * self.deriv) / (self.value * self.value))

    def __neg__(self):
        return Dual(-self.value, -self.deriv)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Dual(1, 0)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return Dual(_conj(self.value), _conj(self.deriv))

    def __eq__(self, other):
        v, d = self._parts(other)
        return self.value == v and self.deriv == d

    def __hash__(self):
        return hash((self.value, self.deriv))

    def __repr__(self):
        return f"Dual({self.value!r}, {self.deriv!r})"


def _conj(x):
    if isinstance(x, (GaussianRational, Dual)):
        return x.conjugate()
    if isinstance(x, (int, Fraction)):
        return x
    return np.conjugate(x)


def exact_scalar(x):
    """Convert an int, Fraction, decimal/fraction string or GaussianRational."""
    if isinstance(x, (GaussianRational, Dual, Fraction)):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise ArgumentError(f"cannot make an exact scalar from {x!r}")


def imag_unit(exact: bool):
    return I_EXACT if exact else 1j


# ----------------------------------------------------------------------
# array helpers

def is_exact(M) -> bool:
    return isinstance(M, np.ndarray) and M.dtype == object


def zeros(shape, exact: bool = False) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=complex)


def identity(n: int, exact: bool = False) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def to_exact(M) -> np.ndarray:
    M = np.asarray(M)
    if M.dtype == object:
        return M
    out = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        x = complex(x)
        if x.imag == 0:
            out[idx] = Fraction(x.real)
        else:
            out[idx] = GaussianRational(Fraction(x.real), Fraction(x.imag))
    return out


def _scalar_complex(x) -> complex:
    if isinstance(x, Dual):
        return _scalar_complex(x.value)
    if isinstance(x, GaussianRational):
        return complex(x)
    return complex(float(x)) if isinstance(x, Fraction) else complex(x)


def to_complex(M) -> np.ndarray:
    M = np.asarray(M)
    if M.dtype != object:
        return M.astype(complex)
    out = np.empty(M.shape, dtype=complex)
    for idx, x in np.ndenumerate(M):
        out[idx] = _scalar_complex(x)
    return out


def _check_compatible(A, B):
    if A.shape != B.shape:
        raise ArgumentError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if is_exact(A) != is_exact(B):
        raise ArgumentError("cannot mix exact and float operands")


def _dim(T, power: int) -> int:
    n = round(T.shape[0] ** (1.0 / power))
    if n ** power != T.shape[0] or T.shape[0] != T.shape[1]:
        raise ArgumentError(f"shape {T.shape} is not a {power}-fold tensor of square matrices")
    return n


# ----------------------------------------------------------------------
# gl_n basis (1-based indices as in the usual matrix notation)

def basis_e(k: int, l: int, n: int, exact: bool = False) -> np.ndarray:
    if not (1 <= k <= n and 1 <= l <= n):
        raise ArgumentError(f"index ({k},{l}) out of range for n={n}")
    M = zeros((n, n), exact)
    M[k - 1, l - 1] = Fraction(1) if exact else 1.0
    return M


def H(k: int, n: int, exact: bool = False) -> np.ndarray:
    return basis_e(k, k, n, exact)


def E(k: int, l: int, n: int, exact: bool = False) -> np.ndarray:
    if k == l:
        raise ArgumentError("E_alpha needs k != l")
    return basis_e(k, l, n, exact)


def H_root(k: int, l: int, n: int, exact: bool = False) -> np.ndarray:
    return basis_e(k, k, n, exact) - basis_e(l, l, n, exact)


def K_root(k: int, l: int, n: int, exact: bool = False) -> np.ndarray:
    return basis_e(k, k, n, exact) + basis_e(l, l, n, exact)


@dataclass(frozen=True)
class Root:
    """The root lambda_k - lambda_l of gl_n (1-based, k != l)."""

    k: int
    l: int

    def __post_init__(self):
        if self.k == self.l:
            raise ArgumentError("a root needs k != l")

    def __neg__(self) -> "Root":
        return Root(self.l, self.k)

    def component(self, i: int) -> int:
        return (i == self.k) - (i == self.l)

    def vector(self, n: int) -> np.ndarray:
        return np.array([self.component(i) for i in range(1, n + 1)], dtype=float)

    def __call__(self, x) -> object:
        """Evaluate on a coordinate vector (0-based sequence)."""
        return x[self.k - 1] - x[self.l - 1]

    def __add__(self, other: "Root"):
        """Sum as a root, or ``None`` when it is not a root."""
        if self.l == other.k and self.k != other.l:
            return Root(self.k, other.l)
        if self.k == other.l and self.l != other.k:
            return Root(other.k, self.l)
        return None


def roots(n: int) -> list[Root]:
    return [Root(k, l) for k in range(1, n + 1) for l in range(1, n + 1) if k != l]


def positive_roots(n: int) -> list[Root]:
    return [Root(k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)]


# ----------------------------------------------------------------------
# tensor operations

def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    _check_compatible(A, B)
    return np.kron(A, B)


def kron3(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(A, B), C)


def wedge(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``A (x) B - B (x) A``."""
    return kron(A, B) - kron(B, A)


def swap_factors(T: np.ndarray) -> np.ndarray:
    """r_12 -> r_21."""
    n = _dim(T, 2)
    return T.reshape(n, n, n, n).transpose(1, 0, 3, 2).reshape(n * n, n * n)


def embed3(T: np.ndarray, slot: str, n: int | None = None) -> np.ndarray:
    """Place a two-fold tensor into factors ``slot`` of a triple tensor."""
    m = _dim(T, 2)
    if n is not None and n != m:
        raise ArgumentError(f"tensor has dimension {m}, expected {n}")
    one = identity(m, is_exact(T))
    if slot == "12":
        return np.kron(T, one)
    if slot == "23":
        return np.kron(one, T)
    if slot == "13":
        t = np.kron(T, one).reshape((m,) * 6)
        return t.transpose(0, 2, 1, 3, 5, 4).reshape(m ** 3, m ** 3)
    raise ArgumentError(f"invalid slot {slot!r}; use '12', '13' or '23'")


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def partial_trace(T: np.ndarray, factor: int) -> np.ndarray:
    """Trace out tensor factor 1 or 2 of a two-fold tensor."""
    n = _dim(T, 2)
    t = T.reshape(n, n, n, n)  # [a, c, b, d]
    out = zeros((n, n), is_exact(T))
    for i in range(n):
        if factor == 1:
            out = out + t[i, :, i, :]
        elif factor == 2:
            out = out + t[:, i, :, i]
        else:
            raise ArgumentError("factor must be 1 or 2")
    return out


def transpose2(T: np.ndarray) -> np.ndarray:
    """(T (x) T): transpose in both factors, which is the full transpose."""
    return T.T.copy()


def conjugate_tensor(T: np.ndarray) -> np.ndarray:
    if is_exact(T):
        return np.vectorize(_conj, otypes=[object])(T)
    return T.conj()


def dagger2(T: np.ndarray) -> np.ndarray:
    """Factorwise Hermitian conjugate ``u1^+ (x) u2^+``."""
    return conjugate_tensor(T).T.copy()


def _antidiagonal(n: int, exact: bool) -> np.ndarray:
    P = zeros((n, n), exact)
    for i in range(n):
        P[i, n - 1 - i] = Fraction(1) if exact else 1.0
    return P


def sigma(M: np.ndarray) -> np.ndarray:
    """e_ij -> e_{n+1-i, n+1-j}."""
    return M[::-1, ::-1].copy()


def sigma2(T: np.ndarray) -> np.ndarray:
    """(sigma (x) sigma) applied to a two-fold tensor."""
    n = _dim(T, 2)
    P = _antidiagonal(n, is_exact(T))
    PP = np.kron(P, P)
    return PP @ T @ PP


def _abs2(x):
    if isinstance(x, GaussianRational):
        return x.abs2()
    if isinstance(x, Dual):
        raise ArgumentError("norm of a dual-number array; take .value first")
    if isinstance(x, (int, Fraction)):
        return Fraction(x) * Fraction(x)
    return abs(complex(x)) ** 2


def frobenius(M: np.ndarray) -> float:
    """Frobenius norm as a float; exactly 0.0 iff an exact array is zero."""
    M = np.asarray(M)
    if M.dtype != object:
        return float(np.linalg.norm(M))
    total = sum((_abs2(x) for x in M.flat), Fraction(0))
    return math.sqrt(total) if total else 0.0


def is_zero(M: np.ndarray) -> bool:
    return all(x == 0 for x in np.asarray(M).flat)


def inverse(M: np.ndarray) -> np.ndarray:
    """Matrix inverse; exact Gauss-Jordan for object arrays."""
    if not is_exact(M):
        return np.linalg.inv(M)
    n = M.shape[0]
    A = M.copy()
    Inv = identity(n, exact=True)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r, col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            Inv[[col, piv]] = Inv[[piv, col]]
        p = A[col, col]
        A[col] = A[col] / p
        Inv[col] = Inv[col] / p
        for r in range(n):
            if r != col and A[r, col] != 0:
                f = A[r, col]
                A[r] = A[r] - f * A[col]
                Inv[r] = Inv[r] - f * Inv[col]
    return Inv


# ----------------------------------------------------------------------
# matrix exponential

_PADE6 = (1.0, 1 / 2, 5 / 44, 1 / 66, 1 / 792, 1 / 15840, 1 / 665280)


def expm(M: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a [6/6] Pade approximant.

    Exact arrays are only accepted when ``M`` is nilpotent; the power series
    then terminates.
    """
    if is_exact(M):
        return expm_nilpotent(M)
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    norm = np.linalg.norm(M, 1)
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    A = M / (2 ** s)
    eye = np.eye(n, dtype=complex)
    powers = [eye, A]
    for _ in range(5):
        powers.append(powers[-1] @ A)
    Nm = sum(c * P for c, P in zip(_PADE6, powers))
    Dm = sum(c * (-1) ** j * P for j, (c, P) in enumerate(zip(_PADE6, powers)))
    R = np.linalg.solve(Dm, Nm)
    for _ in range(s):
        R = R @ R
    return R


def expm_nilpotent(M: np.ndarray) -> np.ndarray:
    """Terminating exponential series ``sum M^k/k!`` for nilpotent ``M``."""
    n = M.shape[0]
    exact = is_exact(M)
    out = identity(n, exact)
    term = identity(n, exact)
    for k in range(1, n + 1):
        term = (term @ M) * (Fraction(1, k) if exact else 1.0 / k)
        out = out + term
    if not (is_zero(term @ M) if exact else np.allclose(term @ M, 0, atol=1e-14)):
        raise ArgumentError("matrix is not nilpotent; no terminating series")
    return out


# ----------------------------------------------------------------------
# JSON matrix schema

def _entry_to_json(x, exact: bool):
    if exact:
        g = x if isinstance(x, GaussianRational) else GaussianRational(x)
        return [str(g.re), str(g.im)]
    z = complex(x)
    return [z.real + 0.0, z.imag + 0.0]  # + 0.0 turns -0.0 into 0.0


def matrix_to_json(M: np.ndarray, n: int | None = None) -> dict:
    M = np.asarray(M)
    exact = is_exact(M)
    if n is None:
        n = M.shape[0]
    return {
        "n": n,
        "rows": M.shape[0],
        "cols": M.shape[1],
        "mode": "exact" if exact else "c64",
        "entries": [_entry_to_json(x, exact) for x in M.flat],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    rows, cols = doc["rows"], doc["cols"]
    if len(doc["entries"]) != rows * cols:
        raise ArgumentError("entry count does not match rows*cols")
    if doc["mode"] == "exact":
        out = np.empty((rows, cols), dtype=object)
        for i, (re, im) in enumerate(doc["entries"]):
            g = GaussianRational(Fraction(re), Fraction(im))
            out.flat[i] = g.re if g.im == 0 else g
        return out
    if doc["mode"] != "c64":
        raise ArgumentError(f"unknown mode {doc['mode']!r}")
    return np.array([complex(re, im) for re, im in doc["entries"]],
                    dtype=complex).reshape(rows, cols)
