"""Partial derivatives of matrix-valued functions of the coordinates.

Float coordinates use central differences (optionally one Richardson
step); exact coordinates are pushed through :class:`Dual` numbers, which
gives the derivative of a rational function without any error.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .tensorcore import Dual

FD_STEP = 1e-5


def coords_exact(q: Sequence) -> bool:
    return all(isinstance(x, (Fraction, int, Dual)) for x in q)


def _dual_parts(M):
    M = np.asarray(M, dtype=object)
    val = np.empty(M.shape, dtype=object)
    der = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        if isinstance(x, Dual):
            val[idx], der[idx] = x.value, x.deriv
        else:
            val[idx], der[idx] = x, Fraction(0)
    return val, der


def partial(f: Callable[[list], np.ndarray], q: Sequence, k: int,
            h: float = FD_STEP, richardson: bool = False) -> np.ndarray:
    """d f / d q_k at ``q`` (``k`` is 0-based)."""
    if coords_exact(q):
        qd = [Dual(Fraction(x) if isinstance(x, int) else x, Fraction(int(i == k)))
               for i, x in enumerate(q)]
        return _dual_parts(f(qd))[1]

    q = np.asarray(q, dtype=float)

    def central(step):
        qp, qm = q.copy(), q.copy()
        qp[k] += step
        qm[k] -= step
        return (np.asarray(f(qp)) - np.asarray(f(qm))) / (2 * step)

    d = central(h)
    if richardson:
        d = (4 * central(h / 2) - d) / 3
    return d
