from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmr.errors import ArgumentError, DomainError, UnsupportedCaseError
from cmr.potentials import (ModelCase, check_identities, eval_dv, eval_F, eval_v, eval_w)

RAT, HYP, TRIG = ModelCase("rational"), ModelCase("hyperbolic"), ModelCase("trigonometric")


def test_constants():
    assert RAT.B == 0 and ModelCase("hyperbolic", 2.0).B == 4.0 and TRIG.B == -1.0
    assert ModelCase("trigonometric", 2.0).a_prime == 2j and HYP.a_prime == 1
    with pytest.raises(UnsupportedCaseError):
        RAT.a_prime
    with pytest.raises(ArgumentError):
        ModelCase("elliptic")
    with pytest.raises(ArgumentError):
        ModelCase("hyperbolic", -1.0)


def test_point_values():
    assert eval_v(RAT, 2.0) == 0.25
    assert eval_v(TRIG, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert eval_w(RAT, 2.0) == 0.5
    assert eval_w(TRIG, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert eval_F(RAT, 2.0) == 0.5
    assert eval_F(TRIG, math.pi / 4) == pytest.approx(1.0, abs=1e-15)


def test_hyperbolic_values_against_mpmath():
    # independent high-precision evaluation of 1/sinh^2(1) and coth(1)
    mpmath.mp.dps = 30
    assert eval_v(HYP, 1.0) == pytest.approx(float(1 / mpmath.sinh(1) ** 2), rel=1e-15)
    assert eval_F(HYP, 1.0) == pytest.approx(float(mpmath.coth(1)), rel=1e-15)
    assert eval_F(HYP, 1.0) == pytest.approx(1.3130352854993312, rel=1e-15)
    h2 = ModelCase("hyperbolic", 2.0)
    assert eval_w(h2, 0.3) == pytest.approx(float(2 / mpmath.sinh(0.6)), rel=1e-14)


@pytest.mark.parametrize("kind", ["rational", "hyperbolic", "trigonometric"])
def test_w_is_odd(kind, rng):
    case = ModelCase(kind)
    for x in rng.uniform(0.05, 1.5, 100):
        assert eval_w(case, -x) == -eval_w(case, x)
        assert eval_F(case, -x) == -eval_F(case, x)


@pytest.mark.parametrize("kind", ["rational", "hyperbolic", "trigonometric"])
def test_dv_matches_finite_difference(kind, rng):
    case = ModelCase(kind)
    for x in rng.uniform(0.2, 1.4, 20):
        fd = (eval_v(case, x + 1e-6) - eval_v(case, x - 1e-6)) / 2e-6
        assert eval_dv(case, x) == pytest.approx(fd, rel=1e-6)


def test_exact_rational_values():
    assert eval_w(RAT, Fraction(2, 3)) == Fraction(3, 2)
    assert eval_F(RAT, 3) == Fraction(1, 3)
    assert eval_v(RAT, Fraction(1, 2)) == 4


def test_singularities():
    with pytest.raises(DomainError):
        eval_w(RAT, 0.0)
    with pytest.raises(DomainError):
        eval_F(HYP, 0.0)
    with pytest.raises(DomainError):
        eval_w(TRIG, math.pi)
    with pytest.raises(DomainError):
        eval_w(RAT, Fraction(0))
    with pytest.raises(DomainError):
        eval_w(RAT, float("nan"))
    with pytest.raises(UnsupportedCaseError):
        eval_w(HYP, Fraction(1, 2))


nonzero = st.fractions(min_value=-5, max_value=5, max_denominator=30).filter(lambda x: x != 0)


@given(nonzero, nonzero)
def test_identities_exact_rational(x, y):
    if x == y or x + y == 0:
        return
    assert check_identities(RAT, x, y) == (0, 0, 0)


def test_identity_examples():
    hyp2 = ModelCase("hyperbolic", 2.0)
    rng = np.random.default_rng(5)
    # the derivative residual is truncation-limited (about h^2 |F'''| / 6);
    # with a*x >= 1 it stays below 1e-8
    for _ in range(50):
        x, y = rng.uniform(0.5, 1.5, 2)
        if abs(x - y) < 0.05:
            continue
        assert max(check_identities(hyp2, x, y)) <= 1e-8
    assert check_identities(TRIG, math.pi / 3, math.pi / 6)[1] <= 1e-12
