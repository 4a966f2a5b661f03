from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transmute.errors import DomainError, TruncationError
from transmute.quad import (
    integrate_ball,
    integrate_jacobi,
    integrate_shell,
    integrate_unit,
    jacobi_rule,
    legendre_rule,
)


def beta(a, b):
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


@pytest.mark.parametrize("n", [1, 2, 7, 32, 64, 128])
@pytest.mark.parametrize("a,b", [(0.0, 0.0), (-0.5, -0.5), (-0.99, 0.3), (1.7, -0.8), (-0.9, -0.9)])
def test_jacobi_moments_exact(n, a, b):
    rule = jacobi_rule(n, a, b)
    # a Gauss rule integrates degree 2n - 1 exactly
    for k in range(0, 2 * n, max(1, (2 * n) // 6)):
        exact = beta(a + k + 1.0, b + 1.0)
        assert rule(rule.nodes**k) == pytest.approx(exact, rel=2e-14), k


def test_rule_structure():
    rule = jacobi_rule(40, -0.3, 0.6)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all((rule.nodes > 0) & (rule.nodes < 1))
    assert np.all(rule.weights > 0)
    assert np.allclose(rule.nodes + rule.complement, 1.0, atol=1e-16)
    assert not rule.nodes.flags.writeable


def test_high_order_rule():
    rule = jacobi_rule(512, -0.99, 0.0)
    assert rule(np.ones(512)) == pytest.approx(1.0 / 0.01, rel=1e-13)


def test_legendre_symmetry():
    rule = legendre_rule(9)
    assert np.allclose(rule.nodes, rule.complement[::-1], atol=1e-15)


def test_rule_errors():
    with pytest.raises(DomainError):
        jacobi_rule(0, 0.0, 0.0)
    with pytest.raises(DomainError):
        jacobi_rule(4, -1.0, 0.0)


def test_integrate_unit_and_jacobi():
    assert integrate_unit(np.cos, -0.5, -0.5, 32) == pytest.approx(math.pi * math.cos(0.5) * 0.9384698072408129, rel=1e-13)
    # int_1^3 (y - 1)^0.5 (3 - y)^0.25 dy = 2^1.75 B(1.5, 1.25)
    val = integrate_jacobi(lambda y: np.ones_like(y), 1.0, 3.0, 0.5, 0.25, 16)
    assert val == pytest.approx(2.0**1.75 * beta(1.5, 1.25), rel=1e-14)


def test_integrate_jacobi_vectorized():
    lo = np.array([0.0, 1.0, 2.0])
    hi = lo + 1.0
    vals = integrate_jacobi(lambda y: y, lo, hi, 0.0, 0.0, 4)
    assert np.allclose(vals, lo + 0.5)


def test_integrate_ball_moment():
    # int_0^x (x^2 - y^2)^(s-1) y^nu dy = x^(nu + 2s - 1) B((nu+1)/2, s) / 2
    s, nu = 0.3, 0.7
    for x in (0.5, 2.0):
        exact = 0.5 * x ** (nu + 2 * s - 1) * beta(0.5 * (nu + 1), s)
        assert integrate_ball(lambda y: np.ones_like(y), x, s, nu) == pytest.approx(exact, rel=1e-14)
    assert integrate_ball(np.exp, 0.0, s, nu) == 0.0


def test_integrate_shell_gaussian():
    # int_x^inf e^{-y^2} (y^2 - x^2)^(s-1) y dy = Gamma(s) e^{-x^2} / 2
    s = 0.4
    for x in (0.0, 0.5, 1.5):
        val = integrate_shell(lambda y: np.exp(-y * y), x, s)
        assert val == pytest.approx(0.5 * math.gamma(s) * math.exp(-x * x), rel=1e-12)


def test_integrate_shell_truncation_error():
    with pytest.raises(TruncationError):
        integrate_shell(lambda y: np.ones_like(y), 1.0, 0.5, max_panels=5)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-0.95, 2.0), b=st.floats(-0.95, 2.0), n=st.integers(1, 48))
def test_weights_sum_to_beta(a, b, n):
    rule = jacobi_rule(n, a, b)
    assert float(np.sum(rule.weights)) == pytest.approx(beta(a + 1.0, b + 1.0), rel=1e-13)
