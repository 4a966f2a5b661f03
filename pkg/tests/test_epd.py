from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transmute.epd import (
    FORMULAS,
    CauchyData,
    GridSpec,
    dalembert,
    epd_cauchy,
    epd_cauchy_first,
    epd_cauchy_second,
    epd_general,
    evaluate_field,
    gepd_cauchy_descent,
    gepd_general,
    gepd_spectral_cauchy,
    gepd_spectral_general,
    solution,
)
from transmute.errors import DomainError, PreconditionError
from transmute.functions import bessel_eigen, cosine, gaussian, one, poly, zero
from transmute.operators import OperatorParams
from transmute.specfun import j_norm

G1 = gaussian(1.0)
G05 = gaussian(0.5)


def beta(a: float, b: float) -> float:
    return math.gamma(a) * math.gamma(b) / math.gamma(a + b)


# {{{ oracle values


def test_epd_cauchy_against_oracle(oracle):
    for mu, x, t, ref in oracle["epd_cauchy"]:
        assert float(epd_cauchy(mu, CauchyData(G1, G05), x, t)) == pytest.approx(ref, rel=1e-9)


def test_spectral_general_against_oracle(oracle):
    for nu, mu, b, x, t, ref in oracle["gepd_spectral_general"]:
        assert float(gepd_spectral_general(nu, mu, b, G1, G05, x, t)) == pytest.approx(ref, rel=1e-8)


def test_descent_against_oracle(oracle):
    for mu, nu, b, x, t, ref in oracle["descent_cauchy"]:
        got = gepd_spectral_cauchy(mu, nu, b, G1, x, t)
        assert float(got) == pytest.approx(ref, rel=1e-7), (mu, nu, b)
        if b == 0.0:
            assert float(gepd_cauchy_descent(mu, nu, G1, x, t)) == pytest.approx(ref, rel=1e-7)


# }}}


# {{{ closed forms


@pytest.mark.parametrize("mu", [0.25, 0.5, 1.5])
def test_first_cauchy_of_cosine(mu):
    lam = 1.7
    x = np.array([0.0, 0.4, 1.3])
    t = np.array([0.2, 0.9, 2.5])
    expected = np.cos(lam * x) * j_norm(0.5 * (mu - 1.0), lam * t)
    assert np.allclose(epd_cauchy_first(mu, cosine(lam), x, t), expected, atol=1e-12)


@pytest.mark.parametrize("mu", [0.25, 0.5, 0.75])
def test_second_cauchy_of_cosine(mu):
    lam = 1.3
    x = np.array([0.1, 0.8])
    t = np.array([0.5, 1.7])
    expected = np.cos(lam * x) * t ** (1.0 - mu) * j_norm(0.5 * (1.0 - mu), lam * t) / (1.0 - mu)
    assert np.allclose(epd_cauchy_second(mu, cosine(lam), x, t), expected, atol=1e-12)


def test_general_of_cosine_separates():
    lam, nu, mu = 1.1, 0.4, 0.6
    x = np.array([0.0, 0.5, 1.5])
    t = np.array([0.3, 1.0, 2.0])
    expected = (
        j_norm(0.5 * (nu - 1.0), lam * x) * beta(0.5 * mu, 0.5 * mu)
        * j_norm(0.5 * (mu - 1.0), lam * t)
    )
    assert np.allclose(gepd_general(nu, mu, cosine(lam), None, x, t), expected, atol=1e-10)


@pytest.mark.parametrize("mu,nu", [(0.25, 0.75), (0.5, 0.5), (0.5, 1.5)])
def test_descent_of_eigenfunction_separates(mu, nu):
    lam = 1.4
    f = bessel_eigen(0.5 * (mu - 1.0), lam)
    x = np.array([0.3, 1.0, 1.8])
    t = np.array([0.6, 1.2, 0.4])
    expected = j_norm(0.5 * (mu - 1.0), lam * x) * j_norm(0.5 * (nu - 1.0), lam * t)
    assert np.allclose(gepd_cauchy_descent(mu, nu, f, x, t), expected, atol=1e-9)


def test_dalembert():
    assert float(dalembert(G1, zero(), 0.5, 0.25)) == pytest.approx(math.exp(-0.5625))


# }}}


# {{{ invariants


@pytest.mark.parametrize("mu", [0.2, 0.5, 0.9, 2.0])
def test_first_cauchy_preserves_constants(mu):
    t = np.array([0.1, 1.0, 7.0])
    assert np.max(np.abs(epd_cauchy_first(mu, one(), 0.3, t) - 1.0)) <= 1e-9


@pytest.mark.parametrize("mu,nu", [(0.25, 0.75), (0.5, 0.5)])
def test_descent_preserves_constants(mu, nu):
    assert float(gepd_cauchy_descent(mu, nu, one(), 0.7, 1.3)) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("mu", [0.25, 0.5, 0.75])
def test_general_of_one_is_beta(mu):
    got = epd_general(mu, one(), None, 0.4, 1.1)
    assert float(got) == pytest.approx(beta(0.5 * mu, 0.5 * mu), rel=1e-9)


def test_zero_data_gives_zero():
    z = zero()
    assert float(epd_cauchy(0.5, CauchyData(z, z), 0.3, 0.7)) == 0.0
    assert float(gepd_spectral_general(0.5, 0.5, 1.0, z, z, 0.3, 0.7)) == 0.0
    assert float(gepd_spectral_cauchy(0.25, 0.75, 1.0, z, 0.3, 0.7)) == 0.0


def test_zero_spectral_parameter_reduces():
    x, t = np.array([0.0, 0.6]), np.array([0.5, 1.4])
    assert np.allclose(
        gepd_spectral_general(0.3, 0.7, 0.0, G1, G05, x, t), gepd_general(0.3, 0.7, G1, G05, x, t),
        rtol=0, atol=0,
    )
    assert np.allclose(
        gepd_spectral_cauchy(0.25, 0.75, 0.0, G1, x, t), gepd_cauchy_descent(0.25, 0.75, G1, x, t),
        rtol=1e-14,
    )


def test_second_cauchy_rate_near_zero():
    # u ~ t^(1 - mu) g(x) / (1 - mu), so the ratio tends to g(x)
    mu, x = 0.5, 0.4
    ratios = [
        float(epd_cauchy_second(mu, G05, x, t)) * (1.0 - mu) / t ** (1.0 - mu)
        for t in (1e-1, 1e-2, 1e-3)
    ]
    errs = [abs(r - float(G05(x))) for r in ratios]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-5


@settings(max_examples=15, deadline=None)
@given(
    mu=st.floats(0.05, 0.95),
    c=st.floats(-5.0, 5.0),
    x=st.floats(0.0, 3.0),
    t=st.floats(0.01, 4.0),
)
def test_cauchy_is_linear_in_data(mu, c, x, t):
    a = epd_cauchy(mu, CauchyData(c * G1, c * G05), x, t)
    b = epd_cauchy(mu, CauchyData(G1, G05), x, t)
    assert float(a) == pytest.approx(c * float(b), rel=1e-12, abs=1e-14)


# }}}


# {{{ preconditions


def test_preconditions():
    with pytest.raises(PreconditionError):
        epd_cauchy(1.2, CauchyData(G1), 0.5, 0.5)
    with pytest.raises(PreconditionError):
        epd_cauchy_second(1.0, G1, 0.5, 0.5)
    with pytest.raises(PreconditionError):
        epd_cauchy_first(0.0, G1, 0.5, 0.5)
    with pytest.raises(PreconditionError):
        epd_general(1.0, G1, None, 0.5, 0.5)
    with pytest.raises(PreconditionError, match="even"):
        gepd_general(0.5, 0.5, G1, poly([0.0, 1.0]), 0.5, 0.5)
    with pytest.raises(PreconditionError):
        gepd_spectral_cauchy(0.5, 0.5, 1.0, G1, 0.5, 0.5)
    with pytest.raises(PreconditionError):
        gepd_cauchy_descent(0.0, 0.5, G1, 0.5, 0.5)
    with pytest.raises(DomainError):
        gepd_spectral_general(0.5, 0.5, -1.0, G1, None, 0.5, 0.5)
    with pytest.raises(DomainError):
        epd_cauchy(0.5, CauchyData(G1), 0.5, 0.0)
    with pytest.raises(DomainError):
        gepd_cauchy_descent(0.25, 0.75, G1, -0.5, 0.5)


# }}}


# {{{ fields


def test_grid_validation():
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 0.0, 1.0, 4, 4)
    with pytest.raises(DomainError):
        GridSpec(1.0, 1.0, 0.1, 1.0, 4, 4)
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 0.1, 1.0, 0, 4)
    g = GridSpec(0.0, 2.0, 0.5, 1.5, 5, 3)
    assert np.allclose(g.x, [0.0, 0.5, 1.0, 1.5, 2.0]) and np.allclose(g.t, [0.5, 1.0, 1.5])


def test_evaluate_field_matches_pointwise():
    grid = GridSpec(0.0, 2.0, 0.2, 1.0, 4, 3)
    params = OperatorParams(mu=0.5, nu=0.75, b=1.0)
    data = CauchyData(G1, G05)
    for formula in FORMULAS:
        field = evaluate_field(formula, params, data, grid)
        assert field.values.shape == (4, 3) and not field.values.flags.writeable
        fn = solution(formula, params, data)
        assert float(fn(grid.x[2], grid.t[1])) == pytest.approx(field.values[2, 1], rel=1e-13)


def test_unknown_formula():
    with pytest.raises(DomainError, match="unknown formula"):
        solution("heat", OperatorParams(), CauchyData(G1))


# }}}
