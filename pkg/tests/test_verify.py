from __future__ import annotations

import math

import numpy as np
import pytest

from transmute.epd import CauchyData, GridSpec
from transmute.errors import ConvergenceError, DomainError, PreconditionError
from transmute.functions import bessel_eigen, gaussian, poly
from transmute.operators import (
    OperatorParams,
    descent_first,
    descent_second,
    descent_second_constant,
    gen_translation,
    poisson,
    poisson_constant,
    translation_constant,
)
from transmute.verify import (
    INTERTWINE_OPS,
    ResidualReport,
    bessel_apply,
    bessel_apply_fd,
    brute_quad,
    equation_indices,
    intertwine_residual,
    pde_residual,
)

G1 = gaussian(1.0)


# {{{ Bessel operator


@pytest.mark.parametrize("nu", [0.0, 0.5, 2.0])
def test_bessel_of_square(nu):
    x = np.array([0.3, 1.0, 2.0])
    assert np.allclose(bessel_apply(nu, poly([0.0, 0.0, 1.0]), x), 2.0 + 2.0 * nu)


def test_fd_of_sine():
    x = np.array([0.5, 1.0, 2.0])
    expected = -np.sin(x) + 0.5 / x * np.cos(x)
    assert np.max(np.abs(bessel_apply_fd(0.5, np.sin, x, 1e-3) - expected)) < 1e-8


def test_fd_is_fourth_order():
    # Richardson slope of the error
    f = bessel_eigen(0.25, 1.0)
    exact = bessel_apply(1.5, f, 1.0)
    hs = np.array([0.08, 0.04, 0.02])
    errs = np.array([abs(bessel_apply_fd(1.5, f, 1.0, h) - exact) for h in hs])
    slopes = np.log(errs[:-1] / errs[1:]) / math.log(2.0)
    assert np.all((slopes > 3.5) & (slopes < 4.5)), slopes


def test_bessel_apply_errors():
    with pytest.raises(DomainError):
        bessel_apply(1.0, G1, 0.0)
    with pytest.raises(DomainError):
        bessel_apply_fd(1.0, np.sin, 0.001, 1e-3)
    with pytest.raises(DomainError):
        bessel_apply_fd(1.0, np.sin, 1.0, 0.0)


# }}}


# {{{ brute-force quadrature


def test_brute_quad_known_integrals():
    assert brute_quad(lambda y: np.ones_like(y), -1.0, 1.0, -0.5, -0.5) == pytest.approx(math.pi, rel=1e-12)
    assert brute_quad(lambda y: np.exp(-y * y), 0.0, math.inf) == pytest.approx(
        0.5 * math.sqrt(math.pi), rel=1e-12
    )
    # Beta(0.3, 0.8)
    ref = math.gamma(0.3) * math.gamma(0.8) / math.gamma(1.1)
    assert brute_quad(lambda y: np.ones_like(y), 0.0, 1.0, -0.7, -0.2) == pytest.approx(ref, rel=1e-11)


def test_brute_quad_errors():
    with pytest.raises(DomainError):
        brute_quad(np.exp, 0.0, 1.0, -1.0)
    with pytest.raises(DomainError):
        brute_quad(np.exp, 1.0, 0.0)
    with pytest.raises(DomainError):
        brute_quad(np.exp, 0.0, math.inf, 0.0, 0.5)
    with pytest.raises(ConvergenceError):
        brute_quad(lambda y: np.sin(1.0 / y), 0.0, 1.0, max_level=4)


def _poisson_direct(mu, f, x):
    e = 0.5 * mu - 1.0
    return poisson_constant(mu) * x ** (1.0 - mu) * brute_quad(lambda y: f(y) * (x + y) ** e, 0.0, x, 0.0, e)


def _descent_first_direct(nu, mu, f, x):
    s = 0.5 * (mu - nu)
    k = 2.0 * math.gamma(0.5 * (mu + 1.0)) / (math.gamma(s) * math.gamma(0.5 * (nu + 1.0)))
    return k * x ** (1.0 - mu) * brute_quad(lambda y: f(y) * (x + y) ** (s - 1.0), 0.0, x, nu, s - 1.0)


def _descent_second_direct(nu, mu, f, x):
    s = 0.5 * (nu - mu)
    k = descent_second_constant(nu, mu)
    near = brute_quad(lambda y: f(y) * (y + x) ** (s - 1.0) * y, x, x + 1.0, s - 1.0, 0.0)
    far = brute_quad(lambda y: f(y) * (y * y - x * x) ** (s - 1.0) * y, x + 1.0, math.inf)
    return k * (near + far)


def _translation_direct(nu, f, x, z):
    def g(phi):
        r = np.sqrt(np.maximum(x * x + z * z - 2.0 * x * z * np.cos(phi), 0.0))
        q = phi * (math.pi - phi)
        ratio = np.where(q > 0.0, np.sin(phi) / np.where(q > 0.0, q, 1.0), 1.0 / math.pi)
        return f(r) * ratio ** (nu - 1.0)

    return translation_constant(nu) * brute_quad(g, 0.0, math.pi, nu - 1.0, nu - 1.0)


def test_operators_agree_with_brute_force():
    rng = np.random.default_rng(20261015)
    for _ in range(5):
        a = rng.uniform(0.3, 2.0)
        f = gaussian(a)
        x = rng.uniform(0.2, 2.5)
        z = rng.uniform(0.1, 2.0)
        mu = rng.uniform(0.2, 1.8)
        nu = rng.uniform(-0.5, mu - 0.1)
        lo = rng.uniform(-0.5, 1.0)
        hi = lo + rng.uniform(0.2, 1.5)
        pairs = [
            (poisson(mu, f, x), _poisson_direct(mu, f, x)),
            (descent_first(nu, mu, f, x), _descent_first_direct(nu, mu, f, x)),
            (descent_second(hi, lo, f, x), _descent_second_direct(hi, lo, f, x)),
            (gen_translation(mu, f, x, z), _translation_direct(mu, f, x, z)),
        ]
        for got, ref in pairs:
            assert float(got) == pytest.approx(ref, rel=1e-7, abs=1e-12)


# }}}


# {{{ residuals


INTERTWINE_CASES = {
    "poisson": dict(nu=0.0, mu=1.2),
    "descent_first": dict(nu=0.5, mu=1.2),
    "descent_second": dict(nu=1.2, mu=0.5),
    "index_shift": dict(nu=0.5, mu=1.2, alpha=-0.6),
    "gen_translation": dict(nu=0.7, mu=0.7),
}


@pytest.mark.parametrize("op", INTERTWINE_OPS)
def test_intertwine_residual_small(op):
    rep = intertwine_residual(op, f=G1, xs=np.linspace(0.5, 2.0, 5), **INTERTWINE_CASES[op])
    assert rep.max_abs <= 5e-4
    assert rep.n_points == 5 and rep.quad_order == 64


def test_residual_detects_wrong_index():
    from transmute.functions import bessel_applied

    xs = np.linspace(0.5, 2.0, 5)
    left = descent_first(0.5, 1.2, bessel_applied(G1, 0.9), xs)
    right = bessel_apply_fd(1.2, lambda y: descent_first(0.5, 1.2, G1, y), xs)
    assert np.max(np.abs(left - right)) > 1e-2


def test_unknown_intertwine_op():
    with pytest.raises(DomainError):
        intertwine_residual("fourier", 0.5, 1.0, G1, [1.0])


def test_pde_residual_small():
    grid = GridSpec(0.2, 2.0, 0.2, 2.0, 5, 5)
    rep = pde_residual("gepd_spectral_general", OperatorParams(nu=0.5, mu=0.25, b=1.0),
                       CauchyData(G1, gaussian(0.5)), grid)
    assert rep.max_abs <= 1e-5 and rep.n_points == 25


def test_pde_residual_grid_must_clear_axes():
    with pytest.raises(DomainError):
        pde_residual("epd_cauchy", OperatorParams(mu=0.5), CauchyData(G1),
                     GridSpec(0.2, 2.0, 0.001, 2.0, 3, 3))


def test_equation_indices():
    p = OperatorParams(nu=0.3, mu=0.6, b=2.0)
    assert equation_indices("gepd_spectral_cauchy", p) == (0.6, 0.3, 2.0)
    assert equation_indices("gepd_general", p) == (0.3, 0.6, 0.0)
    with pytest.raises(DomainError):
        equation_indices("heat", p)


def test_report_flags_non_finite():
    rep = ResidualReport.from_residuals(np.array([1e-3, np.nan, 2.0]), np.array([1.0, 2.0, 3.0]), 1e-3, 64)
    assert rep.max_abs == math.inf and rep.worst_point == (2.0,)
    rep = ResidualReport.from_residuals(np.array([1e-3, -2.0]), np.array([[1.0, 0.5], [2.0, 0.5]]), 1e-3, 64)
    assert rep.max_abs == 2.0 and rep.worst_point == (2.0, 0.5)
    assert "max 2.000e+00" in str(rep)


# }}}
