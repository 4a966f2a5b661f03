"""Closed-form solutions of Euler-Poisson-Darboux type equations.

The general solutions solve

.. math::

    (B_\\nu)_x u = (B_\\mu)_t u + b^2 u

(with :math:`B_0 = D^2` for :func:`epd_general`); the Cauchy descent formulas
solve :math:`(B_\\mu)_x u = (B_\\nu)_t u + b^2 u`. Time is never evaluated at
``t = 0``; initial conditions hold in the limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, PreconditionError
from .functions import TestFunction, zero
from .operators import (
    OperatorParams,
    descent_second_constant,
    gen_translation,
    poisson_constant,
)
from .quad import DEFAULT_ORDER, integrate_ball, integrate_shell, jacobi_rule
from .specfun import j_norm_sq

FORMULAS = (
    "dalembert",
    "epd_general",
    "gepd_general",
    "gepd_spectral_general",
    "epd_cauchy",
    "epd_cauchy_first",
    "epd_cauchy_second",
    "gepd_cauchy_descent",
    "gepd_spectral_cauchy",
)


# {{{ data types


@dataclass(frozen=True)
class CauchyData:
    """Position data *f* and weighted-velocity data *g* (absent means zero).

    For the general-solution formulas *f* and *g* play the roles of the two
    arbitrary functions; for :func:`dalembert` they are the left- and
    right-moving waves.
    """

    f: TestFunction
    g: TestFunction | None = None

    @property
    def g_or_zero(self) -> TestFunction:
        return self.g if self.g is not None else zero()


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid in :math:`(x, t)` with ``t_min > 0``."""

    x_min: float
    x_max: float
    t_min: float
    t_max: float
    nx: int
    nt: int

    def __post_init__(self) -> None:
        if self.nx < 1 or self.nt < 1:
            raise DomainError(f"grid sizes must be positive: nx={self.nx}, nt={self.nt}")
        if not (self.x_min < self.x_max or (self.nx == 1 and self.x_min == self.x_max)):
            raise DomainError(f"need x_min < x_max: {self.x_min}, {self.x_max}")
        if not self.t_min > 0.0:
            raise DomainError(f"need t_min > 0: {self.t_min}")
        if not (self.t_min < self.t_max or (self.nt == 1 and self.t_min == self.t_max)):
            raise DomainError(f"need t_min < t_max: {self.t_min}, {self.t_max}")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.nt)


@dataclass(frozen=True)
class SolutionField:
    """Values ``u(x_i, t_j)`` of one formula on a grid (shape ``(nx, nt)``)."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)
    params: OperatorParams
    formula_id: str


# }}}


# {{{ helpers


def _check_unit(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise PreconditionError(f"requires 0 < {name} < 1: {name}={value}")


def _check_even(*fns: TestFunction | None) -> None:
    for fn in fns:
        if fn is not None and not fn.even_extension:
            raise PreconditionError(
                f"{fn.label} must extend evenly so that the solution is regular in x"
            )


def _out(val):
    val = np.asarray(val, dtype=np.float64)
    return val[()] if val.ndim == 0 else val


def _mean_value(
    fn: Callable, x, t, e: float, order: int, factor: Callable | None = None
) -> np.ndarray:
    r"""Evaluate :math:`\int_0^1 fn(x + t(2p-1)) (p(1-p))^e \, \mathrm{factor}(p(1-p)) \, dp`.

    *x* and *t* broadcast; the node axis is appended last.
    """
    rule = jacobi_rule(order, e, e)
    x = np.asarray(x, dtype=np.float64)[..., None]
    t = np.asarray(t, dtype=np.float64)[..., None]
    vals = fn(x + t * (rule.nodes - rule.complement))
    if factor is not None:
        vals = vals * factor(t, rule.nodes * rule.complement)
    return rule(vals)


def _general_terms(
    mu: float, b: float, phi: TestFunction, psi: TestFunction | None, x, t, order: int
) -> np.ndarray:
    """Two-term general solution of :math:`u_{xx} = (B_\\mu)_t u + b^2 u`."""
    phi_factor = psi_factor = None
    if b != 0.0:
        b2 = b * b

        def phi_factor(tt, pq):
            return j_norm_sq(0.5 * mu - 1.0, 4.0 * b2 * tt * tt * pq)

        def psi_factor(tt, pq):
            return j_norm_sq(-0.5 * mu, 4.0 * b2 * tt * tt * pq)

    u = _mean_value(phi, x, t, 0.5 * mu - 1.0, order, phi_factor)
    if psi is not None:
        t = np.asarray(t, dtype=np.float64)
        u = u + t ** (1.0 - mu) * _mean_value(psi, x, t, -0.5 * mu, order, psi_factor)
    return u


def _check_time(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 0.0):
        raise DomainError("solutions are evaluated at t > 0 only")
    return t


def _check_space(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise DomainError("radial variable requires x >= 0")
    return x


# }}}


# {{{ general solutions


def dalembert(F: TestFunction, G: TestFunction, x, t):
    """Travelling-wave solution ``F(x + t) + G(x - t)`` of the wave equation."""
    x = np.asarray(x, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    return _out(F(x + t) + G(x - t))


def epd_general(
    mu: float, Phi: TestFunction, Psi: TestFunction | None, x, t, order: int = DEFAULT_ORDER
):
    r"""General solution of :math:`u_{xx} = (B_\mu)_t u`, :math:`0 < \mu < 1`:

    .. math::

        \int_0^1 \Phi(x + t(2p-1)) (p(1-p))^{\mu/2-1} dp
        + t^{1-\mu} \int_0^1 \Psi(x + t(2p-1)) (p(1-p))^{-\mu/2} dp.
    """
    _check_unit("mu", mu)
    t = _check_time(t)
    return _out(_general_terms(mu, 0.0, Phi, Psi, x, t, order))


def gepd_spectral_general(
    nu: float,
    mu: float,
    b: float,
    Phi: TestFunction,
    Psi: TestFunction | None,
    x,
    t,
    order: int = DEFAULT_ORDER,
):
    r"""General solution of :math:`(B_\nu)_x u = (B_\mu)_t u + b^2 u`.

    The Poisson operator of index :math:`\nu` in *x* is applied to the
    solution of :math:`u_{xx} = (B_\mu)_t u + b^2 u`, whose two terms carry
    the factors :math:`j_{\mu/2-1}(2bt\sqrt{p(1-p)})` and
    :math:`j_{-\mu/2}(2bt\sqrt{p(1-p)})`. *Phi* and *Psi* must be even.
    """
    _check_unit("mu", mu)
    _check_unit("nu", nu)
    if not b >= 0.0:
        raise DomainError(f"spectral parameter must be nonnegative: {b}")
    _check_even(Phi, Psi)

    x = _check_space(x)
    t = _check_time(t)
    x, t = np.broadcast_arrays(x, t)
    tt = t[..., None]

    def inner(y):
        return _general_terms(mu, b, Phi, Psi, y, tt, order)

    with np.errstate(divide="ignore", invalid="ignore"):
        val = poisson_constant(nu) * x ** (1.0 - nu) * integrate_ball(inner, x, 0.5 * nu, 0.0, order)
    at_origin = _general_terms(mu, b, Phi, Psi, np.zeros_like(x), t, order)
    return _out(np.where(x == 0.0, at_origin, val))


def gepd_general(
    nu: float,
    mu: float,
    Phi: TestFunction,
    Psi: TestFunction | None,
    x,
    t,
    order: int = DEFAULT_ORDER,
):
    r"""General solution of :math:`(B_\nu)_x u = (B_\mu)_t u` for
    :math:`0 < \mu, \nu < 1`, i.e. :func:`gepd_spectral_general` with ``b = 0``."""
    return gepd_spectral_general(nu, mu, 0.0, Phi, Psi, x, t, order)


# }}}


# {{{ Cauchy problems


def _first_constant(mu: float) -> float:
    return math.exp(math.lgamma(mu) - 2.0 * math.lgamma(0.5 * mu))


def _second_constant(mu: float) -> float:
    # normalizes t^mu u_t -> g: 1 / ((1 - mu) B(1 - mu/2, 1 - mu/2))
    return math.gamma(1.0 - mu) / math.gamma(1.0 - 0.5 * mu) ** 2


def epd_cauchy_first(mu: float, f: TestFunction, x, t, order: int = DEFAULT_ORDER):
    r"""Solution of :math:`u_{xx} = (B_\mu)_t u` with :math:`u(x, 0) = f`,
    :math:`u_t(x, 0) = 0`, for any :math:`\mu > 0`."""
    if not mu > 0.0:
        raise PreconditionError(f"epd_cauchy_first requires mu > 0: {mu}")
    t = _check_time(t)
    return _out(_first_constant(mu) * _mean_value(f, x, t, 0.5 * mu - 1.0, order))


def epd_cauchy_second(mu: float, g: TestFunction, x, t, order: int = DEFAULT_ORDER):
    r"""Solution of :math:`u_{xx} = (B_\mu)_t u` with :math:`u(x, 0) = 0`,
    :math:`t^\mu u_t \to g`, for :math:`\mu < 1`."""
    if not mu < 1.0:
        raise PreconditionError(f"epd_cauchy_second requires mu < 1: {mu}")
    t = _check_time(t)
    return _out(
        _second_constant(mu) * t ** (1.0 - mu) * _mean_value(g, x, t, -0.5 * mu, order)
    )


def epd_cauchy(mu: float, data: CauchyData, x, t, order: int = DEFAULT_ORDER):
    r"""Solution of :math:`u_{xx} = (B_\mu)_t u`, :math:`0 < \mu < 1`, with
    :math:`u(x, 0) = f` and :math:`t^\mu u_t \to g`."""
    _check_unit("mu", mu)
    u = epd_cauchy_first(mu, data.f, x, t, order)
    if data.g is not None:
        u = u + epd_cauchy_second(mu, data.g, x, t, order)
    return _out(u)


def _descent(
    mu: float, nu: float, b: float, f: TestFunction, x, t, order: int
) -> np.ndarray:
    x = _check_space(x)
    t = _check_time(t)
    x, t = np.broadcast_arrays(x, t)
    xx = x[..., None]
    s = 0.5 * abs(nu - mu)
    b2 = b * b
    t2 = (t * t)[..., None]

    def translated(y):
        return gen_translation(mu, f, xx, y, order)

    if mu < nu:
        # ball form: descent in t from index mu to index nu
        k = (
            2.0 * math.gamma(0.5 * (nu + 1.0))
            / (math.gamma(s) * math.gamma(0.5 * (mu + 1.0)))
        )

        def integrand(y):
            val = translated(y)
            if b != 0.0:
                val = val * j_norm_sq(s - 1.0, b2 * (t2 - y * y))
            return val

        return k * t ** (1.0 - nu) * integrate_ball(integrand, t, s, mu, order)

    # shell form, nu < mu
    k = descent_second_constant(mu, nu, "beta")
    tail_cut = f.decay.shell_tail_cut(float(np.min(t)), shift=float(np.max(x)))

    def integrand(y):
        val = translated(y)
        if b != 0.0:
            val = val * j_norm_sq(s - 1.0, b2 * (t2 - y * y))
        return val

    return k * integrate_shell(integrand, t, s, order, tail_cut=tail_cut)


def gepd_cauchy_descent(mu: float, nu: float, f: TestFunction, x, t, order: int = DEFAULT_ORDER):
    r"""Solution of :math:`(B_\mu)_x u = (B_\nu)_t u` built from translates
    :math:`{}^\mu T_x^y f(x)`.

    * :math:`\mu = \nu`: :math:`u = {}^\mu T_x^t f(x)`.
    * :math:`\mu < \nu`: first descent in *t*; :math:`u(x, 0) = f`, :math:`u_t(x, 0) = 0`.
    * :math:`\nu < \mu`: shell integral over :math:`y > t`; this solves the
      equation for decaying *f*, but its initial value is not *f*.
    """
    if not (mu > 0.0 and nu > 0.0):
        raise PreconditionError(f"gepd_cauchy_descent requires mu, nu > 0: mu={mu}, nu={nu}")
    if mu == nu:
        _check_space(x)
        _check_time(t)
        return _out(gen_translation(mu, f, x, t, order))
    return _out(_descent(mu, nu, 0.0, f, x, t, order))


def gepd_spectral_cauchy(
    mu: float, nu: float, b: float, f: TestFunction, x, t, order: int = DEFAULT_ORDER
):
    r"""Solution of :math:`(B_\mu)_x u = (B_\nu)_t u + b^2 u` for
    :math:`0 < \mu, \nu < 1`: :func:`gepd_cauchy_descent` with the extra factor
    :math:`\hat j_{|\nu-\mu|/2-1}(b^2 (t^2 - y^2))`."""
    _check_unit("mu", mu)
    _check_unit("nu", nu)
    if not b >= 0.0:
        raise DomainError(f"spectral parameter must be nonnegative: {b}")
    if mu == nu:
        if b != 0.0:
            raise PreconditionError("mu = nu has no descent formula when b != 0")
        return gepd_cauchy_descent(mu, nu, f, x, t, order)
    return _out(_descent(mu, nu, b, f, x, t, order))


# }}}


# {{{ fields


def _formula(formula_id: str, params: OperatorParams, data: CauchyData, order: int) -> Callable:
    mu, nu, b = params.mu, params.nu, params.b
    f, g = data.f, data.g

    table = {
        "dalembert": lambda x, t: dalembert(f, data.g_or_zero, x, t),
        "epd_general": lambda x, t: epd_general(mu, f, g, x, t, order),
        "gepd_general": lambda x, t: gepd_general(nu, mu, f, g, x, t, order),
        "gepd_spectral_general": lambda x, t: gepd_spectral_general(nu, mu, b, f, g, x, t, order),
        "epd_cauchy": lambda x, t: epd_cauchy(mu, data, x, t, order),
        "epd_cauchy_first": lambda x, t: epd_cauchy_first(mu, f, x, t, order),
        "epd_cauchy_second": lambda x, t: epd_cauchy_second(mu, data.g_or_zero, x, t, order),
        "gepd_cauchy_descent": lambda x, t: gepd_cauchy_descent(mu, nu, f, x, t, order),
        "gepd_spectral_cauchy": lambda x, t: gepd_spectral_cauchy(mu, nu, b, f, x, t, order),
    }
    try:
        return table[formula_id]
    except KeyError:
        raise DomainError(
            f"unknown formula {formula_id!r}; expected one of {', '.join(FORMULAS)}"
        ) from None


def solution(formula_id: str, params: OperatorParams, data: CauchyData, order: int = DEFAULT_ORDER):
    """The selected formula as a function ``(x, t) -> u`` (broadcasting)."""
    return _formula(formula_id, params, data, order)


def evaluate_field(
    formula_id: str,
    params: OperatorParams,
    data: CauchyData,
    grid: GridSpec,
    order: int = DEFAULT_ORDER,
) -> SolutionField:
    """Evaluate a formula on every grid point.

    :raises DomainError: if a value is not finite, naming the first such point.
    """
    fn = _formula(formula_id, params, data, order)
    x, t = grid.x, grid.t
    values = np.empty((grid.nx, grid.nt))
    for i, xi in enumerate(x):
        values[i] = fn(np.full(grid.nt, xi), t)

    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        i, j = bad[0]
        raise DomainError(f"{formula_id} is not finite at x={x[i]:g}, t={t[j]:g}")

    values.setflags(write=False)
    return SolutionField(grid=grid, values=values, params=params, formula_id=formula_id)


# }}}
