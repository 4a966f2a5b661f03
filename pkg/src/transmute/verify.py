"""Independent checks: finite-difference Bessel operator, intertwining and
PDE residuals, and a brute-force double-exponential quadrature oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .epd import CauchyData, GridSpec, solution
from .errors import ConvergenceError, DomainError, PreconditionError
from .functions import TestFunction, bessel_applied
from .operators import (
    OperatorParams,
    descent_first,
    descent_second,
    gen_translation,
    index_shift,
    poisson,
)
from .quad import DEFAULT_ORDER

DEFAULT_FD_STEP = 1.0e-3


@dataclass(frozen=True)
class ResidualReport:
    """Summary of an equation residual over a set of points."""

    max_abs: float
    mean_abs: float
    worst_point: tuple[float, ...]
    fd_step: float
    quad_order: int
    n_points: int

    @classmethod
    def from_residuals(
        cls, res: np.ndarray, points: np.ndarray, fd_step: float, quad_order: int
    ) -> ResidualReport:
        res = np.abs(np.asarray(res, dtype=np.float64)).reshape(-1)
        points = np.asarray(points, dtype=np.float64).reshape(res.size, -1)
        if not np.all(np.isfinite(res)):
            worst = int(np.flatnonzero(~np.isfinite(res))[0])
            max_abs = mean_abs = math.inf
        else:
            worst = int(np.argmax(res))
            max_abs, mean_abs = float(res[worst]), float(np.mean(res))
        return cls(
            max_abs=max_abs,
            mean_abs=mean_abs,
            worst_point=tuple(float(p) for p in points[worst]),
            fd_step=fd_step,
            quad_order=quad_order,
            n_points=res.size,
        )

    def __str__(self) -> str:
        where = ", ".join(f"{p:.4g}" for p in self.worst_point)
        return (
            f"max {self.max_abs:.3e} at ({where}), mean {self.mean_abs:.3e}, "
            f"{self.n_points} points, order {self.quad_order}, h {self.fd_step:g}"
        )


# {{{ Bessel operator


def bessel_apply(nu: float, f: TestFunction, x):
    r""":math:`B_\nu f(x) = f''(x) + (\nu/x) f'(x)` from analytic derivatives."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        raise DomainError("bessel_apply requires x > 0")
    if f.d1 is None or f.d2 is None:
        raise PreconditionError(f"{f.label} has no analytic derivatives")
    out = f.d2(x) + nu / x * f.d1(x)
    return out[()] if np.ndim(out) == 0 else out


def fd_derivatives(u: Callable, x, h: float):
    """Fourth-order central differences ``(u', u'')`` at *x*."""
    x = np.asarray(x, dtype=np.float64)
    um2, um1, u0, up1, up2 = (u(x + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h)
    d2 = (-um2 + 16.0 * um1 - 30.0 * u0 + 16.0 * up1 - up2) / (12.0 * h * h)
    return d1, d2


def bessel_apply_fd(nu: float, u: Callable, x, h: float = DEFAULT_FD_STEP):
    r""":math:`B_\nu u(x)` by five-point differences, :math:`O(h^4)`."""
    if not h > 0.0:
        raise DomainError(f"step must be positive: {h}")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x - 2.0 * h <= 0.0):
        raise DomainError(f"stencil leaves x > 0: need x > 2h = {2.0 * h:g}")
    d1, d2 = fd_derivatives(u, x, h)
    out = d2 + nu / x * d1
    return out[()] if np.ndim(out) == 0 else out


# }}}


# {{{ intertwining


INTERTWINE_OPS = ("poisson", "descent_first", "descent_second", "index_shift", "gen_translation")


def intertwine_residual(
    op: str,
    nu: float,
    mu: float,
    f: TestFunction,
    xs,
    order: int = DEFAULT_ORDER,
    h: float = DEFAULT_FD_STEP,
    alpha: float = 0.0,
    C: float = 1.0,
    z: float = 0.7,
) -> ResidualReport:
    r"""Residual of :math:`\mathrm{Op}(B_\nu f) - (B_\mu)_x \mathrm{Op} f` on *xs*.

    The source operator of ``"poisson"`` is :math:`D^2` (``nu`` is ignored).
    For ``"gen_translation"`` the identity
    :math:`T^z_x B_\nu f = (B_\nu)_x T^z_x f = (B_\nu)_z T^z_x f` is checked at
    the fixed shift *z*, and the report holds the larger of the two residuals.
    """
    xs = np.asarray(xs, dtype=np.float64)

    if op == "gen_translation":
        left = gen_translation(nu, bessel_applied(f, nu), xs, z, order)
        in_x = bessel_apply_fd(nu, lambda y: gen_translation(nu, f, y, z, order), xs, h)
        in_z = bessel_apply_fd(nu, lambda w: gen_translation(nu, f, xs, w, order), z, h)
        res = np.maximum(np.abs(left - in_x), np.abs(left - in_z))
        return ResidualReport.from_residuals(res, xs, h, order)

    if op == "poisson":
        src, tgt = 0.0, mu

        def apply(g, x):
            return poisson(mu, g, x, order)
    elif op == "descent_first":
        src, tgt = nu, mu

        def apply(g, x):
            return descent_first(nu, mu, g, x, order)
    elif op == "descent_second":
        src, tgt = nu, mu

        def apply(g, x):
            return descent_second(nu, mu, g, x, order)
    elif op == "index_shift":
        src, tgt = nu, mu

        def apply(g, x):
            return index_shift(alpha, nu, mu, C, g, x, order)
    else:
        raise DomainError(f"unknown operator {op!r}; expected one of {', '.join(INTERTWINE_OPS)}")

    left = apply(bessel_applied(f, src), xs)
    right = bessel_apply_fd(tgt, lambda y: apply(f, y), xs, h)
    return ResidualReport.from_residuals(left - right, xs, h, order)


# }}}


# {{{ PDE residuals


def equation_indices(formula_id: str, params: OperatorParams) -> tuple[float, float, float]:
    """Indices ``(k_x, k_t, b)`` of the equation :math:`(B_{k_x})_x u = (B_{k_t})_t u + b^2 u`
    solved by a formula."""
    mu, nu, b = params.mu, params.nu, params.b
    table = {
        "dalembert": (0.0, 0.0, 0.0),
        "epd_general": (0.0, mu, 0.0),
        "epd_cauchy": (0.0, mu, 0.0),
        "epd_cauchy_first": (0.0, mu, 0.0),
        "epd_cauchy_second": (0.0, mu, 0.0),
        "gepd_general": (nu, mu, 0.0),
        "gepd_spectral_general": (nu, mu, b),
        "gepd_cauchy_descent": (mu, nu, 0.0),
        "gepd_spectral_cauchy": (mu, nu, b),
    }
    try:
        return table[formula_id]
    except KeyError:
        raise DomainError(f"unknown formula {formula_id!r}") from None


def pde_residual(
    formula_id: str,
    params: OperatorParams,
    data: CauchyData,
    grid: GridSpec,
    order: int = DEFAULT_ORDER,
    h: float = DEFAULT_FD_STEP,
) -> ResidualReport:
    r"""Max/mean of :math:`(B_{k_x})_x u - (B_{k_t})_t u - b^2 u` on the grid,
    with both Bessel operators applied by finite differences."""
    kx, kt, b = equation_indices(formula_id, params)
    u = solution(formula_id, params, data, order)

    X, T = np.meshgrid(grid.x, grid.t, indexing="ij")
    X, T = X.reshape(-1), T.reshape(-1)
    if np.any(T - 2.0 * h <= 0.0) or (kx != 0.0 and np.any(X - 2.0 * h <= 0.0)):
        raise DomainError("residual grid must stay 2h away from the axes")

    dx1, dx2 = fd_derivatives(lambda x: u(x, T), X, h)
    dt1, dt2 = fd_derivatives(lambda t: u(X, t), T, h)
    res = (dx2 + kx / X * dx1) - (dt2 + kt / T * dt1) - b * b * u(X, T)
    return ResidualReport.from_residuals(res, np.stack([X, T], axis=-1), h, order)


# }}}


# {{{ brute-force quadrature


def _tanh_sinh(length: float, s: np.ndarray):
    """Nodes as distances from both ends, and weights, on an interval of *length*."""
    v = 0.5 * math.pi * np.sinh(s)
    with np.errstate(over="ignore"):
        from_lo = length / (1.0 + np.exp(-2.0 * v))
        from_hi = length / (1.0 + np.exp(2.0 * v))
        weights = length * 0.5 * math.pi * np.cosh(s) / (2.0 * np.cosh(v) ** 2)
    return from_lo, from_hi, weights


def brute_quad(
    g: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    ea: float = 0.0,
    eb: float = 0.0,
    tol: float = 1.0e-11,
    max_level: int = 12,
) -> float:
    r"""Evaluate :math:`\int_a^b g(y) (y - a)^{e_a} (b - y)^{e_b} \, dy` by
    double-exponential quadrature.

    The endpoint factors are formed from distances to the ends, so they stay
    accurate right up to the endpoints. ``b = inf`` (with ``eb = 0``) uses
    the exp-sinh map. Levels halve the step until two successive estimates
    agree to *tol* relative to the larger of the value and one.

    :raises ConvergenceError: if *max_level* is reached first.
    """
    if not (ea > -1.0 and eb > -1.0):
        raise DomainError(f"endpoint exponents must exceed -1: {ea}, {eb}")
    if not b > a:
        raise DomainError(f"need a < b: {a}, {b}")
    infinite = math.isinf(b)
    if infinite and eb != 0.0:
        raise DomainError("an infinite upper limit takes no endpoint exponent")

    smax = 4.5 if infinite else 6.5

    def contrib(s: np.ndarray) -> float:
        if infinite:
            v = 0.5 * math.pi * np.sinh(s)
            dist = np.exp(v)
            w = 0.5 * math.pi * np.cosh(s) * dist
            vals = g(a + dist) * dist**ea
        else:
            dist, rest, w = _tanh_sinh(b - a, s)
            keep = (dist > 0.0) & (rest > 0.0)
            dist, rest, w = dist[keep], rest[keep], w[keep]
            y = np.where(dist < rest, a + dist, b - rest)
            vals = g(y) * dist**ea * rest**eb
        terms = w * vals
        return float(np.sum(terms[np.isfinite(w) & (w > 0.0)]))

    step = 0.5
    k = np.arange(-int(smax / step), int(smax / step) + 1)
    total = contrib(k * step)
    estimate = step * total
    for level in range(1, max_level + 1):
        step *= 0.5
        k = np.arange(-int(smax / step), int(smax / step) + 1)
        total += contrib(k[k % 2 != 0] * step)
        new = step * total
        change = abs(new - estimate)
        if level >= 3 and change <= tol * max(1.0, abs(new)):
            return new
        estimate = new

    raise ConvergenceError(
        f"brute_quad did not converge on [{a:g}, {b:g}] after {max_level} levels "
        f"(last change {change:.2e})",
        index=max_level,
    )


# }}}
