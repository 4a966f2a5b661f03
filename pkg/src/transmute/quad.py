"""Gauss-Jacobi rules on [0, 1] and the ball/shell integrators built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError, TruncationError

DEFAULT_ORDER = 64
DEFAULT_TAIL_CUT = 40.0

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureRule:
    r"""Gauss rule for :math:`\int_0^1 g(t) t^a (1 - t)^b \, dt`.

    .. attribute:: complement

        ``1 - nodes``, computed without cancellation near ``t = 1``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exponent_a: float
    exponent_b: float
    order: int
    complement: np.ndarray

    def __call__(self, values: np.ndarray) -> np.ndarray:
        """Contract the last axis of *values* (sampled at :attr:`nodes`)."""
        return values @ self.weights


def _jacobi_pair(n: int, alpha: float, beta: float, x: np.ndarray):
    """Evaluate :math:`P_n^{(\\alpha, \\beta)}` and :math:`P_{n-1}^{(\\alpha, \\beta)}`."""
    # coefficients are formed in the working precision of x
    alpha, beta = x.dtype.type(alpha), x.dtype.type(beta)
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)

    p1 = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0)
    ab = alpha + beta
    for k in range(2, n + 1):
        a1 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0)
        a2 = (2.0 * k + ab - 1.0) * (alpha * alpha - beta * beta)
        a3 = (2.0 * k + ab - 2.0) * (2.0 * k + ab - 1.0) * (2.0 * k + ab)
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + ab)
        p0, p1 = p1, ((a2 + a3 * x) * p1 - a4 * p0) / a1

    return p1, p0


def _jacobi_derivative(n: int, alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    c = 0.5 * (n + x.dtype.type(alpha) + beta + 1.0)
    return c * _jacobi_pair(n - 1, alpha + 1.0, beta + 1.0, x)[0]


# the recurrence loses relative accuracy close to the endpoints, so roots and
# weights are computed in extended precision where the platform provides it
_EPS_EXT = 4.0 * float(np.finfo(np.longdouble).eps)


def _jacobi_roots(n: int, alpha: float, beta: float) -> np.ndarray:
    """Roots of :math:`P_n^{(\\alpha, \\beta)}` on [-1, 1], increasing.

    Newton's method started from Chebyshev points, with the correction of
    each root deflated by all the others (simultaneous Ehrlich-Aberth form).
    """
    k = np.arange(n)
    x = -np.cos((2.0 * k + 1.0) * np.pi / (2.0 * n)).astype(np.longdouble)

    for _ in range(100):
        p, _ = _jacobi_pair(n, alpha, beta, x)
        dp = _jacobi_derivative(n, alpha, beta, x)
        ratio = p / dp

        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        delta = ratio / (1.0 - ratio * np.sum(1.0 / diff, axis=1))
        x = x - delta

        if np.max(np.abs(delta)) < _EPS_EXT:
            break
    else:
        worst = int(np.argmax(np.abs(delta)))
        raise ConvergenceError(
            f"Gauss-Jacobi Newton iteration failed for n={n}, "
            f"alpha={alpha}, beta={beta} at node {worst}",
            index=worst,
        )

    return np.sort(x)


@lru_cache(maxsize=256)
def _jacobi_rule_cached(n: int, a: float, b: float) -> QuadratureRule:
    # t = (1 + x) / 2 maps t^a (1 - t)^b to the weight (1 - x)^b (1 + x)^a
    alpha, beta = b, a
    x = _jacobi_roots(n, alpha, beta)

    dp = _jacobi_derivative(n, alpha, beta, x)
    weights = 1.0 / ((1.0 - x) * (1.0 + x) * dp * dp)
    log_beta = math.lgamma(a + 1.0) + math.lgamma(b + 1.0) - math.lgamma(a + b + 2.0)
    weights = np.asarray(weights * (math.exp(log_beta) / np.sum(weights)), dtype=np.float64)

    nodes = np.asarray(0.5 * (1.0 + x), dtype=np.float64)
    complement = np.asarray(0.5 * (1.0 - x), dtype=np.float64)
    for ary in (nodes, weights, complement):
        ary.setflags(write=False)

    return QuadratureRule(
        nodes=nodes,
        weights=weights,
        exponent_a=a,
        exponent_b=b,
        order=n,
        complement=complement,
    )


def jacobi_rule(n: int, a: float, b: float) -> QuadratureRule:
    r"""Gauss-Jacobi rule with *n* nodes for the weight :math:`t^a (1 - t)^b` on [0, 1].

    Rules are cached; the returned arrays are read-only.
    """
    if n < 1:
        raise DomainError(f"rule order must be positive: {n}")
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"Jacobi exponents must exceed -1: a={a}, b={b}")

    return _jacobi_rule_cached(int(n), float(a), float(b))


def legendre_rule(n: int) -> QuadratureRule:
    return jacobi_rule(n, 0.0, 0.0)


# {{{ integrators


def integrate_unit(g: Integrand, a: float, b: float, order: int = DEFAULT_ORDER):
    r"""Evaluate :math:`\int_0^1 g(t) t^a (1 - t)^b \, dt`."""
    rule = jacobi_rule(order, a, b)
    return rule(g(rule.nodes))


def integrate_jacobi(
    g: Integrand, lo, hi, a: float, b: float, order: int = DEFAULT_ORDER
) -> np.ndarray:
    r"""Evaluate :math:`\int_{lo}^{hi} g(y) (y - lo)^a (hi - y)^b \, dy`.

    *lo* and *hi* may be arrays; *g* receives an array with one extra trailing
    axis holding the nodes.
    """
    rule = jacobi_rule(order, a, b)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    length = hi - lo
    y = lo[..., None] + length[..., None] * rule.nodes
    return length ** (1.0 + a + b) * rule(g(y))


def integrate_ball(f: Integrand, x, s: float, nu_exp: float, order: int = DEFAULT_ORDER):
    r"""Evaluate :math:`\int_0^x f(y) (x^2 - y^2)^{s - 1} y^{\nu} \, dy`.

    The substitution :math:`y = x \sqrt{t}` turns the kernel into the Jacobi
    weight :math:`t^{(\nu - 1)/2} (1 - t)^{s - 1}`. The value at ``x = 0`` is 0.
    """
    if not s > 0.0:
        raise DomainError(f"ball integral requires s > 0: {s}")
    if not nu_exp > -1.0:
        raise DomainError(f"ball integral requires nu > -1: {nu_exp}")

    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise DomainError("ball integral requires x >= 0")

    rule = jacobi_rule(order, 0.5 * (nu_exp - 1.0), s - 1.0)
    sums = rule(f(x[..., None] * np.sqrt(rule.nodes)))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0.0, 0.5 * x ** (nu_exp + 2.0 * s - 1.0) * sums, 0.0)

    return out[()] if out.ndim == 0 else out


def integrate_shell(
    f: Integrand,
    x,
    s: float,
    order: int = DEFAULT_ORDER,
    tail_cut: float = DEFAULT_TAIL_CUT,
    rel_tol: float = 1.0e-12,
    max_panels: int = 60,
):
    r"""Evaluate :math:`\int_x^\infty f(y) (y^2 - x^2)^{s - 1} y \, dy`.

    With :math:`u = y^2 - x^2` this is
    :math:`\frac12 \int_0^\infty f(\sqrt{x^2 + u}) u^{s - 1} \, du`, computed as a
    Gauss-Jacobi rule on ``[0, tail_cut]`` followed by Gauss-Legendre panels of
    doubling length until a panel contributes less than *rel_tol*.

    :raises TruncationError: if the tail has not settled after *max_panels*.
    """
    if not s > 0.0:
        raise DomainError(f"shell integral requires s > 0: {s}")
    if not tail_cut > 0.0:
        raise DomainError(f"tail_cut must be positive: {tail_cut}")

    x = np.asarray(x, dtype=np.float64)
    x2 = (x * x)[..., None]

    head = jacobi_rule(order, s - 1.0, 0.0)
    total = tail_cut**s * head(f(np.sqrt(x2 + tail_cut * head.nodes)))

    panel = legendre_rule(order)
    lo = tail_cut
    for _ in range(max_panels):
        u = lo * (1.0 + panel.nodes)
        piece = lo * panel(f(np.sqrt(x2 + u)) * u ** (s - 1.0))
        total = total + piece
        if np.all(np.abs(piece) <= rel_tol * np.abs(total)):
            break
        lo = 2.0 * lo
    else:
        raise TruncationError(
            f"shell tail did not settle within {max_panels} panels (u up to {lo:.3g})"
        )

    out = 0.5 * total
    return out[()] if out.ndim == 0 else out


# }}}
