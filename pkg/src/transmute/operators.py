"""Transmutation operators for the Bessel operator :math:`B_\\nu = D^2 + (\\nu/y) D`.

All operators take a :class:`~transmute.functions.TestFunction` and evaluate
the transformed function at one or more points *x*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError, TruncationError
from .functions import TestFunction
from .quad import (
    DEFAULT_ORDER,
    integrate_ball,
    integrate_jacobi,
    integrate_shell,
    jacobi_rule,
    legendre_rule,
)
from .specfun import hyp2f1_connection, hyp2f1_series, rgamma

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class OperatorParams:
    """Indices and constants shared by the operator family."""

    nu: float = 0.0
    mu: float = 0.0
    alpha: float = 0.0
    b: float = 0.0


def _scalar_or_array(out: np.ndarray):
    return out[()] if out.ndim == 0 else out


def _map_points(fn: Callable[[float], float], x) -> np.ndarray:
    xa = np.asarray(x, dtype=np.float64)
    out = np.array([fn(float(xi)) for xi in xa.reshape(-1)], dtype=np.float64)
    return _scalar_or_array(out.reshape(xa.shape))


def poisson_constant(mu: float) -> float:
    r""":math:`C(\mu) = 2 \Gamma((\mu + 1)/2) / (\sqrt{\pi} \Gamma(\mu/2))`."""
    return 2.0 * math.gamma(0.5 * (mu + 1.0)) / (math.sqrt(math.pi) * math.gamma(0.5 * mu))


def translation_constant(nu: float) -> float:
    r""":math:`C(\nu) = \Gamma((\nu + 1)/2) / (\sqrt{\pi} \Gamma(\nu/2))`."""
    return math.gamma(0.5 * (nu + 1.0)) / (math.sqrt(math.pi) * math.gamma(0.5 * nu))


# {{{ Poisson and descent operators


def poisson(mu: float, f: TestFunction, x, order: int = DEFAULT_ORDER):
    r"""Poisson operator
    :math:`C(\mu) x^{1-\mu} \int_0^x f(y) (x^2 - y^2)^{\mu/2 - 1} \, dy`.

    It maps :math:`D^2` to :math:`B_\mu` and fixes constants; at ``x = 0``
    the value is ``f(0)``.
    """
    if not mu > 0.0:
        raise PreconditionError(f"poisson requires mu > 0: {mu}")

    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise DomainError("poisson requires x >= 0")

    with np.errstate(divide="ignore", invalid="ignore"):
        val = poisson_constant(mu) * x ** (1.0 - mu) * integrate_ball(f, x, 0.5 * mu, 0.0, order)
    out = np.where(x == 0.0, f(np.zeros_like(x)), val)
    return _scalar_or_array(out)


def descent_first(nu: float, mu: float, f: TestFunction, x, order: int = DEFAULT_ORDER):
    r"""First descent operator, mapping :math:`B_\nu` to :math:`B_\mu` for
    :math:`-1 < \nu < \mu`:

    .. math::

        \frac{2 \Gamma(\frac{\mu+1}{2})}{\Gamma(\frac{\mu-\nu}{2}) \Gamma(\frac{\nu+1}{2})}
        x^{1-\mu} \int_0^x f(y) (x^2 - y^2)^{\frac{\mu-\nu}{2} - 1} y^\nu \, dy.
    """
    if not -1.0 < nu < mu:
        raise PreconditionError(f"descent_first requires -1 < nu < mu: nu={nu}, mu={mu}")

    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise DomainError("descent_first requires x >= 0")

    s = 0.5 * (mu - nu)
    k = 2.0 * math.gamma(0.5 * (mu + 1.0)) / (math.gamma(s) * math.gamma(0.5 * (nu + 1.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        val = k * x ** (1.0 - mu) * integrate_ball(f, x, s, nu, order)
    out = np.where(x == 0.0, f(np.zeros_like(x)), val)
    return _scalar_or_array(out)


def descent_second_constant(nu: float, mu: float, variant: str = "beta") -> float:
    r"""Constant of the second descent operator.

    ``"beta"`` is :math:`2\Gamma(\nu-\mu)/\Gamma^2(\frac{\nu-\mu}{2})` (the value
    obtained from the index-shift kernel); ``"erdelyi"`` is the
    Buschman-Erdelyi normalization :math:`2^{1-\frac{\nu-\mu}{2}}/\Gamma(\frac{\nu-\mu}{2})`.
    """
    s = 0.5 * (nu - mu)
    if variant == "beta":
        return 2.0 * math.gamma(nu - mu) / math.gamma(s) ** 2
    if variant == "erdelyi":
        return 2.0 ** (1.0 - s) / math.gamma(s)
    raise DomainError(f"unknown descent_second variant {variant!r}")


def descent_second(
    nu: float,
    mu: float,
    f: TestFunction,
    x,
    order: int = DEFAULT_ORDER,
    variant: str = "beta",
    rel_tol: float = 1.0e-12,
):
    r"""Second descent operator, mapping :math:`B_\nu` to :math:`B_\mu` for
    :math:`-1 < \mu < \nu`:
    :math:`K \int_x^\infty f(y) (y^2 - x^2)^{\frac{\nu-\mu}{2} - 1} y \, dy`.

    Requires *f* to decay (gaussian, exponential or compact).
    """
    if not -1.0 < mu < nu:
        raise PreconditionError(f"descent_second requires -1 < mu < nu: nu={nu}, mu={mu}")

    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0):
        raise DomainError("descent_second requires x >= 0")

    k = descent_second_constant(nu, mu, variant)
    if f.decay.kind == "compact" and np.all(x >= f.decay.support):
        return _scalar_or_array(np.zeros_like(x))

    tail_cut = f.decay.shell_tail_cut()
    out = k * integrate_shell(f, x, 0.5 * (nu - mu), order, tail_cut=tail_cut, rel_tol=rel_tol)
    return _scalar_or_array(np.asarray(out))


# }}}


# {{{ index shift


def reduction_constant(kind: str, nu: float, mu: float) -> float:
    """Constant *C* that turns :func:`index_shift` into a named operator.

    *kind* is ``"poisson"`` (``alpha = -mu``, ``nu = 0``), ``"descent_first"``
    (``alpha = nu - mu``) or ``"descent_second"`` (``alpha = 0``).
    """
    g = math.gamma
    if kind == "poisson":
        return g(0.5 * (mu + 1.0)) ** 2 / (2.0 ** (2.0 - mu) * math.pi)
    if kind == "descent_first":
        return 2.0 ** (mu - nu - 2.0) * g(0.5 * (mu + 1.0)) ** 2 / g(0.5 * (nu + 1.0)) ** 2
    if kind == "descent_second":
        return (
            g(0.5 * (mu + 1.0))
            * g(nu - mu)
            / (4.0 * g(0.5 * (nu + 1.0)) * g(0.5 * (nu - mu)))
        )
    raise DomainError(f"unknown reduction {kind!r}")


class _Kernel:
    r"""A hypergeometric kernel :math:`F(z) = {}_2F_1(a, b; c; z)` on [0, 1)
    split as ``F(1 - w) = sum_k c_k w^{rho_k} g_k(w)`` near ``z = 1``."""

    def __init__(self, a: float, b: float, c: float) -> None:
        self.a, self.b, self.c = a, b, c
        tol = 1.0e-12 * max(1.0, abs(c))

        # binomial reduction: F = (1 - z)^e exactly
        self.power: float | None = None
        if abs(b - c) <= tol:
            self.power = -a
        elif abs(a - c) <= tol:
            self.power = -b

        if self.power is not None:
            if not self.power > -1.0:
                raise PreconditionError(f"kernel (1 - z)^{self.power} is not integrable")
            self.terms = [(1.0, self.power, None)]
        else:
            conn = hyp2f1_connection(a, b, c)
            if not conn.rho > -1.0:
                raise PreconditionError(f"kernel singularity (1 - z)^{conn.rho} is not integrable")
            self.terms = [
                (coef, rho, params)
                for coef, rho, params in (
                    (conn.A, 0.0, conn.regular),
                    (conn.B, conn.rho, conn.singular),
                )
                if coef != 0.0
            ]

    def near_origin(self, z: np.ndarray) -> np.ndarray:
        """Evaluate for ``0 <= z <= 1/2``."""
        if self.power is not None:
            return (1.0 - z) ** self.power
        return hyp2f1_series(self.a, self.b, self.c, z)

    def smooth(self, params, w: np.ndarray) -> np.ndarray:
        if params is None:
            return np.ones_like(w)
        return hyp2f1_series(*params, w)


def _breakpoints(lo: float, hi: float, width: float) -> np.ndarray:
    n = max(1, int(math.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, n + 1)


def _integrate_graded(
    g: Callable[[np.ndarray], np.ndarray],
    hi: float,
    a: float,
    n_panels: int,
    order: int,
) -> float:
    r""":math:`\int_0^{hi} g(w) w^a \, dw` with the weight on the first panel."""
    edges = np.linspace(0.0, hi, n_panels + 1)
    total = float(integrate_jacobi(g, 0.0, edges[1], a, 0.0, order))
    if n_panels > 1:
        lo, up = edges[1:-1], edges[2:]
        total += float(np.sum(integrate_jacobi(lambda w: g(w) * w**a, lo, up, 0.0, 0.0, order)))
    return total


def _averaged_limit(partials: Sequence[float], levels: int) -> float:
    """Limit of oscillating partial sums by repeated averaging."""
    s = np.asarray(partials, dtype=np.float64)
    for _ in range(min(levels, len(s) - 1)):
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[-1])


def _far_field(
    g: Callable[[np.ndarray], np.ndarray],
    y0: float,
    f: TestFunction,
    order: int,
    rel_tol: float,
    max_panels: int = 400,
) -> float:
    r""":math:`\int_{y_0}^\infty g(y) \, dy` where *g* inherits the decay of *f*."""
    decay = f.decay
    h = 2.0 * decay.scale
    rule = legendre_rule(order)

    def panel(lo: float, hi: float) -> float:
        return float((hi - lo) * rule(g(lo + (hi - lo) * rule.nodes)))

    if decay.is_decaying:
        y_end = decay.extent
        if y0 >= y_end:
            return 0.0
        # geometric growth from y0, capped at the decay length scale
        total, lo = 0.0, y0
        while lo < y_end:
            hi = min(y_end, lo + min(max(lo, 0.25 * h), h))
            total += panel(lo, hi)
            lo = hi
        return total

    if decay.kind == "oscillatory":
        # grow panels up to a half period, then sum half periods and average
        half = math.pi / decay.rate
        total, lo = 0.0, y0
        while lo < 4.0 * half:
            hi = lo + min(max(lo, 0.25 * half), half)
            total += panel(lo, hi)
            lo = hi
        partials = [total]
        for _ in range(max_panels):
            total += panel(lo, lo + half)
            lo += half
            partials.append(total)
            if len(partials) >= 24:
                a = _averaged_limit(partials[:-1], 16)
                b = _averaged_limit(partials, 16)
                if abs(a - b) <= rel_tol * max(abs(b), 1.0e-300):
                    return b
        raise TruncationError(f"oscillatory tail did not settle by y = {lo:.3g}")

    # algebraic decay: doubling panels until a panel is negligible
    total, lo = 0.0, y0
    for _ in range(max_panels):
        hi = lo + max(lo, h)
        piece = panel(lo, hi)
        total += piece
        lo = hi
        if lo > 4.0 * h and abs(piece) <= rel_tol * abs(total):
            return total
    raise TruncationError(f"algebraic tail did not settle by y = {lo:.3g}")


def _ball_term(
    f: TestFunction, x: float, nu: float, kernel: _Kernel, order: int, rel_tol: float
) -> float:
    r""":math:`\int_0^x f(y) F(y^2/x^2) y^\nu \, dy`."""
    extent = f.decay.extent
    width = 8.0 * f.decay.scale
    y_mid = x / SQRT2

    # inner part, z = y^2/x^2 <= 1/2: the kernel is a convergent series
    y_hi = min(y_mid, extent)

    def inner(y):
        return f(y) * kernel.near_origin((y / x) ** 2)

    n_panels = max(1, int(math.ceil(y_hi / width)))
    total = _integrate_graded(inner, y_hi, nu, n_panels, order)

    # outer part, y = x sqrt(1 - w): the singular factors of F are extracted
    if y_mid < extent:
        n_panels = max(1, int(math.ceil((x - y_mid) / width)))
        for coef, rho, params in kernel.terms:

            def outer(w, params=params):
                return (
                    f(x * np.sqrt(1.0 - w))
                    * (1.0 - w) ** (0.5 * (nu - 1.0))
                    * kernel.smooth(params, w)
                )

            total += coef * 0.5 * x ** (nu + 1.0) * _integrate_graded(
                outer, 0.5, rho, n_panels, order
            )

    return total


def _shell_term(
    f: TestFunction, x: float, p: float, kernel: _Kernel, order: int, rel_tol: float
) -> float:
    r""":math:`\int_x^\infty f(y) F(x^2/y^2) y^p \, dy`."""
    extent = f.decay.extent
    if x >= extent:
        return 0.0

    width = 8.0 * f.decay.scale
    y_mid = SQRT2 * x

    # near part, y = x / sqrt(1 - w)
    w_hi = 0.5 if y_mid <= extent else 1.0 - (x / extent) ** 2
    n_panels = max(1, int(math.ceil((min(y_mid, extent) - x) / width)))
    total = 0.0
    for coef, rho, params in kernel.terms:

        def near(w, params=params):
            return (
                f(x / np.sqrt(1.0 - w))
                * (1.0 - w) ** (-0.5 * (p + 3.0))
                * kernel.smooth(params, w)
            )

        total += coef * 0.5 * x ** (p + 1.0) * _integrate_graded(near, w_hi, rho, n_panels, order)

    # far part, z = x^2/y^2 <= 1/2
    def far(y):
        return f(y) * kernel.near_origin((x / y) ** 2) * y**p

    total += _far_field(far, y_mid, f, order, rel_tol)
    return total


def index_shift(
    alpha: float,
    nu: float,
    mu: float,
    C: float,
    f: TestFunction,
    x,
    order: int = DEFAULT_ORDER,
    rel_tol: float = 1.0e-12,
):
    r"""Index shift operator :math:`T^{(\alpha)}_{\nu,\mu}`, mapping :math:`B_\nu`
    to :math:`B_\mu`, with the two-branch hypergeometric kernel

    .. math::

        C \frac{2^{\alpha+3} \Gamma(\frac{\alpha+\mu+1}{2})}{\Gamma(\frac{\mu+1}{2})}
        \Big[ \frac{x^{-1-\mu-\alpha}}{\Gamma(-\alpha/2)} \int_0^x f(y)
        F\big(\tfrac{\alpha+\mu+1}{2}, \tfrac{\alpha}{2}+1; \tfrac{\nu+1}{2}; \tfrac{y^2}{x^2}\big)
        y^\nu \, dy \\
        + \frac{\Gamma(\frac{\nu+1}{2})}{\Gamma(\frac{\mu+1}{2}) \Gamma(\frac{\nu-\mu-\alpha}{2})}
        \int_x^\infty f(y)
        F\big(\tfrac{\alpha+\mu+1}{2}, \tfrac{\alpha+\mu-\nu}{2}+1; \tfrac{\mu+1}{2}; \tfrac{x^2}{y^2}\big)
        y^{\nu-\mu-\alpha-1} \, dy \Big].

    A branch whose reciprocal-gamma coefficient vanishes is skipped, so the
    reduced cases do not need *f* to decay. See :func:`reduction_constant`
    for the values of *C* that recover the Poisson and descent operators.
    """
    if not alpha + mu + 1.0 > 0.0:
        raise PreconditionError(f"index_shift requires alpha + mu + 1 > 0: {alpha + mu + 1}")
    if not alpha + 0.5 * (mu - nu) < 0.0:
        raise PreconditionError(
            f"index_shift requires alpha + (mu - nu)/2 < 0: {alpha + 0.5 * (mu - nu)}"
        )
    if not nu > -1.0:
        raise PreconditionError(f"index_shift requires nu > -1: {nu}")

    pref = C * 2.0 ** (alpha + 3.0) * math.gamma(0.5 * (alpha + mu + 1.0))
    pref *= rgamma(0.5 * (mu + 1.0))
    ball_coef = rgamma(-0.5 * alpha)
    shell_coef = (
        math.gamma(0.5 * (nu + 1.0)) * rgamma(0.5 * (mu + 1.0)) * rgamma(0.5 * (nu - mu - alpha))
    )

    a1 = 0.5 * (alpha + mu + 1.0)
    ball_kernel = _Kernel(a1, 0.5 * alpha + 1.0, 0.5 * (nu + 1.0)) if ball_coef else None
    shell_kernel = (
        _Kernel(a1, 0.5 * (alpha + mu - nu) + 1.0, 0.5 * (mu + 1.0)) if shell_coef else None
    )

    def at(xi: float) -> float:
        if not xi > 0.0:
            raise DomainError(f"index_shift requires x > 0: {xi}")
        val = 0.0
        if ball_kernel is not None:
            val += (
                ball_coef
                * xi ** (-1.0 - mu - alpha)
                * _ball_term(f, xi, nu, ball_kernel, order, rel_tol)
            )
        if shell_kernel is not None:
            val += shell_coef * _shell_term(
                f, xi, nu - mu - alpha - 1.0, shell_kernel, order, rel_tol
            )
        return pref * val

    return _map_points(at, x)


#: constant that makes :func:`index_shift` equal to the composition
#: H_nu^{-1} t^alpha H_nu
FRAC_POWER_C = 0.25


def bessel_frac_power(
    alpha: float, nu: float, f: TestFunction, x, order: int = DEFAULT_ORDER, rel_tol: float = 1.0e-12
):
    r"""Negative fractional power of the Bessel operator, the index shift with
    :math:`\mu = \nu`.

    The constant is fixed so that the operator acts on the Hankel side as
    multiplication by :math:`t^\alpha`, i.e. it equals
    :math:`(-B_\nu)^{\alpha/2}` and maps :math:`j_{(\nu-1)/2}(\lambda y)` to
    :math:`\lambda^\alpha j_{(\nu-1)/2}(\lambda x)`.
    """
    if not alpha < 0.0:
        raise PreconditionError(f"bessel_frac_power requires alpha < 0: {alpha}")
    if not alpha + nu + 1.0 > 0.0:
        raise PreconditionError(f"bessel_frac_power requires alpha + nu + 1 > 0: {alpha + nu + 1}")

    return index_shift(alpha, nu, nu, FRAC_POWER_C, f, x, order, rel_tol)


# }}}


# {{{ generalized translation


def gen_translation(nu: float, f: TestFunction, x, z, order: int = DEFAULT_ORDER):
    r"""Generalized translation
    :math:`C(\nu) \int_0^\pi f(\sqrt{x^2 + z^2 - 2xz\cos\varphi}) \sin^{\nu-1}\varphi \, d\varphi`.

    Evaluated with :math:`p = (1 - \cos\varphi)/2`, which gives the Jacobi weight
    :math:`(p(1-p))^{\nu/2-1}`. *x* and *z* broadcast; the formula is even in
    each of them.
    """
    if not nu > 0.0:
        raise PreconditionError(f"gen_translation requires nu > 0: {nu}")

    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    e = 0.5 * nu - 1.0
    rule = jacobi_rule(order, e, e)
    # C(nu) 2^(nu - 1) = Gamma(nu) / Gamma(nu/2)^2
    const = math.exp(math.lgamma(nu) - 2.0 * math.lgamma(0.5 * nu))

    d2 = ((x - z) ** 2)[..., None]
    xz4 = (4.0 * x * z)[..., None]
    out = const * rule(f(np.sqrt(d2 + xz4 * rule.nodes)))
    return _scalar_or_array(np.asarray(out))


def gen_translation_kernel(nu: float, f: TestFunction, x, z, order: int = DEFAULT_ORDER):
    r"""Generalized translation in product-kernel form,

    .. math::

        \frac{2^\nu \Gamma(\frac{\nu+1}{2})}{\sqrt{\pi} (4xz)^{\nu-1} \Gamma(\frac{\nu}{2})}
        \int_{|x-z|}^{x+z} f(y) y [(z^2 - (x-y)^2)((x+y)^2 - z^2)]^{\nu/2 - 1} \, dy.

    The kernel factors as :math:`(y-d)(y+d)(s-y)(s+y)` with :math:`d = |x - z|`,
    :math:`s = x + z`; the two factors vanishing on the interval go into the
    Jacobi weight, and the interval is graded when :math:`d` is small so that
    the nearby singularity at :math:`y = -d` is resolved.
    """
    if not nu > 0.0:
        raise PreconditionError(f"gen_translation_kernel requires nu > 0: {nu}")

    e = 0.5 * nu - 1.0
    const = (
        2.0**nu
        * math.gamma(0.5 * (nu + 1.0))
        / (math.sqrt(math.pi) * math.gamma(0.5 * nu))
    )

    def at(xi: float, zi: float) -> float:
        if not (xi > 0.0 and zi > 0.0):
            raise DomainError(f"gen_translation_kernel requires x, z > 0: x={xi}, z={zi}")
        d = abs(xi - zi)
        s = xi + zi
        length = s - d
        scale = const / (4.0 * xi * zi) ** (nu - 1.0)

        if d == 0.0:
            # y = L t: the factor y (y + d)^e becomes (L t)^(e + 1)
            val = integrate_jacobi(lambda y: f(y) * (y + s) ** e, 0.0, length, 2.0 * e + 1.0, e, order)
            return scale * float(val)

        def smooth(y):
            return f(y) * y * ((y + d) * (y + s)) ** e

        delta = d / length
        if delta >= 0.05:
            val = integrate_jacobi(smooth, d, s, e, e, order)
            return scale * float(val)

        # graded panels in t = (y - d)/L towards the near singularity at t = -2 delta
        edges = [0.0, 2.0 * delta]
        while edges[-1] < 0.25:
            edges.append(2.0 * edges[-1])
        edges[-1] = 0.5
        edges.append(1.0)
        t = np.asarray(edges)
        lo, hi = d + length * t[:-1], d + length * t[1:]

        val = integrate_jacobi(lambda y: smooth(y) * (s - y) ** e, lo[0], hi[0], e, 0.0, order)
        mid = integrate_jacobi(
            lambda y: smooth(y) * ((y - d) * (s - y)) ** e, lo[1:-1], hi[1:-1], 0.0, 0.0, order
        )
        val += np.sum(mid)
        val += integrate_jacobi(lambda y: smooth(y) * (y - d) ** e, lo[-1], hi[-1], 0.0, e, order)
        return scale * float(val)

    xb, zb = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(z, dtype=np.float64))
    out = np.array([at(xi, zi) for xi, zi in zip(xb.reshape(-1), zb.reshape(-1))])
    return _scalar_or_array(out.reshape(xb.shape))


def translated(nu: float, f: TestFunction, x, order: int = DEFAULT_ORDER) -> Callable:
    """The function ``y -> T_x^y f(x)`` for fixed (array) *x*.

    The returned callable accepts *y* with shape ``x.shape + (...)``.
    """
    x = np.asarray(x, dtype=np.float64)

    def ev(y):
        y = np.asarray(y, dtype=np.float64)
        xx = x.reshape(x.shape + (1,) * (y.ndim - x.ndim))
        return gen_translation(nu, f, xx, y, order)

    return ev


# }}}
