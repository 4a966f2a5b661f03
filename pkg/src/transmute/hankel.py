"""Truncated Hankel transform pair and the composition H_mu^{-1} w H_nu."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, PreconditionError, TruncationError
from .functions import TestFunction
from .quad import legendre_rule
from .specfun import j_norm

logger = logging.getLogger(__name__)

DEFAULT_PANEL_ORDER = 4


@dataclass(frozen=True)
class RadialGrid:
    """Composite Gauss-Legendre discretization of ``[0, t_max]``."""

    t_max: float
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    panel_order: int = DEFAULT_PANEL_ORDER

    @classmethod
    def build(cls, t_max: float, n: int, panel_order: int = DEFAULT_PANEL_ORDER) -> RadialGrid:
        """Grid with ``ceil(n / panel_order)`` equal panels of *panel_order* nodes."""
        if not t_max > 0:
            raise DomainError(f"t_max must be positive: {t_max}")
        if n < 1:
            raise DomainError(f"node count must be positive: {n}")

        n_panels = max(1, math.ceil(n / panel_order))
        rule = legendre_rule(panel_order)
        h = t_max / n_panels
        left = h * np.arange(n_panels)
        nodes = (left[:, None] + h * rule.nodes).reshape(-1)
        weights = np.tile(h * rule.weights, n_panels)
        for ary in (nodes, weights):
            ary.setflags(write=False)
        return cls(
            t_max=float(t_max), n=nodes.size, nodes=nodes, weights=weights,
            panel_order=panel_order,
        )

    def radial_weights(self, nu: float) -> np.ndarray:
        r"""Weights for :math:`\int_0^{t_{max}} g(t) t^\nu \, dt` with smooth *g*.

        On the first panel the weights integrate :math:`t^\nu` times the
        interpolating polynomial exactly, so non-integer *nu* keeps the
        order of the panel rule.
        """
        q = self.panel_order
        h = self.t_max * q / self.n
        weights = self.weights * self.nodes**nu

        s = self.nodes[:q] / h
        k = np.arange(q)
        moments = h ** (nu + 1.0) / (nu + k + 1.0)
        weights[:q] = np.linalg.solve((s[:, None] ** k).T, moments)
        return weights


def default_t_max(f: TestFunction) -> float:
    return 60.0 if f.decay.kind == "exponential" else 30.0


def _check_truncation(f: TestFunction, grid: RadialGrid) -> None:
    if not f.decay.is_decaying:
        raise PreconditionError(
            f"Hankel transform needs a decaying function, got {f.decay.kind!r} decay"
        )
    if f.decay.extent > grid.t_max:
        raise TruncationError(
            f"{f.label} is not negligible at t_max = {grid.t_max:g} "
            f"(extent {f.decay.extent:.3g})"
        )
    logger.debug("hankel truncation of %s at %g beyond extent %g",
                 f.label, grid.t_max, f.decay.extent)


def _check_order(nu: float) -> None:
    if not nu > -1.0:
        raise PreconditionError(f"Hankel transform requires nu > -1: {nu}")


def hankel_fwd(nu: float, f: TestFunction, t, grid: RadialGrid):
    r"""Hankel transform :math:`\int_0^\infty j_{(\nu-1)/2}(xt) f(x) x^\nu \, dx`,
    truncated at ``grid.t_max``."""
    _check_order(nu)
    _check_truncation(f, grid)

    t = np.asarray(t, dtype=np.float64)
    x = grid.nodes
    fx = f(x) * grid.radial_weights(nu)
    kernel = j_norm(0.5 * (nu - 1.0), t[..., None] * x)
    out = kernel @ fx
    return out[()] if np.ndim(out) == 0 else out


def hankel_inv_prefactor(nu: float) -> float:
    return 2.0 ** (1.0 - nu) / math.gamma(0.5 * (nu + 1.0)) ** 2


def hankel_inv(nu: float, fhat: np.ndarray, x, grid: RadialGrid):
    r"""Inverse transform
    :math:`\frac{2^{1-\nu}}{\Gamma^2(\frac{\nu+1}{2})} \int_0^\infty j_{(\nu-1)/2}(xt) \hat f(t) t^\nu \, dt`
    of values *fhat* sampled at the grid nodes."""
    _check_order(nu)
    fhat = np.asarray(fhat, dtype=np.float64)
    if fhat.shape[-1] != grid.n:
        raise DomainError(f"fhat has {fhat.shape[-1]} samples, grid has {grid.n} nodes")

    x = np.asarray(x, dtype=np.float64)
    t = grid.nodes
    kernel = j_norm(0.5 * (nu - 1.0), x[..., None] * t)
    out = hankel_inv_prefactor(nu) * (kernel @ (fhat * grid.radial_weights(nu)))
    return out[()] if np.ndim(out) == 0 else out


# {{{ composition


@dataclass(frozen=True)
class WeightSpec:
    """Multiplier :math:`w(t)` applied between the two transforms."""

    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=np.float64))

    @classmethod
    def power(cls, alpha: float, scale: float = 1.0) -> WeightSpec:
        """:math:`c \\, t^\\alpha`."""
        return cls("power", lambda t: scale * t**alpha)

    @classmethod
    def small_bessel(cls, gamma: float, z: float) -> WeightSpec:
        """:math:`j_\\gamma(z t)`."""
        return cls("small-bessel", lambda t: j_norm(gamma, z * t))

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray], np.ndarray]) -> WeightSpec:
        return cls("custom", fn)


def poisson_weight(mu: float) -> WeightSpec:
    r"""Power weight with :math:`H_\mu^{-1} [w H_0 f] = \mathcal{P}^\mu f`.

    The bare symbol :math:`t^{-\mu}` yields :math:`2^{-\mu}\pi/\Gamma^2(\frac{\mu+1}{2})`
    times the normalized Poisson operator.
    """
    return WeightSpec.power(-mu, 2.0**mu * math.gamma(0.5 * (mu + 1.0)) ** 2 / math.pi)


def itcm_compose(
    nu: float,
    mu: float,
    w: WeightSpec,
    direction: str,
    f: TestFunction,
    x,
    grid: RadialGrid,
):
    r"""Evaluate :math:`H_\mu^{-1}[w^{\pm 1} H_\nu f](x)`.

    *direction* ``"S"`` divides by *w*, ``"P"`` multiplies by it.
    """
    direction = direction.upper()
    if direction not in ("S", "P"):
        raise DomainError(f"direction must be 'S' or 'P': {direction!r}")

    fhat = hankel_fwd(nu, f, grid.nodes, grid)
    wt = np.asarray(w(grid.nodes), dtype=np.float64)
    if direction == "S":
        bad = np.flatnonzero(~np.isfinite(wt) | (np.abs(wt) < 1.0e-300))
        if bad.size:
            raise DomainError(
                f"weight vanishes at {bad.size} grid nodes, e.g. t = {grid.nodes[bad[:5]]}"
            )
        fhat = fhat / wt
    else:
        fhat = fhat * wt

    return hankel_inv(mu, fhat, x, grid)


# }}}
