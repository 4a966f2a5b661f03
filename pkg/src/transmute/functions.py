"""Radial test functions with analytic derivatives and decay descriptors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .specfun import j_norm

Evaluator = Callable[[np.ndarray], np.ndarray]

#: exp(-LOG_CUT) is treated as negligible relative to the peak value
LOG_CUT = 40.0

DECAY_KINDS = ("gaussian", "exponential", "compact", "polynomial", "oscillatory")


@dataclass(frozen=True)
class Decay:
    """How a function behaves at infinity.

    .. attribute:: kind

        ``"gaussian"`` (:math:`e^{-r y^2}`), ``"exponential"`` (:math:`e^{-r y}`),
        ``"compact"`` (zero beyond *support*), ``"polynomial"`` (at most
        algebraic growth or decay) or ``"oscillatory"`` (algebraically bounded
        and oscillating with angular frequency *rate*).
    """

    kind: str
    rate: float = 1.0
    support: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in DECAY_KINDS:
            raise DomainError(f"unknown decay kind {self.kind!r}")
        if self.kind == "compact" and not (self.support and self.support > 0):
            raise DomainError("compact decay requires a positive support radius")
        if not self.rate > 0:
            raise DomainError(f"decay rate must be positive: {self.rate}")

    @property
    def is_decaying(self) -> bool:
        """True if the function is negligible beyond a finite radius."""
        return self.kind in ("gaussian", "exponential", "compact")

    @property
    def extent(self) -> float:
        """Radius beyond which the function is negligible (``inf`` if none)."""
        if self.kind == "gaussian":
            return math.sqrt(LOG_CUT / self.rate)
        if self.kind == "exponential":
            return LOG_CUT / self.rate
        if self.kind == "compact":
            return float(self.support)
        return math.inf

    @property
    def scale(self) -> float:
        """Characteristic length on which the function varies."""
        if self.kind == "gaussian":
            return 1.0 / math.sqrt(self.rate)
        if self.kind == "exponential":
            return 1.0 / self.rate
        if self.kind == "compact":
            return float(self.support) / 3.0
        if self.kind == "oscillatory":
            return 1.0 / self.rate
        return 1.0

    def shell_tail_cut(self, x: float = 0.0, shift: float = 0.0) -> float:
        r"""Cut-off in :math:`u = y^2 - x^2` for shell integrals.

        *shift* widens the extent, e.g. for translates of the function.
        """
        if not self.is_decaying:
            raise PreconditionError(
                f"shell integrals require a decaying function, got {self.kind!r} decay"
            )
        radius = self.extent + shift
        return max(radius * radius - x * x, self.scale**2)


def _zeros(y):
    return np.zeros_like(np.asarray(y, dtype=np.float64))


@dataclass(frozen=True)
class TestFunction:
    """A smooth radial function with its first two derivatives.

    Evaluators accept arrays of any shape. *d1* and *d2* may be *None* when
    they are not known in closed form.
    """

    eval: Evaluator
    d1: Evaluator | None
    d2: Evaluator | None
    decay: Decay
    even_extension: bool = True
    label: str = field(default="f", compare=False)

    # pytest would otherwise try to collect this class
    __test__ = False

    def __call__(self, y):
        return self.eval(np.asarray(y, dtype=np.float64))

    def __add__(self, other: TestFunction) -> TestFunction:
        return combine([(1.0, self), (1.0, other)])

    def __rmul__(self, c: float) -> TestFunction:
        return combine([(float(c), self)])


def _slower(a: Decay, b: Decay) -> Decay:
    order = {"compact": 0, "gaussian": 1, "exponential": 2, "oscillatory": 3, "polynomial": 4}
    if order[a.kind] != order[b.kind]:
        return a if order[a.kind] > order[b.kind] else b
    if a.kind == "compact":
        return a if a.support >= b.support else b
    if a.kind == "oscillatory":
        return a if a.rate >= b.rate else b
    return a if a.rate <= b.rate else b


def combine(terms: Sequence[tuple[float, TestFunction]]) -> TestFunction:
    """Linear combination ``sum c_i f_i``."""
    terms = list(terms)
    if not terms:
        raise DomainError("combine needs at least one term")

    def lin(attr: str) -> Evaluator | None:
        fns = [getattr(f, attr) for _, f in terms]
        if any(fn is None for fn in fns):
            return None
        return lambda y: sum(c * fn(y) for (c, _), fn in zip(terms, fns))

    decay = terms[0][1].decay
    for _, f in terms[1:]:
        decay = _slower(decay, f.decay)

    return TestFunction(
        eval=lin("eval"),
        d1=lin("d1"),
        d2=lin("d2"),
        decay=decay,
        even_extension=all(f.even_extension for _, f in terms),
        label=" + ".join(f"{c:g}*{f.label}" for c, f in terms),
    )


# {{{ factories


def gaussian(a: float = 1.0) -> TestFunction:
    r""":math:`e^{-a y^2}`."""
    if not a > 0:
        raise DomainError(f"gaussian requires a > 0: {a}")

    def ev(y):
        return np.exp(-a * y * y)

    return TestFunction(
        eval=ev,
        d1=lambda y: -2.0 * a * y * ev(y),
        d2=lambda y: (4.0 * a * a * y * y - 2.0 * a) * ev(y),
        decay=Decay("gaussian", rate=a),
        label=f"gaussian:{a:g}",
    )


def cosine(lam: float) -> TestFunction:
    r""":math:`\cos(\lambda y)`."""
    return TestFunction(
        eval=lambda y: np.cos(lam * y),
        d1=lambda y: -lam * np.sin(lam * y),
        d2=lambda y: -lam * lam * np.cos(lam * y),
        decay=Decay("oscillatory", rate=abs(lam)) if lam != 0 else Decay("polynomial"),
        label=f"cosine:{lam:g}",
    )


def poly(coeffs: Sequence[float]) -> TestFunction:
    r"""Polynomial :math:`\sum_k c_k y^k`."""
    c = np.asarray(coeffs, dtype=np.float64)
    if c.size == 0:
        raise DomainError("poly needs at least one coefficient")
    p = np.polynomial.Polynomial(c)
    dp, ddp = p.deriv(1), p.deriv(2)
    return TestFunction(
        eval=lambda y: p(y),
        d1=lambda y: dp(y) * np.ones_like(y),
        d2=lambda y: ddp(y) * np.ones_like(y),
        decay=Decay("polynomial"),
        even_extension=not np.any(c[1::2]),
        label="poly:" + ",".join(f"{ck:g}" for ck in c),
    )


def bump(radius: float) -> TestFunction:
    r""":math:`(1 - y^2/R^2)^3` on :math:`|y| < R`, zero outside (twice differentiable)."""
    if not radius > 0:
        raise DomainError(f"bump requires R > 0: {radius}")
    r2 = radius * radius

    def s(y):
        return np.clip(1.0 - y * y / r2, 0.0, None)

    return TestFunction(
        eval=lambda y: s(y) ** 3,
        d1=lambda y: -6.0 * y / r2 * s(y) ** 2,
        d2=lambda y: -6.0 / r2 * s(y) ** 2 + 24.0 * y * y / (r2 * r2) * s(y),
        decay=Decay("compact", support=radius),
        label=f"bump:{radius:g}",
    )


def zero() -> TestFunction:
    return TestFunction(
        eval=_zeros, d1=_zeros, d2=_zeros, decay=Decay("compact", support=1.0),
        label="zero",
    )


def one() -> TestFunction:
    return TestFunction(
        eval=lambda y: np.ones_like(np.asarray(y, dtype=np.float64)),
        d1=_zeros,
        d2=_zeros,
        decay=Decay("polynomial"),
        label="one",
    )


def bessel_eigen(gamma: float, lam: float = 1.0) -> TestFunction:
    r"""Normalized Bessel function :math:`j_\gamma(\lambda y)`.

    It satisfies :math:`B_{2\gamma + 1} f = -\lambda^2 f`.
    """
    g1 = gamma + 1.0

    def d1(y):
        return -(lam * lam) * y / (2.0 * g1) * j_norm(g1, lam * y)

    def d2(y):
        y = np.asarray(y, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = -(lam * lam) * j_norm(gamma, lam * y) - (2.0 * gamma + 1.0) * d1(y) / y
        return np.where(y == 0.0, -(lam * lam) / (2.0 * g1), val)

    return TestFunction(
        eval=lambda y: j_norm(gamma, lam * y),
        d1=d1,
        d2=d2,
        decay=Decay("oscillatory", rate=abs(lam)),
        label=f"bessel:{gamma:g},{lam:g}",
    )


def bessel_applied(f: TestFunction, nu: float) -> TestFunction:
    r"""The function :math:`B_\nu f = f'' + (\nu / y) f'`, continued by
    :math:`(1 + \nu) f''(0)` at the origin."""
    if f.d1 is None or f.d2 is None:
        raise PreconditionError(f"{f.label} has no analytic derivatives")

    def ev(y):
        y = np.asarray(y, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = f.d2(y) + nu * f.d1(y) / y
        return np.where(y == 0.0, (1.0 + nu) * f.d2(np.zeros_like(y)), val)

    return TestFunction(
        eval=ev, d1=None, d2=None, decay=f.decay, even_extension=f.even_extension,
        label=f"B[{nu:g}]{f.label}",
    )


# }}}


# {{{ textual specs


def parse_function_spec(spec: str) -> TestFunction:
    """Build a function from ``gaussian:a``, ``cosine:lam``, ``poly:c0,c1,...``,
    ``bump:R``, ``bessel:gamma,lam``, ``zero`` or ``one``."""
    name, _, args = spec.strip().partition(":")
    name = name.strip().lower()
    try:
        values = [float(v) for v in args.split(",")] if args.strip() else []
    except ValueError as exc:
        raise DomainError(f"malformed function spec {spec!r}") from exc

    def one_arg(default: float | None = None) -> float:
        if not values and default is not None:
            return default
        if len(values) != 1:
            raise DomainError(f"{name} takes exactly one parameter: {spec!r}")
        return values[0]

    if name == "gaussian":
        return gaussian(one_arg(1.0))
    if name == "cosine":
        return cosine(one_arg())
    if name == "poly":
        return poly(values)
    if name == "bump":
        return bump(one_arg())
    if name == "bessel":
        if len(values) != 2:
            raise DomainError(f"bessel takes gamma,lambda: {spec!r}")
        return bessel_eigen(values[0], values[1])
    if name in ("zero", "one") and not values:
        return zero() if name == "zero" else one()

    raise DomainError(f"unknown function spec {spec!r}")


# }}}
