"""Special functions used by the operator kernels.

Gamma functions are taken from :mod:`math`. The Bessel function of the first
kind, its normalized variant and the Gauss hypergeometric function are
evaluated here with series, backward recurrence and asymptotic expansions so
that every regime has an explicit accuracy story.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AccuracyLossError, ConvergenceError, DomainError


@dataclass(frozen=True)
class Accuracy:
    """Tolerance and term budget for series evaluations."""

    rel_tol: float = 1.0e-12
    max_terms: int = 500

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError(f"rel_tol must lie in (0, 1): {self.rel_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be positive: {self.max_terms}")


DEFAULT_ACCURACY = Accuracy()

#: Bessel J uses the power series up to this argument
BESSEL_SERIES_MAX = 10.0
#: and the Hankel asymptotic expansion from this argument on
BESSEL_ASYMPTOTIC_MIN = 25.0
#: largest argument with validated accuracy
BESSEL_X_MAX = 1.0e5
#: largest |u| accepted by the modified (u < 0) branch of :func:`j_norm_sq`
JHAT_NEG_MAX = 4.0e4


def _is_int(x: float, tol: float = 1.0e-12) -> bool:
    return abs(x - round(x)) <= tol * max(1.0, abs(x))


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0.5 and _is_int(x)


# {{{ gamma


def ln_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for ``x > 0``."""
    if not x > 0.0:
        raise DomainError(f"ln_gamma requires x > 0: {x}")
    return math.lgamma(x)


def gamma(x: float) -> float:
    """Gamma function for ``x > 0``."""
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0: {x}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """Reciprocal gamma function, entire, vanishing at non-positive integers."""
    if is_nonpositive_integer(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


# }}}


# {{{ Bessel functions


def _jhat_series(g: float, u: np.ndarray, accuracy: Accuracy) -> np.ndarray:
    """Sum ``sum_m (-u/4)^m Gamma(g + 1) / (m! Gamma(m + g + 1))``."""
    q = -0.25 * u
    term = np.ones_like(q)
    total = np.ones_like(q)
    if q.size == 0:
        return total

    peak = math.sqrt(float(np.max(np.abs(q))))
    tiny = 1.0e-4 * accuracy.rel_tol
    for m in range(1, accuracy.max_terms + 1):
        term = term * q / (m * (m + g))
        total = total + term
        if m > peak and np.all(np.abs(term) <= tiny * np.abs(total)):
            return total

    raise ConvergenceError(
        f"normalized Bessel series did not converge in {accuracy.max_terms} terms"
    )


def _bessel_asymptotic(nu: float, x: np.ndarray, accuracy: Accuracy) -> np.ndarray:
    """Hankel expansion, summed until the terms stop decreasing."""
    mu4 = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    tiny = 1.0e-4 * accuracy.rel_tol

    for k in range(1, 60):
        new = term * (mu4 - (2 * k - 1) ** 2) / (8.0 * k * x)
        # an asymptotic series is truncated at its smallest term
        active &= np.abs(new) < np.abs(term)
        new = np.where(active, new, 0.0)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q = q + sign * new
        else:
            p = p + sign * new
        term = np.where(active, new, term)
        active &= np.abs(new) > tiny
        if not active.any():
            break

    omega = x - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(omega) - q * np.sin(omega))


def _bessel_miller(nu: float, x: np.ndarray) -> np.ndarray:
    """Backward recurrence normalized with the Neumann series for ``(x/2)^nu``."""
    xmax = float(np.max(x))
    n = int(xmax + 15.0 * xmax ** (1.0 / 3.0) + 30.0)
    n += n % 2

    def coeff(k: int) -> float:
        if k == 0:
            return math.gamma(nu + 1.0)
        return (nu + 2 * k) * math.exp(math.lgamma(nu + k) - math.lgamma(k + 1.0))

    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1.0e-30)
    total = coeff(n // 2) * j
    for m in range(n, 0, -1):
        jm1 = 2.0 * (nu + m) / x * j - jp1
        jp1, j = j, jm1
        if (m - 1) % 2 == 0:
            total = total + coeff((m - 1) // 2) * j

        big = np.abs(j) > 1.0e200
        if big.any():
            scale = np.where(big, 1.0e-200, 1.0)
            j, jp1, total = j * scale, jp1 * scale, total * scale

    return (0.5 * x) ** nu * j / total


def bessel_j(order: float, x, accuracy: Accuracy = DEFAULT_ACCURACY):
    """Bessel function of the first kind :math:`J_\\gamma(x)`.

    :arg order: real order :math:`\\gamma > -1`.
    :arg x: non-negative argument (scalar or array).
    """
    if not order > -1.0:
        raise DomainError(f"bessel_j requires order > -1: {order}")

    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < 0.0):
        raise DomainError("bessel_j requires x >= 0")
    if np.any(xa > BESSEL_X_MAX):
        raise AccuracyLossError(f"bessel_j argument exceeds {BESSEL_X_MAX:g}")

    if order in (0.5, -0.5):
        with np.errstate(divide="ignore"):
            amp = np.sqrt(2.0 / (math.pi * xa))
        out = amp * (np.sin(xa) if order > 0 else np.cos(xa))
        if order > 0:
            out = np.where(xa == 0.0, 0.0, out)
        return out[()] if out.ndim == 0 else out

    flat = xa.reshape(-1)
    out = np.empty_like(flat)
    series = flat <= BESSEL_SERIES_MAX
    asymptotic = flat >= max(BESSEL_ASYMPTOTIC_MIN, 2.0 * order * order)
    miller = ~series & ~asymptotic

    if series.any():
        xs = flat[series]
        with np.errstate(divide="ignore"):
            pref = (0.5 * xs) ** order * rgamma(order + 1.0)
        out[series] = pref * _jhat_series(order, xs * xs, accuracy)
    if miller.any():
        out[miller] = _bessel_miller(order, flat[miller])
    if asymptotic.any():
        out[asymptotic] = _bessel_asymptotic(order, flat[asymptotic], accuracy)

    out = out.reshape(xa.shape)
    return out[()] if out.ndim == 0 else out


def j_norm(gamma_: float, t, accuracy: Accuracy = DEFAULT_ACCURACY):
    """Normalized Bessel function :math:`2^\\gamma \\Gamma(\\gamma + 1) J_\\gamma(t) / t^\\gamma`.

    Even in *t* with value 1 at the origin; negative arguments are accepted.
    """
    if not gamma_ > -1.0:
        raise DomainError(f"j_norm requires gamma > -1: {gamma_}")

    ta = np.abs(np.asarray(t, dtype=np.float64))
    if gamma_ == -0.5:
        out = np.cos(ta)
    elif gamma_ == 0.5:
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(ta == 0.0, 1.0, np.sin(ta) / ta)
    else:
        flat = ta.reshape(-1)
        out = np.empty_like(flat)
        small = flat <= BESSEL_SERIES_MAX
        if small.any():
            out[small] = _jhat_series(gamma_, flat[small] ** 2, accuracy)
        if (~small).any():
            tl = flat[~small]
            scale = math.exp(gamma_ * math.log(2.0) + math.lgamma(gamma_ + 1.0))
            out[~small] = scale * bessel_j(gamma_, tl, accuracy) / tl**gamma_
        out = out.reshape(ta.shape)

    return out[()] if out.ndim == 0 else out


def j_norm_sq(gamma_: float, u, accuracy: Accuracy = DEFAULT_ACCURACY):
    """Normalized Bessel function in the squared argument.

    Evaluates :math:`\\hat{j}_\\gamma(u) = \\sum_m (-u/4)^m \\Gamma(\\gamma+1) /
    (m! \\Gamma(m+\\gamma+1))`, so that :math:`\\hat{j}_\\gamma(t^2) = j_\\gamma(t)`.
    Negative *u* gives the modified (growing) function.
    """
    if not gamma_ > -1.0:
        raise DomainError(f"j_norm_sq requires gamma > -1: {gamma_}")

    ua = np.asarray(u, dtype=np.float64)
    if np.any(ua < -JHAT_NEG_MAX):
        raise AccuracyLossError(f"j_norm_sq argument below {-JHAT_NEG_MAX:g}")

    flat = ua.reshape(-1)
    out = np.empty_like(flat)
    neg = flat <= 0.0
    if neg.any():
        out[neg] = _jhat_series(gamma_, flat[neg], accuracy)
    if (~neg).any():
        out[~neg] = j_norm(gamma_, np.sqrt(flat[~neg]), accuracy)

    out = out.reshape(ua.shape)
    return out[()] if out.ndim == 0 else out


# }}}


# {{{ Gauss hypergeometric function

#: beyond this argument the series is replaced by the z -> 1 - z connection
HYP2F1_SERIES_MAX = 0.75


class Connection(NamedTuple):
    """Coefficients of the ``z -> 1 - z`` connection formula.

    ``F(a, b; c; z) = A F(a, b; 1 - rho; w) + B w^rho F(c - a, c - b; 1 + rho; w)``
    with ``w = 1 - z`` and ``rho = c - a - b``.
    """

    rho: float
    A: float
    B: float
    regular: tuple[float, float, float]
    singular: tuple[float, float, float]


def hyp2f1_connection(a: float, b: float, c: float) -> Connection:
    rho = c - a - b
    if _is_int(rho, 1.0e-9):
        raise DomainError(
            f"2F1 connection requires non-integer c - a - b (got {rho}): logarithmic case"
        )

    gc = math.gamma(c)
    big_a = gc * math.gamma(rho) * rgamma(c - a) * rgamma(c - b)
    big_b = gc * math.gamma(-rho) * rgamma(a) * rgamma(b)
    return Connection(
        rho=rho,
        A=big_a,
        B=big_b,
        regular=(a, b, 1.0 - rho),
        singular=(c - a, c - b, 1.0 + rho),
    )


def hyp2f1_series(a: float, b: float, c: float, z, accuracy: Accuracy = DEFAULT_ACCURACY):
    """Direct hypergeometric series, intended for ``|z| <= 3/4``."""
    if is_nonpositive_integer(c):
        raise DomainError(f"2F1 undefined for c a non-positive integer: {c}")

    za = np.asarray(z, dtype=np.float64)
    term = np.ones_like(za)
    total = np.ones_like(za)
    zmax = float(np.max(np.abs(za))) if za.size else 0.0
    if zmax >= 1.0:
        raise DomainError("2F1 series requires |z| < 1")
    tail = 1.0 / (1.0 - zmax)
    tiny = 1.0e-2 * accuracy.rel_tol

    for n in range(accuracy.max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * za
        total = total + term
        if not np.any(term):
            return total
        ratio = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0))) * zmax
        if ratio < 1.0 and np.all(tail * np.abs(term) <= tiny * np.abs(total)):
            return total

    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; z) series did not converge in {accuracy.max_terms} terms"
    )


def gauss_2f1(a: float, b: float, c: float, z, accuracy: Accuracy = DEFAULT_ACCURACY):
    """Gauss hypergeometric function :math:`{}_2F_1(a, b; c; z)` for ``0 <= z < 1``.

    Uses the series for ``z <= 3/4``; closer to 1 the connection formula to
    ``1 - z`` is used, which requires ``c - a - b`` to be non-integer unless
    the series terminates.
    """
    if is_nonpositive_integer(c):
        raise DomainError(f"2F1 undefined for c a non-positive integer: {c}")

    za = np.asarray(z, dtype=np.float64)
    if np.any(za < 0.0) or np.any(za >= 1.0):
        raise DomainError("gauss_2f1 requires 0 <= z < 1")

    # the series reduces to a binomial when an upper and lower parameter coincide
    if abs(b - c) <= 1.0e-14 * max(1.0, abs(c)):
        out = (1.0 - za) ** (-a)
    elif abs(a - c) <= 1.0e-14 * max(1.0, abs(c)):
        out = (1.0 - za) ** (-b)
    elif is_nonpositive_integer(a) or is_nonpositive_integer(b):
        out = hyp2f1_series(a, b, c, za, accuracy)
    else:
        flat = za.reshape(-1)
        out = np.empty_like(flat)
        near = flat > HYP2F1_SERIES_MAX
        if (~near).any():
            out[~near] = hyp2f1_series(a, b, c, flat[~near], accuracy)
        if near.any():
            conn = hyp2f1_connection(a, b, c)
            w = 1.0 - flat[near]
            out[near] = conn.A * hyp2f1_series(*conn.regular, w, accuracy)
            if conn.B != 0.0:
                out[near] += (
                    conn.B * w**conn.rho * hyp2f1_series(*conn.singular, w, accuracy)
                )
        out = out.reshape(za.shape)

    return out[()] if np.ndim(out) == 0 else out


# }}}
