"""Special functions for the closed-form propagators and the exchange calculator.

Provides the Gauss hypergeometric function 2F1 with complex parameters and a
real argument z in [0, 1), and the modified Bessel function I0 together with
its exponentially scaled variant exp(-x) I0(x).

The 2F1 implementation sums the defining power series for z <= 1/2 and applies
the z -> 1-z linear transformation for z > 1/2, including the logarithmic
variant needed when gamma - alpha - beta is an integer.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "AccuracyError",
    "HyperParams",
    "gauss_2f1",
    "bessel_i0",
    "bessel_i0_scaled",
    "log_gamma",
    "digamma",
]

_MAX_TERMS = 10_000
_EPS = 1e-16


class DomainError(ValueError):
    """Argument outside the supported domain (e.g. gamma at a series pole)."""


class AccuracyError(ArithmeticError):
    """Series failed to converge; carries the achieved bound."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved bound {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class HyperParams:
    """Parameter record for 2F1(alpha, beta; gamma; z)."""

    alpha: complex
    beta: complex
    gamma: complex
    z: float

    def validate(self) -> None:
        if not (0.0 <= self.z < 1.0):
            raise DomainError(f"z must lie in [0, 1), got {self.z}")
        if _is_nonpositive_integer(self.gamma):
            raise DomainError(f"gamma at a series pole: {self.gamma}")


def _is_nonpositive_integer(w: complex, tol: float = 1e-12) -> bool:
    w = complex(w)
    if abs(w.imag) > tol:
        return False
    r = round(w.real)
    return r <= 0 and abs(w.real - r) <= tol


def _nearest_integer(w: complex, tol: float = 1e-9) -> int | None:
    w = complex(w)
    if abs(w.imag) > tol:
        return None
    r = round(w.real)
    return r if abs(w.real - r) <= tol else None


# Lanczos approximation, g = 7, 9 coefficients.  Relative accuracy of the
# resulting gamma values is ~1e-13 over the arguments used here.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def log_gamma(z: complex) -> complex:
    """Principal-branch-free log of Gamma(z); exp(log_gamma(z)) == Gamma(z).

    The additive branch constant is not controlled, which is all the callers
    (gamma-function ratios) require.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise DomainError(f"log_gamma pole at {z}")
    if z.real < 0.5:
        # Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return cmath.log(cmath.pi) - cmath.log(cmath.sin(cmath.pi * z)) - log_gamma(1.0 - z)
    zm1 = z - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (zm1 + i)
    t = zm1 + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (zm1 + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


# Bernoulli numbers B_2 .. B_14 for the digamma asymptotic tail.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)


def digamma(z: complex) -> complex:
    """Digamma function psi(z) for complex z away from the poles."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise DomainError(f"digamma pole at {z}")
    if z.real < 0.5:
        return digamma(1.0 - z) - cmath.pi / cmath.tan(cmath.pi * z)
    acc = 0.0 + 0.0j
    while abs(z) < 12.0:
        acc -= 1.0 / z
        z = z + 1.0
    inv2 = 1.0 / (z * z)
    tail = 0.0 + 0.0j
    power = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        tail += b / (2 * k) * power
        power *= inv2
    return acc + cmath.log(z) - 0.5 / z - tail


def _pochhammer(w: complex, k: int) -> complex:
    out = 1.0 + 0.0j
    for i in range(k):
        out *= w + i
    return out


def _series_2f1(alpha: complex, beta: complex, gamma: complex, z: float) -> complex:
    """Defining power series; converges for |z| < 1, used for z <= 1/2
    and for terminating (polynomial) cases at any z in [0, 1)."""
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    small_streak = 0
    for k in range(_MAX_TERMS):
        term *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1.0)) * z
        total += term
        if term == 0.0:
            return total
        if abs(term) <= _EPS * max(abs(total), 1.0):
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
    raise AccuracyError(
        "2F1 series did not converge within the term cap",
        abs(term) / max(abs(total), 1e-300),
    )


def _transform_generic(alpha: complex, beta: complex, gamma: complex, z: float) -> complex:
    # z -> 1-z linear transformation, gamma - alpha - beta not an integer.
    w = 1.0 - z
    s = gamma - alpha - beta
    if _is_nonpositive_integer(gamma - alpha) or _is_nonpositive_integer(gamma - beta):
        c1 = 0.0 + 0.0j  # gamma-function pole in the denominator kills the term
        f1 = 0.0 + 0.0j
    else:
        c1 = cmath.exp(log_gamma(gamma) + log_gamma(s) - log_gamma(gamma - alpha) - log_gamma(gamma - beta))
        f1 = _series_2f1(alpha, beta, alpha + beta - gamma + 1.0, w)
    c2 = cmath.exp(log_gamma(gamma) + log_gamma(-s) - log_gamma(alpha) - log_gamma(beta))
    f2 = _series_2f1(gamma - alpha, gamma - beta, s + 1.0, w)
    return c1 * f1 + c2 * (w ** s) * f2


def _transform_logarithmic(alpha: complex, beta: complex, gamma: complex, z: float, m: int) -> complex:
    # z -> 1-z transformation for gamma = alpha + beta + m, integer m >= 0
    # (DLMF 15.8.10).  The m < 0 case is mapped here by the Euler transform.
    w = 1.0 - z
    log_w = math.log(w)
    front = 0.0 + 0.0j
    if m > 0:
        pref = cmath.exp(log_gamma(gamma) + math.lgamma(m) - log_gamma(alpha + m) - log_gamma(beta + m))
        term = 1.0 + 0.0j
        acc = 0.0 + 0.0j
        for k in range(m):
            acc += term
            if k < m - 1:
                term *= (alpha + k) * (beta + k) / ((k + 1.0) * (1.0 - m + k)) * w
        front = pref * acc

    sign = (-1.0) ** m
    pref2 = sign * cmath.exp(log_gamma(gamma) - log_gamma(alpha) - log_gamma(beta)) * w ** m
    psi_a = digamma(alpha + m)
    psi_b = digamma(beta + m)
    harm1 = -digamma(1.0)           # psi(k+1) running value (negated below)
    harm2 = -digamma(m + 1.0)
    coef = 1.0 / math.factorial(m)
    total = 0.0 + 0.0j
    small_streak = 0
    term = coef * (log_w + harm1 + harm2 + psi_a + psi_b)
    for k in range(_MAX_TERMS):
        total += term
        if abs(term) <= _EPS * max(abs(total), 1.0):
            small_streak += 1
            if small_streak >= 2:
                break
        else:
            small_streak = 0
        coef *= (alpha + m + k) * (beta + m + k) / ((k + 1.0) * (k + m + 1.0)) * w
        psi_a += 1.0 / (alpha + m + k)
        psi_b += 1.0 / (beta + m + k)
        harm1 -= 1.0 / (k + 1.0)
        harm2 -= 1.0 / (k + m + 1.0)
        term = coef * (log_w + harm1 + harm2 + psi_a + psi_b)
    else:
        raise AccuracyError(
            "logarithmic 2F1 transformation did not converge",
            abs(term) / max(abs(total), 1e-300),
        )
    return front - pref2 * total


def gauss_2f1(p: HyperParams) -> complex:
    """Gauss hypergeometric function 2F1(alpha, beta; gamma; z), z in [0, 1).

    Relative error <= ~1e-11 over the parameter ranges exercised by the
    propagator and designer modules.  For z > 1/2 the z -> 1-z linear
    transformation keeps the series argument at or below 1/2; the logarithmic
    variant handles integer gamma - alpha - beta.
    """
    p.validate()
    alpha, beta, gamma, z = complex(p.alpha), complex(p.beta), complex(p.gamma), p.z

    if z == 0.0:
        return 1.0 + 0.0j
    # Terminating series is exact everywhere in [0, 1).
    if _is_nonpositive_integer(alpha) or _is_nonpositive_integer(beta):
        return _series_2f1(alpha, beta, gamma, z)
    if z <= 0.5:
        return _series_2f1(alpha, beta, gamma, z)

    m = _nearest_integer(gamma - alpha - beta)
    if m is None:
        return _transform_generic(alpha, beta, gamma, z)
    if m >= 0:
        return _transform_logarithmic(alpha, beta, gamma, z, m)
    # Euler transform flips gamma - alpha - beta to a non-negative integer.
    w = 1.0 - z
    if _is_nonpositive_integer(gamma - alpha) or _is_nonpositive_integer(gamma - beta):
        # the transformed series terminates; sum it directly
        return (w ** (gamma - alpha - beta)) * _series_2f1(
            gamma - alpha, gamma - beta, gamma, z
        )
    return (w ** (gamma - alpha - beta)) * _transform_logarithmic(
        gamma - alpha, gamma - beta, gamma, z, -m
    )


_I0_SWITCH = 18.0


def _i0_series(x: float) -> float:
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, 1000):
        term *= q / (k * k)
        total += term
        if term <= _EPS * total:
            return total
    raise AccuracyError("I0 series did not converge", term / total)


def _i0_scaled_asymptotic(x: float) -> float:
    # exp(-x) I0(x) ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    total = 1.0
    term = 1.0
    for k in range(1, 60):
        new = term * (2 * k - 1) ** 2 / (8.0 * x * k)
        if new >= term:
            break  # asymptotic series started diverging
        term = new
        total += term
        if term <= 1e-17 * total:
            break
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_i0_scaled(x: float) -> float:
    """Exponentially scaled modified Bessel function exp(-x) I0(x), x >= 0."""
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"bessel_i0_scaled requires finite x >= 0, got {x}")
    if x <= _I0_SWITCH:
        return _i0_series(x) * math.exp(-x)
    return _i0_scaled_asymptotic(x)


def bessel_i0(x: float) -> float:
    """Modified Bessel function of the first kind, order zero, x >= 0."""
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"bessel_i0 requires finite x >= 0, got {x}")
    if x <= _I0_SWITCH:
        return _i0_series(x)
    if x > 709.0:  # exp overflow; callers should use the scaled variant
        return math.inf
    return _i0_scaled_asymptotic(x) * math.exp(x)
