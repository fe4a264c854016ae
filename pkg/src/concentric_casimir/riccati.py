"""Riccati-Bessel functions of imaginary argument, evaluated in log space.

The functions are

    s_l(x) = sqrt(pi x / 2) I_{l+1/2}(x),    e_l(x) = sqrt(2 x / pi) K_{l+1/2}(x)

with Wronskian ``s e' - s' e = -1``.  Both grow or decay exponentially in
``x`` and in ``l``, so every public return carries its magnitude as a
:class:`ScaledValue`.

Evaluation strategy
-------------------
``e_l`` comes from the upward recurrence of the ratio
``q_l = e_l / e_{l-1}``, ``q_{l+1} = 1/q_l + (2l+1)/x``, and ``s_l`` from the
downward recurrence of ``rho_l = s_l / s_{l-1}``,
``rho_l = 1 / ((2l+1)/x + rho_{l+1})``, seeded by a continued fraction (or the
closed hyperbolic form when ``x`` is large).  The derivatives follow from

    s_l' / s_l = (l+1)/x + rho_{l+1},      e_l' / e_l = -(1/q_l + l/x).

Every quantity in these recurrences is positive, so nothing cancels and
nothing overflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PrecisionError, ThresholdError

__all__ = [
    "ScaledValue",
    "RiccatiQuad",
    "RiccatiTable",
    "riccati_direct",
    "riccati_log_table",
    "small_argument_limits",
    "small_argument_threshold",
    "WRONSKIAN_TOLERANCE",
]

_LN2 = math.log(2.0)
_TINY = 1e-300
_EPS = np.finfo(float).eps

WRONSKIAN_TOLERANCE = 1e-10
SMALL_ARGUMENT_FACTOR = 0.1


@dataclass(frozen=True)
class ScaledValue:
    """Real number stored as ``fraction * 2**exponent``.

    ``fraction`` is zero or satisfies ``0.5 <= |fraction| < 1``; the integer
    exponent is unbounded, so magnitudes like ``exp(1e5)`` are representable.
    The sign and natural-log magnitude are exposed as :attr:`sign` and
    :attr:`log_mag`.
    """

    fraction: float
    exponent: int = 0

    @classmethod
    def from_float(cls, value: float) -> "ScaledValue":
        if not math.isfinite(value):
            raise DomainError(f"cannot scale non-finite value {value!r}")
        m, e = math.frexp(value)
        return cls(m, e)

    @classmethod
    def from_log(cls, log_mag: float, sign: int = 1) -> "ScaledValue":
        """Build ``sign * exp(log_mag)`` without forming the exponential."""
        if sign == 0 or log_mag == -math.inf:
            return cls(0.0, 0)
        if not math.isfinite(log_mag):
            raise DomainError(f"log magnitude must be finite, got {log_mag!r}")
        e = math.floor(log_mag / _LN2)
        m, e2 = math.frexp(math.exp(log_mag - e * _LN2))
        return cls(math.copysign(m, sign), e + e2)

    @property
    def sign(self) -> int:
        if self.fraction > 0:
            return 1
        if self.fraction < 0:
            return -1
        return 0

    @property
    def log_mag(self) -> float:
        if self.fraction == 0.0:
            return -math.inf
        return math.log(abs(self.fraction)) + self.exponent * _LN2

    def __float__(self) -> float:
        try:
            return math.ldexp(self.fraction, self.exponent)
        except OverflowError:
            return math.copysign(math.inf, self.fraction)

    def __mul__(self, other):
        if not isinstance(other, ScaledValue):
            other = ScaledValue.from_float(float(other))
        m, e = math.frexp(self.fraction * other.fraction)
        if m == 0.0:
            return ScaledValue(0.0, 0)
        return ScaledValue(m, self.exponent + other.exponent + e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ScaledValue):
            other = ScaledValue.from_float(float(other))
        if other.fraction == 0.0:
            raise ZeroDivisionError("division by a zero ScaledValue")
        m, e = math.frexp(self.fraction / other.fraction)
        if m == 0.0:
            return ScaledValue(0.0, 0)
        return ScaledValue(m, self.exponent - other.exponent + e)

    def __neg__(self):
        return ScaledValue(-self.fraction, self.exponent)

    def __abs__(self):
        return ScaledValue(abs(self.fraction), self.exponent)

    def __repr__(self):
        return f"ScaledValue(sign={self.sign:+d}, log_mag={self.log_mag!r})"


@dataclass(frozen=True)
class RiccatiQuad:
    """The four values ``s_l, e_l, s_l', e_l'`` at one ``(l, x)``."""

    s: ScaledValue
    e: ScaledValue
    s_prime: ScaledValue
    e_prime: ScaledValue
    order_l: int
    argument_x: float

    def wronskian(self) -> float:
        """``s e' - s' e``, which should equal -1."""
        return float(self.s * self.e_prime) - float(self.s_prime * self.e)

    @property
    def dlog_s(self) -> float:
        """Logarithmic derivative ``s'/s``."""
        return float(self.s_prime / self.s)

    @property
    def dlog_e(self) -> float:
        """Logarithmic derivative ``e'/e`` (negative)."""
        return float(self.e_prime / self.e)


@dataclass(frozen=True)
class RiccatiTable:
    """Log magnitudes and log derivatives for orders ``1..lmax`` at one ``x``.

    Index ``i`` of every array holds order ``l = i + 1``.
    """

    x: float
    log_s: np.ndarray
    log_e: np.ndarray
    dlog_s: np.ndarray
    dlog_e: np.ndarray

    @property
    def lmax(self) -> int:
        return len(self.log_s)


def _check_args(l, x):
    if isinstance(l, bool) or int(l) != l or l < 1:
        raise DomainError(f"order l must be an integer >= 1, got {l!r}")
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"argument x must be positive and finite, got {x!r}")


def _log_sinh(x):
    if x > 20.0:
        return x - _LN2 + math.log1p(-math.exp(-2.0 * x))
    return math.log(math.sinh(x))


def _closed_form_sum(l, x):
    # sum_k (-1)^k (l+k)! / (k! (l-k)! (2x)^k); the e^{-2x} branch is dropped
    term = 1.0
    total = 1.0
    for k in range(l):
        term *= -(l + k + 1) * (l - k) / ((k + 1) * 2.0 * x)
        total += term
    return total


def _top_ratio(L, x):
    """``s_{L+1}(x) / s_L(x)``."""
    if x > 40.0 and x >= (L + 1) * (L + 2):
        # alternating sums decrease monotonically here, no cancellation
        return _closed_form_sum(L + 1, x) / _closed_form_sum(L, x)
    # modified Lentz on 1/(b_{L+1} + 1/(b_{L+2} + ...)), b_k = (2k+1)/x
    f = _TINY
    c = f
    d = 0.0
    k = L + 1
    max_iter = 10_000 + 4 * int(x)
    for _ in range(max_iter):
        b = (2 * k + 1) / x
        d = b + d
        if d == 0.0:
            d = _TINY
        d = 1.0 / d
        c = b + 1.0 / c
        if c == 0.0:
            c = _TINY
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _EPS:
            return f
        k += 1
    raise PrecisionError(
        f"continued fraction for s_{L + 1}/s_{L} at x={x} did not converge"
    )


def riccati_log_table(lmax: int, x: float) -> RiccatiTable:
    """Evaluate every order ``1..lmax`` at ``x`` with one pair of recurrences."""
    _check_args(lmax, x)
    lmax = int(lmax)
    log_s = np.empty(lmax)
    log_e = np.empty(lmax)
    dlog_s = np.empty(lmax)
    dlog_e = np.empty(lmax)

    # e side, upward; running log sum kept with Neumaier compensation
    q = 1.0 + 1.0 / x
    acc, comp = -x, 0.0
    for i in range(lmax):
        l = i + 1
        if i > 0:
            q = 1.0 / q + (2 * l - 1) / x
        lq = math.log(q)
        t = acc + lq
        comp += (acc - t) + lq if abs(acc) >= abs(lq) else (lq - t) + acc
        acc = t
        log_e[i] = acc + comp
        dlog_e[i] = -(1.0 / q + l / x)

    # s side, downward ratios then upward log sum
    rho = np.empty(lmax + 1)
    rho[lmax] = _top_ratio(lmax, x)
    for i in range(lmax - 1, -1, -1):
        l = i + 1
        rho[i] = 1.0 / ((2 * l + 1) / x + rho[i + 1])
    acc, comp = _log_sinh(x), 0.0
    for i in range(lmax):
        l = i + 1
        lr = math.log(rho[i])
        t = acc + lr
        comp += (acc - t) + lr if abs(acc) >= abs(lr) else (lr - t) + acc
        acc = t
        log_s[i] = acc + comp
        dlog_s[i] = (l + 1) / x + rho[i + 1]

    return RiccatiTable(x, log_s, log_e, dlog_s, dlog_e)


def _quad_from_logs(l, x, log_s, log_e, dlog_s, dlog_e):
    s = ScaledValue.from_log(log_s)
    e = ScaledValue.from_log(log_e)
    return RiccatiQuad(
        s=s,
        e=e,
        s_prime=s * dlog_s,
        e_prime=e * dlog_e,
        order_l=int(l),
        argument_x=float(x),
    )


def riccati_direct(l: int, x: float) -> RiccatiQuad:
    """Exact (non-asymptotic) ``s_l, e_l`` and derivatives at ``x``.

    Raises
    ------
    DomainError
        If ``l < 1`` or ``x <= 0``.
    PrecisionError
        If the result fails the Wronskian check at 1e-10.
    """
    _check_args(l, x)
    tab = riccati_log_table(l, x)
    i = int(l) - 1
    quad = _quad_from_logs(
        l, x, tab.log_s[i], tab.log_e[i], tab.dlog_s[i], tab.dlog_e[i]
    )
    # s e' - s' e = -s e (s'/s - e'/e)
    se = math.exp(tab.log_s[i] + tab.log_e[i])
    spread = tab.dlog_s[i] - tab.dlog_e[i]
    # one ulp of a large log magnitude is already eps * |log|; allow for it
    rounding = 8 * _EPS * (abs(tab.log_s[i]) + abs(tab.log_e[i]))
    tol = WRONSKIAN_TOLERANCE * max(1.0, se * abs(tab.dlog_e[i])) + rounding
    if abs(se * spread - 1.0) > tol:
        raise PrecisionError(f"Wronskian check failed for l={l}, x={x}")
    return quad


def small_argument_threshold(l: int) -> float:
    """Largest ``x`` for which :func:`small_argument_limits` is certified."""
    return SMALL_ARGUMENT_FACTOR * math.sqrt(l + 1.5)


def _log_double_factorial_odd(l):
    # log((2l+1)!!)
    return math.lgamma(2 * l + 2) - l * _LN2 - math.lgamma(l + 1)


def small_argument_limits(l: int, x: float) -> RiccatiQuad:
    """Power-series evaluation for small ``x``.

    ``s_l`` uses the ascending series
    ``x^{l+1}/(2l+1)!! * sum_k (x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))``;
    ``e_l`` uses the terminating sum
    ``e^{-x} sum_{k<=l} (l+k)! / (k! (l-k)! (2x)^k)``.
    """
    _check_args(l, x)
    l = int(l)
    if x >= small_argument_threshold(l):
        raise ThresholdError(
            f"x={x} is beyond the small-argument threshold "
            f"{small_argument_threshold(l):.4g} for l={l}"
        )
    half_x2 = 0.5 * x * x
    c = 1.0
    sum_s = 1.0
    sum_ds = l + 1.0
    k = 0
    while True:
        k += 1
        c *= half_x2 / (k * (2 * l + 2 * k + 1))
        sum_s += c
        sum_ds += (l + 1 + 2 * k) * c
        if c < 1e-18 * sum_s:
            break
    ldf = _log_double_factorial_odd(l)
    log_s = (l + 1) * math.log(x) - ldf + math.log(sum_s)
    log_ds = l * math.log(x) - ldf + math.log(sum_ds)

    # terms relative to the k = l term, which dominates for small x
    rel = [1.0] * (l + 1)
    for k in range(l - 1, -1, -1):
        rel[k] = rel[k + 1] * ((k + 1) * 2.0 * x) / ((l + k + 1) * (l - k))
    sum_e = math.fsum(rel)
    sum_de = math.fsum(r * (1.0 + k / x) for k, r in enumerate(rel))
    log_top = math.lgamma(2 * l + 1) - math.lgamma(l + 1) - l * math.log(2.0 * x)
    log_e = -x + log_top + math.log(sum_e)
    log_de = -x + log_top + math.log(sum_de)

    return RiccatiQuad(
        s=ScaledValue.from_log(log_s),
        e=ScaledValue.from_log(log_e),
        s_prime=ScaledValue.from_log(log_ds),
        e_prime=ScaledValue.from_log(log_de, sign=-1),
        order_l=l,
        argument_x=float(x),
    )
