"""Uniform (Debye) asymptotic expansion of the Riccati-Bessel functions.

With ``nu = l + 1/2``, ``z = x/nu``, ``theta = (1 + z^2)^{-1/2}`` and
``eta = 1/theta + ln(z / (1 + 1/theta))``::

    s_l  = 1/2 sqrt(z) (1+z^2)^{-1/4} exp(+nu eta) A
    e_l  =     sqrt(z) (1+z^2)^{-1/4} exp(-nu eta) B
    s_l' = 1/2 (1+z^2)^{1/4} / sqrt(z) exp(+nu eta) C
    e_l' =    -(1+z^2)^{1/4} / sqrt(z) exp(-nu eta) D

``A, B, C, D`` are series ``sum_k p_k(theta) / nu^k``.  The polynomials come
from the classical ``u_k`` ladder::

    u_{k+1}(t) = t^2 (1 - t^2) u_k'(t) / 2 + 1/8 int_0^t (1 - 5 s^2) u_k(s) ds
    v_k(t)     = u_k(t) + t (t^2 - 1) (u_{k-1}(t) / 2 + t u_{k-1}'(t))

so that ``A = sum u_k / nu^k`` and ``B = sum (-1)^k u_k / nu^k``.  The
derivative series also collect the term coming from the ``sqrt(x)`` factor
of the Riccati form, giving ``c_k = v_k + theta u_{k-1} / 2`` and
``d_k = (-1)^k c_k``.  Every ``p_k`` has degree ``3k`` in ``theta``.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DebyeDomainWarning, DomainError
from .riccati import RiccatiQuad, ScaledValue, _check_args, riccati_direct

__all__ = [
    "DebyeVariables",
    "DebyePolynomials",
    "DebyeDomain",
    "CorrectionCoefficients",
    "DEFAULT_THETA_ORDER",
    "debye_variables",
    "generate_correction_coefficients",
    "debye_polynomials",
    "debye_quad",
    "riccati_quad",
    "dump_coefficients",
]

#: Highest power of theta retained; 12 orders in 1/nu.
DEFAULT_THETA_ORDER = 48
_LOG_NEGLIGIBLE = math.log(1e-18)


@dataclass(frozen=True)
class DebyeVariables:
    nu: float
    z: float
    theta: float
    eta: float


@dataclass(frozen=True)
class DebyePolynomials:
    A: float
    B: float
    C: float
    D: float


@dataclass(frozen=True)
class DebyeDomain:
    """Where the expansion is trusted: ``x > x_min`` or ``l > l_min``."""

    x_min: float = 10.0
    l_min: int = 9

    def contains(self, l, x):
        return (x > self.x_min) | (l > self.l_min)


def _eta(z, sec):
    # sec = sqrt(1 + z^2) = 1/theta
    return sec + np.log(z / (1.0 + sec))


def debye_variables(l: int, x: float) -> DebyeVariables:
    _check_args(l, x)
    nu = l + 0.5
    z = x / nu
    sec = math.sqrt(1.0 + z * z)
    return DebyeVariables(nu=nu, z=z, theta=1.0 / sec, eta=float(_eta(z, sec)))


# -- exact polynomial arithmetic on ascending coefficient lists --------------

def _padd(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    ]


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _pder(a):
    return [i * a[i] for i in range(1, len(a))] or [Fraction(0)]


def _pint(a):
    return [Fraction(0)] + [c / (i + 1) for i, c in enumerate(a)]


def _pscale(a, c):
    return [c * ai for ai in a]


def _trim(a, degree):
    a = list(a) + [Fraction(0)] * (degree + 1 - len(a))
    return tuple(a[: degree + 1])


@dataclass(frozen=True)
class CorrectionCoefficients:
    """Exact rational coefficient tables for the four correction series.

    ``A[k][j]`` is the coefficient of ``theta**j / nu**k`` in ``A``; likewise
    for ``B``, ``C``, ``D``.  ``u`` and ``v`` hold the underlying ladder.
    """

    max_theta_order: int
    u: tuple
    v: tuple
    A: tuple
    B: tuple
    C: tuple
    D: tuple

    @property
    def max_k(self) -> int:
        return len(self.A) - 1

    @functools.cached_property
    def _float_tables(self):
        width = 3 * self.max_k + 1
        tables = {}
        for name in "ABCD":
            tab = np.zeros((self.max_k + 1, width))
            for k, row in enumerate(getattr(self, name)):
                tab[k, : len(row)] = [float(c) for c in row]
            tables[name] = tab
        return tables

    @functools.cached_property
    def _stacked(self):
        return np.stack([self._float_tables[name] for name in "ABCD"])

    @functools.cached_property
    def _log_bounds(self):
        # log of max over the four series of sum_j |c_kj|, a bound on |p_k| for theta <= 1
        totals = np.max([np.abs(t).sum(axis=1) for t in self._float_tables.values()], axis=0)
        return [math.log(b) if b > 0 else -math.inf for b in totals]

    def _needed_k(self, nu_min):
        """Highest ``k`` whose term can still move a double for ``nu >= nu_min``."""
        log_nu = math.log(nu_min)
        for k in range(self.max_k, 0, -1):
            if self._log_bounds[k] - k * log_nu >= _LOG_NEGLIGIBLE:
                return k
        return 0

    def evaluate(self, theta, nu):
        """Return ``(A, B, C, D)`` at ``theta``, ``nu`` (broadcasting arrays).

        Where the terms have clearly started to grow again (the last exceeds
        the smallest by more than tenfold) the sum is cut at its smallest
        term, the usual optimal truncation of an asymptotic expansion.  This
        only happens at small ``nu`` with ``theta`` near 1, outside the
        default validated domain.  The term size is the largest over the four
        series and over adjacent orders, so an isolated zero of one ``p_k``
        is not mistaken for the minimum.
        Orders below 1e-18 for every input are skipped outright.
        """
        theta, nu = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(nu, dtype=float))
        shape = theta.shape
        theta, nu = theta.ravel(), nu.ravel()
        kmax = self._needed_k(float(np.min(nu))) if nu.size else self.max_k
        width = 3 * kmax + 1
        stacked = self._stacked[:, : kmax + 1, :width].reshape(-1, width)
        # one matrix product evaluates p_k(theta) for all four series at once
        powers = theta[:, None] ** np.arange(width)
        terms = (powers @ stacked.T).reshape(-1, 4, kmax + 1)
        terms *= (1.0 / nu[:, None, None]) ** np.arange(kmax + 1)
        size = np.max(np.abs(terms), axis=1)
        envelope = size.copy()
        envelope[:, :-1] = np.maximum(size[:, :-1], size[:, 1:])
        # cut only where the tail has clearly turned upward
        diverging = size[:, -1] > 10.0 * np.min(envelope, axis=1)
        cut = np.where(diverging, np.argmin(envelope, axis=1), kmax)
        terms *= np.arange(kmax + 1)[None, None, :] <= cut[:, None, None]
        total = np.sum(terms[:, :, ::-1], axis=2)
        return tuple(total[:, i].reshape(shape) for i in range(4))

    def to_text(self) -> str:
        lines = [
            f"# Debye correction polynomials, theta order {self.max_theta_order}",
            "# <series> <k>: coefficients of theta^0, theta^1, ... (exact rationals)",
        ]
        for name in ("u", "v", "A", "B", "C", "D"):
            for k, row in enumerate(getattr(self, name)):
                lines.append(f"{name} {k}: " + " ".join(str(c) for c in row))
        return "\n".join(lines) + "\n"


@functools.lru_cache(maxsize=None)
def generate_correction_coefficients(
    max_theta_order: int = DEFAULT_THETA_ORDER,
) -> CorrectionCoefficients:
    """Build the ``A, B, C, D`` tables up to ``theta**max_theta_order``.

    The truncation keeps orders ``k <= max_theta_order // 3`` in ``1/nu``,
    which is exactly the set of ``p_k`` whose degree does not exceed the
    requested power of ``theta``.  ``max_theta_order = 0`` gives the
    leading-order result ``A = B = C = D = 1``.
    """
    if int(max_theta_order) != max_theta_order or max_theta_order < 0 or max_theta_order % 2:
        raise DomainError(
            f"max_theta_order must be a non-negative even integer, got {max_theta_order!r}"
        )
    kmax = max_theta_order // 3
    u = [[Fraction(1)]]
    for _ in range(kmax):
        uk = u[-1]
        first = _pmul([0, 0, Fraction(1, 2), 0, Fraction(-1, 2)], _pder(uk))
        second = _pscale(_pint(_pmul([Fraction(1), 0, Fraction(-5)], uk)), Fraction(1, 8))
        u.append(_padd(first, second))
    v = [[Fraction(1)]]
    for k in range(1, kmax + 1):
        inner = _padd(_pscale(u[k - 1], Fraction(1, 2)), _pmul([0, Fraction(1)], _pder(u[k - 1])))
        v.append(_padd(u[k], _pmul([0, Fraction(-1), 0, Fraction(1)], inner)))

    A, B, C, D = [], [], [], []
    for k in range(kmax + 1):
        deg = 3 * k
        sign = -1 if k % 2 else 1
        a_k = _trim(u[k], deg)
        c_k = v[k] if k == 0 else _padd(v[k], _pmul([0, Fraction(1, 2)], u[k - 1]))
        c_k = _trim(c_k, deg)
        A.append(a_k)
        B.append(tuple(sign * c for c in a_k))
        C.append(c_k)
        D.append(tuple(sign * c for c in c_k))
    return CorrectionCoefficients(
        max_theta_order=int(max_theta_order),
        u=tuple(_trim(p, 3 * k) for k, p in enumerate(u)),
        v=tuple(_trim(p, 3 * k) for k, p in enumerate(v)),
        A=tuple(A),
        B=tuple(B),
        C=tuple(C),
        D=tuple(D),
    )


def debye_polynomials(l: int, x: float, coefficients=None) -> DebyePolynomials:
    var = debye_variables(l, x)
    coeffs = coefficients or generate_correction_coefficients()
    a, b, c, d = coeffs.evaluate(var.theta, var.nu)
    return DebyePolynomials(float(a), float(b), float(c), float(d))


def debye_quad(l: int, x: float, coefficients=None, domain=None) -> RiccatiQuad:
    """Riccati quad from the Debye expansion.

    The factors ``exp(+-nu eta)`` only ever enter the returned
    :class:`ScaledValue` log magnitudes.  A :class:`DebyeDomainWarning` is
    issued when ``(l, x)`` lies outside ``domain``.
    """
    var = debye_variables(l, x)
    domain = domain or DebyeDomain()
    if not domain.contains(l, x):
        warnings.warn(
            f"Debye expansion evaluated at l={l}, x={x}, outside {domain}",
            DebyeDomainWarning,
            stacklevel=2,
        )
    coeffs = coefficients or generate_correction_coefficients()
    a, b, c, d = (float(p) for p in coeffs.evaluate(var.theta, var.nu))
    # log of sqrt(z) (1+z^2)^{-1/4} = log(sqrt(z theta))
    half_log_ztheta = 0.5 * math.log(var.z * var.theta)
    nu_eta = var.nu * var.eta
    return RiccatiQuad(
        s=ScaledValue.from_log(-math.log(2.0) + half_log_ztheta + nu_eta + math.log(a)),
        e=ScaledValue.from_log(half_log_ztheta - nu_eta + math.log(b)),
        s_prime=ScaledValue.from_log(-math.log(2.0) - half_log_ztheta + nu_eta + math.log(c)),
        e_prime=ScaledValue.from_log(-half_log_ztheta - nu_eta + math.log(d), sign=-1),
        order_l=int(l),
        argument_x=float(x),
    )


def riccati_quad(l: int, x: float, domain=None, coefficients=None) -> RiccatiQuad:
    """Debye expansion inside ``domain``, direct evaluation elsewhere."""
    domain = domain or DebyeDomain()
    if domain.contains(l, x):
        return debye_quad(l, x, coefficients=coefficients, domain=domain)
    return riccati_direct(l, x)


def dump_coefficients(path, max_theta_order: int = DEFAULT_THETA_ORDER) -> None:
    text = generate_correction_coefficients(max_theta_order).to_text()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
