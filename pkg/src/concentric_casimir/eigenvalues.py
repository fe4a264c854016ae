"""TM and TE mode eigenvalues for the two-sphere cavity.

For one Matsubara term with arguments ``x = m t`` and ``y = x b / a``::

    lambda_TM = f1 f2 / (f3 f4),      lambda_TE = g1 g2 / (g3 g4)

    f1 = n s'(x) s(nx) - s(x) s'(nx)      g1 = s'(x) s(nx) - n s(x) s'(nx)
    f2 = n e'(y) e(ny) - e(y) e'(ny)      g2 = e'(y) e(ny) - n e(y) e'(ny)
    f3 = n e'(x) s(nx) - e(x) s'(nx)      g3 = e'(x) s(nx) - n e(x) s'(nx)
    f4 = n e(ny) s'(y) - e'(ny) s(y)      g4 = e(ny) s'(y) - n e'(ny) s(y)

Each factor is written as a product of two function values times a bracket
of logarithmic derivatives, e.g. ``f1 = s(x) s(nx) [n S(x) - S(nx)]`` with
``S = s'/s``.  The brackets are moderate numbers, and every exponentially
large value is kept in log form until the final ratio.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .debye import DebyeDomain, generate_correction_coefficients
from .dispersion import (
    ConstantIndex,
    Drude,
    LimitKind,
    PerfectConductor,
    Plasma,
    index_times_frequency_limit,
)
from .errors import DebyeDomainWarning, DomainError
from .riccati import ScaledValue, riccati_direct, riccati_log_table

__all__ = [
    "EvaluationPath",
    "GapGeometry",
    "ModeEigenvalues",
    "RatioCoefficients",
    "ratio_coefficients",
    "lambda_tm_direct",
    "lambda_te_direct",
    "lambda_tm_debye",
    "lambda_te_debye",
    "lambda_metal_limit",
    "lambda_zero_mode",
    "direct_eigenvalues",
    "debye_eigenvalues",
    "zero_mode_eigenvalues",
    "log_derivatives",
]


class EvaluationPath(enum.Enum):
    DIRECT = "direct"
    DEBYE = "debye"
    ANALYTIC_LIMIT = "analytic_limit"


@dataclass(frozen=True)
class GapGeometry:
    inner_radius_a: float
    outer_radius_b: float
    # a/b as given, when the geometry was built from it; a / (a / r) need not
    # round back to r
    given_ratio: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        a, b = self.inner_radius_a, self.outer_radius_b
        if not (0 < a < b and math.isfinite(b)):
            raise DomainError(f"geometry needs 0 < a < b, got a={a!r}, b={b!r}")
        if self.given_ratio is not None and abs(self.given_ratio * b / a - 1.0) > 1e-14:
            raise DomainError(f"given ratio {self.given_ratio!r} does not match a/b = {a / b!r}")

    @property
    def ratio(self) -> float:
        if self.given_ratio is not None:
            return self.given_ratio
        return self.inner_radius_a / self.outer_radius_b

    @property
    def rel_width(self) -> float:
        return (self.outer_radius_b - self.inner_radius_a) / self.inner_radius_a

    @classmethod
    def from_ratio(cls, ratio: float, a: float = 1.0) -> "GapGeometry":
        if not 0 < ratio < 1:
            raise DomainError(f"a/b must lie in (0, 1), got {ratio!r}")
        return cls(a, a / ratio, float(ratio))

    @classmethod
    def from_rel_width(cls, d_over_a: float, a: float = 1.0) -> "GapGeometry":
        if not d_over_a > 0:
            raise DomainError(f"d/a must be positive, got {d_over_a!r}")
        return cls(a, a * (1.0 + d_over_a))


@dataclass(frozen=True)
class ModeEigenvalues:
    lambda_tm: float
    lambda_te: float
    l: int
    m: int
    evaluation_path: EvaluationPath


@dataclass(frozen=True)
class RatioCoefficients:
    gamma: float
    delta: float


def _check_term(l, x, y, n):
    if int(l) != l or l < 1:
        raise DomainError(f"order l must be an integer >= 1, got {l!r}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    if not y > x:
        raise DomainError(f"y must exceed x (a < b), got x={x!r}, y={y!r}")
    if not n >= 1:
        raise DomainError(f"refractive index must be >= 1, got {n!r}")


def ratio_coefficients(l, x, y, n) -> RatioCoefficients:
    """``gamma = sqrt((1+z(x)^2)/(1+z(nx)^2))`` and the same at ``y``."""
    _check_term(l, x, y, n)
    nu = l + 0.5
    if math.isinf(n):
        return RatioCoefficients(0.0, 0.0)
    zx, zy = x / nu, y / nu
    gamma = math.sqrt((1 + zx * zx) / (1 + (n * zx) ** 2))
    delta = math.sqrt((1 + zy * zy) / (1 + (n * zy) ** 2))
    return RatioCoefficients(gamma, delta)


# -- direct forms ------------------------------------------------------------

def _direct_factors(l, x, y, n):
    qx, qy = riccati_direct(l, x), riccati_direct(l, y)
    qnx, qny = riccati_direct(l, n * x), riccati_direct(l, n * y)
    return qx, qy, qnx, qny


def lambda_tm_direct(l: int, x: float, y: float, n: float) -> float:
    _check_term(l, x, y, n)
    if math.isinf(n):
        raise DomainError("use lambda_metal_limit for n = inf")
    qx, qy, qnx, qny = _direct_factors(l, x, y, n)
    f1 = qx.s * qnx.s * (n * qx.dlog_s - qnx.dlog_s)
    f2 = qy.e * qny.e * (n * qy.dlog_e - qny.dlog_e)
    f3 = qx.e * qnx.s * (n * qx.dlog_e - qnx.dlog_s)
    f4 = qny.e * qy.s * (n * qy.dlog_s - qny.dlog_e)
    return max(float((f1 * f2) / (f3 * f4)), 0.0)


def lambda_te_direct(l: int, x: float, y: float, n: float) -> float:
    _check_term(l, x, y, n)
    if math.isinf(n):
        raise DomainError("use lambda_metal_limit for n = inf")
    qx, qy, qnx, qny = _direct_factors(l, x, y, n)
    g1 = qx.s * qnx.s * (qx.dlog_s - n * qnx.dlog_s)
    g2 = qy.e * qny.e * (qy.dlog_e - n * qny.dlog_e)
    g3 = qx.e * qnx.s * (qx.dlog_e - n * qnx.dlog_s)
    g4 = qny.e * qy.s * (qy.dlog_s - n * qny.dlog_e)
    return max(float((g1 * g2) / (g3 * g4)), 0.0)


def direct_eigenvalues(lmax: int, x: float, y: float, n: float):
    """``(lambda_TM, lambda_TE)`` arrays for ``l = 1..lmax`` by direct evaluation.

    ``n = inf`` gives the perfect-conductor forms.
    """
    _check_term(lmax, x, y, n)
    tx, ty = riccati_log_table(lmax, x), riccati_log_table(lmax, y)
    prefactor = np.exp(tx.log_s - tx.log_e + ty.log_e - ty.log_s)
    Sx, Ex, Sy, Ey = tx.dlog_s, tx.dlog_e, ty.dlog_s, ty.dlog_e
    if math.isinf(n):
        tm = prefactor * (Sx / Ex) * (Ey / Sy)
        te = prefactor
    else:
        tnx, tny = riccati_log_table(lmax, n * x), riccati_log_table(lmax, n * y)
        Snx, Eny = tnx.dlog_s, tny.dlog_e
        tm = prefactor * ((n * Sx - Snx) * (n * Ey - Eny)) / ((n * Ex - Snx) * (n * Sy - Eny))
        te = prefactor * ((Sx - n * Snx) * (Ey - n * Eny)) / ((Ex - n * Snx) * (Sy - n * Eny))
    return np.maximum(tm, 0.0), np.maximum(te, 0.0)


# -- Debye-ratio forms -------------------------------------------------------

def _sec(z):
    return np.sqrt(1.0 + z * z)


def debye_eigenvalues(l, x: float, y: float, n: float, coefficients=None):
    """``(lambda_TM, lambda_TE)`` from the Debye-ratio forms, vectorised over ``l``.

    Both eigenvalues are ``exp(2 nu [eta(x) - eta(y)])`` times a ratio of
    the correction polynomials; ``n = inf`` gives the metal limits.
    """
    coeffs = coefficients or generate_correction_coefficients()
    l = np.asarray(l, dtype=float)
    nu = l + 0.5
    zx, zy = x / nu, y / nu
    secx, secy = _sec(zx), _sec(zy)
    # eta(x) - eta(y) with the square-root difference taken without cancellation
    deta = (zx * zx - zy * zy) / (secx + secy) + np.log((x / y) * (1.0 + secy) / (1.0 + secx))
    exponent = np.exp(2.0 * nu * deta)
    Ax, Bx, Cx, Dx = coeffs.evaluate(1.0 / secx, nu)
    Ay, By, Cy, Dy = coeffs.evaluate(1.0 / secy, nu)
    if math.isinf(n):
        tm = exponent * (Cx * Dy) / (Dx * Cy)
        te = exponent * (Ax * By) / (Bx * Ay)
        return tm, te
    secnx, secny = _sec(n * zx), _sec(n * zy)
    gamma, delta = secx / secnx, secy / secny
    Anx, _, Cnx, _ = coeffs.evaluate(1.0 / secnx, nu)
    _, Bny, _, Dny = coeffs.evaluate(1.0 / secny, nu)
    rx = Cnx / Anx
    ry = Dny / Bny
    n2 = n * n
    # brackets of the f and g ratios, arranged to vanish exactly at n = 1
    tm_x = Ax * (n2 * gamma * (Cx / Ax) - rx) / (n2 * gamma * Dx + Bx * rx)
    tm_y = By * (n2 * delta * (Dy / By) - ry) / (n2 * delta * Cy + Ay * ry)
    te_x = Ax * (gamma * (Cx / Ax) - rx) / (gamma * Dx + Bx * rx)
    te_y = By * (delta * (Dy / By) - ry) / (delta * Cy + Ay * ry)
    tm = exponent * np.maximum(tm_x * tm_y, 0.0)
    te = exponent * np.maximum(te_x * te_y, 0.0)
    return tm, te


def _warn_outside(l, x, domain):
    domain = domain or DebyeDomain()
    if not domain.contains(l, x):
        warnings.warn(
            f"Debye-ratio eigenvalue at l={l}, x={x} lies outside {domain}",
            DebyeDomainWarning,
            stacklevel=3,
        )


def lambda_tm_debye(l: int, x: float, y: float, n: float, domain=None) -> float:
    _check_term(l, x, y, n)
    _warn_outside(l, x, domain)
    return float(debye_eigenvalues(np.array([l]), x, y, n)[0][0])


def lambda_te_debye(l: int, x: float, y: float, n: float, domain=None) -> float:
    _check_term(l, x, y, n)
    _warn_outside(l, x, domain)
    return float(debye_eigenvalues(np.array([l]), x, y, n)[1][0])


def lambda_metal_limit(l: int, x: float, y: float, mode: str, domain=None) -> float:
    """``n -> inf`` eigenvalue at fixed ``m >= 1``.

    TM is ``s'(x) e'(y) / (e'(x) s'(y))`` and TE is ``s(x) e(y) / (e(x) s(y))``;
    the Debye-ratio form is used inside ``domain`` and direct evaluation
    elsewhere.
    """
    _check_term(l, x, y, math.inf)
    mode = mode.upper()
    if mode not in ("TM", "TE"):
        raise DomainError(f"mode must be 'TM' or 'TE', got {mode!r}")
    domain = domain or DebyeDomain()
    if domain.contains(l, x):
        tm, te = debye_eigenvalues(np.array([l]), x, y, math.inf)
    else:
        tm, te = direct_eigenvalues(l, x, y, math.inf)
        tm, te = tm[-1:], te[-1:]
    return float(tm[0] if mode == "TM" else te[0])


# -- mixed-path eigenvalues for a block of orders -----------------------------

def log_derivatives(l, x: float, domain=None, coefficients=None):
    """``s'/s`` and ``e'/e`` at ``x`` for an array of orders."""
    domain = domain or DebyeDomain()
    l = np.asarray(l, dtype=int)
    S = np.empty(l.shape)
    E = np.empty(l.shape)
    use_debye = domain.contains(l, x)
    if np.any(use_debye):
        coeffs = coefficients or generate_correction_coefficients()
        nu = l[use_debye] + 0.5
        z = x / nu
        sec = _sec(z)
        A, B, C, D = coeffs.evaluate(1.0 / sec, nu)
        S[use_debye] = sec / z * C / A
        E[use_debye] = -sec / z * D / B
    if not np.all(use_debye):
        lo = l[~use_debye]
        tab = riccati_log_table(int(lo.max()), x)
        S[~use_debye] = tab.dlog_s[lo - 1]
        E[~use_debye] = tab.dlog_e[lo - 1]
    return S, E


# -- zero Matsubara mode -----------------------------------------------------

def _power_ratio(ratio, l):
    # libm pow rather than the vectorised one, which may differ in the last ulp
    return np.array([math.pow(ratio, 2 * k + 1) for k in np.ravel(l)]).reshape(np.shape(l))


def zero_mode_eigenvalues(l, ratio: float, model, domain=None):
    """``(lambda_TM, lambda_TE)`` at ``m = 0`` for an array of orders.

    For a constant finite index the small-argument forms
    ``s'/s -> (l+1)/x`` and ``e'/e -> -l/x`` reduce the TM eigenvalue to

        (a/b)^(2l+1) l (l+1) (n^2-1)^2 / ((n^2 l + l + 1)(n^2 (l+1) + l))

    while the TE brackets cancel.  Models whose index diverges at zero
    frequency give ``(a/b)^(2l+1)`` for TM; the TE value follows the
    classification of ``n(i w) w`` as ``w -> 0``.
    """
    l = np.asarray(l, dtype=float)
    base = _power_ratio(ratio, l)
    if isinstance(model, ConstantIndex):
        n2 = model.n**2
        tm = base * l * (l + 1) * (n2 - 1.0) ** 2 / ((n2 * l + l + 1) * (n2 * (l + 1) + l))
        return tm, np.zeros_like(base)
    if not isinstance(model, (Plasma, Drude, PerfectConductor)):
        raise TypeError(f"unknown dispersion model {model!r}")
    limit = index_times_frequency_limit(model)
    if limit.kind is LimitKind.ZERO:
        te = np.zeros_like(base)
    elif limit.kind is LimitKind.INFINITE:
        te = base.copy()
    else:
        # n x -> x_p at the inner surface and n y -> x_p b/a at the outer one
        xp = limit.value
        yp = xp / ratio
        Sxp, _ = log_derivatives(l.astype(int), xp, domain)
        _, Eyp = log_derivatives(l.astype(int), yp, domain)
        te = base * ((l + 1 - xp * Sxp) * (-l - yp * Eyp)) / ((-l - xp * Sxp) * (l + 1 - yp * Eyp))
    return base, te


def lambda_zero_mode(l: int, geometry: GapGeometry, model) -> ModeEigenvalues:
    if int(l) != l or l < 1:
        raise DomainError(f"order l must be an integer >= 1, got {l!r}")
    tm, te = zero_mode_eigenvalues(np.array([l]), geometry.ratio, model)
    return ModeEigenvalues(
        lambda_tm=float(tm[0]),
        lambda_te=float(te[0]),
        l=int(l),
        m=0,
        evaluation_path=EvaluationPath.ANALYTIC_LIMIT,
    )
