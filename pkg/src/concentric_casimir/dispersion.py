"""Dielectric response on the imaginary frequency axis.

Frequencies are nondimensional, ``omega_hat * a / c`` with ``a`` the inner
radius, so a Matsubara term has ``omega_hat = x = m t``.  Models carry their
characteristic frequencies in the same units; the ``from_si`` constructors
do the conversion once.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

from scipy import constants

from .errors import DomainError

__all__ = [
    "ConstantIndex",
    "Plasma",
    "Drude",
    "PerfectConductor",
    "ZeroModePolicy",
    "DispersionModel",
    "ThermalState",
    "LimitKind",
    "FrequencyLimit",
    "PLASMA_INFINITE_THRESHOLD",
    "permittivity",
    "permittivity_times_frequency",
    "refractive_index",
    "index_times_frequency_limit",
    "model_label",
]

#: Plasma models with ``x_p`` at or above this are treated as ``x_p / nu >> 1``.
PLASMA_INFINITE_THRESHOLD = 1e5


class ZeroModePolicy(enum.Enum):
    """Order of the limits ``n -> inf`` and ``m -> 0`` for a perfect conductor.

    ``A`` takes ``n -> inf`` first (both modes contribute at ``m = 0``);
    ``B`` takes ``m -> 0`` first (the TE zero mode vanishes).
    """

    A = "A"
    B = "B"


@dataclass(frozen=True)
class ConstantIndex:
    n: float

    def __post_init__(self):
        if not (self.n >= 1.0 and math.isfinite(self.n)):
            raise DomainError(f"refractive index must be finite and >= 1, got {self.n!r}")


@dataclass(frozen=True)
class Plasma:
    """``eps = 1 + x_p^2 / x^2`` with ``x_p = omega_p a / c``."""

    x_p: float

    def __post_init__(self):
        if not self.x_p > 0:
            raise DomainError(f"plasma frequency must be positive, got {self.x_p!r}")

    @classmethod
    def from_si(cls, omega_p_si: float, radius_m: float) -> "Plasma":
        return cls(omega_p_si * radius_m / constants.c)


@dataclass(frozen=True)
class Drude:
    """``eps = 1 + x_p^2 / (x (x + x_gamma))``.

    ``x_gamma`` is the relaxation frequency in units of ``c / a``; the name
    avoids a clash with the Debye ratio coefficient gamma.
    """

    x_p: float
    relaxation_gamma: float

    def __post_init__(self):
        if not self.x_p > 0:
            raise DomainError(f"plasma frequency must be positive, got {self.x_p!r}")
        if not self.relaxation_gamma > 0:
            raise DomainError(
                f"relaxation frequency must be positive, got {self.relaxation_gamma!r}"
            )

    @classmethod
    def from_si(cls, omega_p_si: float, gamma_si: float, radius_m: float) -> "Drude":
        scale = radius_m / constants.c
        return cls(omega_p_si * scale, gamma_si * scale)


@dataclass(frozen=True)
class PerfectConductor:
    zero_mode_policy: ZeroModePolicy

    def __post_init__(self):
        if not isinstance(self.zero_mode_policy, ZeroModePolicy):
            object.__setattr__(self, "zero_mode_policy", ZeroModePolicy(self.zero_mode_policy))


DispersionModel = Union[ConstantIndex, Plasma, Drude, PerfectConductor]


@dataclass(frozen=True)
class ThermalState:
    """Nondimensional temperature ``t = 2 pi a / beta`` (hbar = c = k_B = 1)."""

    t: float

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise DomainError(f"temperature t must be positive, got {self.t!r}")

    @property
    def beta(self) -> float:
        """Inverse temperature in units of the inner radius."""
        return 2.0 * math.pi / self.t

    @classmethod
    def from_kelvin(cls, temperature_k: float, radius_m: float) -> "ThermalState":
        t = 2.0 * math.pi * radius_m * constants.k * temperature_k / (constants.hbar * constants.c)
        return cls(t)

    def arguments(self, m: int, ratio: float):
        """Matsubara arguments ``x = m t`` and ``y = x b / a``."""
        x = m * self.t
        return x, x / ratio


def permittivity(model: DispersionModel, omega_hat: float) -> float:
    """``eps(i omega_hat)``; ``inf`` where the model diverges."""
    if omega_hat < 0:
        raise DomainError(f"frequency must be >= 0, got {omega_hat!r}")
    if isinstance(model, ConstantIndex):
        return model.n**2
    if isinstance(model, PerfectConductor):
        return math.inf
    if omega_hat == 0:
        return math.inf
    if isinstance(model, Plasma):
        return 1.0 + (model.x_p / omega_hat) ** 2
    if isinstance(model, Drude):
        return 1.0 + model.x_p**2 / (omega_hat * (omega_hat + model.relaxation_gamma))
    raise TypeError(f"unknown dispersion model {model!r}")


def permittivity_times_frequency(model: DispersionModel, omega_hat: float) -> float:
    """``eps(i omega_hat) * omega_hat``, finite at zero frequency for Drude."""
    if isinstance(model, Drude):
        return omega_hat + model.x_p**2 / (omega_hat + model.relaxation_gamma)
    if omega_hat == 0:
        if isinstance(model, ConstantIndex):
            return 0.0
        return math.inf
    return permittivity(model, omega_hat) * omega_hat


def refractive_index(model: DispersionModel, omega_hat: float) -> float:
    return math.sqrt(permittivity(model, omega_hat))


class LimitKind(enum.Enum):
    ZERO = "zero"
    INFINITE = "infinite"
    FINITE = "finite"


@dataclass(frozen=True)
class FrequencyLimit:
    kind: LimitKind
    value: float


def index_times_frequency_limit(model: DispersionModel) -> FrequencyLimit:
    """Classify ``n(i omega_hat) * omega_hat * a`` as ``omega_hat -> 0``.

    ``INFINITE`` selects the conventional zero mode (option A), ``ZERO``
    kills the TE zero mode (option B).  A plasma below
    :data:`PLASMA_INFINITE_THRESHOLD` is reported as ``FINITE(x_p)``.
    """
    if isinstance(model, (ConstantIndex, Drude)):
        return FrequencyLimit(LimitKind.ZERO, 0.0)
    if isinstance(model, Plasma):
        if model.x_p >= PLASMA_INFINITE_THRESHOLD:
            return FrequencyLimit(LimitKind.INFINITE, math.inf)
        return FrequencyLimit(LimitKind.FINITE, model.x_p)
    if isinstance(model, PerfectConductor):
        if model.zero_mode_policy is ZeroModePolicy.A:
            return FrequencyLimit(LimitKind.INFINITE, math.inf)
        return FrequencyLimit(LimitKind.ZERO, 0.0)
    raise TypeError(f"unknown dispersion model {model!r}")


def model_label(model: DispersionModel) -> str:
    """Short text used in CSV output."""
    if isinstance(model, ConstantIndex):
        return repr(float(model.n))
    if isinstance(model, Plasma):
        return f"plasma(x_p={model.x_p!r})"
    if isinstance(model, Drude):
        return f"drude(x_p={model.x_p!r};x_gamma={model.relaxation_gamma!r})"
    if isinstance(model, PerfectConductor):
        return f"pec-{model.zero_mode_policy.value}"
    raise TypeError(f"unknown dispersion model {model!r}")
