"""Casimir free energy between concentric dielectric spheres.

The free energy is a Matsubara sum over frequencies ``m`` and angular orders
``l`` of ``ln(1 - lambda)`` for the TM and TE cavity eigenvalues.  The
eigenvalues are built from modified Riccati-Bessel functions, evaluated
directly in log space at small orders and from the uniform (Debye)
asymptotic expansion elsewhere.  Units are nondimensional throughout:
lengths in the inner radius ``a`` and temperature as ``t = 2 pi a / beta``.
"""
from .debye import (
    DEFAULT_THETA_ORDER,
    DebyeDomain,
    debye_quad,
    generate_correction_coefficients,
    riccati_quad,
)
from .dispersion import (
    ConstantIndex,
    Drude,
    PerfectConductor,
    Plasma,
    ThermalState,
    ZeroModePolicy,
)
from .eigenvalues import (
    EvaluationPath,
    GapGeometry,
    lambda_metal_limit,
    lambda_te_debye,
    lambda_te_direct,
    lambda_tm_debye,
    lambda_tm_direct,
    lambda_zero_mode,
)
from .engine import (
    FreeEnergyResult,
    SummationPolicy,
    convergence_report,
    free_energy,
    free_energy_metal,
    zero_mode_fraction,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DebyeDomainWarning,
    DomainError,
    PrecisionError,
    ThresholdError,
)
from .riccati import ScaledValue, riccati_direct, small_argument_limits

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_THETA_ORDER",
    "DebyeDomain",
    "debye_quad",
    "generate_correction_coefficients",
    "riccati_quad",
    "ConstantIndex",
    "Drude",
    "PerfectConductor",
    "Plasma",
    "ThermalState",
    "ZeroModePolicy",
    "EvaluationPath",
    "GapGeometry",
    "lambda_metal_limit",
    "lambda_te_debye",
    "lambda_te_direct",
    "lambda_tm_debye",
    "lambda_tm_direct",
    "lambda_zero_mode",
    "FreeEnergyResult",
    "SummationPolicy",
    "convergence_report",
    "free_energy",
    "free_energy_metal",
    "zero_mode_fraction",
    "ConfigError",
    "ConvergenceError",
    "DebyeDomainWarning",
    "DomainError",
    "PrecisionError",
    "ThresholdError",
    "ScaledValue",
    "riccati_direct",
    "small_argument_limits",
]
