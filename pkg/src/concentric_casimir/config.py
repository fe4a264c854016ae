"""Flat key-value configuration for the command-line front end.

A config file holds ``key = value`` pairs, one per line or several per line
separated by commas; values may be double-quoted and ``#`` starts a comment::

    model = "drude", omega_p_si = 3.0e16, gamma_si = 1.0e14
    a_m = 0.01
    d_over_a = 0.05
    T_K = 300

Physical inputs are accepted nondimensionally (``t``, ``d_over_a``,
``ratio`` = a/b, ``x_p``, ``x_gamma``) or in SI with explicit suffixes
(``a_m``, ``b_m``, ``T_K``, ``omega_p_si``, ``gamma_si``).  Everything is
converted to the nondimensional form once, here.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .debye import DEFAULT_THETA_ORDER
from .dispersion import (
    ConstantIndex,
    Drude,
    PerfectConductor,
    Plasma,
    ThermalState,
    ZeroModePolicy,
)
from .eigenvalues import GapGeometry
from .engine import SummationPolicy
from .errors import ConfigError, DomainError

__all__ = [
    "RunSpec",
    "SweepSpec",
    "parse_config_text",
    "load_config",
    "apply_overrides",
    "build_run",
    "build_sweep",
    "point_params",
]

_PAIR = re.compile(r'\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*("(?:[^"]*)"|[^,]*?)\s*(?:,|$)')

_SWEEP_AXES = {
    "t": "t",
    "temperature_t": "t",
    "d_over_a": "d_over_a",
    "rel_width": "d_over_a",
    "n": "n",
    "index_n": "n",
}


@dataclass(frozen=True)
class RunSpec:
    geometry: GapGeometry
    thermal: ThermalState
    model: object
    policy: SummationPolicy
    # d/a as given, so reports echo the input rather than (b - a) / a
    d_over_a: float


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    fixed_params: dict


def parse_config_text(text: str) -> dict:
    params = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        pos = 0
        while pos < len(line):
            match = _PAIR.match(line, pos)
            if match is None or match.end() == pos:
                raise ConfigError(f"line {lineno}: cannot parse {line[pos:]!r}")
            key, value = match.group(1), match.group(2)
            if value.startswith('"'):
                value = value[1:-1]
            params[key] = value
            pos = match.end()
    return params


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def apply_overrides(params: dict, overrides) -> dict:
    out = dict(params)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip().strip('"')
    return out


def _float(params, key, default=None):
    if key not in params:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        value = float(params[key])
    except ValueError:
        raise ConfigError(f"{key} = {params[key]!r} is not a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite")
    return value


def _int(params, key, default):
    if key not in params:
        return default
    try:
        return int(params[key])
    except ValueError:
        raise ConfigError(f"{key} = {params[key]!r} is not an integer") from None


def _radius(params) -> Optional[float]:
    return _float(params, "a_m") if "a_m" in params else None


def _geometry(params) -> GapGeometry:
    a = _radius(params)
    given = [k for k in ("d_over_a", "ratio", "b_m") if k in params]
    if len(given) != 1:
        raise ConfigError("give exactly one of d_over_a, ratio (a/b) or b_m for the geometry")
    try:
        if "b_m" in params:
            if a is None:
                raise ConfigError("b_m requires a_m")
            return GapGeometry(a, _float(params, "b_m"))
        if "ratio" in params:
            return GapGeometry.from_ratio(_float(params, "ratio"))
        return GapGeometry.from_rel_width(_float(params, "d_over_a"))
    except DomainError as exc:
        raise ConfigError(f"invalid geometry: {exc}") from None


def _thermal(params) -> ThermalState:
    if ("t" in params) == ("T_K" in params):
        raise ConfigError("give exactly one of t (nondimensional) or T_K")
    try:
        if "T_K" in params:
            a = _radius(params)
            if a is None:
                raise ConfigError("T_K requires a_m")
            return ThermalState.from_kelvin(_float(params, "T_K"), a)
        return ThermalState(_float(params, "t"))
    except DomainError as exc:
        raise ConfigError(f"invalid temperature: {exc}") from None


def _model(params):
    kind = params.get("model", "constant").strip().lower()
    a = _radius(params)
    try:
        if kind == "constant":
            return ConstantIndex(_float(params, "n"))
        if kind == "plasma":
            if "omega_p_si" in params:
                if a is None:
                    raise ConfigError("omega_p_si requires a_m")
                return Plasma.from_si(_float(params, "omega_p_si"), a)
            return Plasma(_float(params, "x_p"))
        if kind == "drude":
            if "omega_p_si" in params:
                if a is None:
                    raise ConfigError("omega_p_si requires a_m")
                return Drude.from_si(_float(params, "omega_p_si"), _float(params, "gamma_si"), a)
            return Drude(_float(params, "x_p"), _float(params, "x_gamma"))
        if kind == "pec":
            policy = params.get("zero_mode", "").strip().upper()
            if policy not in ("A", "B"):
                raise ConfigError('model "pec" needs zero_mode = "A" or "B"')
            return PerfectConductor(ZeroModePolicy(policy))
    except DomainError as exc:
        raise ConfigError(f"invalid dispersion model: {exc}") from None
    raise ConfigError(f"unknown model {kind!r}; expected constant, plasma, drude or pec")


def _policy(params) -> SummationPolicy:
    try:
        return SummationPolicy(
            term_truncation_ratio=_float(params, "truncation", 1e-9),
            max_matsubara_m=_int(params, "max_m", SummationPolicy.max_matsubara_m),
            max_l=_int(params, "max_l", SummationPolicy.max_l),
            theta_order=_int(params, "theta_order", DEFAULT_THETA_ORDER),
            threads=_int(params, "threads", 1),
        )
    except DomainError as exc:
        raise ConfigError(f"invalid summation policy: {exc}") from None


def build_run(params: dict) -> RunSpec:
    geometry = _geometry(params)
    d_over_a = _float(params, "d_over_a") if "d_over_a" in params else geometry.rel_width
    return RunSpec(geometry, _thermal(params), _model(params), _policy(params), d_over_a)


def _sweep_values(params):
    if "sweep_values" in params:
        try:
            values = [float(v) for v in params["sweep_values"].replace(";", " ").split()]
        except ValueError:
            raise ConfigError("sweep_values must be numbers separated by spaces") from None
    elif "sweep_logspace" in params:
        parts = params["sweep_logspace"].split()
        if len(parts) != 3:
            raise ConfigError('sweep_logspace must be "start stop count"')
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError('sweep_logspace must be "start stop count"') from None
        if start <= 0 or stop <= 0 or count < 1:
            raise ConfigError("sweep_logspace needs positive bounds and count >= 1")
        values = np.geomspace(start, stop, count).tolist()
    else:
        raise ConfigError("a sweep needs sweep_values or sweep_logspace")
    if not values:
        raise ConfigError("sweep has no values")
    return tuple(values)


def build_sweep(params: dict) -> SweepSpec:
    axis = _SWEEP_AXES.get(params.get("sweep_axis", "").strip())
    if axis is None:
        raise ConfigError("sweep_axis must be one of t, d_over_a, n (or temperature_t, rel_width, index_n)")
    values = _sweep_values(params)
    fixed = {k: v for k, v in params.items() if not k.startswith("sweep_")}
    spec = SweepSpec(axis, values, fixed)
    # the fixed parameters are at fault only if no point can be built at all;
    # a single bad swept value becomes a failed row instead
    first_error = None
    for value in values:
        try:
            build_run(point_params(spec, value))
            return spec
        except (ConfigError, DomainError) as exc:
            first_error = first_error or exc
    raise first_error


def point_params(spec: SweepSpec, value: float) -> dict:
    params = dict(spec.fixed_params)
    if spec.axis == "t":
        params.pop("T_K", None)
        params["t"] = repr(float(value))
    elif spec.axis == "d_over_a":
        for key in ("ratio", "b_m"):
            params.pop(key, None)
        params["d_over_a"] = repr(float(value))
    else:
        params["model"] = "constant"
        params["n"] = repr(float(value))
    return params

