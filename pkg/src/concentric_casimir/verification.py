"""Self-checks run by ``concentric-casimir verify``.

Each check returns ``(name, passed, detail)``.  They exercise the same
identities as the test suite but need nothing beyond the library itself.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from .debye import DebyeDomain, debye_quad
from .dispersion import Drude, PerfectConductor, Plasma, ZeroModePolicy
from .eigenvalues import GapGeometry, zero_mode_eigenvalues
from .riccati import riccati_direct

__all__ = ["run_all"]


def _rel(a, b):
    return abs(float(a / b) - 1.0)


def check_direct_wronskian():
    worst = 0.0
    for l in range(1, 51):
        for x in np.geomspace(1e-4, 30.0, 25):
            q = riccati_direct(l, float(x))
            scale = max(1.0, abs(float(q.s * q.e_prime)))
            worst = max(worst, abs(q.wronskian() + 1.0) / scale)
    return "direct Wronskian (l<=50, 1e-4<=x<=30)", worst <= 1e-10, f"max residual {worst:.2e}"


def _debye_grid():
    domain = DebyeDomain()
    ls = np.unique(np.geomspace(1, 200, 15).round().astype(int))
    xs = np.geomspace(1e-2, 1e4, 20)
    return [(int(l), float(x)) for l in ls for x in xs if domain.contains(l, x)]


def check_debye_wronskian():
    worst = 0.0
    for l, x in _debye_grid():
        q = debye_quad(l, x)
        worst = max(worst, abs(q.wronskian() + 1.0))
    return "Debye Wronskian (x>10 or l>9)", worst <= 1e-8, f"max residual {worst:.2e}"


def check_debye_agreement():
    worst = 0.0
    for l, x in _debye_grid():
        d, q = debye_quad(l, x), riccati_direct(l, x)
        worst = max(
            worst,
            _rel(d.s, q.s),
            _rel(d.e, q.e),
            _rel(d.s_prime, q.s_prime),
            _rel(d.e_prime, q.e_prime),
        )
    return "Debye vs direct", worst <= 1e-8, f"max relative error {worst:.2e}"


def check_metal_zero_mode():
    worst = 0.0
    l = np.arange(1, 31)
    for ratio in (0.2, 0.5, 0.9):
        tm, te = zero_mode_eigenvalues(l, ratio, PerfectConductor(ZeroModePolicy.A))
        expected = np.array([ratio ** (2 * k + 1) for k in range(1, 31)])
        worst = max(worst, float(np.max(np.abs(tm / expected - 1))), float(np.max(np.abs(te / expected - 1))))
    lb = np.arange(1, 400)
    tm_a, te_a = zero_mode_eigenvalues(lb, 0.5, PerfectConductor(ZeroModePolicy.A))
    tm_b, te_b = zero_mode_eigenvalues(lb, 0.5, PerfectConductor(ZeroModePolicy.B))
    f_a = 0.5 * math.fsum((2 * lb + 1) * (np.log1p(-tm_a) + np.log1p(-te_a)))
    f_b = 0.5 * math.fsum((2 * lb + 1) * (np.log1p(-tm_b) + np.log1p(-te_b)))
    ok = worst <= 4 * np.finfo(float).eps and abs(f_a + 0.6394321274) < 1e-6 and f_b == 0.5 * f_a
    return "metal zero mode", ok, f"eigenvalue error {worst:.1e}, option A {f_a:.10f}, B/A {f_b / f_a:.15f}"


def check_dispersion_discrimination():
    l = np.arange(1, 31)
    geom = GapGeometry.from_ratio(0.5)
    _, te_p = zero_mode_eigenvalues(l, geom.ratio, Plasma(1e6))
    _, te_a = zero_mode_eigenvalues(l, geom.ratio, PerfectConductor(ZeroModePolicy.A))
    _, te_d = zero_mode_eigenvalues(l, geom.ratio, Drude(1e6, 1e2))
    gap = float(np.max(np.abs(te_p - te_a)))
    ok = gap <= 1e-4 and not np.any(te_d)
    return "plasma vs Drude zero mode", ok, f"plasma-A gap {gap:.1e}, Drude max {float(te_d.max()):.1e}"


CHECKS = (
    check_direct_wronskian,
    check_debye_wronskian,
    check_debye_agreement,
    check_metal_zero_mode,
    check_dispersion_discrimination,
)


def run_all():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        return [check() for check in CHECKS]
