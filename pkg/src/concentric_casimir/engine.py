"""Matsubara double sum for the mutual free energy.

    beta F = sum'_m sum_l (2l + 1) [ln(1 - lambda_TM) + ln(1 - lambda_TE)]

The prime gives ``m = 0`` half weight.  A term is negligible once
``|term| < ratio * |partial sum of the whole series|``.  For each ``m`` the
``l`` sum runs upward until that holds for ``l_guard`` consecutive orders
past the peak of the row (terms first grow with ``l`` when ``m t`` is large);
the ``m`` sum advances until whole rows satisfy it for ``m_guard``
consecutive ``m``.  The zero mode is always taken from the analytic limits.

Rows are evaluated in fixed batches of ``m_batch``; inside a batch each row
is referred to the running total at the batch start, so the rows are
independent and may go to a thread pool.  Reduction is in increasing ``m``
with ``math.fsum`` and the batch layout does not depend on the worker
count, so results are bit-identical for any number of threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .debye import DEFAULT_THETA_ORDER, DebyeDomain, generate_correction_coefficients
from .dispersion import (
    ConstantIndex,
    DispersionModel,
    PerfectConductor,
    ThermalState,
    ZeroModePolicy,
    refractive_index,
)
from .eigenvalues import (
    EvaluationPath,
    GapGeometry,
    debye_eigenvalues,
    direct_eigenvalues,
    zero_mode_eigenvalues,
)
from .errors import ConvergenceError, DomainError

__all__ = [
    "SummationPolicy",
    "FreeEnergyResult",
    "ConvergenceReport",
    "free_energy",
    "free_energy_metal",
    "zero_mode_fraction",
    "convergence_report",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SummationPolicy:
    term_truncation_ratio: float = 1e-9
    max_matsubara_m: int = 1_000_000
    max_l: int = 200_000
    debye_switch: DebyeDomain = field(default_factory=DebyeDomain)
    theta_order: int = DEFAULT_THETA_ORDER
    l_guard: int = 3
    m_guard: int = 2
    threads: int = 1
    block_size: int = 64
    m_batch: int = 16

    def __post_init__(self):
        if not 0 < self.term_truncation_ratio < 1:
            raise DomainError("term_truncation_ratio must lie in (0, 1)")
        for name in ("max_matsubara_m", "max_l", "l_guard", "m_guard", "threads", "block_size", "m_batch"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be positive")


@dataclass
class FreeEnergyResult:
    beta_F: float
    terms_evaluated: int
    converged: bool
    per_m_partial_sums: list
    zero_mode_beta_F: float
    path_counts: dict
    row_lengths: list = field(default_factory=list)
    row_tail_estimates: list = field(default_factory=list)
    cap_hit: Optional[str] = None
    truncation_ratio: float = 1e-9

    @property
    def zero_mode_fraction(self) -> Optional[float]:
        """``F(m=0) / F``, or ``None`` when ``F`` vanishes."""
        if self.beta_F == 0.0:
            return None
        return self.zero_mode_beta_F / self.beta_F


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    cap_hit: Optional[str]
    terms_evaluated: int
    matsubara_terms: int
    max_l_used: int
    path_counts: dict
    l_tail_total: float
    m_tail_estimate: float
    rounding_estimate: float
    estimated_abs_error: float
    achieved_digits: float


@dataclass
class _Row:
    total: float
    count: int
    tail: float
    paths: dict
    capped: bool


def _bump(counts, key, k):
    counts[key] = counts.get(key, 0) + k


def _geometric_tail(values):
    """Remainder estimate of a series from its last two terms."""
    if not values:
        return 0.0
    last = abs(values[-1])
    if len(values) < 2 or values[-2] == 0.0:
        return last
    q = abs(values[-1] / values[-2])
    if q >= 1.0:
        return last
    return last * q / (1.0 - q)


class _Summation:
    def __init__(self, geometry, thermal, model, policy):
        self.ratio = geometry.ratio
        self.thermal = thermal
        self.model = model
        self.policy = policy
        self.coeffs = generate_correction_coefficients(policy.theta_order)

    def _block_eigenvalues(self, m, l):
        """Eigenvalues and the Debye-path mask for one block of orders."""
        if m == 0:
            tm, te = zero_mode_eigenvalues(l, self.ratio, self.model, self.policy.debye_switch)
            return tm, te, None
        x, y = self.thermal.arguments(m, self.ratio)
        n = refractive_index(self.model, x)
        use_debye = self.policy.debye_switch.contains(l, x)
        tm = np.empty(len(l))
        te = np.empty(len(l))
        n_debye = int(np.count_nonzero(use_debye))
        if n_debye:
            tm[use_debye], te[use_debye] = debye_eigenvalues(
                l[use_debye], x, y, n, self.coeffs
            )
        if n_debye < len(l):
            lo = l[~use_debye]
            dtm, dte = direct_eigenvalues(int(lo.max()), x, y, n)
            tm[~use_debye] = dtm[lo - 1]
            te[~use_debye] = dte[lo - 1]
        return tm, te, use_debye

    def row(self, m, offset=0.0) -> _Row:
        """Sum over ``l`` for one ``m``; ``offset`` is the series total so far."""
        policy = self.policy
        ratio_tol = policy.term_truncation_ratio
        kept = []
        paths = {}
        partial = offset
        consecutive = 0
        previous = math.inf
        l0 = 1
        while True:
            l_hi = min(l0 + policy.block_size, policy.max_l + 1)
            l = np.arange(l0, l_hi)
            tm, te, use_debye = self._block_eigenvalues(m, l)
            terms = (2 * l + 1) * (np.log1p(-tm) + np.log1p(-te))
            stop = None
            for i, term in enumerate(terms):
                partial += term
                # a small term only counts once the row is past its peak in l
                falling = abs(term) <= previous
                previous = abs(term)
                if term == 0.0 or (falling and abs(term) < ratio_tol * abs(partial)):
                    consecutive += 1
                    if consecutive >= policy.l_guard:
                        stop = i + 1
                        break
                else:
                    consecutive = 0
            used = len(l) if stop is None else stop
            kept.extend(terms[:used].tolist())
            if use_debye is None:
                _bump(paths, EvaluationPath.ANALYTIC_LIMIT, used)
            else:
                n_debye = int(np.count_nonzero(use_debye[:used]))
                _bump(paths, EvaluationPath.DEBYE, n_debye)
                _bump(paths, EvaluationPath.DIRECT, used - n_debye)
            if stop is not None:
                return _Row(math.fsum(kept), len(kept), _geometric_tail(kept), paths, False)
            if l_hi > policy.max_l:
                return _Row(math.fsum(kept), len(kept), _geometric_tail(kept), paths, True)
            l0 = l_hi


def _trivial_result(policy):
    return FreeEnergyResult(
        beta_F=0.0,
        terms_evaluated=0,
        converged=True,
        per_m_partial_sums=[],
        zero_mode_beta_F=0.0,
        path_counts={p: 0 for p in EvaluationPath},
        truncation_ratio=policy.term_truncation_ratio,
    )


def free_energy(
    geometry: GapGeometry,
    thermal: ThermalState,
    model: DispersionModel,
    policy: Optional[SummationPolicy] = None,
    *,
    strict: bool = False,
) -> FreeEnergyResult:
    """``beta F`` for the given geometry, temperature and dispersion model.

    When a cap is reached the partial result is returned with
    ``converged=False``; with ``strict=True`` a :class:`ConvergenceError`
    carrying that result is raised instead.
    """
    policy = policy or SummationPolicy()
    if isinstance(model, ConstantIndex) and model.n == 1.0:
        return _trivial_result(policy)

    summation = _Summation(geometry, thermal, model, policy)
    ratio_tol = policy.term_truncation_ratio
    path_counts = {p: 0 for p in EvaluationPath}
    sums, lengths, tails = [], [], []
    cap_hit = None

    def absorb(row, weight):
        nonlocal cap_hit
        sums.append(weight * row.total)
        lengths.append(row.count)
        tails.append(weight * row.tail)
        for p, c in row.paths.items():
            path_counts[p] += c
        if row.capped and cap_hit is None:
            cap_hit = "max_l"

    absorb(summation.row(0), 0.5)
    running = sums[0]
    consecutive = 0
    m = 1
    pool = ThreadPoolExecutor(policy.threads) if policy.threads > 1 else None
    try:
        done = False
        while not done:
            ms = range(m, min(m + policy.m_batch, policy.max_matsubara_m + 1))
            # every row of a batch is referred to the total at the batch start
            offset = running
            if pool is not None:
                rows = list(pool.map(lambda k: summation.row(k, offset), ms))
            else:
                rows = [summation.row(k, offset) for k in ms]
            for row in rows:
                absorb(row, 1.0)
                running += row.total
                if row.total == 0.0 or abs(row.total) < ratio_tol * abs(running):
                    consecutive += 1
                    if consecutive >= policy.m_guard:
                        done = True
                        break
                else:
                    consecutive = 0
            m = ms[-1] + 1
            if not done and m > policy.max_matsubara_m:
                cap_hit = cap_hit or "max_matsubara_m"
                break
    finally:
        if pool is not None:
            pool.shutdown()

    result = FreeEnergyResult(
        beta_F=math.fsum(sums),
        terms_evaluated=int(sum(lengths)),
        converged=cap_hit is None,
        per_m_partial_sums=sums,
        zero_mode_beta_F=sums[0],
        path_counts=path_counts,
        row_lengths=lengths,
        row_tail_estimates=tails,
        cap_hit=cap_hit,
        truncation_ratio=ratio_tol,
    )
    if strict and not result.converged:
        raise ConvergenceError(f"summation stopped at cap {cap_hit}", result)
    return result


def free_energy_metal(
    geometry: GapGeometry,
    thermal: ThermalState,
    zero_mode_policy: ZeroModePolicy,
    policy: Optional[SummationPolicy] = None,
    *,
    strict: bool = False,
) -> FreeEnergyResult:
    """Perfect-conductor free energy with the chosen zero-mode ordering."""
    return free_energy(
        geometry, thermal, PerfectConductor(ZeroModePolicy(zero_mode_policy)), policy, strict=strict
    )


def zero_mode_fraction(
    geometry: GapGeometry,
    thermal: ThermalState,
    model: DispersionModel,
    policy: Optional[SummationPolicy] = None,
) -> Optional[float]:
    """``Y = F(m=0) / F``; ``None`` when ``F`` vanishes identically (n = 1)."""
    result = free_energy(geometry, thermal, model, policy, strict=True)
    return result.zero_mode_fraction


def convergence_report(result: FreeEnergyResult) -> ConvergenceReport:
    """Tail and rounding estimates for a finished summation."""
    sums = result.per_m_partial_sums
    l_tail = math.fsum(abs(t) for t in result.row_tail_estimates)
    m_tail = _geometric_tail(sums[1:]) if len(sums) > 1 else 0.0
    rounding = float(result.terms_evaluated * _EPS * abs(result.beta_F))
    # the stopping rule only bounds neglected terms by the ratio, so the
    # truncation error is never claimed to be smaller than that
    truncation = max(l_tail + m_tail, result.truncation_ratio * abs(result.beta_F))
    err = truncation + rounding
    max_digits = -math.log10(_EPS)
    if result.beta_F == 0.0:
        digits = max_digits if err == 0.0 else 0.0
    else:
        rel = err / abs(result.beta_F)
        digits = max_digits if rel <= _EPS else min(max_digits, max(0.0, -math.log10(rel)))
    return ConvergenceReport(
        converged=result.converged,
        cap_hit=result.cap_hit,
        terms_evaluated=result.terms_evaluated,
        matsubara_terms=len(sums),
        max_l_used=max(result.row_lengths, default=0),
        path_counts=dict(result.path_counts),
        l_tail_total=l_tail,
        m_tail_estimate=m_tail,
        rounding_estimate=rounding,
        estimated_abs_error=err,
        achieved_digits=digits,
    )
