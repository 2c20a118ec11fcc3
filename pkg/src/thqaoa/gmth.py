"""Threshold-compiled Grover-mixer schedules: closed-form expectation,
threshold curves, and threshold optimization.

For a threshold ``t`` the phase separator marks the states with cost at
most ``t``; ``r`` amplification rounds then boost the marked mass from
``rho = F_X(t)`` to ``P(rho, r)``.  The resulting cost expectation has
the closed form (with ``Y = X - mu`` and ``T = t - mu``)

    E_r(t) = mu - G_Y(T) * (1 - P(rho, r)/rho) / (1 - rho),

which this module evaluates in a cancellation-aware three-branch form:
``mu`` when no or all mass is marked, ``mu + G_Y(T)/rho`` when the
marked mass is boosted to certainty (``rho >= threshold_ratio(r)``),
and the general form otherwise.  Everything else here -- curves, their
unimodality diagnostics, the threshold optimizer, the optimal-threshold
cap, and the exact-optimum round count -- is built on that evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .dist_core import DiscreteLaw, Distribution
from .errors import DomainError
from .grover_kernel import (
    amplification_ratio,
    grover_probability,
    grover_probability_vec,
    threshold_ratio,
)

__all__ = [
    "ThresholdReport",
    "ThresholdCurve",
    "expectation_at_threshold",
    "threshold_report",
    "threshold_curve",
    "optimize_threshold",
    "certainty_threshold_cap",
    "min_rounds_exact_opt",
]

#: Relative convergence tolerance of the continuous threshold search,
#: measured on the marked mass u = F(t).
CONTINUOUS_SEARCH_TOLERANCE = 1e-12

#: The continuous search spans u in [threshold_ratio(r) * SPAN, threshold_ratio(r)].
CONTINUOUS_SEARCH_SPAN = 1e-13

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ThresholdReport:
    """Full scorecard of one thresholded run.

    ``t_opt`` is the threshold the report describes (the optimizer's
    choice, or the caller's when built directly); ``T = t - mu``;
    ``rho = F_X(t)`` is the marked mass, ``P`` its boosted value,
    ``eta = P/rho`` the amplification.  ``E_r`` is the cost
    expectation, ``C_r = (mu - E_r)/sigma`` the negated standard score
    (so ``E_r = mu - C_r*sigma``), ``quantile = F_X(E_r)``.  ``lam`` is
    the approximation ratio ``E_r/R_min``, present only when the
    support minimum is finite and nonzero.
    """

    r: int
    t_opt: float
    T: float
    rho: float
    P: float
    E_r: float
    C_r: float
    quantile: float
    eta: float
    lam: Optional[float]


@dataclass(frozen=True)
class ThresholdCurve:
    """Expectation and score along an ascending grid of thresholds."""

    r: int
    thresholds: np.ndarray
    f_values: np.ndarray
    expectations: np.ndarray
    scores: np.ndarray

    def __len__(self) -> int:
        return len(self.thresholds)

    def unimodality_violations(self, tol: float = 1e-12) -> int:
        """Count of descents that occur after any ascent.

        A curve that is non-increasing and then non-decreasing (one
        valley) returns 0.  Differences within ``tol`` of zero are
        treated as flat.
        """
        diffs = np.diff(self.expectations)
        signs = np.where(diffs > tol, 1, np.where(diffs < -tol, -1, 0))
        signs = signs[signs != 0]
        seen_rise = False
        violations = 0
        for s in signs:
            if s > 0:
                seen_rise = True
            elif seen_rise:
                violations += 1
        return violations


def _check_rounds(r: int) -> int:
    if int(r) != r or r < 1:
        raise DomainError(f"round count must be a positive integer, got {r!r}")
    return int(r)


def expectation_at_threshold(dist: Distribution, r: int, t: float) -> float:
    """Closed-form cost expectation of the thresholded schedule.

    Returns ``mu`` exactly when the threshold marks no mass or all of
    it; ``mu + G_Y(T)/rho`` (the conditional mean of the marked part)
    when ``rho >= threshold_ratio(r)``; and the general form
    ``mu + G_Y(T) * (eta - 1) / (1 - rho)`` with ``eta = P/rho``
    otherwise.
    """
    r = _check_rounds(r)
    mu = dist.mean
    rho = dist.cdf(t)
    if rho <= 0.0 or rho >= 1.0:
        return mu
    g_y = dist.partial_expectation(t) - mu * rho
    if rho >= threshold_ratio(r):
        return mu + g_y / rho
    eta = amplification_ratio(rho, r)
    return mu + g_y * (eta - 1.0) / (1.0 - rho)


def threshold_report(dist: Distribution, r: int, t: float) -> ThresholdReport:
    """Evaluate one threshold and assemble the full scorecard."""
    r = _check_rounds(r)
    e_r = expectation_at_threshold(dist, r, t)
    rho = dist.cdf(t)
    p = grover_probability(rho, r) if rho > 0.0 else 0.0
    eta = p / rho if rho > 0.0 else float((2 * r + 1) ** 2)
    r_min = dist.r_min
    lam = e_r / r_min if math.isfinite(r_min) and r_min != 0.0 else None
    return ThresholdReport(
        r=r,
        t_opt=float(t),
        T=float(t) - dist.mean,
        rho=rho,
        P=p,
        E_r=e_r,
        C_r=(dist.mean - e_r) / dist.std,
        quantile=dist.cdf(e_r),
        eta=eta,
        lam=lam,
    )


def _expectations_on_thresholds(dist: Distribution, r: int, ts: np.ndarray) -> tuple:
    """Vectorized (F(t), E_r(t)) along an array of thresholds."""
    mu = dist.mean
    rho = dist.cdf_vec(ts)
    g_y = dist.partial_expectation_vec(ts) - mu * rho
    rho_th = threshold_ratio(r)
    interior = (rho > 0.0) & (rho < 1.0)
    boosted = interior & (rho >= rho_th)
    general = interior & (rho < rho_th)
    e = np.full(ts.shape, mu, dtype=np.float64)
    if np.any(boosted):
        e[boosted] = mu + g_y[boosted] / rho[boosted]
    if np.any(general):
        rg = rho[general]
        p = grover_probability_vec(rg, r)
        e[general] = mu + g_y[general] * (p / rg - 1.0) / (1.0 - rg)
    return rho, e


GridSpec = Union[str, int, Sequence[float]]


def threshold_curve(dist: Distribution, r: int, grid_spec: GridSpec) -> ThresholdCurve:
    """Evaluate E_r(t) along a grid of thresholds.

    ``grid_spec`` is one of:

    * ``"support"`` -- every support value of a discrete law;
    * an integer ``n`` -- for continuous laws, ``n`` thresholds placed
      log-uniformly in marked mass ``F(t)`` from 1e-14 up to 1 (the last
      point is the all-marked limit, where the expectation is ``mu``);
    * an explicit sequence of thresholds (any law; sorted ascending).
    """
    r = _check_rounds(r)
    if isinstance(grid_spec, str):
        if grid_spec != "support":
            raise DomainError(f"unknown grid spec {grid_spec!r}; expected 'support'")
        if not isinstance(dist, DiscreteLaw):
            raise DomainError("'support' grids need a discrete law")
        ts = dist.spectrum.values.copy()
    elif isinstance(grid_spec, (int, np.integer)) and not isinstance(grid_spec, bool):
        n = int(grid_spec)
        if n < 2:
            raise DomainError(f"grid size must be at least 2, got {n}")
        if isinstance(dist, DiscreteLaw):
            raise DomainError("integer F-grids are for continuous laws; use 'support'")
        u = np.geomspace(1e-14, 1.0, n)
        ts = np.empty(n, dtype=np.float64)
        for i, ui in enumerate(u):
            ts[i] = math.inf if ui >= 1.0 - 1e-15 else dist.quantile(float(ui))
    else:
        ts = np.sort(np.asarray(list(grid_spec), dtype=np.float64))
        if ts.size == 0:
            raise DomainError("threshold grid must not be empty")
    rho, e = _expectations_on_thresholds(dist, r, ts)
    scores = (dist.mean - e) / dist.std
    return ThresholdCurve(r=r, thresholds=ts, f_values=rho, expectations=e, scores=scores)


def _optimize_discrete(law: DiscreteLaw, r: int) -> float:
    """Optimal threshold over a discrete support.

    The expectation beyond the certainty region is the plain conditional
    mean E[X|X<=t], which is non-decreasing in t, so the candidate set
    is every support value with F <= threshold_ratio(r) plus the first
    one beyond.  Ties go to the smallest threshold.
    """
    values = law.spectrum.values
    f = law.spectrum.mass_prefix
    k = int(np.searchsorted(f, threshold_ratio(r), side="right"))
    n_candidates = min(k + 1, values.size)
    ts = values[:n_candidates]
    _, e = _expectations_on_thresholds(law, r, ts)
    return float(ts[int(np.argmin(e))])


def _optimize_continuous(dist: Distribution, r: int) -> float:
    """Golden-section search on u = F(t), log-scaled.

    The expectation is unimodal in t, hence in u; the search runs over
    ``u in [threshold_ratio(r) * 1e-13, threshold_ratio(r)]`` in
    log-space (the optimum shrinks like 1/r^2, so a relative tolerance
    is the meaningful one) and the right endpoint -- the smallest
    certainty threshold -- is compared explicitly.
    """
    rho_th = threshold_ratio(r)
    hi = math.log(rho_th)
    lo = hi + math.log(CONTINUOUS_SEARCH_SPAN)

    def value_at(v: float) -> float:
        return expectation_at_threshold(dist, r, dist.quantile(math.exp(v)))

    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = value_at(c), value_at(d)
    while (b - a) > CONTINUOUS_SEARCH_TOLERANCE:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = value_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = value_at(d)
    v_best = c if fc <= fd else d
    candidates = [math.exp(v_best), rho_th, math.exp(lo)]
    best_u = min(candidates, key=lambda u: expectation_at_threshold(dist, r, dist.quantile(u)))
    return dist.quantile(best_u)


def optimize_threshold(dist: Distribution, r: int) -> ThresholdReport:
    """Globally minimize E_r(t) over thresholds and report the optimum.

    Discrete laws are scanned exhaustively over the candidate support
    values (everything up to the certainty region plus one value
    beyond); continuous laws run a golden-section search on the marked
    mass.  The optimal threshold never exceeds the cap returned by
    :func:`certainty_threshold_cap`.
    """
    r = _check_rounds(r)
    if isinstance(dist, DiscreteLaw):
        t_opt = _optimize_discrete(dist, r)
    else:
        t_opt = _optimize_continuous(dist, r)
    return threshold_report(dist, r, t_opt)


def certainty_threshold_cap(dist: Distribution, r: int) -> tuple:
    """Smallest certainty threshold and its conditional mean.

    ``tau`` is the smallest threshold whose marked mass reaches
    ``threshold_ratio(r)`` (so the marked mass is boosted to 1); the
    optimal expectation satisfies E_r(t_opt) <= E[X|X<=tau] <= tau.
    Returns ``(tau, E[X|X<=tau])``.
    """
    r = _check_rounds(r)
    rho_th = threshold_ratio(r)
    if isinstance(dist, DiscreteLaw):
        idx = int(np.searchsorted(dist.spectrum.mass_prefix, rho_th, side="left"))
        idx = min(idx, dist.spectrum.values.size - 1)
        tau = float(dist.spectrum.values[idx])
    else:
        tau = dist.quantile(rho_th)
    f = dist.cdf(tau)
    e_cap = dist.partial_expectation(tau) / f
    return tau, e_cap


def min_rounds_exact_opt(dist: Distribution) -> int:
    """Fewest rounds that boost the support-minimum mass to certainty.

    Smallest integer ``r`` with ``f_X(R_min) >= threshold_ratio(r)``,
    i.e. ``r >= (pi / arcsin(sqrt(f)) - 2) / 4``.  A law whose whole
    mass sits on the minimum needs 0 rounds.  Continuous laws carry no
    mass at a point and are rejected.
    """
    if not isinstance(dist, DiscreteLaw):
        raise DomainError("exact-optimum round counts need a discrete law (point mass at the minimum)")
    f = dist.min_mass()
    if f >= 1.0:
        return 0
    estimate = max(1, math.ceil((math.pi / math.asin(math.sqrt(f)) - 2.0) / 4.0))
    # The float estimate can be off by ~1e-16 relative, which at tiny f
    # is a large absolute count; bracket geometrically around it and
    # bisect on the defining predicate.
    if f >= threshold_ratio(estimate):
        hi = estimate
        lo = max(1, hi // 2)
        while lo > 1 and f >= threshold_ratio(lo):
            hi = lo
            lo = max(1, lo // 2)
        if f >= threshold_ratio(lo):
            return lo
    else:
        lo = estimate
        hi = 2 * estimate
        while f < threshold_ratio(hi):
            lo = hi
            hi *= 2
    # Invariant: threshold_ratio(lo) > f >= threshold_ratio(hi).
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f >= threshold_ratio(mid):
            hi = mid
        else:
            lo = mid
    return hi
