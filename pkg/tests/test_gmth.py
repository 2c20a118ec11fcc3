"""Thresholded schedules: closed-form expectation, curves, optimizer, caps."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thqaoa import gmqaoa
from thqaoa.dist_models import make_empirical, make_normal, make_two_point
from thqaoa.errors import DomainError
from thqaoa.gmth import (
    ThresholdCurve,
    certainty_threshold_cap,
    expectation_at_threshold,
    min_rounds_exact_opt,
    optimize_threshold,
    threshold_curve,
    threshold_report,
)
from thqaoa.grover_kernel import (
    grover_probability,
    optimal_binary_angles,
    threshold_ratio,
)


def random_discrete_law(rng, max_atoms=12):
    n = int(rng.integers(2, max_atoms + 1))
    values = np.sort(rng.normal(0.0, 3.0, n))
    while np.any(np.diff(values) == 0.0):
        values = np.sort(rng.normal(0.0, 3.0, n))
    counts = rng.integers(1, 50, n)
    return make_empirical(list(zip(values.tolist(), (int(c) for c in counts))))


# ---------------------------------------------------------------------------
# Closed-form expectation
# ---------------------------------------------------------------------------


def test_expectation_degenerate_thresholds_return_mean():
    law = random_discrete_law(np.random.default_rng(0))
    lo = law.spectrum.values[0] - 1.0
    hi = law.spectrum.values[-1] + 1.0
    for r in (1, 5):
        assert expectation_at_threshold(law, r, lo) == law.mean
        assert expectation_at_threshold(law, r, hi) == law.mean
    norm = make_normal(2.0, 1.0)
    assert expectation_at_threshold(norm, 3, math.inf) == norm.mean


def test_expectation_two_point_closed_forms():
    # marked class sits at -1: boosted branch gives exactly -1, the
    # general branch gives exactly -P(rho, r).
    for r in (1, 2, 6):
        thr = threshold_ratio(r)
        rho_hi = min(1.0 - 1e-9, 2.0 * thr)
        assert expectation_at_threshold(make_two_point(rho_hi), r, -0.5) == pytest.approx(
            -1.0, abs=1e-12
        )
        rho_lo = 0.5 * thr
        assert expectation_at_threshold(make_two_point(rho_lo), r, -0.5) == pytest.approx(
            -grover_probability(rho_lo, r), abs=1e-13
        )


def test_expectation_matches_simulator_on_random_spectra():
    rng = np.random.default_rng(42)
    for _ in range(25):
        law = random_discrete_law(rng)
        r = int(rng.integers(1, 7))
        # thresholds at interior support values: 0 < F(t) < 1
        for t in law.spectrum.values[:-1]:
            rho = law.cdf(float(t))
            sched = optimal_binary_angles(rho, r)
            state = gmqaoa.simulate(law, gmqaoa.threshold_phase(float(t)), sched)
            e_sim = gmqaoa.expectation_from_state(state)
            e_formula = expectation_at_threshold(law, r, float(t))
            assert e_formula == pytest.approx(e_sim, abs=1e-9)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def test_report_field_identities():
    rng = np.random.default_rng(3)
    law = random_discrete_law(rng)
    r, t = 4, float(law.spectrum.values[1])
    rep = threshold_report(law, r, t)
    assert rep.r == r and rep.t_opt == t
    assert rep.T == pytest.approx(t - law.mean, abs=1e-12)
    assert rep.rho == law.cdf(t)
    assert rep.P == grover_probability(rep.rho, r)
    assert rep.eta == pytest.approx(rep.P / rep.rho, abs=1e-14)
    assert rep.E_r == pytest.approx(law.mean - rep.C_r * law.std, abs=1e-9)
    assert rep.quantile == law.cdf(rep.E_r)
    assert rep.lam == pytest.approx(rep.E_r / law.spectrum.values[0], abs=1e-12)


def test_report_lambda_absent_when_min_not_usable():
    # infinite support minimum
    rep = threshold_report(make_normal(0.0, 1.0), 2, -1.0)
    assert rep.lam is None
    # zero support minimum
    law = make_empirical([(0.0, 1), (1.0, 1)])
    assert threshold_report(law, 2, 0.5).lam is None


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------


def test_curve_support_grid_covers_spectrum():
    law = random_discrete_law(np.random.default_rng(5))
    curve = threshold_curve(law, 3, "support")
    assert np.array_equal(curve.thresholds, law.spectrum.values)
    assert np.allclose(curve.f_values, law.spectrum.mass_prefix)
    # last point marks everything: expectation is the mean
    assert curve.expectations[-1] == pytest.approx(law.mean, abs=1e-12)
    assert np.allclose(
        curve.scores, (law.mean - curve.expectations) / law.std, atol=1e-14
    )
    # agreement with the scalar evaluator
    for t, e in zip(curve.thresholds, curve.expectations):
        assert e == pytest.approx(expectation_at_threshold(law, 3, float(t)), abs=1e-12)


def test_curve_integer_grid_on_continuous_law():
    norm = make_normal(1.0, 2.0)
    curve = threshold_curve(norm, 2, 50)
    assert len(curve) == 50
    assert curve.f_values[0] == pytest.approx(1e-14, rel=1e-9)
    assert curve.f_values[-1] == 1.0
    assert curve.expectations[-1] == norm.mean
    for t, e in zip(curve.thresholds[:-1], curve.expectations[:-1]):
        assert e == pytest.approx(expectation_at_threshold(norm, 2, float(t)), abs=1e-12)


def test_curve_explicit_grid_sorted():
    law = make_normal(0.0, 1.0)
    curve = threshold_curve(law, 1, [0.5, -1.0, -2.5])
    assert curve.thresholds.tolist() == [-2.5, -1.0, 0.5]


def test_curve_grid_validation():
    law = random_discrete_law(np.random.default_rng(6))
    norm = make_normal(0.0, 1.0)
    with pytest.raises(DomainError):
        threshold_curve(law, 1, "everything")
    with pytest.raises(DomainError):
        threshold_curve(norm, 1, "support")
    with pytest.raises(DomainError):
        threshold_curve(law, 1, 100)
    with pytest.raises(DomainError):
        threshold_curve(norm, 1, 1)
    with pytest.raises(DomainError):
        threshold_curve(law, 1, [])
    with pytest.raises(DomainError):
        threshold_curve(law, 0, "support")


def test_unimodality_counter_on_constructed_curves():
    def curve_with(expectations):
        e = np.asarray(expectations, dtype=np.float64)
        ts = np.arange(e.size, dtype=np.float64)
        return ThresholdCurve(
            r=1, thresholds=ts, f_values=ts, expectations=e, scores=-e
        )

    assert curve_with([3.0, 2.0, 1.0, 2.0, 3.0]).unimodality_violations() == 0
    assert curve_with([3.0, 3.0, 3.0]).unimodality_violations() == 0
    assert curve_with([3.0, 1.0, 2.0, 1.5, 3.0]).unimodality_violations() == 1
    assert curve_with([1.0, 2.0, 1.0, 2.0, 1.0]).unimodality_violations() == 2
    # sub-tolerance wiggles are flat
    assert curve_with([2.0, 1.0, 1.0 + 1e-13, 1.0, 3.0]).unimodality_violations() == 0


@given(seed=st.integers(min_value=0, max_value=10_000), r=st.integers(1, 10))
@settings(max_examples=60, deadline=None)
def test_curve_unimodality_on_random_spectra(seed, r):
    law = random_discrete_law(np.random.default_rng(seed), max_atoms=30)
    curve = threshold_curve(law, r, "support")
    assert curve.unimodality_violations(tol=1e-12) == 0


# ---------------------------------------------------------------------------
# Optimizer
# ---------------------------------------------------------------------------


def test_discrete_optimum_matches_full_scan():
    rng = np.random.default_rng(9)
    for _ in range(30):
        law = random_discrete_law(rng, max_atoms=25)
        r = int(rng.integers(1, 9))
        rep = optimize_threshold(law, r)
        full = [
            expectation_at_threshold(law, r, float(t)) for t in law.spectrum.values
        ]
        assert rep.E_r == pytest.approx(min(full), abs=1e-12)
        assert rep.t_opt in law.spectrum.values
        tau, e_cap = certainty_threshold_cap(law, r)
        assert rep.t_opt <= tau
        assert rep.E_r <= e_cap + 1e-12


def test_continuous_optimum_beats_dense_scan():
    norm = make_normal(0.0, 1.0)
    for r in (1, 4, 20, 200):
        rep = optimize_threshold(norm, r)
        u_grid = np.geomspace(1e-12, threshold_ratio(r), 4001)
        dense = min(
            expectation_at_threshold(norm, r, norm.quantile(float(u))) for u in u_grid
        )
        assert rep.E_r <= dense + 1e-10
        tau, e_cap = certainty_threshold_cap(norm, r)
        assert rep.t_opt <= tau + 1e-12
        assert rep.E_r <= e_cap + 1e-12
        # the optimal threshold never reaches past the certainty mass
        assert rep.rho <= threshold_ratio(r) + 1e-15


def test_optimum_score_grows_with_rounds():
    norm = make_normal(0.0, 1.0)
    scores = [optimize_threshold(norm, r).C_r for r in (1, 2, 4, 8, 16)]
    assert all(b > a for a, b in zip(scores, scores[1:]))


# ---------------------------------------------------------------------------
# Certainty cap
# ---------------------------------------------------------------------------


def test_certainty_cap_discrete_is_tightest_support_value():
    law = make_empirical([(-3.0, 1), (-1.0, 1), (0.0, 6)])
    # masses 1/8, 1/8, 3/4; prefix 0.125, 0.25, 1.0
    tau, e_cap = certainty_threshold_cap(law, 1)  # rho_th(1) = 0.25
    assert tau == -1.0
    assert e_cap == pytest.approx(-2.0, abs=1e-14)  # (-3 - 1) / 2
    tau2, e_cap2 = certainty_threshold_cap(law, 2)  # rho_th(2) ~ 0.0955
    assert tau2 == -3.0 and e_cap2 == pytest.approx(-3.0)


def test_certainty_cap_continuous_hits_quantile():
    norm = make_normal(0.0, 1.0)
    for r in (1, 3, 10):
        tau, e_cap = certainty_threshold_cap(norm, r)
        assert norm.cdf(tau) == pytest.approx(threshold_ratio(r), abs=1e-12)
        assert e_cap < tau  # conditional mean of the tail sits below its top


# ---------------------------------------------------------------------------
# Exact-optimum round count
# ---------------------------------------------------------------------------


def test_min_rounds_exact_opt_minimality():
    for f in (0.25, 0.3, 0.2, 0.01, 1e-6, 1e-12, 1e-30):
        law = make_two_point(f)
        r_star = min_rounds_exact_opt(law)
        assert f >= threshold_ratio(r_star)
        if r_star > 1:
            assert f < threshold_ratio(r_star - 1)


def test_min_rounds_exact_opt_edge_cases():
    # a law concentrated on one value cannot even be built (zero spread)
    with pytest.raises(DomainError):
        make_empirical([(-1.0, 7)])
    assert min_rounds_exact_opt(make_two_point(0.25)) == 1
    assert min_rounds_exact_opt(make_two_point(0.26)) == 1
    with pytest.raises(DomainError):
        min_rounds_exact_opt(make_normal(0.0, 1.0))
