import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpcount import EstimateTriple, ValidationError, enforce_min_spread, pert_time, time_stats, variance
from strategies import triples


@pytest.mark.parametrize(
    "triple, expected",
    [((2, 6, 8), 34 / 6), ((8, 8, 8), 8.0), ((24, 32, 36), 188 / 6)],
)
def test_pert_time(triple, expected):
    assert pert_time(EstimateTriple(*triple)) == pytest.approx(expected, rel=1e-15)


def test_pert_time_printed_values():
    assert round(pert_time(EstimateTriple(2, 6, 8)), 4) == 5.6667
    assert round(pert_time(EstimateTriple(24, 32, 36)), 4) == 31.3333


@pytest.mark.parametrize(
    "triple, sigma2, sigma",
    [((8, 8, 8), 0.0, 0.0), ((2, 6, 8), 1.0, 1.0), ((24, 32, 36), 4.0, 2.0)],
)
def test_variance(triple, sigma2, sigma):
    assert variance(EstimateTriple(*triple)) == (sigma2, sigma)


def test_time_stats_bundle():
    stats = time_stats(EstimateTriple(24, 32, 36))
    assert (stats.variance, stats.sigma) == (4.0, 2.0)
    assert 24 <= stats.expected <= 36


@pytest.mark.parametrize("bad", [(4, 3, 5), (2, 6, 5), (-1, 0, 1), (0, math.nan, 1)])
def test_triple_ordering_enforced(bad):
    with pytest.raises(ValidationError):
        EstimateTriple(*bad)


def test_min_spread_aberration_case():
    fixed = enforce_min_spread(EstimateTriple(8, 8, 8))
    assert fixed.corrected
    assert tuple(fixed) == pytest.approx((8, 8.8, 9.6))


def test_min_spread_leaves_wide_estimate():
    est = EstimateTriple(2, 6, 8)
    out = enforce_min_spread(est)
    assert out == est and not out.corrected


def test_min_spread_resets_mp_to_midpoint():
    fixed = enforce_min_spread(EstimateTriple(10, 11, 11))
    assert fixed.corrected
    assert tuple(fixed) == pytest.approx((10, 11, 12))


def test_min_spread_configurable_ratio():
    fixed = enforce_min_spread(EstimateTriple(10, 10, 10), min_ratio=0.5)
    assert tuple(fixed) == pytest.approx((10, 12.5, 15))
    assert enforce_min_spread(EstimateTriple(10, 10, 10), min_ratio=0.0) == EstimateTriple(10, 10, 10)


def test_min_spread_zero_triple_warns(caplog):
    out = enforce_min_spread(EstimateTriple(0, 0, 0))
    assert tuple(out) == (0, 0, 0)
    assert "all-zero" in caplog.text


@given(triples(), st.floats(min_value=0, max_value=2))
def test_min_spread_postcondition(est, ratio):
    out = enforce_min_spread(est, ratio)
    o, mp, p = out
    assert o <= mp <= p
    # One rounding of O*(1+ratio) may land an ulp short of the exact bound.
    assert p - o >= ratio * o - 4 * math.ulp(max(p, 1.0))
    assert out.optimistic == est.optimistic


@given(triples(), st.floats(min_value=0, max_value=2))
def test_min_spread_idempotent(est, ratio):
    once = enforce_min_spread(est, ratio)
    assert enforce_min_spread(once, ratio) == once


@given(triples(), st.sampled_from([0, 1, 2]), st.floats(min_value=0, max_value=50))
def test_pert_monotone_in_each_component(est, which, bump):
    o, mp, p = est
    values = [o, mp, p]
    # Raising one component while keeping the order valid.
    values[which] += bump
    if which == 0:
        values[1] = max(values[1], values[0])
        values[2] = max(values[2], values[1])
    elif which == 1:
        values[2] = max(values[2], values[1])
    assert pert_time(EstimateTriple(*values)) >= pert_time(est)


@given(triples())
def test_sigma_reconstruction_consistent(est):
    o, mp, p = est
    _, sigma = variance(est)
    rebuilt = EstimateTriple(o, mp, max(o + 6 * sigma, mp))
    assert pert_time(rebuilt) == pytest.approx(pert_time(est), rel=1e-12, abs=1e-12)
