import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cotsum import constants
from cotsum.coeffs import b_convolution
from cotsum.series import (
    PartialSum,
    SeriesEvaluation,
    ToleranceUnreachable,
    c0_double_series,
    c0_series,
    double_partial_exact,
    exact_series_sum,
    float_series_sum,
    partial_sum,
    sum_enclosure,
    tail_bounds_exact,
    tail_enclosure,
    term,
    theta,
    zeta_integral_rhs,
    zeta_integral_rhs_generic,
)
from cotsum.trigsums import c0_direct

SQRT3 = math.sqrt(3)


def brute_terms(p, k0, k1):
    """Float terms for k0 < k <= k1 from the floor formula, written out independently."""
    k = np.arange(k0 + 1, k1 + 1, dtype=np.float64)
    f = np.floor(k / p)
    b = (k + 1 - 0.5 * p * f) * (f + 1)
    return b / ((k + 1) * (k + p + 1) * (k + 2) * (k + p))


def test_term_examples():
    assert term(0, 3) == Fraction(1, 24)
    assert term(1, 3) == Fraction(2, 2 * 5 * 3 * 4) == Fraction(1, 60)
    assert term(3, 3) == Fraction(1, 168)


def test_term_against_convolution_oracle():
    for p in (2, 3, 8):
        for k in range(60):
            assert term(k, p) == Fraction(b_convolution(k, p), (k + 1) * (k + p + 1) * (k + 2) * (k + p))
            assert term(k, p) > 0


def test_partial_sum_examples():
    s = partial_sum(3, 0, mode="exact")
    assert s.exact == Fraction(1, 4)
    assert s.approx == 0.25
    assert partial_sum(2, 100, mode="exact").exact == 0
    assert partial_sum(2, 100).approx == 0.0


def test_partial_sum_approaches_pi_c0():
    target = math.pi / (3 * SQRT3)
    s = partial_sum(3, 200_000).approx
    assert 0 < target - s < 1e-5


def test_partial_sum_float_vs_exact():
    for p in (3, 5, 11):
        ex = partial_sum(p, 300, mode="exact")
        fl = partial_sum(p, 300)
        assert abs(fl.approx - float(ex.exact)) <= 1e-14 * float(ex.exact)


def test_partial_sum_exact_cap():
    with pytest.raises(ValueError):
        partial_sum(3, 11, mode="exact", exact_cap=10)


def test_partial_sum_record_consistency():
    with pytest.raises(ValueError):
        PartialSum(n=0, approx=0.3, exact=Fraction(1, 4))


def test_float_sums_strictly_increase():
    vals = [float_series_sum(4, n) for n in range(0, 200)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_pairwise_matches_fsum():
    for p in (3, 17):
        a = float_series_sum(p, 2_000_000)
        b = float_series_sum(p, 2_000_000, summation="pairwise")
        assert abs(a - b) <= 1e-14 * a


def test_tail_contains_true_tail_p3():
    true_tail = math.pi / (18 * SQRT3) - float(exact_series_sum(3, 10))
    for method in ("split", "sandwich"):
        enc = tail_enclosure(3, 10, method)
        assert enc.contains(true_tail, 1e-16)


def test_tail_exact_nesting():
    # lo(n) <= sum_{n<k<=m} + hi(m)  and  hi(n) >= sum_{n<k<=m} + lo(m), exactly
    for p in (3, 4, 9):
        for n in (1, 5, 40):
            m = n + 7 * p
            mid = exact_series_sum(p, m) - exact_series_sum(p, n)
            for method in ("split", "sandwich"):
                lo_n, hi_n = tail_bounds_exact(p, n, method)
                lo_m, hi_m = tail_bounds_exact(p, m, method)
                assert lo_n <= mid + lo_m
                assert hi_n >= mid + hi_m


@given(st.integers(3, 20), st.integers(10, 1000))
@settings(max_examples=40, deadline=None)
def test_tail_validity_against_brute_force(p, n):
    big = 10**6
    mid = math.fsum(brute_terms(p, n, big).tolist())
    slack = 1e-14 * mid
    for method in ("split", "sandwich"):
        enc_n = tail_enclosure(p, n, method)
        enc_big = tail_enclosure(p, big, method)
        assert enc_n.lo <= mid + enc_big.hi + slack
        assert enc_n.hi >= mid + enc_big.lo - slack


def test_tail_lower_positive():
    assert tail_enclosure(5, 1).lo > 0


def test_sandwich_tail_width_decays_like_one_over_n():
    ratio = tail_enclosure(3, 10**3, "sandwich").width / tail_enclosure(3, 10**4, "sandwich").width
    assert 9 < ratio < 11


def test_split_tail_width_decays_like_n_cubed():
    ratio = tail_enclosure(3, 10**3).width / tail_enclosure(3, 10**4).width
    assert 900 < ratio < 1100


def test_tail_rejects_small_p():
    with pytest.raises(ValueError):
        tail_enclosure(2, 5)
    with pytest.raises(ValueError):
        tail_enclosure(3, 0)
    with pytest.raises(ValueError):
        tail_enclosure(3, 5, "bogus")


@pytest.mark.parametrize(
    "p, tol, expected",
    [(3, 1e-6, 1 / (3 * SQRT3)), (6, 1e-8, 7 / (3 * SQRT3)), (4, 1e-10, 0.5)],
)
def test_c0_series_examples(p, tol, expected):
    ev = c0_series(p, tol=tol)
    assert ev.value.width <= tol
    assert ev.value.contains(expected)


def test_c0_series_p2_is_exact_zero():
    ev = c0_series(2, tol=1e-3)
    assert ev.value.lo == ev.value.hi == 0.0
    assert ev.partial.exact == 0


def test_c0_series_width_shrinks():
    widths = [c0_series(7, n=n).value.width for n in (10, 100, 1000, 10000)]
    assert all(b < a for a, b in zip(widths, widths[1:]))


def test_c0_series_errors():
    with pytest.raises(ValueError):
        c0_series(3, tol=0)
    with pytest.raises(ValueError):
        c0_series(3, tol=-1e-3)
    with pytest.raises(ValueError):
        c0_series(3)
    with pytest.raises(ToleranceUnreachable) as info:
        c0_series(5, tol=1e-12, n_ceiling=100)
    best = info.value.best
    assert best.status == "tolerance_unreachable"
    assert best.n_terms == 100
    assert best.value.contains(c0_direct(1, 5))


def test_sandwich_tail_needs_many_more_terms():
    fast = c0_series(3, tol=1e-5)
    slow = c0_series(3, tol=1e-5, tail_method="sandwich")
    assert slow.value.contains(c0_direct(1, 3))
    assert slow.n_terms > 100 * fast.n_terms


def test_series_evaluation_round_trip():
    ev = c0_series(5, tol=1e-8)
    back = SeriesEvaluation.from_dict(ev.as_dict())
    assert back == ev


def test_theta_examples():
    assert theta(0, 0, 3) == Fraction(1, 12) == 2 * term(0, 3)
    assert theta(0, 0, 2) == Fraction(1, 6)
    assert theta(1, 0, 3) == Fraction(1, 84) == 2 * term(3, 3)
    with pytest.raises(ValueError):
        theta(0, 3, 3)


def test_theta_is_twice_term():
    for p in (2, 3, 7):
        for i in range(12):
            for r in range(p):
                assert theta(i, r, p) == 2 * term(i * p + r, p)


@pytest.mark.parametrize("p", range(3, 11))
def test_rearrangement_exact(p):
    for n_blocks in (1, 2, 7, 20):
        assert double_partial_exact(p, n_blocks) == exact_series_sum(p, n_blocks * p - 1)


def test_double_series():
    s5 = math.sqrt(5)
    closed5 = ((s5 - 1) * math.sqrt(5 - s5) + 3 * (s5 + 1) * math.sqrt(5 + s5)) / (10 * math.sqrt(10))
    ev = c0_double_series(5, 1000)
    assert ev.value.contains(closed5)
    assert ev.n_terms == 1001 * 5 - 1
    assert c0_double_series(2, 10).value.hi == 0.0
    single = c0_series(5, n=ev.n_terms)
    assert abs(ev.partial.approx - single.partial.approx) <= 1e-15 * single.partial.approx


def test_sum_enclosure_matches_claimed_values():
    ev = c0_series(4, tol=1e-10)
    assert sum_enclosure(ev).contains(math.pi / 48)


def test_zeta_rhs_p2():
    enc = zeta_integral_rhs(2)
    expected = 0.25 * (2 * (constants.LOG_TWO_PI - constants.GAMMA) - math.log(2))
    assert enc.contains(expected)
    assert enc.width < 1e-14


def test_zeta_rhs_routes_agree_only_at_p3():
    a = zeta_integral_rhs(3, tol=1e-8)
    b = zeta_integral_rhs_generic(3)
    assert a.intersects(b)
    assert a.width <= 2e-8
    gap_const = constants.LOG_TWO_PI - constants.GAMMA
    for p in (2, 4, 5, 9):
        a = zeta_integral_rhs(p, tol=1e-8)
        b = zeta_integral_rhs_generic(p)
        assert not a.intersects(b)
        assert abs((a.mid - b.mid) - (p - 3) / (2 * p) * gap_const) < 1e-8


def test_zeta_rhs_generic_closed_p4():
    # c0(1/4) = 1/2, so V(1/4) = -1/2
    L = constants.LOG_TWO_PI - constants.GAMMA
    expected = L / 2 * (1 / 4 + 1) - 3 / 8 * math.log(4) + math.pi / 8 * 0.5
    assert zeta_integral_rhs_generic(4).contains(expected, 1e-15)
