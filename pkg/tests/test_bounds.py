"""Exact rational values and relations between the failure-probability bounds."""

import math
from fractions import Fraction

import pytest

from lrpc_lab.bounds import (
    BoundValue,
    all_bounds,
    asymptotic_bound,
    intersection_bound,
    legacy_bounds,
    lemma_bound,
    product_dim_bound,
    qpow,
    span_bound,
    span_bound_simplified,
    total_bound,
)

# Reference rationals computed independently (direct Fraction arithmetic on
# the defining products and quotients), frozen here.
SPAN_2_12_6_2_2 = Fraction(57079, 262144)
SPAN_NK4_TW2 = Fraction(23, 128)
INTER_2_20_2_2 = Fraction(119, 2097148)
PROD_2_20_2_2 = Fraction(8, 524287)
# (2^5 - (2^1 - 1)(2^2 - 1)) / (2^9 - 2^2) = 29/508
LEMMA_2_8_2_2_1 = Fraction(29, 508)


def test_qpow_signs():
    assert qpow(2, 3) == 8
    assert qpow(2, -3) == Fraction(1, 8)
    assert qpow(3, 0) == 1


def test_span_bound_frozen_values():
    assert span_bound(2, 12, 6, 2, 2).exact == SPAN_2_12_6_2_2
    assert span_bound(2, 6, 2, 2, 1).exact == SPAN_NK4_TW2
    assert float(span_bound(2, 12, 6, 2, 2)) == pytest.approx(0.2177391, abs=1e-6)


def test_span_bound_direct_product():
    # recompute 1 - prod(1 - q^{i-(n-k)}) longhand for a couple of points
    for q, n, k, t, w in [(2, 20, 10, 2, 2), (3, 15, 5, 1, 3)]:
        nk = n - k
        prod = Fraction(1)
        for i in range(t * w):
            prod *= 1 - Fraction(q) ** (i - nk)
        assert span_bound(q, n, k, t, w).exact == 1 - prod


def test_intersection_bound_frozen_value():
    assert intersection_bound(2, 20, 2, 2).exact == INTER_2_20_2_2
    # coincides with the generic vanishing-combination bound at r=2w-1, d=w
    assert intersection_bound(2, 20, 2, 2).exact == lemma_bound(2, 20, 2, 3, 2).exact


def test_product_dim_bound_frozen_value():
    assert product_dim_bound(2, 20, 2, 2).exact == PROD_2_20_2_2
    assert product_dim_bound(2, 20, 2, 2).exact == Fraction(2 ** 4, 2 ** 20 - 2)


def test_lemma_bound_frozen_value():
    assert lemma_bound(2, 8, 2, 2, 1).exact == LEMMA_2_8_2_2_1
    # structure check: numerator and denominator as written
    q, m, t, r, d = 2, 10, 2, 3, 2
    expect = Fraction(q ** (t * r + 1) - (q ** d - 1) * (q ** t - 1), q ** (m + 1) - q ** t)
    assert lemma_bound(q, m, t, r, d).exact == expect


def test_lemma_bound_monotone_in_d():
    # larger excluded subspace only helps
    prev = None
    for d in range(0, 4):
        v = lemma_bound(2, 16, 2, 3, d).exact
        if prev is not None:
            assert v <= prev
        prev = v


def test_total_bound_is_sum_clamped():
    p1, p2, total = total_bound(2, 20, 20, 4, 2, 2)
    assert total.exact == min(Fraction(1), p1.raw + p2.raw)
    s = span_bound(2, 20, 4, 2, 2).raw
    i = intersection_bound(2, 20, 2, 2).raw
    d = product_dim_bound(2, 20, 2, 2).raw
    assert p1.raw == s + i
    assert p2.raw == d
    assert total.raw == s + i + d


def test_simplified_upper_dominates_span():
    # sandwich: 0 <= upper - T <= gap wherever the envelope condition holds
    for q in (2, 3):
        for tw in range(1, 7):
            for nk in range(tw, 25):
                if tw * qpow(q, -nk + tw) > 1:
                    continue
                upper, gap = span_bound_simplified(q, nk + 1, 1, tw, 1)
                t_val = span_bound(q, nk + 1, 1, tw, 1)
                diff = upper.raw - t_val.raw
                assert 0 <= diff <= gap.raw


def test_asymptotic_dominates_total_on_grid():
    for m in (20, 30):
        for nk in (10, 14, 18):
            a = asymptotic_bound(2, m, nk + 4, 4, 2, 2)
            _, _, tot = total_bound(2, m, nk + 4, 4, 2, 2)
            if a.preconditions_met and tot.preconditions_met:
                assert a.raw >= tot.raw


def test_new_bounds_tighter_than_legacy():
    q, m, n, k, t, w = 2, 20, 20, 3, 2, 2
    leg = legacy_bounds(q, m, n, k, t, w)
    assert span_bound(q, n, k, t, w).exact < leg["legacy_span"].exact
    assert intersection_bound(q, m, t, w).exact < leg["legacy_intersection_a"].exact
    assert product_dim_bound(q, m, t, w).exact < leg["legacy_product_dim"].exact


def test_precondition_reporting():
    # tw > n-k: span formula flagged but still evaluated
    v = span_bound(2, 10, 8, 2, 2)
    assert not v.preconditions_met
    assert isinstance(v.exact, Fraction)
    # (2w-1)t >= m flags the intersection bound
    assert not intersection_bound(2, 5, 2, 2).preconditions_met
    assert intersection_bound(2, 20, 2, 2).preconditions_met


def test_clamping():
    v = BoundValue(Fraction(3, 2))
    assert v.exact == 1 and v.clamped
    v = BoundValue(Fraction(-1, 2))
    assert v.exact == 0 and v.clamped
    assert BoundValue(Fraction(1, 2)).clamped is False


def test_log_renderings_match_float():
    v = span_bound(2, 12, 6, 2, 2)
    assert v.log10 == pytest.approx(math.log10(float(v.exact)), abs=1e-9)
    assert v.log2 == pytest.approx(math.log2(float(v.exact)), abs=1e-9)
    assert BoundValue(Fraction(0)).log10 == float("-inf")
    # huge exponents that overflow naive float conversion still render
    v = product_dim_bound(2, 124, 2, 2)
    assert v.log2 == pytest.approx(4 - 124, abs=1e-6)
    assert float(v.exact) == pytest.approx(2.0 ** -120, rel=1e-9)


def test_all_bounds_keys():
    out = all_bounds(2, 20, 20, 3, 2, 2)
    for key in (
        "span", "span_simplified_upper", "span_simplified_gap", "intersection",
        "product_dim", "p_step1", "p_step2", "total", "asymptotic",
        "legacy_span", "legacy_intersection_a", "legacy_intersection_b",
        "legacy_product_dim", "heuristic_combined",
    ):
        assert key in out
    js = out["total"].to_json()
    assert set(js) == {
        "rational", "decimal", "log10", "log2", "clamped",
        "preconditions_met", "violated",
    }
