import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import zeta as hurwitz

from minbucket.bounds import (
    BoundReport,
    bound_report,
    limit_constant,
    minbucket_bound,
    power_law_predictions,
    power_law_report,
    trivial_bound,
)
from minbucket.degrees import DegreeSequence, DivergenceError, ReferenceDistribution

from conftest import holder_holds


def brute_constant(pmf: dict) -> float:
    """Direct triple sum over t1, t2 >= t1, t3 >= t1."""
    ts = sorted(pmf)
    ed = sum(t * pmf[t] for t in ts)
    total = 0.0
    for t1, t2, t3 in itertools.product(ts, repeat=3):
        if t2 >= t1 and t3 >= t1:
            total += t1 * (t1 - 1) * t2 * t3 * pmf[t1] * pmf[t2] * pmf[t3]
    return total / (2 * ed * ed)


class TestTrivialBound:
    @pytest.mark.parametrize("d,expect", [((2, 2, 2), 12), ((3, 1, 1, 1), 12), ((1,) * 10, 10)])
    def test_examples(self, d, expect):
        assert trivial_bound(DegreeSequence.from_degrees(d)) == expect

    def test_exact_at_scale(self):
        # n = 10^8 vertices of degree 10^4 would overflow int64 sums of squares
        vals = np.full(10, 10**4)
        assert trivial_bound(vals) == 10 * 10**8
        assert isinstance(trivial_bound(vals), int)


class TestMinBucketBound:
    def test_222(self):
        # m = 3, (3 * 2^(4/3))^3 / 9 = 27 * 16 / 9 = 48
        assert minbucket_bound(DegreeSequence.from_degrees([2, 2, 2])) == pytest.approx(51, rel=1e-12)

    @pytest.mark.parametrize("n", [2, 10, 1000])
    def test_all_ones(self, n):
        assert minbucket_bound(DegreeSequence.from_degrees([1] * n)) == pytest.approx(5 * n, rel=1e-12)

    @given(st.lists(st.integers(1, 300), min_size=1, max_size=200))
    @settings(max_examples=200)
    def test_holder(self, d):
        seq = DegreeSequence.from_degrees(d)
        assert holder_holds(seq.degrees)
        assert minbucket_bound(seq) <= (seq.n + 4 * trivial_bound(seq)) * (1 + 1e-12)

    def test_report_text(self):
        rep = bound_report(DegreeSequence.from_degrees([2, 2, 2]))
        text = rep.as_text()
        assert "trivial_bound=12\n" in text
        assert text.startswith("label=bound expression, constants suppressed\n")


class TestPredictions:
    def test_boundary_linear(self):
        p = power_law_predictions(Fraction(7, 3), 10**6, 1000)
        assert p.minbucket_linear and p.minbucket_exponent == pytest.approx(0, abs=1e-15)
        assert power_law_predictions(7 / 3, 10**6, 1000).minbucket_linear

    def test_trivial_linear_at_three(self):
        p = power_law_predictions(3.0, 10**6, 1000)
        assert p.trivial_linear and p.trivial_exponent == 0

    def test_growth_factor_at_2_3(self):
        n = 10**6
        p = power_law_predictions(2.3, n, math.sqrt(n))
        assert p.minbucket_exponent == pytest.approx(0.1, abs=1e-12)
        assert not p.minbucket_linear
        assert p.minbucket / n - 1 == pytest.approx(n ** 0.05, rel=1e-9)

    @given(st.floats(1.01, 3.99))
    def test_classification_stable(self, alpha):
        for thr, attr in ((7 / 3, "minbucket_linear"), (3.0, "trivial_linear")):
            if abs(alpha - thr) <= 2e-12:
                continue
            a = getattr(power_law_predictions(alpha, 100, 10), attr)
            b = getattr(power_law_predictions(alpha + 1e-12, 100, 10), attr)
            c = getattr(power_law_predictions(alpha - 1e-12, 100, 10), attr)
            assert a == b == c

    def test_range(self):
        with pytest.raises(ValueError):
            power_law_predictions(4.0, 10, 3)


class TestLimitConstant:
    def test_point_mass_one(self):
        assert limit_constant(ReferenceDistribution.point_mass(1)).value == 0

    def test_point_mass_two(self):
        assert limit_constant(ReferenceDistribution.point_mass(2)).value == pytest.approx(1, rel=1e-15)

    @given(st.dictionaries(st.integers(1, 12), st.floats(0.01, 1.0), min_size=1, max_size=8))
    @settings(max_examples=80)
    def test_finite_support_matches_triple_sum(self, table):
        z = sum(table.values())
        pmf = {k: v / z for k, v in table.items()}
        got = limit_constant(ReferenceDistribution.from_table(table))
        assert got.value == pytest.approx(brute_constant(pmf), rel=1e-12, abs=1e-15)

    def test_power_law_capped_at_50000(self):
        c = limit_constant(ReferenceDistribution.power_law(2.4, cap=50_000))
        assert abs(c.value - 0.687935) <= 1e-4

    def test_untruncated_against_independent_sum(self):
        # scipy's Hurwitz zeta for the suffix sums up to T, plus a crude integral
        # bracket of the remaining terms
        a, T = 2.4, 200_000
        t = np.arange(1, T + 1, dtype=float)
        Z = float(hurwitz(a, 1))
        ed = float(hurwitz(a - 1, 1)) / Z
        S = hurwitz(a - 1, t) / Z
        head = math.fsum((t * (t - 1) * t ** -a / Z * S * S).tolist())
        A = 1 / (a - 2)
        e = 6 - 3 * a  # term ~ k t^e for large t
        lo_k = A * A / Z ** 3 * (1 - 1 / (T + 1))
        hi_k = (A + 1 / (T + 1)) ** 2 / Z ** 3
        tail_lo = lo_k * (T + 1) ** (e + 1) / -(e + 1)
        tail_hi = hi_k * T ** (e + 1) / -(e + 1)
        lo = (head + tail_lo) / (2 * ed * ed)
        hi = (head + tail_hi) / (2 * ed * ed)
        c = limit_constant(ReferenceDistribution.power_law(a), tol=1e-9)
        assert lo * (1 - 1e-9) <= c.value <= hi * (1 + 1e-9)
        assert (c.hi - c.lo) <= 1e-9 * c.value

    def test_truncation_refinement_stays_in_bracket(self):
        dist = ReferenceDistribution.power_law(2.4)
        prev = limit_constant(dist, truncation=64)
        for N in (256, 1024, 4096, 16384, 65536):
            cur = limit_constant(dist, truncation=N)
            assert prev.lo <= cur.value <= prev.hi
            prev = cur
        assert prev.hi - prev.lo <= 1e-12 * prev.value

    @pytest.mark.parametrize("alpha", [1.5, 2.0, 2.3, 7 / 3])
    def test_divergent(self, alpha):
        with pytest.raises(DivergenceError):
            limit_constant(ReferenceDistribution.power_law(alpha))

    @given(st.floats(2.35, 4.0))
    @settings(max_examples=20, deadline=None)
    def test_positive_finite(self, alpha):
        c = limit_constant(ReferenceDistribution.power_law(alpha), tol=1e-6)
        assert 0 < c.lo <= c.value <= c.hi < math.inf


def test_power_law_report():
    rep = power_law_report(2.4, cap=50_000)
    assert rep.power_law_exponents == pytest.approx((0.6, -0.2))
    assert abs(rep.limit_constant.value - 0.687935) <= 1e-4
    assert power_law_report(2.3).limit_constant is None
    assert isinstance(rep, BoundReport)
