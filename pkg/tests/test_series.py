import itertools
import random
from fractions import Fraction

import pytest

from contactorder.errors import TruncationError
from contactorder.series import OrderBound, TraceSeries

from conftest import gr, random_gaussian


class TestMinOrder:
    def test_zero_series_reports_lower_bound(self):
        s = TraceSeries(40, {})
        assert str(s.min_order()) == "at_least 41"
        assert not s.min_order().exact

    def test_reference_trace_order_four(self):
        s = TraceSeries(8, {(3, 1): gr(Fraction(1, 2)), (1, 3): gr(Fraction(1, 2))})
        assert s.min_order() == OrderBound.exactly(4)

    def test_plain_diagonal(self):
        s = TraceSeries(4, {(1, 1): gr(1)})
        assert s.min_order() == OrderBound.exactly(2)


class TestTruncationContract:
    def test_beyond_window_is_undefined(self):
        s = TraceSeries(4, {(1, 1): gr(1)})
        with pytest.raises(TruncationError):
            s.coefficient(3, 2)

    def test_within_window_defaults_to_zero(self):
        s = TraceSeries(4, {(1, 1): gr(1)})
        assert s.coefficient(2, 2).is_zero()

    def test_construction_rejects_overflow(self):
        with pytest.raises(ValueError):
            TraceSeries(3, {(2, 2): gr(1)})

    def test_mixed_truncations_use_minimum(self):
        a = TraceSeries(6, {(3, 3): gr(1)})
        b = TraceSeries(4, {(1, 1): gr(1)})
        assert (a + b).N == 4
        assert (a * b).N == 4


def dense_mul(a: dict, b: dict) -> dict:
    out = {}
    for (p1, q1), c1 in a.items():
        for (p2, q2), c2 in b.items():
            key = (p1 + p2, q1 + q2)
            out[key] = out.get(key, gr(0)) + c1 * c2
    return {k: v for k, v in out.items() if not v.is_zero()}


class TestArithmeticAgainstDenseOracle:
    def test_truncated_product_matches_untruncated_low_terms(self):
        rng = random.Random(17)
        for _ in range(40):
            N = 6
            a = {}
            b = {}
            for _ in range(rng.randint(0, 6)):
                p, q = rng.randint(0, 3), rng.randint(0, 3)
                a[(p, q)] = random_gaussian(rng)
            for _ in range(rng.randint(0, 6)):
                p, q = rng.randint(0, 3), rng.randint(0, 3)
                b[(p, q)] = random_gaussian(rng)
            a = {k: v for k, v in a.items() if sum(k) <= N and not v.is_zero()}
            b = {k: v for k, v in b.items() if sum(k) <= N and not v.is_zero()}
            sa, sb = TraceSeries(N, a), TraceSeries(N, b)
            product = sa * sb
            full = dense_mul(a, b)
            for p, q in itertools.product(range(N + 1), repeat=2):
                if p + q <= N:
                    assert product.coefficient(p, q) == full.get((p, q), gr(0))

    def test_addition_matches(self):
        rng = random.Random(23)
        for _ in range(20):
            N = 5
            a = {(rng.randint(0, 2), rng.randint(0, 2)): random_gaussian(rng)}
            b = {(rng.randint(0, 2), rng.randint(0, 2)): random_gaussian(rng)}
            sa, sb = TraceSeries(N, a), TraceSeries(N, b)
            s = sa + sb
            for key in set(a) | set(b):
                want = a.get(key, gr(0)) + b.get(key, gr(0))
                assert s.coefficient(*key) == want


def test_hermitian_symmetry_detection():
    ok = TraceSeries(4, {(2, 1): gr(1, 1), (1, 2): gr(1, -1)})
    assert ok.is_hermitian_symmetric()
    bad = TraceSeries(4, {(2, 1): gr(1, 1), (1, 2): gr(1, 1)})
    assert not bad.is_hermitian_symmetric()


class TestOrderBound:
    def test_display(self):
        assert str(OrderBound.exactly(4)) == "4"
        assert str(OrderBound.at_least(Fraction(41, 2))) == "at_least 41/2"

    def test_division(self):
        assert OrderBound.at_least(41).divided(2).value == Fraction(41, 2)

    def test_threshold_logic(self):
        assert OrderBound.at_least(9).known_greater_than(8)
        assert not OrderBound.at_least(8).known_greater_than(8)
        assert OrderBound.exactly(6).known_at_most(6)
        assert not OrderBound.at_least(6).known_at_most(6)

    def test_rank_prefers_open_bound_at_equal_value(self):
        assert OrderBound.at_least(4).rank_key() > OrderBound.exactly(4).rank_key()
