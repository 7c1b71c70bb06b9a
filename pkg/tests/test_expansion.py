import itertools
import random
from fractions import Fraction
from math import factorial

import pytest

from contactorder.contact import compose
from contactorder.curves import CurveJet
from contactorder.errors import JetLengthError
from contactorder.expansion import (
    DerivativeTerm,
    ExpansionEvaluator,
    constant_comparison,
    evaluate_expansion,
    evaluate_term,
    expand,
    reduce_mod_mv,
)
from contactorder.poly import ComplexPolynomial, abs2, re_part
from contactorder.rational import GaussianRational

from conftest import (
    build_reference_surface,
    gr,
    jet,
    partition_coefficient,
    random_gaussian,
    random_hermitian_surface,
    random_jet,
)


class TestExpandShapes:
    def test_first_mixed_derivative(self):
        e = expand(1, 1)
        assert e.term_map() == {((1,), (1,)): Fraction(1)}

    def test_two_two(self):
        e = expand(2, 2)
        one = Fraction(1)
        assert e.term_map() == {
            ((2,), (2,)): one,
            ((2,), (1, 1)): one,
            ((1, 1), (2,)): one,
            ((1, 1), (1, 1)): one,
        }

    def test_three_one_distinct_slot_coefficient(self):
        e = expand(3, 1)
        tm = e.term_map()
        assert set(tm) == {((3,), (1,)), ((2, 1), (1,)), ((1, 1, 1), (1,))}
        # first-principles merged value; the printed closed form halves it
        assert tm[((2, 1), (1,))] == 3
        assert constant_comparison("G", 1, 0).paper_value == Fraction(3, 2)

    def test_coefficients_are_partition_counts(self):
        for a in range(0, 7):
            for b in range(0, 7 - a):
                if a + b < 1:
                    continue
                tm = expand(a, b).term_map()
                # every composition of (a, b) into blocks appears exactly once
                for (hol, anti), coeff in tm.items():
                    want = partition_coefficient(a, hol) * partition_coefficient(b, anti)
                    assert coeff == want

    def test_conjugation_symmetry(self):
        for a, b in ((2, 1), (3, 1), (3, 2), (4, 2)):
            assert expand(b, a) == expand(a, b).conjugated()

    def test_invalid_orders(self):
        with pytest.raises(ValueError):
            expand(0, 0)


class TestReduction:
    def test_two_one_dies_at_multiplicity_two(self):
        assert reduce_mod_mv(expand(2, 1), 2).terms == ()

    def test_four_two_survivors(self):
        got = reduce_mod_mv(expand(4, 2), 2).term_map()
        assert got == {((4,), (2,)): Fraction(1), ((2, 2), (2,)): Fraction(3)}

    def test_multiplicity_one_keeps_everything(self):
        e = expand(2, 2)
        assert reduce_mod_mv(e, 1) == e

    def test_survivors_have_high_slots(self):
        for M in (2, 3):
            for t in reduce_mod_mv(expand(3 * M, M), M).terms:
                assert t.min_slot >= M


class TestConstants:
    def test_central_value_at_two(self):
        c = constant_comparison("E0", 2)
        assert c.paper_value == 3 and c.oracle_value == 3

    def test_triple_slot_value_at_one(self):
        c = constant_comparison("G", 1, 1)
        assert c.paper_value == 1 and c.oracle_value == 1

    def test_distinct_slot_ratio_logged(self):
        c = constant_comparison("G", 1, 0)
        assert c.paper_value == Fraction(3, 2)
        assert c.oracle_value == 3
        assert c.ratio == 2

    def test_identical_slot_kinds_agree(self):
        for M in (1, 2, 3, 4):
            for kind in ("E0", "F0", "F1", "F2"):
                assert constant_comparison(kind, M).agree
            assert constant_comparison("G", M, M).agree
            if M % 2 == 0:
                assert constant_comparison("G", M, M // 2).agree

    def test_distinct_slot_merge_is_pair_sum(self):
        for M in (2, 3, 4):
            for i in range(0, M):
                if 2 * i == M:
                    continue
                c = constant_comparison("G", M, i)
                assert c.oracle_value == 2 * c.paper_value

    def test_family_shapes_match_reduced_expansion(self):
        for M in (2, 3):
            tm = reduce_mod_mv(expand(3 * M, M), M).term_map()
            keys = set(tm)
            expected = {((3 * M,), (M,)), ((2 * M, M), (M,)), ((M,) * 3, (M,))}
            for i in range(1, M):
                expected.add((tuple(sorted((M + i, 2 * M - i), reverse=True)), (M,)))
            assert keys == expected

    def test_bad_kind_rejected(self):
        with pytest.raises(ValueError):
            constant_comparison("H", 2)
        with pytest.raises(ValueError):
            constant_comparison("G", 2)  # missing index


class TestEvaluateTerm:
    def test_levi_style_contraction(self):
        n = 3
        z = lambda j: ComplexPolynomial.variable(n, j)
        r = (re_part(z(1)) + abs2(z(2))).as_hermitian()
        g = jet([{}, {1: 1}, {}])
        t = DerivativeTerm((1,), (1,), Fraction(1))
        assert evaluate_term(t, r, g) == gr(1)

    def test_vanishes_below_multiplicity(self):
        r = build_reference_surface()
        g = jet([{}, {3: 1}, {2: 1}])
        t = DerivativeTerm((1,), (1,), Fraction(1))
        assert evaluate_term(t, r, g).is_zero()

    def test_full_three_one_matches_trace(self, reference_surface):
        g = jet([{}, {1: 1}, {}], jet_length=3)
        val = evaluate_expansion(expand(3, 1), reference_surface, g)
        assert val == gr(3)
        trace = compose(reference_surface, g.extended(3), 4)
        assert val == trace.coefficient(3, 1) * (factorial(3) * factorial(1))

    def test_slot_beyond_jet_errors(self):
        r = build_reference_surface()
        g = jet([{}, {1: 1}, {}])  # trusted degree 1
        t = DerivativeTerm((2,), (1,), Fraction(1))
        with pytest.raises(JetLengthError):
            evaluate_term(t, r, g)


class TestSoundnessOracle:
    """The defining property: summed contractions equal scaled trace
    coefficients, both at the base point and at generic shifted points."""

    def test_against_composition_at_zero(self):
        rng = random.Random(101)
        for _ in range(12):
            r = random_hermitian_surface(rng, n=3, max_degree=4)
            M = rng.choice([1, 1, 2])
            g = random_jet(rng, 3, M, 6)
            trace = compose(r, g, 6)
            ev = ExpansionEvaluator(r, g)
            for a in range(0, 7):
                for b in range(0, 7 - a):
                    if a + b < 1:
                        continue
                    lhs = ev.expansion_value(expand(a, b))
                    rhs = trace.coefficient(a, b) * (factorial(a) * factorial(b))
                    assert lhs == rhs

    def test_functional_identity_at_shifted_points(self):
        # recentering surface and curve at gamma(t0) turns the identity at a
        # generic parameter value into the identity at zero
        from contactorder.curves import u_shift, u_eval

        rng = random.Random(202)
        for _ in range(6):
            r = random_hermitian_surface(rng, n=2, max_degree=3, tries=5)
            g = random_jet(rng, 2, rng.choice([1, 2]), 3)
            t0 = Fraction(rng.randint(1, 2), 3)
            comps = g.component_polys()
            value_at_t0 = [u_eval(c, t0) for c in comps]
            shifted_comps = []
            for c, v in zip(comps, value_at_t0):
                s = u_shift(c, t0)
                s.pop(0, None)  # recenter: drop the constant term
                shifted_comps.append(s)
            if all(not c for c in shifted_comps):
                continue
            recentered = r.shift(value_at_t0)
            # drop the constant r(gamma(t0)); it touches no derivative of order >= 1
            r_shift = (recentered - recentered.constant_term()).as_hermitian()
            g_shift = CurveJet.from_components(shifted_comps).extended(7)
            trace = compose(r_shift, g_shift, 6)
            ev = ExpansionEvaluator(r_shift, g_shift)
            for a in range(0, 5):
                for b in range(0, 5 - a):
                    if a + b < 1:
                        continue
                    lhs = ev.expansion_value(expand(a, b))
                    rhs = trace.coefficient(a, b) * (factorial(a) * factorial(b))
                    assert lhs == rhs

    def test_reduced_terms_vanish_at_zero(self):
        # dropped terms are exactly those that die on every curve of the
        # given multiplicity
        rng = random.Random(303)
        for M in (2, 3):
            g = random_jet(rng, 3, M, 3 * M)
            r = random_hermitian_surface(rng, n=3, max_degree=4)
            full = expand(2 * M, M)
            kept = set(reduce_mod_mv(full, M).terms)
            ev = ExpansionEvaluator(r, g)
            for t in full.terms:
                if t not in kept:
                    assert ev.term_value(t).is_zero()


def test_memoization_is_pure():
    a = expand(3, 2)
    b = expand(3, 2)
    assert a == b and a.terms == b.terms
