import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from contactorder.errors import HermitianError
from contactorder.poly import (
    ComplexPolynomial,
    HermitianPolynomial,
    abs2,
    hermitian_check,
    im_part,
    re_part,
    wirtinger_derive,
)
from contactorder.rational import GaussianRational, I, ONE

from conftest import build_reference_surface, gr, random_gaussian


def zvar(n, j):
    return ComplexPolynomial.variable(n, j)


class TestWirtinger:
    def test_monomial_power_rule(self):
        # d/dz2 of z2 conj(z2) = conj(z2)
        p = abs2(zvar(3, 2))
        assert wirtinger_derive(p, 2, False) == zvar(3, 2).conjugate()

    def test_conjugated_direction(self):
        # d/dconj(z3) of (z2^2 conj(z3) + conj(z2)^2 z3)/2 = z2^2/2
        p = re_part(zvar(3, 2) ** 2 * zvar(3, 3).conjugate()) * 2
        q = wirtinger_derive(p * Fraction(1, 2), 3, True)
        assert q == zvar(3, 2) ** 2 * Fraction(1, 2)

    def test_real_part_of_z1(self):
        p = re_part(zvar(2, 1))
        assert wirtinger_derive(p, 1, False) == ComplexPolynomial.constant(
            2, Fraction(1, 2)
        )

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            wirtinger_derive(zvar(2, 1), 3, False)

    def test_result_drops_reality(self):
        p = build_reference_surface()
        d = wirtinger_derive(p, 2, False)
        assert isinstance(d, ComplexPolynomial)
        assert not d.is_hermitian()


class TestHermitianCheck:
    def test_diagonal_real_passes(self):
        p = abs2(zvar(3, 2))
        assert hermitian_check(p.terms)

    def test_imaginary_diagonal_fails(self):
        terms = {(((0, 1, 0), (0, 1, 0))): I}
        assert not hermitian_check(terms)

    def test_reference_surface_is_real(self):
        assert hermitian_check(build_reference_surface().terms)

    def test_missing_mirror_fails(self):
        n = 2
        terms = {((1, 0), (0, 1)): ONE}  # z1 conj(z2) with no pairing term
        assert not hermitian_check(terms)

    def test_constructor_enforces(self):
        with pytest.raises(HermitianError):
            HermitianPolynomial(2, {((1, 0), (0, 0)): ONE})


class TestEvaluation:
    def test_real_valued_at_points(self):
        r = build_reference_surface()
        rng = random.Random(5)
        for _ in range(25):
            w = [random_gaussian(rng) for _ in range(3)]
            v = r.evaluate(w)
            assert v.is_real()

    def test_evaluate_matches_expansion(self):
        # |z2|^2 at z2 = 1+i is 2
        p = abs2(zvar(2, 2))
        assert p.evaluate([gr(0), gr(1, 1)]) == gr(2)

    def test_shift_recenters(self):
        rng = random.Random(9)
        p = build_reference_surface()
        w0 = [random_gaussian(rng, 1) for _ in range(3)]
        shifted = p.shift(w0)
        for _ in range(5):
            u = [random_gaussian(rng, 1) for _ in range(3)]
            assert shifted.evaluate(u) == p.evaluate([a + b for a, b in zip(u, w0)])


class TestCombinators:
    def test_re_im_reassemble(self):
        rng = random.Random(3)
        for _ in range(10):
            n = 2
            p = ComplexPolynomial.zero(n)
            for _ in range(4):
                alpha = tuple(rng.randint(0, 2) for _ in range(n))
                beta = tuple(rng.randint(0, 2) for _ in range(n))
                p = p + ComplexPolynomial.monomial(n, alpha, beta, random_gaussian(rng))
            assert re_part(p) + im_part(p) * I == p

    def test_re_is_hermitian(self):
        p = zvar(2, 1) ** 2 * zvar(2, 2).conjugate()
        assert re_part(p).is_hermitian()
        assert im_part(p).is_hermitian()
        assert abs2(p).is_hermitian()

    def test_abs2_values(self):
        p = zvar(2, 2) + ComplexPolynomial.constant(2, I)
        q = abs2(p)
        assert q.evaluate([gr(0), gr(1)]) == gr(2)  # |1+i|^2


@st.composite
def small_polys(draw, n=2):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        alpha = tuple(draw(st.integers(0, 2)) for _ in range(n))
        beta = tuple(draw(st.integers(0, 2)) for _ in range(n))
        re = draw(st.integers(-3, 3))
        im = draw(st.integers(-3, 3))
        terms[(alpha, beta)] = GaussianRational(re, im)
    return ComplexPolynomial(n, terms)


class TestDerivativeProperties:
    @given(small_polys())
    @settings(max_examples=60)
    def test_mixed_partials_commute(self, p):
        for j, cj in ((1, False), (2, True)):
            for k, ck in ((2, False), (1, True)):
                once = p.wirtinger(j, cj).wirtinger(k, ck)
                other = p.wirtinger(k, ck).wirtinger(j, cj)
                assert once.terms == other.terms

    @given(small_polys(), small_polys())
    @settings(max_examples=40)
    def test_leibniz(self, p, q):
        d = (p * q).wirtinger(1, False)
        assert d == p.wirtinger(1, False) * q + p * q.wirtinger(1, False)


def test_grlex_display_is_sorted():
    p = build_reference_surface()
    degrees = [sum(a) + sum(b) for (a, b), _ in p.sorted_terms()]
    assert degrees == sorted(degrees)


def test_compose_holomorphic_preserves_reality():
    r = build_reference_surface()
    n = 3
    maps = [
        zvar(n, 1) + zvar(n, 2) ** 2,
        zvar(n, 2) * gr(0, 1),
        zvar(n, 3) - zvar(n, 2),
    ]
    out = r.compose_holomorphic(maps)
    assert out.is_hermitian()
