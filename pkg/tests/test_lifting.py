import random
from fractions import Fraction
from math import factorial

import pytest

from contactorder.contact import compose, mixed_derivative
from contactorder.curves import CurveJet
from contactorder.errors import JetLengthError, PreconditionError
from contactorder.lifting import (
    LiftKind,
    construct_regular_witness,
    lift_curve,
    lift_identity_residual,
    lifting_obstruction,
)
from contactorder.poly import ComplexPolynomial, abs2, re_part
from contactorder.rational import GaussianRational

from conftest import gr, jet, random_hermitian_surface, random_jet


def surface3(expr_builder):
    n = 3
    z = lambda j: ComplexPolynomial.variable(n, j)
    return expr_builder(z).as_hermitian()


class TestLiftCurve:
    def test_leading_lift_of_contained_curve(self):
        g = jet([{}, {3: 1}, {2: 1}])
        assert str(lift_curve(g, LiftKind.HAT)) == "0; 0; t"

    def test_full_lift_with_zero_tail(self):
        g = jet([{}, {3: 1}, {2: 1}], jet_length=4)
        assert str(lift_curve(g, LiftKind.ZETA)) == "0; 0; t"

    def test_full_lift_reads_three_vectors(self):
        g = jet([{}, {2: 1, 3: 1}, {4: 1}], jet_length=4)
        assert str(lift_curve(g, LiftKind.ZETA)) == "0; t; t^2"

    def test_truncation_consistency(self):
        rng = random.Random(71)
        for _ in range(10):
            g = random_jet(rng, 3, 2, 4)
            zeta = lift_curve(g, LiftKind.ZETA)
            assert lift_curve(g, LiftKind.TILDE) == zeta.truncated(1)
            assert lift_curve(g, LiftKind.HAT) == zeta.truncated(0)

    def test_result_is_regular(self):
        rng = random.Random(73)
        for _ in range(10):
            g = random_jet(rng, 3, rng.randint(2, 3), 6)
            assert lift_curve(g, LiftKind.HAT).multiplicity == 1

    def test_insufficient_jet(self):
        g = jet([{}, {3: 1}, {2: 1}])  # jet length 1, need 2M = 4 for zeta
        with pytest.raises(JetLengthError):
            lift_curve(g, LiftKind.ZETA)


class TestObstruction:
    def test_reference_value(self, reference_surface):
        g = jet([{}, {3: 1}, {2: 1}])
        ob = lifting_obstruction(reference_surface, g)
        assert ob.paper_convention == gr(-720)
        assert ob.oracle_convention == gr(-720)
        assert not ob.trivial

    def test_no_intermediate_jets_gives_zero(self, reference_surface):
        # all c_i = 0 for 0 < i < M: the inner sums are empty
        g = jet([{}, {3: 1}, {6: 1}])  # M = 3, c_1 = c_2 = 0
        ob = lifting_obstruction(reference_surface, g)
        assert ob.paper_convention.is_zero() and ob.oracle_convention.is_zero()

    def test_multiplicity_one_is_trivial(self, reference_surface):
        g = jet([{}, {1: 1}, {}])
        ob = lifting_obstruction(reference_surface, g)
        assert ob.trivial and ob.oracle_convention.is_zero()

    def test_conventions_agree_on_random_instances(self):
        rng = random.Random(79)
        for _ in range(10):
            r = random_hermitian_surface(rng, n=3, max_degree=4)
            g = random_jet(rng, 3, rng.choice([2, 3]), 6)
            ob = lifting_obstruction(r, g)
            assert ob.paper_convention == ob.oracle_convention

    def test_vanishes_under_forced_component_vanishing(self):
        # positive quadratic weight on z2, cubic terms all touching z2, and a
        # curve whose z2 component vanishes to high order: every obstruction
        # summand carries a zeroed coefficient
        r = surface3(
            lambda z: 2 * re_part(z(1))
            + abs2(z(2))
            + re_part(z(2) ** 2 * z(3).conjugate())
            + re_part(z(2) * z(3) * z(2).conjugate())
        )
        g = CurveJet.from_components(
            [{}, {6: gr(1)}, {2: gr(1), 3: gr(2)}], jet_length=6
        )
        assert g.multiplicity == 2
        ob = lifting_obstruction(r, g)
        assert ob.oracle_convention.is_zero()
        assert ob.paper_convention.is_zero()


class TestIdentities:
    def test_mixed_residuals_vanish(self):
        rng = random.Random(83)
        for trial in range(10):
            M = 2 if trial % 2 == 0 else 3
            r = random_hermitian_surface(rng, n=3, max_degree=4, pure_free=True)
            g = random_jet(rng, 3, M, 3 * M)
            for (a, b) in ((1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (1, 3)):
                assert lift_identity_residual(r, g, a, b).is_zero()

    def test_pure_residuals_need_normalized_surface(self):
        rng = random.Random(89)
        r = random_hermitian_surface(rng, n=3, max_degree=4, pure_free=True)
        g = random_jet(rng, 3, 2, 6)
        for a in (1, 2, 3):
            assert lift_identity_residual(r, g, a, 0).is_zero()
            assert lift_identity_residual(r, g, 0, a).is_zero()

    def test_pure_precondition_enforced(self):
        r = surface3(lambda z: re_part(z(1)) + re_part(z(2) ** 2) + abs2(z(2)))
        g = jet([{}, {2: 1}, {}], jet_length=6)
        with pytest.raises(PreconditionError):
            lift_identity_residual(r, g, 2, 0)

    def test_unknown_pair_rejected(self, reference_surface):
        g = jet([{}, {2: 1}, {}], jet_length=6)
        with pytest.raises(PreconditionError):
            lift_identity_residual(reference_surface, g, 4, 1)

    def test_uncorrected_mismatch_equals_obstruction(self):
        rng = random.Random(97)
        for trial in range(8):
            M = 2 if trial % 2 == 0 else 3
            r = random_hermitian_surface(rng, n=3, max_degree=4)
            g = random_jet(rng, 3, M, 3 * M)
            zeta = lift_curve(g, LiftKind.ZETA).extended(3)
            lhs = mixed_derivative(r, zeta, 3, 1) * Fraction(
                factorial(3 * M) * factorial(M), 6
            )
            rhs = mixed_derivative(r, g, 3 * M, M)
            assert rhs - lhs == lifting_obstruction(r, g).oracle_convention


class TestWitnessConstruction:
    def test_blocked_by_obstruction(self, reference_surface):
        g = jet([{}, {3: 1}, {2: 1}], jet_length=38)
        res = construct_regular_witness(reference_surface, g, 4)
        assert not res.ok
        assert res.reason == "nonzero_obstruction"
        assert not res.detail["obstruction"].is_zero()

    def test_boundary_order_is_rejected(self):
        # trace order exactly 4M: the strict hypothesis fails, nothing returned
        r = surface3(lambda z: re_part(z(1)) + abs2(z(2)) ** 2)
        g = jet([{}, {2: 1}, {}], jet_length=10)
        res = construct_regular_witness(r, g, 4)
        assert not res.ok
        assert res.reason == "hypothesis_not_met"

    def test_successful_lift(self):
        r = surface3(lambda z: re_part(z(1)) + abs2(z(2)) ** 3)
        g = jet([{}, {2: 1}, {}], jet_length=10)
        res = construct_regular_witness(r, g, 4)
        assert res.ok
        assert str(res.witness) == "0; t; 0"
        trace = compose(r, res.witness.extended(6), 6)
        assert trace.min_order().value == 6

    def test_order_two_lift(self):
        r = surface3(lambda z: 2 * re_part(z(1)) + abs2(z(2)) ** 2)
        g = jet([{}, {2: 1}, {}], jet_length=6)
        res = construct_regular_witness(r, g, 2)
        assert res.ok and res.witness.multiplicity == 1

    def test_order_three_lift_constructive(self):
        # a singular curve with vanishing past 3M lifts to a regular curve
        # with vanishing past 3 via the two-vector lift
        r = surface3(lambda z: 2 * re_part(z(1)) + abs2(z(2)) ** 2)
        g = jet([{}, {2: 1}, {}], jet_length=8)
        assert compose(r, g, 6).min_order().known_greater_than(6)
        res = construct_regular_witness(r, g, 3)
        assert res.ok

    def test_bad_target_rejected(self, reference_surface):
        g = jet([{}, {3: 1}, {2: 1}], jet_length=12)
        with pytest.raises(PreconditionError):
            construct_regular_witness(reference_surface, g, 5)


class TestConstructedPseudoconvexModels:
    """Models shaped like a pseudoconvex normal form with the forced
    component vanishing: the obstruction is exactly zero on all of them."""

    def _models(self):
        rng = random.Random(111)
        n = 3
        z = lambda j: ComplexPolynomial.variable(n, j)
        for trial in range(12):
            M = 2 if trial % 2 == 0 else 3
            kappa2 = rng.randint(1, 3)
            lam_terms = re_part(z(2) ** 2 * z(3).conjugate()) * rng.randint(-2, 2)
            lam_terms = lam_terms + re_part(z(2) * z(3) * z(2).conjugate()) * rng.randint(-2, 2)
            # higher-order block also supported on the vanishing component
            quart = abs2(z(2)) ** 2 * rng.randint(0, 1)
            r = (2 * re_part(z(1)) + kappa2 * abs2(z(2)) + lam_terms + quart).as_hermitian()
            # curve: z2 vanishes to order >= 2M (forced), z3 free with
            # nonzero intermediate jets so the obstruction sum is not empty
            comp3 = {M: gr(rng.randint(1, 2))}
            for i in range(1, M):
                comp3[M + i] = gr(rng.randint(-2, 2), rng.randint(-2, 2))
            g = CurveJet.from_components(
                [{}, {3 * M + 1: gr(1)}, comp3], jet_length=3 * M
            )
            yield r, g, M

    def test_high_contact_forces_zero_obstruction(self):
        count = 0
        for r, g, M in self._models():
            trace = compose(r, g, 4 * M)
            if not trace.min_order().known_greater_than(4 * M):
                continue
            ob = lifting_obstruction(r, g)
            assert ob.oracle_convention.is_zero()
            assert ob.paper_convention.is_zero()
            count += 1
        assert count >= 10
