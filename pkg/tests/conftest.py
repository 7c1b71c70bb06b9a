"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths:

* ``sympy_trace`` composes a surface with a curve through sympy's symbolic
  engine and extracts exact coefficients;
* ``partition_coefficient`` counts set partitions for the expansion
  coefficients with a closed formula;
* the inertia cross-check in the normal-form tests uses numpy's Hermitian
  eigensolver on the floating image of the quadratic block.
"""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from contactorder.curves import CurveJet
from contactorder.poly import ComplexPolynomial, HermitianPolynomial, abs2, re_part
from contactorder.rational import GaussianRational

REFERENCE_SURFACE_TEXT = (
    "Re(z1) + abs2(z2)*Re(z2^2 - z3^3) + abs2(z3)*Re(z3^2) - Re(z2^2*conj(z3))"
)


def gr(re=0, im=0) -> GaussianRational:
    return GaussianRational(Fraction(re), Fraction(im))


def build_reference_surface() -> HermitianPolynomial:
    """The counterexample surface, assembled from combinators (not the parser)."""
    n = 3
    z = lambda j: ComplexPolynomial.variable(n, j)
    return (
        re_part(z(1))
        + abs2(z(2)) * re_part(z(2) ** 2 - z(3) ** 3)
        + abs2(z(3)) * re_part(z(3) ** 2)
        - re_part(z(2) ** 2 * z(3).conjugate())
    ).as_hermitian()


@pytest.fixture(scope="session")
def reference_surface() -> HermitianPolynomial:
    return build_reference_surface()


def jet(components, jet_length=None) -> CurveJet:
    """Curve jet from {exponent: value} dicts with int/Fraction/GR values."""
    comps = [{e: GaussianRational.of(c) for e, c in comp.items()} for comp in components]
    return CurveJet.from_components(comps, jet_length)


# -- sympy bridge -------------------------------------------------------------------

def _gr_to_sympy(c: GaussianRational):
    return sympy.Rational(c.re) + sympy.I * sympy.Rational(c.im)


def sympy_trace(r: ComplexPolynomial, components, N: int):
    """Exact coefficients of r(gamma(t), conj gamma(t)) through degree N.

    ``components`` are sparse {exponent: GaussianRational} polynomials.
    Returns {(p, q): GaussianRational}; independent of the library compose.
    """
    t, tb = sympy.symbols("t tb")
    gam = []
    gam_bar = []
    for comp in components:
        expr = sympy.Integer(0)
        expr_bar = sympy.Integer(0)
        for e, c in comp.items():
            cs = _gr_to_sympy(GaussianRational.of(c))
            expr += cs * t**e
            expr_bar += sympy.conjugate(cs) * tb**e
        gam.append(expr)
        gam_bar.append(expr_bar)
    total = sympy.Integer(0)
    for (alpha, beta), c in r.terms.items():
        piece = _gr_to_sympy(c)
        for j, e in enumerate(alpha):
            if e:
                piece *= gam[j] ** e
        for j, e in enumerate(beta):
            if e:
                piece *= gam_bar[j] ** e
        total += piece
    total = sympy.expand(total)
    poly = sympy.Poly(total, t, tb) if total != 0 else None
    out = {}
    if poly is None:
        return out
    for (p, q), coeff in poly.terms():
        if p + q > N:
            continue
        coeff = sympy.expand(coeff)
        re_im = coeff.as_real_imag()
        val = GaussianRational(
            Fraction(str(sympy.nsimplify(re_im[0]))),
            Fraction(str(sympy.nsimplify(re_im[1]))),
        )
        if not val.is_zero():
            out[(p, q)] = val
    return out


# -- combinatorial oracle for expansion coefficients ----------------------------------

def partition_coefficient(total: int, blocks: tuple[int, ...]) -> Fraction:
    """Number of set partitions of {1..total} into unordered blocks of the
    given sizes (zero when the sizes do not sum to total)."""
    from math import factorial

    if sum(blocks) != total:
        return Fraction(0)
    out = Fraction(factorial(total))
    for b in blocks:
        out /= factorial(b)
    mults: dict[int, int] = {}
    for b in blocks:
        mults[b] = mults.get(b, 0) + 1
    for m in mults.values():
        out /= factorial(m)
    return out


# -- random instances ---------------------------------------------------------------

def random_gaussian(rng: random.Random, lim: int = 2) -> GaussianRational:
    return GaussianRational(
        Fraction(rng.randint(-lim, lim)), Fraction(rng.randint(-lim, lim))
    )


def random_hermitian_surface(
    rng: random.Random, n: int = 3, max_degree: int = 4, tries: int = 8,
    pure_free: bool = False, with_linear: bool = True,
) -> HermitianPolynomial:
    z1 = ComplexPolynomial.variable(n, 1)
    p = (z1 + z1.conjugate()) if with_linear else ComplexPolynomial.zero(n)
    for _ in range(tries):
        alpha = tuple(rng.randint(0, 2) for _ in range(n))
        beta = tuple(rng.randint(0, 2) for _ in range(n))
        d = sum(alpha) + sum(beta)
        if d == 0 or d > max_degree:
            continue
        if pure_free and (sum(alpha) == 0 or sum(beta) == 0):
            continue
        c = random_gaussian(rng)
        if c.is_zero():
            continue
        mono = ComplexPolynomial.monomial(n, alpha, beta, c)
        p = p + mono + mono.conjugate()
    return p.as_hermitian()


def random_jet(rng: random.Random, n: int, M: int, L: int, lim: int = 1) -> CurveJet:
    while True:
        rows = [[random_gaussian(rng, lim) for _ in range(L + 1)] for _ in range(n)]
        if any(not rows[q][0].is_zero() for q in range(n)):
            return CurveJet(n, M, rows)
