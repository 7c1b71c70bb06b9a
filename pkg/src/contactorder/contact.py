"""Composition of a surface with a curve, vanishing orders, order of contact.

The central computation is ``compose``: exact coefficients of
``r(gamma(t), conj gamma(t))`` up to a declared total degree ``N``.  Since
the curve is holomorphic, every monomial of ``r`` splits into a product of
a polynomial in ``t`` (from ``z^alpha``) and one in ``conj t`` (from
``conj(z)^beta``), so the trace coefficients come from two univariate
truncated products per monomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .curves import CurveJet, UPoly, u_mul
from .errors import JetLengthError, NotBasedAtZeroError
from .poly import HermitianPolynomial
from .rational import GaussianRational, ZERO
from .series import OrderBound, TraceSeries


def compose(r: HermitianPolynomial, gamma: CurveJet, N: int) -> TraceSeries:
    """Exact trace series of r along gamma through total degree N.

    The jet must cover degree N: an unknown coefficient past the jet length
    could contaminate a coefficient of total degree M + L + 1, so we require
    M + L >= N.  Curves built from exact polynomials can always be
    zero-extended first.
    """
    if r.n != gamma.n:
        raise ValueError("surface and curve dimensions differ")
    if N < 1:
        raise ValueError("truncation must be positive")
    if not r.constant_term().is_zero():
        raise NotBasedAtZeroError("defining function has a nonzero constant term")
    if gamma.max_trusted_degree() < N:
        raise JetLengthError(
            f"jet covers degree {gamma.max_trusted_degree()} but N={N} was "
            f"requested; extend the jet if the curve is an exact polynomial"
        )
    comps = gamma.component_polys()
    one: UPoly = {0: GaussianRational.of(1)}
    pow_cache: dict[tuple[int, int], UPoly] = {}

    def comp_power(q: int, e: int) -> UPoly:
        got = pow_cache.get((q, e))
        if got is None:
            if e == 0:
                got = one
            else:
                got = u_mul(comp_power(q, e - 1), comps[q], trunc=N)
            pow_cache[(q, e)] = got
        return got

    acc: dict[tuple[int, int], GaussianRational] = {}
    for (alpha, beta), c in r.terms.items():
        hol = one
        for q, e in enumerate(alpha):
            if e:
                hol = u_mul(hol, comp_power(q, e), trunc=N)
                if not hol:
                    break
        if not hol:
            continue
        anti = one
        for q, e in enumerate(beta):
            if e:
                anti = u_mul(anti, comp_power(q, e), trunc=N)
                if not anti:
                    break
        if not anti:
            continue
        # conj(z)^beta along the curve is the conjugate series in conj(t)
        for p, ch in hol.items():
            if p > N:
                continue
            for qd, cg in anti.items():
                if p + qd > N:
                    continue
                add = c * ch * cg.conjugate()
                key = (p, qd)
                s = acc.get(key)
                s = add if s is None else s + add
                if s.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = s
    series = TraceSeries(N, acc)
    assert series.is_hermitian_symmetric(), "real surface must give a symmetric trace"
    return series


def mixed_derivative(r: HermitianPolynomial, gamma: CurveJet, a: int, b: int) -> GaussianRational:
    """The (a, b) mixed parameter derivative of the pullback at t = 0."""
    if a < 0 or b < 0:
        raise ValueError("derivative orders must be non-negative")
    if a + b < 1:
        raise ValueError("need at least one derivative")
    series = compose(r, gamma, a + b)
    return series.coefficient(a, b) * (factorial(a) * factorial(b))


@dataclass(frozen=True)
class ContactReport:
    """Vanishing data of one curve against one surface."""

    nu_curve: int
    nu_trace: OrderBound
    contact: OrderBound
    first_nonzero: tuple[int, int] | None
    truncation: int

    def to_json(self):
        return {
            "nu_curve": self.nu_curve,
            "nu_trace": self.nu_trace.to_json(),
            "contact": self.contact.to_json(),
            "first_nonzero": list(self.first_nonzero) if self.first_nonzero else None,
            "truncation": self.truncation,
        }


def contact_report(r: HermitianPolynomial, gamma: CurveJet, N: int) -> ContactReport:
    """Assemble multiplicity, trace order and their ratio for one curve.

    ``first_nonzero`` is the nonzero lowest-degree coefficient pair with the
    largest holomorphic order, a deterministic choice among the admissible
    witnesses.
    """
    series = compose(r, gamma, N)
    nu = series.min_order()
    first = None
    if nu.exact:
        lowest = series.lowest_terms()
        first = max(lowest, key=lambda pq: pq[0])
    return ContactReport(
        nu_curve=gamma.multiplicity,
        nu_trace=nu,
        contact=nu.divided(gamma.multiplicity),
        first_nonzero=first,
        truncation=N,
    )


@dataclass(frozen=True)
class TangencyTestResult:
    """Outcome of the tangency test for pseudoconvexity.

    For a curve whose pullback has no pure-parameter derivatives up to its
    vanishing order T > 1, pseudoconvexity forces T = 2K even with a
    positive |t|^{2K} coefficient.  An applicable test with an odd order or
    a non-positive diagonal coefficient certifies a violation near 0.
    """

    applicable: bool
    order: OrderBound
    even: bool | None
    leading_diag: GaussianRational | None
    verdict: str  # "pass" | "violation"

    def to_json(self):
        return {
            "applicable": self.applicable,
            "order": self.order.to_json(),
            "even": self.even,
            "leading_diag": None
            if self.leading_diag is None
            else {"re": str(self.leading_diag.re), "im": str(self.leading_diag.im)},
            "verdict": self.verdict,
        }


def pseudoconvex_tangency_test(
    r: HermitianPolynomial, gamma: CurveJet, N: int
) -> TangencyTestResult:
    series = compose(r, gamma, N)
    order = series.min_order()
    if not order.exact:
        # zero window: pure derivatives vacuously vanish, nothing to violate
        return TangencyTestResult(True, order, None, None, "pass")
    T = int(order.value)
    # below T everything vanishes by minimality, so only the order-T pure
    # coefficient needs a check
    pure_ok = series.coefficient(T, 0).is_zero()
    applicable = pure_ok and T > 1
    if not applicable:
        return TangencyTestResult(False, order, None, None, "pass")
    if T % 2 == 1:
        return TangencyTestResult(True, order, False, None, "violation")
    K = T // 2
    diag = series.coefficient(K, K)
    assert diag.is_real(), "diagonal trace coefficient must be real"
    verdict = "pass" if diag.re > 0 else "violation"
    return TangencyTestResult(True, order, True, diag, verdict)
