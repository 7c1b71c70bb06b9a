"""Regular curves built from the jets of a singular one, and the obstruction.

A singular curve of multiplicity M with high contact order nearly forces a
regular curve with high contact: the leading jet vectors c_0, c_M, c_{2M}
define candidate regular curves (three truncation levels), and the mixed
parameter derivatives of the two pullbacks match up to explicit factorial
factors.  The single exception is the (3M, M) derivative, where a block
built from the intermediate jet coefficients c_i, 0 < i < M, survives; that
block is the lifting obstruction computed here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .contact import compose, mixed_derivative
from .curves import CurveJet
from .errors import JetLengthError, PreconditionError
from .expansion import ExpansionEvaluator, expand, reduce_mod_mv
from .poly import HermitianPolynomial
from .rational import GaussianRational, ZERO


class LiftKind(enum.Enum):
    """How much of the jet the lifted regular curve keeps."""

    HAT = "hat"      # c_0 t
    TILDE = "tilde"  # c_0 t + c_M t^2
    ZETA = "zeta"    # c_0 t + c_M t^2 + c_{2M} t^3

    def required_jet_length(self, multiplicity: int) -> int:
        return {LiftKind.HAT: 0, LiftKind.TILDE: multiplicity, LiftKind.ZETA: 2 * multiplicity}[self]


def lift_curve(gamma: CurveJet, kind: LiftKind) -> CurveJet:
    """The regular curve with coefficients read off the jet of ``gamma``.

    The result has multiplicity 1 because the leading vector c_0 is nonzero.
    Insufficient jet length is an error: the missing coefficients are not
    zero-filled.
    """
    M = gamma.multiplicity
    need = {LiftKind.HAT: 0, LiftKind.TILDE: M, LiftKind.ZETA: 2 * M}[kind]
    if gamma.jet_length < need:
        raise JetLengthError(
            f"{kind.value} lift needs jet length >= {need}, have {gamma.jet_length}"
        )
    rows = []
    for q in range(1, gamma.n + 1):
        row = [gamma.coefficient(q, 0)]
        if kind in (LiftKind.TILDE, LiftKind.ZETA):
            row.append(gamma.coefficient(q, M))
        if kind is LiftKind.ZETA:
            row.append(gamma.coefficient(q, 2 * M))
        rows.append(row)
    return CurveJet(gamma.n, 1, rows)


@dataclass(frozen=True)
class ObstructionValue:
    """The lifting obstruction in both constant conventions.

    ``paper_convention`` uses the printed closed-form constant (ordered slot
    sum with a 1/2 factor); ``oracle_convention`` sums the first-principles
    contractions of the surviving intermediate-slot terms.  The two agree --
    the ordered double counting and the 1/2 cancel -- but both are computed
    and reported rather than assumed equal.
    """

    paper_convention: GaussianRational
    oracle_convention: GaussianRational
    trivial: bool  # multiplicity 1: the sum is empty

    def is_zero(self) -> bool:
        return self.oracle_convention.is_zero()

    def to_json(self):
        return {
            "paper_convention": {
                "re": str(self.paper_convention.re),
                "im": str(self.paper_convention.im),
            },
            "oracle_convention": {
                "re": str(self.oracle_convention.re),
                "im": str(self.oracle_convention.im),
            },
            "trivial": self.trivial,
        }


def lifting_obstruction(r: HermitianPolynomial, gamma: CurveJet) -> ObstructionValue:
    """The block of the (3M, M) derivative built from c_i, 0 < i < M.

    Closed form: (1/2) (3M)! M! sum_{j,k,l} r_{z_j z_l zbar_k}(0) conj(c_0^k)
    sum_{i=1}^{M-1} c_i^j c_{M-i}^l.  First-principles: the contractions of
    the reduced-expansion terms whose two holomorphic slots lie strictly
    between M and 2M.
    """
    if r.n != gamma.n:
        raise ValueError("surface and curve dimensions differ")
    if not r.constant_term().is_zero():
        raise PreconditionError("defining function must be based at 0")
    M = gamma.multiplicity
    if M == 1:
        return ObstructionValue(ZERO, ZERO, trivial=True)
    if gamma.jet_length < M - 1:
        raise JetLengthError(f"need jet length >= {M - 1}, have {gamma.jet_length}")

    # closed form, straight from the printed constant
    n = gamma.n
    c0bar = [gamma.coefficient(q, 0).conjugate() for q in range(1, n + 1)]
    inner = [
        [
            sum(
                (
                    gamma.coefficient(j, i) * gamma.coefficient(l, M - i)
                    for i in range(1, M)
                ),
                start=ZERO,
            )
            for l in range(1, n + 1)
        ]
        for j in range(1, n + 1)
    ]
    paper = ZERO
    for (alpha, beta), c in r.terms.items():
        if sum(alpha) != 2 or sum(beta) != 1:
            continue
        # third derivative at 0 of this monomial: alpha! beta! c
        fac = 1
        for e in alpha:
            fac *= factorial(e)
        deriv = c * fac
        js = [q for q, e in enumerate(alpha) for _ in range(e)]  # two entries
        k = beta.index(1)
        j, l = js[0], js[1]
        # the double sum runs over ordered (j, l); the tensor is symmetric
        pairsum = inner[j][l] + inner[l][j] if j != l else inner[j][j]
        paper = paper + deriv * c0bar[k] * pairsum
    paper = paper * Fraction(factorial(3 * M) * factorial(M), 2)

    # first principles: surviving intermediate-slot terms, contracted
    reduced = reduce_mod_mv(expand(3 * M, M), M)
    ev = ExpansionEvaluator(r, gamma)
    oracle = ZERO
    for term in reduced.terms:
        hol = term.holomorphic_slots
        if len(hol) == 2 and min(hol) > M:
            oracle = oracle + ev.term_value(term)
    return ObstructionValue(paper, oracle, trivial=False)


_ALLOWED_PAIRS = {(1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (2, 2), (3, 1)}


def _has_pure_terms(r: HermitianPolynomial, through_degree: int) -> bool:
    zeros = (0,) * r.n
    for (alpha, beta), _ in r.terms.items():
        if beta == zeros and 2 <= sum(alpha) <= through_degree:
            return True
        if alpha == zeros and 2 <= sum(beta) <= through_degree:
            return True
    return False


def lift_identity_residual(
    r: HermitianPolynomial, gamma: CurveJet, a: int, b: int
) -> GaussianRational:
    """Left minus right of the derivative-matching identity; contract: 0.

    With zeta the three-term lift, the identity reads

        (aM)! (bM)! / (a! b!) * D^{a,b}[r o zeta](0) = D^{aM,bM}[r o gamma](0)

    for (a, b) in {(1,0),(2,0),(3,0),(1,1),(2,1),(2,2)} and conjugates, and
    for (3, 1) the right-hand side carries the obstruction correction
    ``- B`` (first-principles convention).  Pure cases additionally need the
    surface free of pure terms through degree 4M.
    """
    if (a, b) not in _ALLOWED_PAIRS and (b, a) not in _ALLOWED_PAIRS:
        raise PreconditionError(f"identity not available for ({a},{b})")
    M = gamma.multiplicity
    if (b == 0 or a == 0) and _has_pure_terms(r, 4 * M):
        raise PreconditionError(
            "pure-derivative identities need a surface with no pure terms "
            f"of degree 2..{4 * M}"
        )
    zeta = lift_curve(gamma, LiftKind.ZETA)
    # the lift is an exact polynomial curve, so zero-extension is sound
    zeta = zeta.extended(max(zeta.jet_length, a + b - 1))
    scale = Fraction(
        factorial(a * M) * factorial(b * M), factorial(a) * factorial(b)
    )
    lhs = mixed_derivative(r, zeta, a, b) * scale
    rhs = mixed_derivative(r, gamma, a * M, b * M)
    if (a, b) == (3, 1):
        rhs = rhs - lifting_obstruction(r, gamma).oracle_convention
    elif (a, b) == (1, 3):
        rhs = rhs - lifting_obstruction(r, gamma).oracle_convention.conjugate()
    return lhs - rhs


@dataclass(frozen=True)
class WitnessResult:
    """Outcome of a lift attempt, with the reason when nothing is returned."""

    witness: CurveJet | None
    reason: str
    detail: dict

    @property
    def ok(self) -> bool:
        return self.witness is not None


_TARGET_KINDS = {2: LiftKind.HAT, 3: LiftKind.TILDE, 4: LiftKind.ZETA}


def construct_regular_witness(
    r: HermitianPolynomial, gamma: CurveJet, target_order: int
) -> WitnessResult:
    """Try to lift a high-contact singular curve to a regular witness.

    Requires the pullback along ``gamma`` to vanish past target_order * M;
    for target 4 the obstruction must vanish, otherwise the diagnostic cites
    it.  The candidate is always re-verified by direct composition rather
    than by trusting the identity algebra -- a verification failure is
    reported with the failing derivative pair.
    """
    if target_order not in _TARGET_KINDS:
        raise PreconditionError("target order must be one of 2, 3, 4")
    M = gamma.multiplicity
    need = target_order * M
    trace = compose(r, gamma, need)
    order = trace.min_order()
    if not order.known_greater_than(need):
        return WitnessResult(
            None,
            "hypothesis_not_met",
            {"nu_trace": order, "required": f"> {need}"},
        )
    if target_order == 4:
        obstruction = lifting_obstruction(r, gamma)
        if not obstruction.is_zero():
            return WitnessResult(
                None,
                "nonzero_obstruction",
                {"obstruction": obstruction},
            )
    lift = lift_curve(gamma, _TARGET_KINDS[target_order])
    # exact polynomial by construction, safe to extend for the composition
    check = compose(r, lift.extended(max(lift.jet_length, target_order - 1)), target_order)
    lift_order = check.min_order()
    if lift_order.known_greater_than(target_order):
        return WitnessResult(lift, "verified", {"nu_trace": lift_order})
    lowest = check.lowest_terms()
    failing = max(lowest, key=lambda pq: pq[0])
    return WitnessResult(
        None,
        "verification_failed",
        {
            "nu_trace": lift_order,
            "failing_pair": failing,
            "value": lowest[failing],
        },
    )
