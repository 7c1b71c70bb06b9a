"""Formal expansion of mixed t, conj(t) derivatives of r(gamma(t)).

For a holomorphic curve the parameter derivatives of the pullback split
into contractions of mixed derivative tensors of the ambient function
against derivative vectors of the curve.  A term is recorded by the
multiset of derivative orders sitting in its holomorphic slots, the
multiset in its antiholomorphic slots, and a rational coefficient; terms
whose slot multisets agree are merged (the derivative tensors are
symmetric, so the finer ordered bookkeeping carries no information).

``expand`` derives the coefficients from first principles, by recursive
formal differentiation:

* a t-derivative either hits the ambient function (opening a fresh
  first-order holomorphic slot) or increments one existing holomorphic
  slot;
* a conj(t)-derivative acts symmetrically on the antiholomorphic side,
  and never mixes with the holomorphic slots because the curve is
  holomorphic.

With merged multisets the coefficient of a term equals the number of set
partitions of the ``a`` t-derivatives (resp. ``b`` conj-t-derivatives)
into unordered blocks of the prescribed sizes.  Printed closed-form
constants that sum over *ordered* slot pairs come out as half of these
merged values for distinct-slot shapes; ``constant_comparison`` reports
both numbers and never assumes they agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .curves import CurveJet
from .errors import JetLengthError
from .poly import ComplexPolynomial
from .rational import GaussianRational

SlotKey = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class DerivativeTerm:
    """coefficient * Grad[a,b]r(d^{j_1}g, ..., d^{j_a}g; conj d^{k_1}g, ...)."""

    holomorphic_slots: tuple[int, ...]
    antiholomorphic_slots: tuple[int, ...]
    coefficient: Fraction

    def __post_init__(self):
        if not all(j >= 1 for j in self.holomorphic_slots + self.antiholomorphic_slots):
            raise ValueError("slot orders must be >= 1")
        if len(self.holomorphic_slots) + len(self.antiholomorphic_slots) < 1:
            raise ValueError("a term carries at least one slot")
        # canonical storage: descending order within each side
        object.__setattr__(
            self, "holomorphic_slots", tuple(sorted(self.holomorphic_slots, reverse=True))
        )
        object.__setattr__(
            self,
            "antiholomorphic_slots",
            tuple(sorted(self.antiholomorphic_slots, reverse=True)),
        )

    @property
    def min_slot(self) -> int:
        return min(self.holomorphic_slots + self.antiholomorphic_slots)

    def conjugated(self) -> "DerivativeTerm":
        return DerivativeTerm(
            self.antiholomorphic_slots, self.holomorphic_slots, self.coefficient
        )

    def __str__(self):
        a = len(self.holomorphic_slots)
        b = len(self.antiholomorphic_slots)
        hol = ", ".join(f"∂^{j}γ" for j in self.holomorphic_slots)
        anti = ", ".join(f"∂̄^{k}γ̄" for k in self.antiholomorphic_slots)
        args = "; ".join(s for s in (hol, anti) if s)
        c = "" if self.coefficient == 1 else f"{self.coefficient} · "
        return f"{c}∇^{{{a},{b}}}[r]({args})"


@dataclass(frozen=True)
class FormalExpansion:
    """The full expansion of the (a, b) parameter derivative of a pullback."""

    a: int
    b: int
    terms: tuple[DerivativeTerm, ...]

    def term_map(self) -> dict[SlotKey, Fraction]:
        return {
            (t.holomorphic_slots, t.antiholomorphic_slots): t.coefficient
            for t in self.terms
        }

    def coefficient_of(self, holomorphic_slots, antiholomorphic_slots) -> Fraction:
        key = (
            tuple(sorted(holomorphic_slots, reverse=True)),
            tuple(sorted(antiholomorphic_slots, reverse=True)),
        )
        return self.term_map().get(key, Fraction(0))

    def conjugated(self) -> "FormalExpansion":
        terms = tuple(
            sorted((t.conjugated() for t in self.terms), key=_term_sort_key)
        )
        return FormalExpansion(self.b, self.a, terms)

    def __str__(self):
        if not self.terms:
            return f"D^{{{self.a},{self.b}}}[r∘γ] = 0"
        body = "\n  + ".join(str(t) for t in self.terms)
        return f"D^{{{self.a},{self.b}}}[r∘γ] =\n    {body}"


def _term_sort_key(t: DerivativeTerm):
    return (
        len(t.holomorphic_slots) + len(t.antiholomorphic_slots),
        len(t.holomorphic_slots),
        t.holomorphic_slots,
        t.antiholomorphic_slots,
    )


@lru_cache(maxsize=None)
def _expand_raw(a: int, b: int) -> tuple[tuple[SlotKey, Fraction], ...]:
    # memoized recursion; grows like partition numbers, fine to a+b ~ 12+
    if a == 0 and b == 0:
        return ((((), ()), Fraction(1)),)
    if a > 0:
        prev = _expand_raw(a - 1, b)
        side = 0
    else:
        prev = _expand_raw(a, b - 1)
        side = 1
    out: dict[SlotKey, Fraction] = {}

    def put(key: SlotKey, c: Fraction):
        s = out.get(key, Fraction(0)) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    for (hol, anti), c in prev:
        slots = (hol, anti)[side]
        other = (hol, anti)[1 - side]
        # the derivative hits the ambient function: open a fresh order-1 slot
        grown = tuple(sorted(slots + (1,), reverse=True))
        put((grown, other) if side == 0 else (other, grown), c)
        # or it increments one existing slot; equal orders merge with multiplicity
        seen = set()
        for idx, j in enumerate(slots):
            if j in seen:
                continue
            seen.add(j)
            mult = slots.count(j)
            bumped = list(slots)
            bumped[idx] = j + 1
            bumped = tuple(sorted(bumped, reverse=True))
            put((bumped, other) if side == 0 else (other, bumped), c * mult)
    return tuple(sorted(out.items(), key=lambda kv: kv[0]))


def expand(a: int, b: int) -> FormalExpansion:
    """Complete expansion of the (a, b) derivative of a holomorphic pullback."""
    if a < 0 or b < 0:
        raise ValueError("derivative orders must be non-negative")
    if a + b < 1:
        raise ValueError("need at least one derivative")
    terms = tuple(
        sorted(
            (DerivativeTerm(hol, anti, c) for (hol, anti), c in _expand_raw(a, b)),
            key=_term_sort_key,
        )
    )
    return FormalExpansion(a, b, terms)


def reduce_mod_mv(e: FormalExpansion, multiplicity: int) -> FormalExpansion:
    """Drop terms that vanish identically at t = 0 for curves of this multiplicity.

    A term dies when some slot order is below the multiplicity: that slot
    contracts against a derivative of the curve which is still zero at the
    base point.  Survivors are kept unchanged.
    """
    if multiplicity < 1:
        raise ValueError("multiplicity must be >= 1")
    kept = tuple(t for t in e.terms if t.min_slot >= multiplicity)
    return FormalExpansion(e.a, e.b, kept)


# -- closed-form constants vs first-principles values --------------------------

@dataclass(frozen=True)
class ConstantComparison:
    kind: str
    multiplicity: int
    index: int | None
    holomorphic_slots: tuple[int, ...]
    antiholomorphic_slots: tuple[int, ...]
    paper_value: Fraction
    oracle_value: Fraction

    @property
    def agree(self) -> bool:
        return self.paper_value == self.oracle_value

    @property
    def ratio(self) -> Fraction | None:
        if self.paper_value == 0:
            return None
        return self.oracle_value / self.paper_value


_CONSTANT_KINDS = ("E0", "F0", "F1", "F2", "G")


def constant_comparison(kind: str, multiplicity: int, index: int | None = None) -> ConstantComparison:
    """Printed closed-form value next to the first-principles coefficient.

    The closed forms come from counting ordered derivative distributions
    with a 1/2 symmetry factor; the first-principles value is read off the
    matching merged term of the reduced expansion.  Both are returned and
    equality is *not* assumed: identical-slot shapes agree, distinct-slot
    shapes differ by the symmetrization factor.
    """
    M = multiplicity
    if M < 1:
        raise ValueError("multiplicity must be >= 1")
    if kind not in _CONSTANT_KINDS:
        raise ValueError(f"unknown constant kind {kind!r}; one of {_CONSTANT_KINDS}")
    half = Fraction(1, 2)
    central = Fraction(factorial(2 * M), factorial(M) ** 2)
    if kind == "E0":
        ab = (2, 1)
        slots = ((M, M), (M,))
        paper = half * central
    elif kind == "F0":
        ab = (2, 2)
        slots = ((M, M), (2 * M,))
        paper = half * central
    elif kind == "F1":
        ab = (2, 2)
        slots = ((2 * M,), (M, M))
        paper = half * central
    elif kind == "F2":
        ab = (2, 2)
        slots = ((M, M), (M, M))
        paper = (half * central) ** 2
    else:  # the G family, indexed 0..M
        if index is None or not 0 <= index <= M:
            raise ValueError("G-kind needs an index i with 0 <= i <= M")
        ab = (3, 1)
        if index == M:
            slots = ((M, M, M), (M,))
            paper = Fraction(factorial(3 * M), 6 * factorial(M) ** 3)
        else:
            i = index
            slots = (
                tuple(sorted((M + i, 2 * M - i), reverse=True)),
                (M,),
            )
            paper = half * Fraction(
                factorial(3 * M), factorial(M + i) * factorial(2 * M - i)
            )
    reduced = reduce_mod_mv(expand(ab[0] * M, ab[1] * M), M)
    oracle = reduced.coefficient_of(slots[0], slots[1])
    return ConstantComparison(
        kind=kind,
        multiplicity=M,
        index=index if kind == "G" else None,
        holomorphic_slots=slots[0],
        antiholomorphic_slots=slots[1],
        paper_value=paper,
        oracle_value=oracle,
    )


# -- evaluation at the base point ------------------------------------------------

class ExpansionEvaluator:
    """Contracts terms against one fixed (surface, curve) pair.

    The derivative tensor contraction is done by repeated directional
    Wirtinger derivatives of the surface polynomial, one per slot, then
    reading the constant term (= evaluation at the origin).  Intermediate
    polynomials are cached by the multiset of slots already applied, so
    evaluating a whole expansion shares work across terms.
    """

    def __init__(self, r: ComplexPolynomial, gamma: CurveJet):
        if r.n != gamma.n:
            raise ValueError("surface and curve dimensions differ")
        self.r = r
        self.gamma = gamma
        self._vectors: dict[int, tuple[GaussianRational, ...]] = {}
        self._cache: dict[SlotKey, ComplexPolynomial] = {((), ()): r}

    def _vector(self, order: int) -> tuple[GaussianRational, ...]:
        v = self._vectors.get(order)
        if v is None:
            v = self.gamma.derivative_at_zero(order)
            self._vectors[order] = v
        return v

    def _derived(self, hol: tuple[int, ...], anti: tuple[int, ...]) -> ComplexPolynomial:
        key = (hol, anti)
        got = self._cache.get(key)
        if got is not None:
            return got
        if anti:
            parent = self._derived(hol, anti[:-1])
            vec = tuple(c.conjugate() for c in self._vector(anti[-1]))
            out = parent.directional_wirtinger(vec, conjugated=True)
        else:
            parent = self._derived(hol[:-1], ())
            out = parent.directional_wirtinger(self._vector(hol[-1]), conjugated=False)
        self._cache[key] = out
        return out

    def term_value(self, term: DerivativeTerm) -> GaussianRational:
        slots = term.holomorphic_slots + term.antiholomorphic_slots
        if slots and max(slots) > self.gamma.max_trusted_degree():
            raise JetLengthError(
                f"slot order {max(slots)} exceeds trusted degree "
                f"{self.gamma.max_trusted_degree()}"
            )
        p = self._derived(term.holomorphic_slots, term.antiholomorphic_slots)
        return p.constant_term() * term.coefficient

    def expansion_value(self, e: FormalExpansion) -> GaussianRational:
        total = GaussianRational.of(0)
        for t in e.terms:
            total = total + self.term_value(t)
        return total


def evaluate_term(term: DerivativeTerm, r: ComplexPolynomial, gamma: CurveJet) -> GaussianRational:
    """Contract one term against the curve's derivative vectors at 0."""
    return ExpansionEvaluator(r, gamma).term_value(term)


def evaluate_expansion(e: FormalExpansion, r: ComplexPolynomial, gamma: CurveJet) -> GaussianRational:
    """Sum of all term contractions: the (a, b) derivative of the pullback at 0."""
    return ExpansionEvaluator(r, gamma).expansion_value(e)
