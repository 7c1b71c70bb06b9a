"""Truncated bivariate series in t and conj(t), plus vanishing orders.

A :class:`TraceSeries` stores the coefficients of ``f(t, conj t)`` for all
total degrees up to its truncation ``N``.  Coefficients beyond ``N`` are
*undefined*, never assumed zero; asking for one raises.  Vanishing orders
are therefore reported as an :class:`OrderBound`: either an exact value or
an ``at_least`` statement when the whole window is zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import TruncationError
from .rational import GaussianRational, ZERO


@dataclass(frozen=True)
class OrderBound:
    """A vanishing order (or contact order): exact, or a lower bound."""

    value: Fraction
    exact: bool

    @staticmethod
    def exactly(v) -> "OrderBound":
        return OrderBound(Fraction(v), True)

    @staticmethod
    def at_least(v) -> "OrderBound":
        return OrderBound(Fraction(v), False)

    def __str__(self):
        v = self.value
        s = str(v.numerator) if v.denominator == 1 else str(v)
        return s if self.exact else f"at_least {s}"

    def scaled(self, factor) -> "OrderBound":
        return OrderBound(self.value * Fraction(factor), self.exact)

    def divided(self, divisor) -> "OrderBound":
        return OrderBound(self.value / Fraction(divisor), self.exact)

    def known_greater_than(self, threshold) -> bool:
        """True iff the order is certainly > threshold (bounds count)."""
        return self.value > Fraction(threshold)

    def known_at_most(self, threshold) -> bool:
        """True iff the order is certainly <= threshold; needs exactness."""
        return self.exact and self.value <= Fraction(threshold)

    def rank_key(self):
        # for "best witness" selection: same value -> open bound ranks higher
        return (self.value, 0 if self.exact else 1)

    def to_json(self):
        v = self.value
        s = str(v.numerator) if v.denominator == 1 else str(v)
        return {"kind": "exact" if self.exact else "at_least", "value": s}


class TraceSeries:
    """Coefficients a[p,q] of t^p conj(t)^q for p+q <= N."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Mapping[tuple[int, int], GaussianRational] | None = None):
        if N < 1:
            raise ValueError("truncation must be a positive integer")
        clean: dict[tuple[int, int], GaussianRational] = {}
        if coeffs:
            for (p, q), c in coeffs.items():
                if p < 0 or q < 0:
                    raise ValueError("negative exponent in trace series")
                if p + q > N:
                    raise ValueError(f"term ({p},{q}) beyond truncation {N}")
                c = GaussianRational.of(c)
                if not c.is_zero():
                    clean[(p, q)] = c
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TraceSeries is immutable")

    # -- access -------------------------------------------------------------

    def coefficient(self, p: int, q: int) -> GaussianRational:
        if p + q > self.N:
            raise TruncationError(
                f"coefficient ({p},{q}) beyond truncation {self.N} is undefined"
            )
        return self.coeffs.get((p, q), ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_order(self) -> OrderBound:
        """min{p+q : a[p,q] != 0}, or at_least N+1 for a zero window."""
        if not self.coeffs:
            return OrderBound.at_least(self.N + 1)
        return OrderBound.exactly(min(p + q for (p, q) in self.coeffs))

    def lowest_terms(self) -> dict[tuple[int, int], GaussianRational]:
        """The nonzero coefficients of minimal total degree."""
        if not self.coeffs:
            return {}
        k = min(p + q for (p, q) in self.coeffs)
        return {pq: c for pq, c in self.coeffs.items() if pq[0] + pq[1] == k}

    def is_hermitian_symmetric(self) -> bool:
        """a[q,p] == conj(a[p,q]) -- holds whenever the source is real-valued."""
        for (p, q), c in self.coeffs.items():
            mirror = self.coeffs.get((q, p), ZERO)
            if mirror != c.conjugate():
                return False
        return True

    # -- arithmetic (mixed truncations use the minimum N) ---------------------

    def __add__(self, other):
        if not isinstance(other, TraceSeries):
            return NotImplemented
        N = min(self.N, other.N)
        out: dict[tuple[int, int], GaussianRational] = {}
        for src in (self.coeffs, other.coeffs):
            for (p, q), c in src.items():
                if p + q > N:
                    continue
                s = out.get((p, q))
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop((p, q), None)
                else:
                    out[(p, q)] = s
        return TraceSeries(N, out)

    def __neg__(self):
        return TraceSeries(self.N, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.of(other)
            if c.is_zero():
                return TraceSeries(self.N, {})
            return TraceSeries(self.N, {k: v * c for k, v in self.coeffs.items()})
        if not isinstance(other, TraceSeries):
            return NotImplemented
        N = min(self.N, other.N)
        out: dict[tuple[int, int], GaussianRational] = {}
        for (p1, q1), c1 in self.coeffs.items():
            for (p2, q2), c2 in other.coeffs.items():
                p, q = p1 + p2, q1 + q2
                if p + q > N:
                    continue
                c = c1 * c2
                s = out.get((p, q))
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop((p, q), None)
                else:
                    out[(p, q)] = s
        return TraceSeries(N, out)

    __rmul__ = __mul__

    # -- container protocol ---------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TraceSeries):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"<TraceSeries N={self.N} {self}>"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (p, q) in sorted(self.coeffs, key=lambda pq: (pq[0] + pq[1], pq)):
            c = self.coeffs[(p, q)]
            mono = []
            if p == 1:
                mono.append("t")
            elif p > 1:
                mono.append(f"t^{p}")
            if q == 1:
                mono.append("tb")
            elif q > 1:
                mono.append(f"tb^{q}")
            cs = str(c)
            if ("+" in cs[1:]) or ("-" in cs[1:]):
                cs = f"({cs})"
            parts.append("*".join([cs] + mono) if mono else cs)
        return " + ".join(parts)


def series_min_order(s: TraceSeries) -> OrderBound:
    """Vanishing order of a truncated series; never reported as infinite."""
    return s.min_order()
