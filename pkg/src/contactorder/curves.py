"""Parameterized holomorphic curve jets through the origin.

A curve component is a univariate polynomial in the parameter ``t``,
represented sparsely as ``{exponent: coefficient}``.  A :class:`CurveJet`
stores the curve in the normalized shape

    gamma^q(t) = t^M * sum_{i=0..L} c[q][i] t^i ,

where ``M`` is the multiplicity (the common vanishing order of the
components) and ``L`` the jet length.  Coefficients beyond ``L`` are not
known; consumers that need them must say so, and extending a jet with
zeros is an explicit caller-side assertion that the curve really is the
stored polynomial.
"""
from __future__ import annotations

from math import factorial
from typing import Iterable, Sequence

from .errors import JetLengthError
from .rational import GaussianRational, ZERO

UPoly = dict[int, GaussianRational]


# -- sparse univariate helpers ------------------------------------------------

def u_clean(p: UPoly) -> UPoly:
    return {e: GaussianRational.of(c) for e, c in p.items() if not GaussianRational.of(c).is_zero()}


def u_add(p: UPoly, q: UPoly) -> UPoly:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, ZERO) + c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def u_scale(p: UPoly, c) -> UPoly:
    c = GaussianRational.of(c)
    if c.is_zero():
        return {}
    return {e: v * c for e, v in p.items()}


def u_mul(p: UPoly, q: UPoly, trunc: int | None = None) -> UPoly:
    out: UPoly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            if trunc is not None and e > trunc:
                continue
            s = out.get(e, ZERO) + c1 * c2
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
    return out


def u_pow(p: UPoly, k: int, trunc: int | None = None) -> UPoly:
    out: UPoly = {0: GaussianRational.of(1)}
    for _ in range(k):
        out = u_mul(out, p, trunc)
    return out


def u_shift(p: UPoly, t0) -> UPoly:
    """Compose with t -> t0 + t (binomial expansion)."""
    t0 = GaussianRational.of(t0)
    base: UPoly = {0: t0, 1: GaussianRational.of(1)}
    out: UPoly = {}
    for e, c in p.items():
        out = u_add(out, u_scale(u_pow(base, e), c))
    return out


def u_eval(p: UPoly, t0) -> GaussianRational:
    t0 = GaussianRational.of(t0)
    total = ZERO
    for e, c in p.items():
        total = total + c * (t0**e)
    return total


def u_degree(p: UPoly) -> int:
    return max(p) if p else -1


class CurveJet:
    """Truncated jet of a holomorphic curve with gamma(0) = 0."""

    __slots__ = ("n", "multiplicity", "jet_length", "coeffs")

    def __init__(self, n: int, multiplicity: int, coeffs: Sequence[Sequence]):
        if n < 1:
            raise ValueError("dimension must be positive")
        if multiplicity < 1:
            raise ValueError("multiplicity must be a positive integer")
        rows = tuple(
            tuple(GaussianRational.of(c) for c in component) for component in coeffs
        )
        if len(rows) != n:
            raise ValueError(f"need {n} component rows")
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("component rows must share one length")
        if len(rows[0]) < 1:
            raise ValueError("jet must contain at least the leading coefficients")
        if all(r[0].is_zero() for r in rows):
            raise ValueError(
                "leading coefficient vector is zero; the stated multiplicity "
                "would not be the true one"
            )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "multiplicity", multiplicity)
        object.__setattr__(self, "jet_length", len(rows[0]) - 1)
        object.__setattr__(self, "coeffs", rows)

    def __setattr__(self, name, value):
        raise AttributeError("CurveJet is immutable")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_components(
        cls, components: Iterable[UPoly], jet_length: int | None = None
    ) -> "CurveJet":
        """Build the canonical jet from raw component polynomials in t.

        The multiplicity is the least t-exponent appearing in any component.
        ``jet_length`` may extend past the polynomial degrees; the extra
        coefficients are zero because a polynomial determines all of them.
        Errors: all components zero, or some component nonzero at t = 0.
        """
        comps = [u_clean(dict(c)) for c in components]
        if not comps:
            raise ValueError("curve needs at least one component")
        if all(not c for c in comps):
            raise ValueError("all components are zero; multiplicity undefined")
        for c in comps:
            if 0 in c:
                raise ValueError("component does not vanish at t = 0")
        n = len(comps)
        mult = min(min(c) for c in comps if c)
        natural = max(u_degree(c) for c in comps) - mult
        if jet_length is None:
            jet_length = natural
        elif jet_length < natural:
            raise ValueError(
                f"jet_length {jet_length} drops known coefficients "
                f"(natural length {natural}); truncate explicitly instead"
            )
        rows = []
        for c in comps:
            rows.append([c.get(mult + i, ZERO) for i in range(jet_length + 1)])
        return cls(n, mult, rows)

    # -- queries ----------------------------------------------------------------

    def coefficient(self, component: int, i: int) -> GaussianRational:
        """c_i^q with component q in 1..n and 0 <= i <= jet_length."""
        if not 1 <= component <= self.n:
            raise IndexError("component out of range")
        if not 0 <= i <= self.jet_length:
            raise JetLengthError(f"coefficient index {i} beyond jet length {self.jet_length}")
        return self.coeffs[component - 1][i]

    def coefficient_vector(self, i: int) -> tuple[GaussianRational, ...]:
        """The vector (c_i^1, ..., c_i^n)."""
        if not 0 <= i <= self.jet_length:
            raise JetLengthError(f"coefficient index {i} beyond jet length {self.jet_length}")
        return tuple(r[i] for r in self.coeffs)

    def is_regular(self) -> bool:
        return self.multiplicity == 1

    def component_poly(self, component: int) -> UPoly:
        """Component q as a sparse polynomial {exponent: coefficient}."""
        if not 1 <= component <= self.n:
            raise IndexError("component out of range")
        M = self.multiplicity
        return {
            M + i: c
            for i, c in enumerate(self.coeffs[component - 1])
            if not c.is_zero()
        }

    def component_polys(self) -> list[UPoly]:
        return [self.component_poly(q) for q in range(1, self.n + 1)]

    def max_trusted_degree(self) -> int:
        return self.multiplicity + self.jet_length

    # -- operations ---------------------------------------------------------------

    def derivative_at_zero(self, k: int) -> tuple[GaussianRational, ...]:
        """(d^k gamma)(0): k! times the t^k coefficient vector.

        Zero for k below the multiplicity; an error past the trusted degree,
        where the coefficients are simply unknown.
        """
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        M = self.multiplicity
        if k > M + self.jet_length:
            raise JetLengthError(
                f"derivative order {k} needs jet coefficients beyond length "
                f"{self.jet_length} (multiplicity {M})"
            )
        if k < M:
            return (ZERO,) * self.n
        f = factorial(k)
        return tuple(r[k - M] * f for r in self.coeffs)

    def reparametrized(self, k: int) -> "CurveJet":
        """The curve gamma(t^k); multiplicity scales to k*M."""
        if k < 1:
            raise ValueError("reparameterization exponent must be >= 1")
        if k == 1:
            return self
        L = self.jet_length
        rows = []
        for r in self.coeffs:
            row = [ZERO] * (k * L + 1)
            for i, c in enumerate(r):
                row[k * i] = c
            rows.append(row)
        return CurveJet(self.n, k * self.multiplicity, rows)

    def extended(self, jet_length: int) -> "CurveJet":
        """Zero-pad up to ``jet_length``.

        Only valid when the jet is an exact polynomial curve: padding asserts
        the missing coefficients really are zero.
        """
        if jet_length < self.jet_length:
            raise ValueError("extended() cannot shorten; use truncated()")
        if jet_length == self.jet_length:
            return self
        pad = jet_length - self.jet_length
        rows = [list(r) + [ZERO] * pad for r in self.coeffs]
        return CurveJet(self.n, self.multiplicity, rows)

    def truncated(self, jet_length: int) -> "CurveJet":
        if jet_length >= self.jet_length:
            return self
        if jet_length < 0:
            raise ValueError("jet length must be non-negative")
        rows = [r[: jet_length + 1] for r in self.coeffs]
        return CurveJet(self.n, self.multiplicity, rows)

    # -- container protocol ----------------------------------------------------

    def sort_key(self):
        """Deterministic total order for witness tie-breaking."""
        flat = tuple(c.sort_key() for r in self.coeffs for c in r)
        return (self.multiplicity, self.jet_length, flat)

    def __eq__(self, other):
        if not isinstance(other, CurveJet):
            return NotImplemented
        return (
            self.n == other.n
            and self.multiplicity == other.multiplicity
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, self.multiplicity, self.coeffs))

    def __repr__(self):
        return f"<CurveJet M={self.multiplicity} L={self.jet_length} {self}>"

    def __str__(self):
        return "; ".join(u_format(self.component_poly(q)) for q in range(1, self.n + 1))


def u_format(p: UPoly) -> str:
    """Render a component polynomial the way curve input is written."""
    if not p:
        return "0"
    parts = []
    for e in sorted(p):
        c = p[e]
        cs = str(c)
        if ("+" in cs[1:]) or ("-" in cs[1:]):
            cs = f"({cs})"
        if e == 0:
            parts.append(cs)
        else:
            te = "t" if e == 1 else f"t^{e}"
            parts.append(te if cs == "1" else ("-" + te if cs == "-1" else f"{cs}*{te}"))
    out = parts[0]
    for s in parts[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out
