"""Sparse multivariate polynomials in z_1..z_n and their conjugates.

A term is keyed by a bidegree pair ``(alpha, beta)`` of exponent tuples:
``alpha`` for the holomorphic variables ``z``, ``beta`` for the conjugated
ones.  The monomial is ``z^alpha * conj(z)^beta`` and the coefficient is a
:class:`~contactorder.rational.GaussianRational`.  Zero coefficients are
never stored.

``ComplexPolynomial`` carries no reality constraint; it is the result type
of single Wirtinger derivatives and intermediate algebra.
``HermitianPolynomial`` additionally enforces the real-valuedness pairing
``c[beta,alpha] == conj(c[alpha,beta])``, which is exactly the condition
that the polynomial takes real values once ``conj(z)`` is the actual
conjugate of ``z``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import HermitianError
from .rational import GaussianRational, ONE, ZERO

ExponentKey = tuple[tuple[int, ...], tuple[int, ...]]


def _key_degree(key: ExponentKey) -> int:
    alpha, beta = key
    return sum(alpha) + sum(beta)


def grlex_key(key: ExponentKey):
    """Graded lexicographic order on (alpha, beta); the display order."""
    alpha, beta = key
    return (sum(alpha) + sum(beta), alpha, beta)


class ComplexPolynomial:
    """Polynomial in z, conj(z) over the Gaussian rationals (no reality)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[ExponentKey, GaussianRational] | None = None):
        if n < 1:
            raise ValueError("dimension must be positive")
        clean: dict[ExponentKey, GaussianRational] = {}
        if terms:
            for (alpha, beta), c in terms.items():
                if len(alpha) != n or len(beta) != n:
                    raise ValueError(f"exponent tuples must have length {n}")
                c = GaussianRational.of(c)
                if not c.is_zero():
                    clean[(tuple(alpha), tuple(beta))] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "ComplexPolynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, c) -> "ComplexPolynomial":
        zeros = (0,) * n
        return cls(n, {(zeros, zeros): GaussianRational.of(c)})

    @classmethod
    def variable(cls, n: int, index: int) -> "ComplexPolynomial":
        """z_index, with index in 1..n."""
        _check_index(n, index)
        alpha = tuple(1 if j == index - 1 else 0 for j in range(n))
        return cls(n, {(alpha, (0,) * n): ONE})

    @classmethod
    def conj_variable(cls, n: int, index: int) -> "ComplexPolynomial":
        """conj(z_index), with index in 1..n."""
        _check_index(n, index)
        beta = tuple(1 if j == index - 1 else 0 for j in range(n))
        return cls(n, {((0,) * n, beta): ONE})

    @classmethod
    def monomial(cls, n: int, alpha, beta, c=ONE) -> "ComplexPolynomial":
        return cls(n, {(tuple(alpha), tuple(beta)): GaussianRational.of(c)})

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return ComplexPolynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.of(other)
            if c.is_zero():
                return ComplexPolynomial.zero(self.n)
            return ComplexPolynomial(self.n, {k: v * c for k, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[ExponentKey, GaussianRational] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (
                    tuple(x + y for x, y in zip(a1, a2)),
                    tuple(x + y for x, y in zip(b1, b2)),
                )
                c = c1 * c2
                s = out.get(key)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return ComplexPolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = ComplexPolynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def _coerce(self, other) -> "ComplexPolynomial":
        if isinstance(other, ComplexPolynomial):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return ComplexPolynomial.constant(self.n, other)
        raise TypeError(f"cannot combine polynomial with {other!r}")

    # -- structure ------------------------------------------------------------

    def conjugate(self) -> "ComplexPolynomial":
        """Complex conjugate: swaps alpha and beta, conjugates coefficients."""
        return ComplexPolynomial(
            self.n,
            {(beta, alpha): c.conjugate() for (alpha, beta), c in self.terms.items()},
        )

    def coefficient(self, alpha, beta) -> GaussianRational:
        return self.terms.get((tuple(alpha), tuple(beta)), ZERO)

    def constant_term(self) -> GaussianRational:
        zeros = (0,) * self.n
        return self.terms.get((zeros, zeros), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Degree of the highest term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(_key_degree(k) for k in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return -1
        return min(_key_degree(k) for k in self.terms)

    def graded_part(self, degree: int) -> "ComplexPolynomial":
        return ComplexPolynomial(
            self.n, {k: c for k, c in self.terms.items() if _key_degree(k) == degree}
        )

    def truncated(self, degree: int) -> "ComplexPolynomial":
        return ComplexPolynomial(
            self.n, {k: c for k, c in self.terms.items() if _key_degree(k) <= degree}
        )

    def filter_terms(self, predicate) -> "ComplexPolynomial":
        return ComplexPolynomial(
            self.n, {k: c for k, c in self.terms.items() if predicate(k[0], k[1])}
        )

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    # -- calculus ---------------------------------------------------------------

    def wirtinger(self, index: int, conjugated: bool) -> "ComplexPolynomial":
        """Formal partial d/dz_index (or d/dconj(z_index)), index in 1..n."""
        _check_index(self.n, index)
        j = index - 1
        out: dict[ExponentKey, GaussianRational] = {}
        for (alpha, beta), c in self.terms.items():
            exps = beta if conjugated else alpha
            e = exps[j]
            if e == 0:
                continue
            lowered = list(exps)
            lowered[j] = e - 1
            key = (alpha, tuple(lowered)) if conjugated else (tuple(lowered), beta)
            add = c * e
            s = out.get(key)
            s = add if s is None else s + add
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return ComplexPolynomial(self.n, out)

    def directional_wirtinger(self, vector, conjugated: bool) -> "ComplexPolynomial":
        """sum_j v_j * d/dz_j (or d/dconj(z_j)) applied once."""
        if len(vector) != self.n:
            raise ValueError("direction vector has wrong length")
        out = ComplexPolynomial.zero(self.n)
        for j, v in enumerate(vector, start=1):
            v = GaussianRational.of(v)
            if v.is_zero():
                continue
            out = out + self.wirtinger(j, conjugated) * v
        return out

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, point: Iterable) -> GaussianRational:
        """Evaluate with conj(z) bound to the actual conjugate of ``point``."""
        zs = [GaussianRational.of(p) for p in point]
        if len(zs) != self.n:
            raise ValueError("point has wrong length")
        return self.evaluate_pair(zs, [z.conjugate() for z in zs])

    def evaluate_pair(self, zs, zbars) -> GaussianRational:
        """Evaluate with independent values for z and conj(z)."""
        total = ZERO
        for (alpha, beta), c in self.terms.items():
            v = c
            for j, e in enumerate(alpha):
                if e:
                    v = v * (GaussianRational.of(zs[j]) ** e)
            for j, e in enumerate(beta):
                if e:
                    v = v * (GaussianRational.of(zbars[j]) ** e)
            total = total + v
        return total

    def substitute(self, z_images, zbar_images) -> "ComplexPolynomial":
        """Simultaneous substitution z_j -> z_images[j], conj(z_j) -> zbar_images[j].

        Images are polynomials over a common target dimension.  The two lists
        are independent: holomorphic substitution passes the conjugates of the
        ``z`` images on the conjugate side, but callers doing formal work may
        pass anything.
        """
        z_images = list(z_images)
        zbar_images = list(zbar_images)
        if len(z_images) != self.n or len(zbar_images) != self.n:
            raise ValueError("need one image per variable")
        m = z_images[0].n
        for p in z_images + zbar_images:
            if p.n != m:
                raise ValueError("images must share a dimension")
        pow_cache: dict[tuple[int, bool, int], ComplexPolynomial] = {}

        def powed(j: int, conj_side: bool, e: int) -> ComplexPolynomial:
            key = (j, conj_side, e)
            got = pow_cache.get(key)
            if got is None:
                base = zbar_images[j] if conj_side else z_images[j]
                got = base**e
                pow_cache[key] = got
            return got

        out = ComplexPolynomial.zero(m)
        for (alpha, beta), c in self.terms.items():
            piece = ComplexPolynomial.constant(m, c)
            for j, e in enumerate(alpha):
                if e:
                    piece = piece * powed(j, False, e)
            for j, e in enumerate(beta):
                if e:
                    piece = piece * powed(j, True, e)
            out = out + piece
        return out

    def compose_holomorphic(self, maps: Iterable["ComplexPolynomial"]) -> "ComplexPolynomial":
        """Substitute a holomorphic polynomial map w: z_j -> maps[j].

        The conjugate side receives conj(maps[j]), so real-valued input stays
        real-valued.
        """
        maps = list(maps)
        return self.substitute(maps, [p.conjugate() for p in maps])

    def shift(self, point) -> "ComplexPolynomial":
        """Recenter: z -> z + w0 and conj(z) -> conj(z) + conj(w0)."""
        w = [GaussianRational.of(p) for p in point]
        if len(w) != self.n:
            raise ValueError("shift point has wrong length")
        n = self.n
        z_images = [
            ComplexPolynomial.variable(n, j + 1) + ComplexPolynomial.constant(n, w[j])
            for j in range(n)
        ]
        zbar_images = [
            ComplexPolynomial.conj_variable(n, j + 1)
            + ComplexPolynomial.constant(n, w[j].conjugate())
            for j in range(n)
        ]
        return self.substitute(z_images, zbar_images)

    # -- reality ------------------------------------------------------------------

    def is_hermitian(self) -> bool:
        return hermitian_check(self.terms)

    def as_hermitian(self) -> "HermitianPolynomial":
        return HermitianPolynomial(self.n, self.terms)

    # -- container protocol ---------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return f"<{type(self).__name__} n={self.n} {self}>"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (alpha, beta), c in self.sorted_terms():
            factors = []
            for j, e in enumerate(alpha):
                if e == 1:
                    factors.append(f"z{j + 1}")
                elif e > 1:
                    factors.append(f"z{j + 1}^{e}")
            for j, e in enumerate(beta):
                if e == 1:
                    factors.append(f"conj(z{j + 1})")
                elif e > 1:
                    factors.append(f"conj(z{j + 1})^{e}")
            cs = str(c)
            needs_parens = ("+" in cs[1:]) or ("-" in cs[1:])
            if factors:
                head = f"({cs})" if needs_parens else cs
                if head == "1":
                    parts.append("*".join(factors))
                elif head == "-1":
                    parts.append("-" + "*".join(factors))
                else:
                    parts.append(head + "*" + "*".join(factors))
            else:
                parts.append(f"({cs})" if needs_parens else cs)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


class HermitianPolynomial(ComplexPolynomial):
    """Real-valued polynomial in z, conj(z); construction validates reality."""

    __slots__ = ()

    def __init__(self, n, terms=None):
        super().__init__(n, terms)
        if not hermitian_check(self.terms):
            raise HermitianError("coefficient map is not real-valued")

    def evaluate_real(self, point) -> Fraction:
        v = self.evaluate(point)
        assert v.is_real(), "hermitian polynomial evaluated to a non-real value"
        return v.re


def _check_index(n: int, index: int):
    if not 1 <= index <= n:
        raise IndexError(f"variable index {index} out of range 1..{n}")


def wirtinger_derive(p: ComplexPolynomial, index: int, conjugated: bool) -> ComplexPolynomial:
    """Formal Wirtinger derivative; the result drops the reality invariant."""
    out = p.wirtinger(index, conjugated)
    return ComplexPolynomial(out.n, out.terms)


def hermitian_check(terms: Mapping[ExponentKey, GaussianRational]) -> bool:
    """True iff c[beta,alpha] == conj(c[alpha,beta]) for all keys (missing = 0)."""
    for (alpha, beta), c in terms.items():
        c = GaussianRational.of(c)
        mirror = terms.get((beta, alpha))
        mirror = ZERO if mirror is None else GaussianRational.of(mirror)
        if mirror != c.conjugate():
            return False
    return True


# -- real-part combinators -------------------------------------------------
#
# Re, Im and |.|^2 are eliminated at construction time so that every value
# lives in one canonical (alpha, beta)-indexed representation.

def re_part(p: ComplexPolynomial) -> ComplexPolynomial:
    """Re u = (u + conj u)/2."""
    return (p + p.conjugate()) * Fraction(1, 2)


def im_part(p: ComplexPolynomial) -> ComplexPolynomial:
    """Im u = (u - conj u)/(2i)."""
    return (p - p.conjugate()) * GaussianRational(0, Fraction(-1, 2))


def abs2(p: ComplexPolynomial) -> ComplexPolynomial:
    """|u|^2 = u * conj u."""
    return p * p.conjugate()
