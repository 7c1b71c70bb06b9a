"""Coordinate normalization of a hypersurface germ at the origin.

The normalization pipeline:

1. ``good_coords``: a linear change making the gradient (1, 0, ..., 0),
   then degree-by-degree absorption of pure holomorphic terms into z_1.
2. A formal graph solve: writing z_1 = x + i y, the surface equation
   2x + W(x, y, z', conj z') = 0 is solved for x as a truncated series by
   fixed-point iteration (W starts at degree 2, so each pass settles one
   more degree).  This expresses the defining function, through the
   truncation degree, as 2 Re z_1 plus a function of y = Im z_1 and z'.
3. Exact congruence diagonalization of the Hermitian quadratic z'-block
   (symmetric elimination with diagonal pivoting over the Gaussian
   rationals).  The diagonal entries carry the Levi inertia signs but are
   not eigenvalues.
4. Bucketing: diagonal quadratic part (kappa), mixed cubic part (lambda),
   and a remainder whose terms each carry a factor of Im z_1 or have
   z'-degree at least 4.

All arithmetic is exact.  When the input's z_1-dependence is already of
graph shape (linear 2c Re z_1 plus Im z_1-factored terms) every step is a
genuine coordinate change and the reassembled normal form pulled back
through the transform reproduces the input exactly through the truncation
degree; ``NormalForm.exact_round_trip`` records whether that held.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curves import CurveJet
from .contact import compose
from .errors import (
    DegenerateBlockError,
    DegenerateGradientError,
    NotBasedAtZeroError,
    PreconditionError,
)
from .poly import ComplexPolynomial, HermitianPolynomial
from .rational import GaussianRational, ONE, ZERO
from .series import OrderBound


# -- holomorphic polynomial maps ------------------------------------------------

class HoloTransform:
    """Holomorphic polynomial change of coordinates, new -> old.

    ``components[j]`` expresses the old coordinate z_{j+1} as a polynomial
    in the new coordinates; the linear part is invertible and the map fixes
    the origin.  ``truncation_degree`` records through which degree the
    normalization guarantees attached to this transform are claimed.
    """

    __slots__ = ("n", "components", "truncation_degree")

    def __init__(self, components: Sequence[ComplexPolynomial], truncation_degree: int):
        components = tuple(components)
        if not components:
            raise ValueError("transform needs at least one component")
        n = components[0].n
        if len(components) != n:
            raise ValueError("need one component per variable")
        zeros = (0,) * n
        for w in components:
            if w.n != n:
                raise ValueError("component dimension mismatch")
            for (alpha, beta) in w.terms:
                if beta != zeros:
                    raise ValueError("transform components must be holomorphic")
            if not w.constant_term().is_zero():
                raise ValueError("transform must fix the origin")
        if not _linear_part_invertible(components):
            raise ValueError("linear part of the transform is singular")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "truncation_degree", truncation_degree)

    def __setattr__(self, name, value):
        raise AttributeError("HoloTransform is immutable")

    @classmethod
    def identity(cls, n: int, degree: int) -> "HoloTransform":
        return cls([ComplexPolynomial.variable(n, j) for j in range(1, n + 1)], degree)

    @classmethod
    def linear(cls, matrix, degree: int) -> "HoloTransform":
        """old_i = sum_k matrix[i][k] * new_k."""
        n = len(matrix)
        comps = []
        for i in range(n):
            w = ComplexPolynomial.zero(n)
            for k in range(n):
                c = GaussianRational.of(matrix[i][k])
                if not c.is_zero():
                    w = w + ComplexPolynomial.variable(n, k + 1) * c
            comps.append(w)
        return cls(comps, degree)

    def apply_to(self, p: ComplexPolynomial) -> ComplexPolynomial:
        """Exact pullback: p(w(z), conj w(z))."""
        return p.compose_holomorphic(self.components)

    def after(self, inner: "HoloTransform") -> "HoloTransform":
        """Composite self(inner(.)); applying r is then staged inner-last."""
        comps = [w.compose_holomorphic(inner.components) for w in self.components]
        return HoloTransform(
            comps, min(self.truncation_degree, inner.truncation_degree)
        )

    def is_identity(self) -> bool:
        return self == HoloTransform.identity(self.n, self.truncation_degree)

    def __eq__(self, other):
        if not isinstance(other, HoloTransform):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        body = "; ".join(str(w) for w in self.components)
        return f"<HoloTransform {body}>"


def _linear_part_invertible(components) -> bool:
    n = components[0].n
    rows = []
    for w in components:
        row = []
        for k in range(n):
            alpha = tuple(1 if j == k else 0 for j in range(n))
            row.append(w.coefficient(alpha, (0,) * n))
        rows.append(row)
    # gaussian elimination over the exact field
    m = [list(r) for r in rows]
    for col in range(n):
        piv = next((i for i in range(col, n) if not m[i][col].is_zero()), None)
        if piv is None:
            return False
        m[col], m[piv] = m[piv], m[col]
        inv = ONE / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return True


# -- gradient and tangent space ----------------------------------------------------

def gradient_at(r: ComplexPolynomial, point) -> list[GaussianRational]:
    return [r.wirtinger(j, conjugated=False).evaluate(point) for j in range(1, r.n + 1)]


def tangent_basis(r: HermitianPolynomial, point) -> list[tuple[GaussianRational, ...]]:
    """Basis of the complex tangent space at a surface point.

    Uses the largest-modulus gradient component m as the dependent
    direction: the vectors e_j - (r_{z_j}/r_{z_m}) e_m, j != m, each
    annihilate the holomorphic gradient.
    """
    g = gradient_at(r, point)
    mods = [c.abs2() for c in g]
    best = max(mods)
    if best == 0:
        raise DegenerateGradientError("gradient vanishes at the base point")
    m = mods.index(best)
    basis = []
    for j in range(r.n):
        if j == m:
            continue
        vec = [ZERO] * r.n
        vec[j] = ONE
        vec[m] = -(g[j] / g[m])
        basis.append(tuple(vec))
    return basis


# -- pure-term absorption -------------------------------------------------------

def good_coords(r: HermitianPolynomial, degree: int) -> tuple[HoloTransform, HermitianPolynomial]:
    """Normalize the gradient to (1, 0, ...) and kill pure terms through ``degree``.

    The returned surface has r_{z_1}(0) = 1, r_{z_j}(0) = 0 for j >= 2, and
    no monomials z^alpha or conj(z)^alpha with 2 <= |alpha| <= degree.  Pure
    terms are absorbed into z_1 degree by degree; each absorption only
    creates terms of strictly higher degree, so one upward sweep suffices.
    """
    if degree < 2:
        raise ValueError("normalization degree must be at least 2")
    if not r.constant_term().is_zero():
        raise NotBasedAtZeroError("surface must pass through the origin")
    n = r.n
    g = gradient_at(r, [ZERO] * n)
    mods = [c.abs2() for c in g]
    best = max(mods)
    if best == 0:
        raise DegenerateGradientError("gradient vanishes at the origin")
    m = mods.index(best)
    # columns: new z_1 enters through e_m / g_m, the rest through tangent vectors
    cols = [[ZERO] * n for _ in range(n)]
    cols[0][m] = ONE / g[m]
    cidx = 1
    for j in range(n):
        if j == m:
            continue
        cols[cidx][j] = ONE
        cols[cidx][m] = -(g[j] / g[m])
        cidx += 1
    matrix = [[cols[k][i] for k in range(n)] for i in range(n)]
    transform = HoloTransform.linear(matrix, degree)
    current = transform.apply_to(r)

    zeros = (0,) * n
    for k in range(2, degree + 1):
        pure = ComplexPolynomial(
            n,
            {
                (alpha, beta): c
                for (alpha, beta), c in current.terms.items()
                if beta == zeros and sum(alpha) == k
            },
        )
        if pure.is_zero():
            continue
        comps = [ComplexPolynomial.variable(n, 1) - pure] + [
            ComplexPolynomial.variable(n, j) for j in range(2, n + 1)
        ]
        step = HoloTransform(comps, degree)
        transform = transform.after(step)
        current = step.apply_to(current)

    out = current.as_hermitian()
    assert not _has_low_pure_terms(out, degree), "pure terms must be absorbed"
    return transform, out


def _has_low_pure_terms(p: ComplexPolynomial, through: int) -> bool:
    zeros = (0,) * p.n
    for (alpha, beta) in p.terms:
        if beta == zeros and 2 <= sum(alpha) <= through:
            return True
        if alpha == zeros and 2 <= sum(beta) <= through:
            return True
    return False


# -- exact congruence diagonalization ------------------------------------------------

def congruence_diagonalize(matrix) -> tuple[list[list[GaussianRational]], list[Fraction]]:
    """P with P* K P diagonal, by symmetric elimination with diagonal pivots.

    K must be Hermitian.  Returns (P, diagonal).  Raises
    :class:`DegenerateBlockError` when every remaining diagonal entry is
    zero but off-diagonal coupling persists (no admissible pivot).
    """
    m = len(matrix)
    K = [[GaussianRational.of(matrix[i][j]) for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(m):
            if K[i][j] != K[j][i].conjugate():
                raise ValueError("matrix is not hermitian")
    P = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]

    def col_op(target: int, source: int, factor: GaussianRational):
        # col_target += factor * col_source, mirrored by the conjugate row op
        for i in range(m):
            K[i][target] = K[i][target] + factor * K[i][source]
        fbar = factor.conjugate()
        for j in range(m):
            K[target][j] = K[target][j] + fbar * K[source][j]
        for i in range(m):
            P[i][target] = P[i][target] + factor * P[i][source]

    def swap(i: int, l: int):
        for row in K:
            row[i], row[l] = row[l], row[i]
        K[i], K[l] = K[l], K[i]
        for row in P:
            row[i], row[l] = row[l], row[i]

    for i in range(m):
        if K[i][i].is_zero():
            pivot = next(
                (l for l in range(i + 1, m) if not K[l][l].is_zero()), None
            )
            if pivot is None:
                coupling = next(
                    (
                        (a, b)
                        for a in range(i, m)
                        for b in range(a + 1, m)
                        if not K[a][b].is_zero()
                    ),
                    None,
                )
                if coupling is None:
                    break  # remaining block is identically zero
                a, b = coupling
                raise DegenerateBlockError(
                    a,
                    b,
                    (
                        (str(K[a][a]), str(K[a][b])),
                        (str(K[b][a]), str(K[b][b])),
                    ),
                )
            swap(i, pivot)
        for j in range(i + 1, m):
            if not K[i][j].is_zero():
                col_op(j, i, -(K[i][j] / K[i][i]))

    diag = []
    for i in range(m):
        assert K[i][i].is_real(), "congruence diagonal must be real"
        diag.append(K[i][i].re)
    for i in range(m):
        for j in range(m):
            if i != j:
                assert K[i][j].is_zero(), "off-diagonal residue after elimination"
    return P, diag


# -- graph solve in the (Im z_1, z') ring -----------------------------------------
#
# Inside this block, polynomials live in a formal ring whose variable 1 is
# the real quantity y = Im z_1 (exponent kept on the holomorphic side; the
# conjugate exponent of slot 1 stays zero) and whose variables 2..n are z'.

def _yring_conjugate(p: ComplexPolynomial) -> ComplexPolynomial:
    out = {}
    for (alpha, beta), c in p.terms.items():
        assert beta[0] == 0, "y-power must sit on the holomorphic side"
        na = (alpha[0],) + beta[1:]
        nb = (0,) + alpha[1:]
        out[(na, nb)] = c.conjugate()
    return ComplexPolynomial(p.n, out)


def _yring_is_real(p: ComplexPolynomial) -> bool:
    return p == _yring_conjugate(p)


def _graph_solve(r1: HermitianPolynomial, degree: int) -> ComplexPolynomial:
    """Solve 2x + W(x, y, z') = 0 for x = Re z_1, truncated at ``degree``.

    ``r1`` must have linear part z_1 + conj z_1.  The result is a real
    polynomial in the y-ring starting at degree 2.
    """
    n = r1.n
    y = ComplexPolynomial.variable(n, 1)
    i_y = y * GaussianRational(0, 1)
    zp = [ComplexPolynomial.variable(n, j) for j in range(2, n + 1)]
    zbp = [ComplexPolynomial.conj_variable(n, j) for j in range(2, n + 1)]

    def plug(x: ComplexPolynomial) -> ComplexPolynomial:
        return r1.substitute([x + i_y] + zp, [x - i_y] + zbp)

    x = ComplexPolynomial.zero(n)
    for _ in range(degree):
        # E(x) = 2x + W(x); the update x <- -W(x)/2 settles one degree per pass
        residual = plug(x) - x * 2
        x = (residual * Fraction(-1, 2)).truncated(degree)
    assert _yring_is_real(x), "graph function must be real"
    assert x.min_degree() >= 2 or x.is_zero(), "graph function starts at degree 2"
    return x


def _yring_backsub(p: ComplexPolynomial) -> ComplexPolynomial:
    """Replace y by (z_1 - conj z_1) / (2i)."""
    n = p.n
    minus_half_i = GaussianRational(0, Fraction(-1, 2))
    y_image = (
        ComplexPolynomial.variable(n, 1) - ComplexPolynomial.conj_variable(n, 1)
    ) * minus_half_i
    z_images = [y_image] + [ComplexPolynomial.variable(n, j) for j in range(2, n + 1)]
    zb_images = [y_image.conjugate()] + [
        ComplexPolynomial.conj_variable(n, j) for j in range(2, n + 1)
    ]
    return p.substitute(z_images, zb_images)


# -- the normal form ------------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """2 Re z_1 + sum kappa_j |z_j|^2 + Re(sum lambda_{jkl} z_j z_k conj z_l) + rest."""

    dimension: int
    kappa: tuple[Fraction, ...]  # indices 2..n
    lam: dict  # (j, k, l) with 2 <= j <= k, l >= 2 -> GaussianRational
    remainder: HermitianPolynomial
    transform: HoloTransform
    truncation_degree: int
    psc_certified: str = "unknown"  # yes-by-sampling | violation-found | unknown
    exact_round_trip: bool = True

    def kappa_of(self, index: int) -> Fraction:
        """kappa_j for a variable index j in 2..n."""
        if not 2 <= index <= self.dimension:
            raise IndexError("kappa indices run from 2 to n")
        return self.kappa[index - 2]

    def lambda_of(self, j: int, k: int, l: int) -> GaussianRational:
        if j > k:
            j, k = k, j
        return self.lam.get((j, k, l), ZERO)

    def quadratic_part(self) -> ComplexPolynomial:
        n = self.dimension
        out = ComplexPolynomial.zero(n)
        for j in range(2, n + 1):
            kj = self.kappa[j - 2]
            if kj:
                out = out + ComplexPolynomial.monomial(
                    n,
                    tuple(1 if t == j - 1 else 0 for t in range(n)),
                    tuple(1 if t == j - 1 else 0 for t in range(n)),
                    GaussianRational(kj),
                )
        return out

    def cubic_part(self) -> ComplexPolynomial:
        n = self.dimension
        half = Fraction(1, 2)
        out = ComplexPolynomial.zero(n)
        for (j, k, l), lam in self.lam.items():
            alpha = [0] * n
            alpha[j - 1] += 1
            alpha[k - 1] += 1
            beta = [0] * n
            beta[l - 1] += 1
            mono = ComplexPolynomial.monomial(n, tuple(alpha), tuple(beta), lam)
            scale = half if j == k else ONE
            # Re-pairing: each stored symmetric entry contributes both halves
            out = out + (mono + mono.conjugate()) * scale
        return out

    def reassemble(self) -> HermitianPolynomial:
        n = self.dimension
        lead = ComplexPolynomial.variable(n, 1) + ComplexPolynomial.conj_variable(n, 1)
        total = lead + self.quadratic_part() + self.cubic_part() + self.remainder
        return total.as_hermitian()

    def to_json(self):
        return {
            "kappa": [str(k) for k in self.kappa],
            "lambda": {
                f"{j},{k},{l}": {"re": str(c.re), "im": str(c.im)}
                for (j, k, l), c in sorted(self.lam.items())
            },
            "remainder_terms": len(self.remainder.terms),
            "truncation_degree": self.truncation_degree,
            "psc_certified": self.psc_certified,
            "exact_round_trip": self.exact_round_trip,
        }


def to_normal_form(r: HermitianPolynomial, degree: int) -> NormalForm:
    """Normalize a germ to graph shape with diagonal quadratic part.

    Exact through ``degree``; see the module docstring for the pipeline and
    for when the round trip is exact.
    """
    if degree < 3:
        raise ValueError("normal form needs degree >= 3 to expose the cubic block")
    n = r.n
    if n < 2:
        raise ValueError("normal form needs at least two variables")
    transform, r1 = good_coords(r, degree)

    graph = _graph_solve(r1, degree)
    surface_tail = graph * -2  # r_graph = 2 Re z_1 + surface_tail, in the y-ring

    # split off the quadratic z'-block and diagonalize it by exact congruence
    zerokey = 0
    quad = [[ZERO] * (n - 1) for _ in range(n - 1)]
    for (alpha, beta), c in surface_tail.terms.items():
        if alpha[0] != zerokey or sum(alpha) + sum(beta) != 2:
            continue
        if sum(alpha) == 2 or sum(beta) == 2:
            raise AssertionError("pure quadratic z' term survived normalization")
        j = alpha.index(1)
        k = beta.index(1)
        assert j >= 1 and k >= 1
        quad[j - 1][k - 1] = c
    P, diag = congruence_diagonalize(quad)

    # extend the z'-change to a full transform (z_1 untouched)
    full = [[ONE if i == j == 0 else ZERO for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        for j in range(n - 1):
            full[i + 1][j + 1] = P[i][j]
    diag_step = HoloTransform.linear(full, degree)
    transform = transform.after(diag_step)

    # apply the z'-change inside the y-ring (y is untouched by it)
    zp_images = []
    zbp_images = []
    for i in range(2, n + 1):
        w = ComplexPolynomial.zero(n)
        for j in range(2, n + 1):
            c = full[i - 1][j - 1]
            if not c.is_zero():
                w = w + ComplexPolynomial.variable(n, j) * c
        zp_images.append(w)
        zbp_images.append(_yring_conjugate(w))
    y_var = ComplexPolynomial.variable(n, 1)
    tail = surface_tail.substitute([y_var] + zp_images, [y_var] + zbp_images)

    # bucket the tail
    kappa = list(diag)
    lam: dict[tuple[int, int, int], GaussianRational] = {}
    remainder = ComplexPolynomial.zero(n)
    quad_check = [[ZERO] * (n - 1) for _ in range(n - 1)]
    for (alpha, beta), c in tail.terms.items():
        assert beta[0] == 0
        deg = sum(alpha) + sum(beta)
        ypow = alpha[0]
        if ypow > 0:
            remainder = remainder + _yring_backsub(
                ComplexPolynomial.monomial(n, alpha, beta, c)
            )
            continue
        if deg == 2:
            assert sum(alpha) == 1 and sum(beta) == 1, "pure quadratic in normal form"
            quad_check[alpha.index(1) - 1][beta.index(1) - 1] = c
            continue
        if deg == 3:
            a, b = sum(alpha), sum(beta)
            assert (a, b) in ((2, 1), (1, 2)), "pure cubic z' term in normal form"
            if (a, b) == (1, 2):
                continue  # the conjugate half; rebuilt from lambda
            js = [q + 1 for q, e in enumerate(alpha) for _ in range(e)]
            l = beta.index(1) + 1
            j, k = sorted(js)
            lam[(j, k, l)] = c * (2 if j == k else 1)
            continue
        remainder = remainder + ComplexPolynomial.monomial(n, alpha, beta, c)

    for i in range(n - 1):
        for j in range(n - 1):
            expected = GaussianRational(kappa[i]) if i == j else ZERO
            assert quad_check[i][j] == expected, "quadratic block not diagonalized"

    remainder_h = remainder.as_hermitian()
    nf = NormalForm(
        dimension=n,
        kappa=tuple(kappa),
        lam=lam,
        remainder=remainder_h,
        transform=transform,
        truncation_degree=degree,
        psc_certified="unknown",
        exact_round_trip=True,
    )
    # the reassembly must reproduce the transformed input through the degree
    pulled = transform.apply_to(r).truncated(degree)
    defect = pulled - nf.reassemble().truncated(degree)
    if not defect.is_zero():
        nf = NormalForm(
            dimension=n,
            kappa=nf.kappa,
            lam=nf.lam,
            remainder=nf.remainder,
            transform=nf.transform,
            truncation_degree=degree,
            psc_certified="unknown",
            exact_round_trip=False,
        )
    return nf


# -- structural checks on a normal form --------------------------------------------

@dataclass(frozen=True)
class CubicSupportCheck:
    """Pseudoconvexity demands positive quadratic weight under every cubic term."""

    consistent: bool
    offending_triple: tuple[int, int, int] | None


def cubic_support_check(nf: NormalForm) -> CubicSupportCheck:
    """Each nonzero cubic entry needs a strictly positive kappa among its indices.

    An inconsistency is a pseudoconvexity-violation candidate: the cubic
    term then produces an odd-order tangency along a coordinate line, which
    the tangency test can confirm.
    """
    for (j, k, l) in sorted(nf.lam):
        if nf.lam[(j, k, l)].is_zero():
            continue
        if max(nf.kappa_of(j), nf.kappa_of(k), nf.kappa_of(l)) <= 0:
            return CubicSupportCheck(False, (j, k, l))
    return CubicSupportCheck(True, None)


@dataclass(frozen=True)
class ComponentVanishingCheck:
    """Positive kappa directions force extra vanishing of high-contact curves."""

    hypothesis_met: bool
    coefficients_vanish: bool
    bound_witness: OrderBound


def component_vanishing_check(nf: NormalForm, gamma: CurveJet) -> ComponentVanishingCheck:
    """Check, on a concrete curve, the vanishing forced by positive kappa.

    For a curve with first component identically zero whose pullback
    vanishes past 4M: every component s with kappa_s > 0 must have
    c_i^s = 0 for i < M.  When some such coefficient is nonzero the
    pullback order is instead at most 4M - 2; the direct composition is
    recorded either way as ``bound_witness``.
    """
    if any(not c.is_zero() for c in gamma.coeffs[0]):
        raise PreconditionError("curve must have first component identically zero")
    M = gamma.multiplicity
    r_model = nf.reassemble()
    N = 4 * M
    work = gamma
    if work.max_trusted_degree() < N:
        raise PreconditionError(
            f"jet must cover degree {N} to decide the vanishing hypothesis"
        )
    trace = compose(r_model, work, N)
    order = trace.min_order()
    hypothesis = order.known_greater_than(N)
    vanish = True
    for s in range(2, nf.dimension + 1):
        if nf.kappa_of(s) > 0:
            for i in range(min(M, gamma.jet_length + 1)):
                if not gamma.coefficient(s, i).is_zero():
                    vanish = False
    if hypothesis and not vanish:
        # impossible for a genuinely pseudoconvex model; the input is outside
        # the class the implication is stated for
        raise PreconditionError(
            "vanishing-past-4M hypothesis met while a positive-kappa component "
            "keeps low-order coefficients; the model cannot be pseudoconvex"
        )
    return ComponentVanishingCheck(hypothesis, vanish, order)
