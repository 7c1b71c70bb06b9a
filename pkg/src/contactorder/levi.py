"""Randomized Levi-form sampling on a hypersurface near the origin.

This is the one deliberately floating-point corner of the package: it looks
for sign evidence, not exact invariants.  Points on {r = 0} are produced by
drawing z' on a shell, drawing a small Im z_1, and Newton-solving for
Re z_1; the Levi form restricted to the complex tangent space is then
assembled numerically and its least eigenvalue tracked.

A returned ``violation`` comes with a concrete witness point and is easy to
re-check; ``no-violation-found`` is only sampling evidence.  Determinism:
every sample draws from its own stream seeded by (seed, index), so results
do not depend on how samples are scheduled across workers.
"""
from __future__ import annotations

import hashlib
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGradientError
from .poly import HermitianPolynomial

NEWTON_RESIDUAL_TARGET = 1e-12
NEWTON_MAX_STEPS = 60


def derive_stream_seed(seed: int, tag: str, index: int) -> int:
    """Stable per-unit-of-work seed; independent of platform and scheduling."""
    digest = hashlib.sha256(f"{seed}:{tag}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class LeviSampleResult:
    min_eigenvalue: float
    witness_point: tuple[complex, ...] | None
    verdict: str  # "violation" | "no-violation-found"
    samples_evaluated: int
    solve_failures: int
    seed: int

    def to_json(self):
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "witness_point": None
            if self.witness_point is None
            else [[z.real, z.imag] for z in self.witness_point],
            "verdict": self.verdict,
            "samples_evaluated": self.samples_evaluated,
            "solve_failures": self.solve_failures,
            "seed": self.seed,
        }


class _FloatSurface:
    """Float-coefficient views of r, its gradient and its Levi matrix."""

    def __init__(self, r: HermitianPolynomial):
        self.n = r.n
        self.terms = [(a, b, complex(c)) for (a, b), c in r.terms.items()]
        self.grad = [
            [(a, b, complex(c)) for (a, b), c in r.wirtinger(j, False).terms.items()]
            for j in range(1, r.n + 1)
        ]
        self.levi = [
            [
                [
                    (a, b, complex(c))
                    for (a, b), c in r.wirtinger(j, False).wirtinger(k, True).terms.items()
                ]
                for k in range(1, r.n + 1)
            ]
            for j in range(1, r.n + 1)
        ]

    @staticmethod
    def _eval(terms, zs, zbars) -> complex:
        total = 0j
        for a, b, c in terms:
            v = c
            for j, e in enumerate(a):
                if e:
                    v *= zs[j] ** e
            for j, e in enumerate(b):
                if e:
                    v *= zbars[j] ** e
            total += v
        return total

    def value(self, zs) -> float:
        zbars = [z.conjugate() for z in zs]
        return self._eval(self.terms, zs, zbars).real

    def gradient(self, zs):
        zbars = [z.conjugate() for z in zs]
        return [self._eval(g, zs, zbars) for g in self.grad]

    def levi_matrix(self, zs):
        zbars = [z.conjugate() for z in zs]
        return np.array(
            [
                [self._eval(self.levi[j][k], zs, zbars) for k in range(self.n)]
                for j in range(self.n)
            ],
            dtype=complex,
        )


def _sample_point(surface: _FloatSurface, radius: float, rng: random.Random):
    """One point on {r = 0} near 0, or None when the Newton solve fails."""
    n = surface.n
    # z' uniform direction on the unit sphere, shell radius radius*sqrt(u)
    while True:
        direction = [
            complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0)) for _ in range(n - 1)
        ]
        norm = sum(abs(w) ** 2 for w in direction) ** 0.5
        if norm > 1e-9:
            break
    rho = radius * (rng.random() ** 0.5)
    zprime = [w * (rho / norm) for w in direction]
    y1 = rng.uniform(-(rho * rho), rho * rho)

    x = 0.0
    for _ in range(NEWTON_MAX_STEPS):
        zs = [complex(x, y1)] + zprime
        g = surface.value(zs)
        if abs(g) <= NEWTON_RESIDUAL_TARGET:
            return zs
        dg = 2.0 * surface.gradient(zs)[0].real
        if abs(dg) < 1e-14:
            return None
        x -= g / dg
    zs = [complex(x, y1)] + zprime
    return zs if abs(surface.value(zs)) <= 1e-10 else None


def _restricted_min_eig(surface: _FloatSurface, zs) -> float | None:
    grad = surface.gradient(zs)
    mods = [abs(g) for g in grad]
    gm = max(mods)
    if gm < 1e-14:
        return None
    m = mods.index(gm)
    n = surface.n
    basis = []
    for j in range(n):
        if j == m:
            continue
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        v[m] = -grad[j] / grad[m]
        basis.append(v / np.linalg.norm(v))
    V = np.array(basis).T
    H = surface.levi_matrix(zs)
    B = V.conj().T @ H @ V
    B = (B + B.conj().T) / 2.0  # symmetrize away round-off
    return float(np.linalg.eigvalsh(B)[0])


def levi_sample(
    r: HermitianPolynomial,
    radius: float,
    samples: int,
    tol: float,
    seed: int,
    threads: int = 1,
) -> LeviSampleResult:
    """Minimum restricted Levi eigenvalue over sampled surface points.

    Verdict ``violation`` iff some sample has eigenvalue < -tol.  Failed
    point solves are counted, not fatal.
    """
    if r.n < 2:
        raise ValueError("need at least two variables for a tangent space")
    if radius <= 0 or tol <= 0:
        raise ValueError("radius and tol must be positive")
    surface = _FloatSurface(r)
    grad0 = surface.gradient([0j] * r.n)
    if max(abs(g) for g in grad0) < 1e-14:
        raise DegenerateGradientError("gradient vanishes at the origin")

    def handle(index: int):
        rng = random.Random(derive_stream_seed(seed, "levi", index))
        zs = _sample_point(surface, radius, rng)
        if zs is None:
            return index, None, None
        eig = _restricted_min_eig(surface, zs)
        if eig is None:
            return index, None, None
        return index, eig, tuple(zs)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(handle, range(samples)))
    else:
        rows = [handle(i) for i in range(samples)]

    rows.sort(key=lambda t: t[0])  # scheduling-independent reduction order
    best = None
    witness = None
    failures = 0
    for _, eig, zs in rows:
        if eig is None:
            failures += 1
            continue
        if best is None or eig < best:
            best = eig
            witness = zs
    if best is None:
        return LeviSampleResult(
            float("nan"), None, "no-violation-found", 0, failures, seed
        )
    verdict = "violation" if best < -tol else "no-violation-found"
    return LeviSampleResult(best, witness, verdict, samples - failures, failures, seed)
