"""Bounded exploration of contact orders over truncated curve jets.

The singular and regular type of a point are suprema over infinite curve
families; a finite artifact can only enumerate truncated jets with
coefficients in a finite set and report *bounds* with verified witnesses.
Zero pullbacks through the truncation are reported as ``at_least`` values,
never as infinity: a truncated jet cannot certify containment.

Determinism contract: for a fixed seed and configuration the result is
byte-identical regardless of worker count.  Enumeration order is fixed,
witness ties break by the lexicographically smallest coefficient tuple,
and every random probe draws from its own (seed, index)-derived stream.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .contact import compose
from .curves import CurveJet
from .errors import PreconditionError, SearchBudgetError
from .levi import derive_stream_seed
from .poly import HermitianPolynomial
from .rational import GaussianRational, ONE, ZERO
from .series import OrderBound, TraceSeries

PROBE_BOX = 3  # probe coefficients a+bi with |a|, |b| <= 3


@dataclass(frozen=True)
class SearchConfig:
    max_multiplicity: int
    jet_length: int
    coefficient_set: tuple[GaussianRational, ...]
    truncation: int
    probes: int = 0
    seed: int = 0
    budget: int = 200_000
    threads: int = 1
    first_component_zero: bool = False  # optional tangential reduction

    def to_json(self):
        return {
            "max_multiplicity": self.max_multiplicity,
            "jet_length": self.jet_length,
            "coefficient_set": [str(c) for c in self.coefficient_set],
            "truncation": self.truncation,
            "probes": self.probes,
            "seed": self.seed,
            "budget": self.budget,
            "first_component_zero": self.first_component_zero,
        }


@dataclass(frozen=True)
class Witness:
    curve: CurveJet
    nu_trace: OrderBound
    contact: OrderBound

    def to_json(self):
        return {
            "curve": str(self.curve),
            "multiplicity": self.curve.multiplicity,
            "nu_trace": self.nu_trace.to_json(),
            "contact": self.contact.to_json(),
        }


@dataclass(frozen=True)
class TypeEstimate:
    singular_lower: Witness | None
    regular_lower: Witness | None
    probe_max: OrderBound | None
    probe_count: int
    config: SearchConfig
    curves_examined: int

    def to_json(self):
        return {
            "singular_lower": self.singular_lower.to_json() if self.singular_lower else None,
            "regular_lower": self.regular_lower.to_json() if self.regular_lower else None,
            "probe_max": self.probe_max.to_json() if self.probe_max else None,
            "probe_count": self.probe_count,
            "curves_examined": self.curves_examined,
            "config": self.config.to_json(),
        }


def _better(cand: Witness, best: Witness | None) -> bool:
    if best is None:
        return True
    ck, bk = cand.contact.rank_key(), best.contact.rank_key()
    if ck != bk:
        return ck > bk
    return cand.curve.sort_key() < best.curve.sort_key()


def _enumerate_jets(cfg: SearchConfig, n: int):
    """All canonical jets: deterministic order, gauge-fixed leading entry.

    The first nonzero entry of c_0 (scanned in component order) is pinned to
    1 when 1 belongs to the coefficient set; this cuts the t -> c*t
    reparameterization redundancy.  Assignments whose last coefficient
    column is entirely zero are skipped for jet lengths > 0: they already
    appear at a shorter length.
    """
    coeffs = cfg.coefficient_set
    normalize = any(c == ONE for c in coeffs)
    first_rows = (0,) if cfg.first_component_zero else None
    for M in range(1, cfg.max_multiplicity + 1):
        for L in range(0, cfg.jet_length + 1):
            width = L + 1
            slots = n * width
            for flat in itertools.product(range(len(coeffs)), repeat=slots):
                rows = [
                    [coeffs[flat[q * width + i]] for i in range(width)]
                    for q in range(n)
                ]
                if first_rows is not None and any(
                    not c.is_zero() for c in rows[0]
                ):
                    continue
                lead = [rows[q][0] for q in range(n)]
                if all(c.is_zero() for c in lead):
                    continue
                if L > 0 and all(rows[q][L].is_zero() for q in range(n)):
                    continue  # equals a shorter jet
                if normalize:
                    first = next(c for c in lead if not c.is_zero())
                    if first != ONE:
                        continue
                yield CurveJet(n, M, rows)


def _search_space_size(cfg: SearchConfig, n: int) -> int:
    k = len(cfg.coefficient_set)
    total = 0
    for _ in range(1, cfg.max_multiplicity + 1):
        for L in range(0, cfg.jet_length + 1):
            total += k ** (n * (L + 1))
    return total


def _examine(r: HermitianPolynomial, jet: CurveJet, N: int) -> Witness:
    trace = compose(r, jet.extended(max(jet.jet_length, N - jet.multiplicity)), N)
    nu = trace.min_order()
    return Witness(jet, nu, nu.divided(jet.multiplicity))


# -- random regular probes ----------------------------------------------------------

def _draw_component(rng: random.Random, kind: str, width: int) -> list[GaussianRational]:
    def box() -> GaussianRational:
        return GaussianRational(
            Fraction(rng.randint(-PROBE_BOX, PROBE_BOX)),
            Fraction(rng.randint(-PROBE_BOX, PROBE_BOX)),
        )

    if kind == "zero":
        return [ZERO] * width
    row = [box() for _ in range(width)]
    if kind == "unit":
        while row[0].is_zero():
            row[0] = box()
    elif kind == "higher":
        row[0] = ZERO
    elif kind != "free":
        raise ValueError(f"unknown probe component kind {kind!r}")
    return row


def iter_probe_traces(
    r: HermitianPolynomial,
    count: int,
    seed: int,
    pattern: tuple[str, ...] | None,
    jet_length: int,
    N: int,
    tag: str = "probe",
):
    """Yield (jet, trace) for seeded random regular curves.

    ``pattern`` gives one kind per component: "unit" (order exactly 1),
    "higher" (order >= 2, possibly identically zero), "zero", or "free".
    With no pattern, components are free and the leading vector is redrawn
    until nonzero, keeping the curve regular.
    """
    n = r.n
    width = jet_length + 1
    if pattern is not None and len(pattern) != n:
        raise ValueError("pattern needs one entry per component")
    for index in range(count):
        rng = random.Random(derive_stream_seed(seed, tag, index))
        while True:
            kinds = pattern or ("free",) * n
            rows = [_draw_component(rng, kinds[q], width) for q in range(n)]
            if any(not rows[q][0].is_zero() for q in range(n)):
                break
        jet = CurveJet(n, 1, rows)
        trace = compose(r, jet.extended(max(jet.jet_length, N - 1)), N)
        yield jet, trace


def search_type(r: HermitianPolynomial, cfg: SearchConfig) -> TypeEstimate:
    """Enumerate bounded jets and probe random regular curves.

    Reported bounds come with witnesses that re-verify by direct
    composition; the probe maximum is upper-bound *evidence* only.
    """
    if cfg.truncation < 4 * cfg.max_multiplicity:
        raise PreconditionError(
            "truncation should be at least 4 * max multiplicity to make the "
            "reported contact bounds meaningful"
        )
    if not cfg.coefficient_set:
        raise PreconditionError("coefficient set must be non-empty")
    n = r.n
    size = _search_space_size(cfg, n)
    if size > cfg.budget:
        raise SearchBudgetError(
            f"enumeration of about {size} jets exceeds budget {cfg.budget}"
        )
    jets = list(_enumerate_jets(cfg, n))
    N = cfg.truncation

    def reduce_block(block) -> tuple[Witness | None, Witness | None, int]:
        best_s, best_r, count = None, None, 0
        for jet in block:
            w = _examine(r, jet, N)
            count += 1
            if _better(w, best_s):
                best_s = w
            if jet.multiplicity == 1 and _better(w, best_r):
                best_r = w
        return best_s, best_r, count

    threads = max(1, cfg.threads)
    if threads == 1 or len(jets) < 2 * threads:
        blocks = [reduce_block(jets)]
    else:
        chunk = (len(jets) + threads - 1) // threads
        pieces = [jets[i : i + chunk] for i in range(0, len(jets), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(reduce_block, pieces))

    best_singular, best_regular, examined = None, None, 0
    for bs, br, cnt in blocks:
        examined += cnt
        if bs is not None and _better(bs, best_singular):
            best_singular = bs
        if br is not None and _better(br, best_regular):
            best_regular = br

    probe_max: OrderBound | None = None
    probe_count = 0
    if cfg.probes > 0:
        pattern = ("zero",) + ("free",) * (n - 1) if cfg.first_component_zero else None
        for _, trace in iter_probe_traces(
            r, cfg.probes, cfg.seed, pattern, cfg.jet_length, N
        ):
            nu = trace.min_order()
            probe_count += 1
            if probe_max is None or nu.rank_key() > probe_max.rank_key():
                probe_max = nu
    return TypeEstimate(
        singular_lower=best_singular,
        regular_lower=best_regular,
        probe_max=probe_max,
        probe_count=probe_count,
        config=cfg,
        curves_examined=examined,
    )
