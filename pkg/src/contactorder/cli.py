"""Command-line interface.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a verification
command finds a mismatch.  Output is a canonical JSON report on stdout
(``--format text`` for a plain rendering).  Reports never echo the worker
count, so fixed seeds give byte-identical output at any ``--threads``.
"""
from __future__ import annotations

import argparse
import os
import sys

from .contact import contact_report, pseudoconvex_tangency_test
from .curves import CurveJet
from .errors import ContactOrderError
from .expansion import constant_comparison, expand, reduce_mod_mv
from .levi import levi_sample
from .lifting import LiftKind, construct_regular_witness, lift_curve, lifting_obstruction
from .normalform import cubic_support_check, to_normal_form
from .rational import GaussianRational
from .regressions import verify_paper
from .report import canonical_json, envelope, frac_str, render_text
from .search import SearchConfig, search_type
from .surfaces import parse_curve_components, parse_surface, print_surface


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_surface(spec: str, dimension=None):
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read().strip()
    else:
        text = spec
    return text, parse_surface(text, dimension)


def _load_curve(spec: str, n: int, needed_degree: int | None = None) -> CurveJet:
    comps = parse_curve_components(spec)
    if len(comps) != n:
        raise ContactOrderError(
            f"curve has {len(comps)} components but the surface lives in "
            f"dimension {n}"
        )
    jet = CurveJet.from_components(comps)
    if needed_degree is not None and jet.max_trusted_degree() < needed_degree:
        # text input is an exact polynomial, so padding is sound
        jet = jet.extended(needed_degree - jet.multiplicity)
    return jet


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(canonical_json(payload))
    else:
        sys.stdout.write(render_text(payload) + "\n")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="contactorder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a surface and print its canonical form")
    p.add_argument("--surface", required=True)
    _add_common(p)

    p = sub.add_parser("contact", help="contact order of a curve with a surface")
    p.add_argument("--surface", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--truncate", type=int, default=16)
    _add_common(p)

    p = sub.add_parser("expand", help="formal expansion of a mixed parameter derivative")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--mult", type=int, default=1, help="multiplicity scale M")
    p.add_argument(
        "--reduce-mv",
        action="store_true",
        help="drop terms vanishing automatically at multiplicity M",
    )
    _add_common(p)

    p = sub.add_parser("search", help="bounded search for high-contact curves")
    p.add_argument("--surface", required=True)
    p.add_argument("--max-mult", type=int, default=2)
    p.add_argument("--jet-len", type=int, default=2)
    p.add_argument("--coeffs", default="0,1", help="comma-separated coefficient set")
    p.add_argument("--truncate", type=int, default=0, help="0 = 4 * max-mult * 5")
    p.add_argument("--probes", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--first-component-zero", action="store_true")
    _add_common(p)

    p = sub.add_parser("lift", help="regular curves built from a singular curve's jets")
    p.add_argument("--surface", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--kind", choices=("hat", "tilde", "zeta"))
    p.add_argument("--target", type=int, choices=(2, 3, 4))
    _add_common(p)

    p = sub.add_parser("normalform", help="normalize a germ and read off its blocks")
    p.add_argument("--surface", required=True)
    p.add_argument("--degree", type=int, default=5)
    _add_common(p)

    p = sub.add_parser("psc", help="sample the Levi form near the origin")
    p.add_argument("--surface", required=True)
    p.add_argument("--radius", type=float, default=0.3)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("psc-tangency", help="even-order tangency test along one curve")
    p.add_argument("--surface", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--truncate", type=int, default=12)
    _add_common(p)

    p = sub.add_parser("verify-paper", help="run the built-in regression suite")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--probes-per-case", type=int, default=200)
    _add_common(p)

    return parser


def _cmd_parse(args) -> int:
    text, r = _load_surface(args.surface)
    result = {
        "dimension": r.n,
        "canonical": print_surface(r),
        "terms": len(r.terms),
        "hermitian": True,
    }
    _emit(envelope("parse", {"surface": text}, result), args.format)
    return 0


def _cmd_contact(args) -> int:
    text, r = _load_surface(args.surface)
    jet = _load_curve(args.curve, r.n, needed_degree=args.truncate)
    rep = contact_report(r, jet, args.truncate)
    _emit(
        envelope(
            "contact",
            {"surface": text, "curve": args.curve, "truncate": args.truncate},
            rep.to_json(),
        ),
        args.format,
    )
    return 0


def _cmd_expand(args) -> int:
    M = args.mult
    a, b = args.a * M, args.b * M
    e = expand(a, b)
    if args.reduce_mv:
        e = reduce_mod_mv(e, M)
    terms = [
        {
            "holomorphic_slots": list(t.holomorphic_slots),
            "antiholomorphic_slots": list(t.antiholomorphic_slots),
            "coefficient": frac_str(t.coefficient),
            "display": str(t),
        }
        for t in e.terms
    ]
    constants = None
    kind_by_pattern = {(2, 1): ("E0",), (2, 2): ("F0", "F1", "F2"), (3, 1): ("G",)}
    if (args.a, args.b) in kind_by_pattern:
        constants = []
        for kind in kind_by_pattern[(args.a, args.b)]:
            indices = range(0, M + 1) if kind == "G" else (None,)
            for i in indices:
                c = constant_comparison(kind, M, i)
                constants.append(
                    {
                        "kind": kind,
                        "index": i,
                        "paper": frac_str(c.paper_value),
                        "oracle": frac_str(c.oracle_value),
                        "agree": c.agree,
                    }
                )
    _emit(
        envelope(
            "expand",
            {"a": args.a, "b": args.b, "mult": M, "reduce_mv": bool(args.reduce_mv)},
            {"derivative": [a, b], "terms": terms, "display": str(e)},
            constants_comparison=constants,
        ),
        args.format,
    )
    return 0


def _parse_coeff_set(text: str) -> tuple[GaussianRational, ...]:
    out = []
    for piece in text.split(","):
        comps = parse_curve_components(piece.strip() + "*t")  # reuse the reader
        poly = comps[0]
        out.append(poly.get(1, GaussianRational(0)))
    return tuple(out)


def _cmd_search(args) -> int:
    text, r = _load_surface(args.surface)
    truncate = args.truncate if args.truncate else 4 * args.max_mult * 5
    cfg = SearchConfig(
        max_multiplicity=args.max_mult,
        jet_length=args.jet_len,
        coefficient_set=_parse_coeff_set(args.coeffs),
        truncation=truncate,
        probes=args.probes,
        seed=args.seed,
        budget=args.budget,
        threads=args.threads,
        first_component_zero=args.first_component_zero,
    )
    est = search_type(r, cfg)
    _emit(envelope("search", {"surface": text}, est.to_json()), args.format)
    return 0


def _cmd_lift(args) -> int:
    text, r = _load_surface(args.surface)
    jet = _load_curve(args.curve, r.n)
    result: dict = {"multiplicity": jet.multiplicity}
    if args.kind:
        kind = LiftKind(args.kind)
        M = jet.multiplicity
        need = kind.required_jet_length(M)
        lifted = lift_curve(jet.extended(max(jet.jet_length, need)), kind)
        result["kind"] = args.kind
        result["lifted"] = str(lifted)
    if args.target:
        M = jet.multiplicity
        work = jet.extended(max(jet.jet_length, 4 * M - M, 2 * M))
        attempt = construct_regular_witness(r, work, args.target)
        result["target"] = args.target
        result["witness"] = str(attempt.witness) if attempt.witness else None
        result["reason"] = attempt.reason
        result["detail"] = {
            k: (v.to_json() if hasattr(v, "to_json") else str(v))
            for k, v in attempt.detail.items()
        }
    if jet.multiplicity >= 2:
        ob = lifting_obstruction(r, jet)
        result["obstruction"] = ob.to_json()
    if not args.kind and not args.target:
        raise ContactOrderError("lift needs --kind or --target")
    _emit(envelope("lift", {"surface": text, "curve": args.curve}, result), args.format)
    return 0


def _cmd_normalform(args) -> int:
    text, r = _load_surface(args.surface)
    nf = to_normal_form(r, args.degree)
    support = cubic_support_check(nf)
    result = nf.to_json()
    result["cubic_support"] = {
        "consistent": support.consistent,
        "offending_triple": list(support.offending_triple or ()),
    }
    result["transform"] = [print_surface(w) for w in nf.transform.components]
    _emit(
        envelope("normalform", {"surface": text, "degree": args.degree}, result),
        args.format,
    )
    return 0


def _cmd_psc(args) -> int:
    text, r = _load_surface(args.surface)
    res = levi_sample(
        r,
        radius=args.radius,
        samples=args.samples,
        tol=args.tol,
        seed=args.seed,
        threads=args.threads,
    )
    _emit(
        envelope(
            "psc",
            {
                "surface": text,
                "radius": args.radius,
                "samples": args.samples,
                "tol": args.tol,
            },
            res.to_json(),
            seeds={"seed": args.seed},
        ),
        args.format,
    )
    return 0


def _cmd_psc_tangency(args) -> int:
    text, r = _load_surface(args.surface)
    jet = _load_curve(args.curve, r.n, needed_degree=args.truncate)
    res = pseudoconvex_tangency_test(r, jet, args.truncate)
    _emit(
        envelope(
            "psc-tangency",
            {"surface": text, "curve": args.curve, "truncate": args.truncate},
            res.to_json(),
        ),
        args.format,
    )
    return 0


def _cmd_verify_paper(args) -> int:
    payload, ok = verify_paper(
        threads=args.threads, seed=args.seed, probes_per_case=args.probes_per_case
    )
    _emit(envelope("verify-paper", {"seed": args.seed}, payload), args.format)
    return 0 if ok else 2


_HANDLERS = {
    "parse": _cmd_parse,
    "contact": _cmd_contact,
    "expand": _cmd_expand,
    "search": _cmd_search,
    "lift": _cmd_lift,
    "normalform": _cmd_normalform,
    "psc": _cmd_psc,
    "psc-tangency": _cmd_psc_tangency,
    "verify-paper": _cmd_verify_paper,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except ContactOrderError as err:
        print(f"contactorder: error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"contactorder: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
