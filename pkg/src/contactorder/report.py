"""Canonical JSON reports.

Serialization rules: keys sorted, exact rationals as "p/q" strings,
Gaussian rationals as {"re": ..., "im": ...}; the only floats are sampler
eigenvalues, kept in the sampler block and tagged by their key names.
The output is a deterministic byte stream for fixed inputs and seeds.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .rational import GaussianRational

SCHEMA_VERSION = "1"


def frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else str(q)


def gr_json(c: GaussianRational) -> dict:
    return {"re": frac_str(c.re), "im": frac_str(c.im)}


def envelope(command: str, inputs: dict, result: dict, **extra) -> dict:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": inputs,
        "result": result,
    }
    for key, value in extra.items():
        if value is not None:
            payload[key] = value
    return payload


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def render_text(payload, indent: int = 0) -> str:
    """Pretty text rendering of a report payload, one key per line."""
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {value}")
    else:
        lines.append(f"{pad}{payload}")
    return "\n".join(lines)
