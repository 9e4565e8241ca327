"""Shared helpers: canonical JSON documents, content digests, decimal-exact fractions."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction


def canonical_json(obj) -> str:
    """Serialize to a deterministic JSON text (sorted keys, fixed separators).

    Floats go through Python's shortest round-trip repr, so identical inputs
    always produce byte-identical documents.
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def pretty_json(obj) -> str:
    """Deterministic, human-readable JSON (used for saved documents)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def digest_obj(obj) -> str:
    return digest_text(canonical_json(obj))


def decimal_fraction(x: float | int | Fraction) -> Fraction:
    """The exact rational denoted by a float's shortest decimal representation.

    Stored probabilities are serialized as shortest round-trip decimals, so the
    value a document carries for 0.9 is exactly 9/10. Cost and clearance
    arithmetic happens on these decimals, keeping boundary comparisons such as
    J = T_J exact instead of drifting by float rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))
