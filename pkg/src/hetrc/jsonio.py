"""Canonical JSON helpers.

Exact rationals travel as ``{"num": int, "den": int}``; plain integers are
accepted on input. Dumps are byte-stable (sorted keys, fixed separators,
trailing newline) so identical values always serialize identically.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import ValidationError


def frac_to_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def frac_from_json(obj) -> Fraction:
    if isinstance(obj, bool):
        raise ValidationError(f"expected a rational, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        try:
            return Fraction(int(obj["num"]), int(obj["den"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rational {obj!r}: {exc}") from None
    raise ValidationError(f"expected int or {{num,den}}, got {obj!r}")


def frac_str(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
