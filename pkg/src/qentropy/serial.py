"""JSON helpers: floats written with 17 significant digits, exact hex forms for big floats."""
from __future__ import annotations

import json
import math
import re

import mpmath

_MARK = "\x00f17:"
_MARK_RE = re.compile(r'"\\u0000f17:([^"]*)"')


def _mark_floats(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return _MARK + format(obj, ".17g")
    if isinstance(obj, mpmath.mpf):
        return _mark_floats(float(obj))
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(v) for v in obj]
    return obj


def dumps(obj, indent: int | None = 2) -> str:
    """json.dumps, except every float is written as a 17-significant-digit literal.

    Non-finite floats become null.
    """
    seps = (",", ":") if indent is None else (",", ": ")
    text = json.dumps(_mark_floats(obj), indent=indent, separators=seps)
    return _MARK_RE.sub(lambda m: m.group(1), text)


def hexfloat(x) -> str | None:
    """Exact hexadecimal form 'sign0xMANTpEXP' of a float or mpf, value = MANT * 2**EXP."""
    if x is None:
        return None
    if not isinstance(x, mpmath.mpf):
        x = float(x)
        if not math.isfinite(x):
            return None
        x = mpmath.mpf(x)  # exact for doubles
    if x == 0:
        return "0x0p0"
    neg, man, exp, _ = x._mpf_
    sign = "-" if neg else ""
    return f"{sign}0x{int(man):x}p{int(exp)}"


def from_hexfloat(s: str) -> mpmath.mpf:
    sign = -1 if s.startswith("-") else 1
    body = s.lstrip("-")
    man, exp = body[2:].split("p")
    with mpmath.workprec(max(53, 4 * len(man) + 8)):
        return sign * mpmath.ldexp(mpmath.mpf(int(man, 16)), int(exp))
