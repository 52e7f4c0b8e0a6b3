"""Shape input parsing and JSON report envelopes.

Scalars are written as ``{"rational": "p/q"}`` or
``{"interval": ["lo", "hi"]}`` with rational endpoint strings, so reports
round-trip without any binary floating point.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Any, Iterable

from . import __version__
from .analyzer import figure8_shape
from .lattice import CuspShape, Slope, Vec2, normalize_slope
from .scalar import Scalar, get_precision

SCHEMA_VERSION = 1

BUILTIN_SHAPES = {"fig8": figure8_shape}


class ParseError(ValueError):
    """Malformed user input (shape, slope, number or file)."""


def parse_number(text: str, radius: str | None = None) -> Scalar:
    """Parse an exact rational or a decimal with an uncertainty radius.

    ``"3"`` and ``"7/2"`` are exact.  A decimal such as ``"1.732"`` becomes
    ``[1.732 - r, 1.732 + r]`` where ``r`` is the explicit ``radius`` or, when
    absent, half a unit in the last written digit.
    """
    s = str(text).strip()
    try:
        if "/" in s or _is_integer_literal(s):
            value = Fraction(s)
            if radius is None:
                return Scalar.exact(value)
            r = Fraction(Decimal(str(radius)))
            return Scalar.interval(value - r, value + r)
        d = Decimal(s)
        if not d.is_finite():
            raise ParseError(f"not a finite number: {text!r}")
        centre = Fraction(d)
        if radius is None:
            r = Fraction(1, 2) * Fraction(Decimal((0, (1,), d.as_tuple().exponent)))
        else:
            r = Fraction(Decimal(str(radius)))
    except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"cannot parse number {text!r}") from exc
    if r < 0:
        raise ParseError(f"negative uncertainty radius {radius!r}")
    return Scalar.interval(centre - r, centre + r)


def _is_integer_literal(s: str) -> bool:
    body = s[1:] if s[:1] in "+-" else s
    return body.isdigit()


def parse_shape(spec: str, name: str | None = None) -> CuspShape:
    """``"fig8"`` or ``"mx,my,lx,ly"``.  Degenerate lattices propagate."""
    key = spec.strip()
    if key in BUILTIN_SHAPES:
        return BUILTIN_SHAPES[key]()
    parts = key.split(",")
    if len(parts) != 4:
        raise ParseError(f"shape must be a built-in name or mx,my,lx,ly; got {spec!r}")
    mx, my, lx, ly = (parse_number(p) for p in parts)
    return CuspShape(Vec2(mx, my), Vec2(lx, ly), name or key)


def parse_slope(text: str) -> Slope:
    """``"p/q"`` or an integer ``"n"`` (meaning ``n/1``)."""
    s = text.strip()
    try:
        if "/" in s:
            p, q = (int(x) for x in s.split("/"))
        else:
            p, q = int(s), 1
    except ValueError as exc:
        raise ParseError(f"cannot parse slope {text!r}") from exc
    try:
        return normalize_slope(p, q)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_shape_file(text: str) -> list[CuspShape]:
    """Shapes from a ShapeFile JSON document (``{"entries": [...]}`` or a bare list)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    entries = doc.get("entries") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise ParseError("shape file must hold a list of entries")
    shapes = []
    for i, entry in enumerate(entries):
        try:
            radius = entry.get("uncertainty")
            mer = [parse_number(v, radius) for v in entry["meridian"]]
            lon = [parse_number(v, radius) for v in entry["longitude"]]
            name = entry.get("name", f"entry-{i}")
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"entry {i}: malformed ({exc})") from exc
        if len(mer) != 2 or len(lon) != 2:
            raise ParseError(f"entry {i}: meridian and longitude need two components")
        shapes.append(CuspShape(Vec2(*mer), Vec2(*lon), name))
    return shapes


def shape_entry(shape: CuspShape) -> dict:
    """Inverse of :func:`load_shape_file` for exact shapes."""
    comps = [shape.meridian.x, shape.meridian.y, shape.longitude.x, shape.longitude.y]
    if not all(c.is_exact for c in comps):
        raise ValueError("only exact shapes can be written as a ShapeFile entry")
    vals = [str(c.value) for c in comps]
    return {"name": shape.name or "", "meridian": vals[:2], "longitude": vals[2:]}


# -- encoding ------------------------------------------------------------


def encode_scalar(x: Scalar) -> dict:
    if x.is_exact:
        return {"rational": str(x.lo)}
    return {"interval": [str(x.lo), str(x.hi)]}


def decode_scalar(obj: dict) -> Scalar:
    if "rational" in obj:
        return Scalar.exact(Fraction(obj["rational"]))
    lo, hi = obj["interval"]
    return Scalar.interval(Fraction(lo), Fraction(hi))


def _is_scalar_dict(obj) -> bool:
    return isinstance(obj, dict) and (
        set(obj) == {"rational"} or set(obj) == {"interval"})


def to_jsonable(obj: Any) -> Any:
    """Recursively convert reports, scalars and slopes to JSON-ready values."""
    if isinstance(obj, Scalar):
        return encode_scalar(obj)
    if isinstance(obj, Slope):
        return {"p": obj.p, "q": obj.q}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def decode_scalars(obj: Any) -> Any:
    """Walk decoded JSON and turn every scalar object back into a Scalar."""
    if _is_scalar_dict(obj):
        return decode_scalar(obj)
    if isinstance(obj, dict):
        return {k: decode_scalars(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode_scalars(v) for v in obj]
    return obj


def envelope(command: Iterable[str], results: Any) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool": "cuspslope",
        "version": __version__,
        "command": list(command),
        "precision_bits": get_precision(),
        "results": to_jsonable(results),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def loads(text: str) -> dict:
    return decode_scalars(json.loads(text))
