"""Text inputs: family names, foliation blocks and ``web { ... }`` documents."""

from __future__ import annotations

import os

from .families import family
from .foliation import Foliation, parse_foliation
from .lines import LineInPlane
from .polycore import parse_poly
from .webleg import WebSpec, product


class InputError(ValueError):
    pass


def _split_top(text: str, sep: str = ";") -> list[str]:
    """Split on ``sep`` outside braces and angle brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "{<":
            depth += 1
        elif ch in "}>":
            depth -= 1
            if depth < 0:
                raise InputError("unbalanced closing bracket")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise InputError("unbalanced brackets")
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _scalar(text: str):
    c = parse_poly(text.strip(), ("x", "y", "z"))
    if not c.is_constant:
        raise InputError(f"{text!r} is not a constant")
    return c.constant_value()


def parse_line(text: str) -> LineInPlane:
    t = text.strip()
    if t.startswith("<") and t.endswith(">"):
        t = t[1:-1]
    vals = [v for v in t.split(",")]
    if len(vals) != 3:
        raise InputError(f"a line needs three coefficients, got {text!r}")
    a, b, c = (_scalar(v) for v in vals)
    if a == 0 and b == 0 and c == 0:
        raise InputError("the zero triple is not a line")
    return LineInPlane.make(a, b, c)


def parse_web(text: str) -> WebSpec:
    """``web { line: <a,b,c>; foliation: fermat:3; foliation: foliation { a=...; b=...; }; }``."""
    t = text.strip()
    if not t.startswith("web"):
        raise InputError("expected 'web {'")
    t = t[3:].strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise InputError("web block must be enclosed in braces")
    lines, fols = [], []
    for entry in _split_top(t[1:-1]):
        key, colon, val = entry.partition(":")
        if not colon:
            raise InputError(f"expected 'line:' or 'foliation:' entry, got {entry!r}")
        key = key.strip()
        if key == "line":
            lines.append(parse_line(val))
        elif key == "foliation":
            piece = resolve_piece(val.strip())
            if isinstance(piece, WebSpec):
                lines += piece.lines
                fols += piece.foliations
            elif isinstance(piece, Foliation):
                fols.append(piece)
            else:
                raise InputError(f"{val.strip()!r} is not a foliation")
        else:
            raise InputError(f"unknown web entry {key!r}")
    return WebSpec(lines, fols)


def resolve_piece(arg: str):
    """A family name, an inline block, or a path to a file holding one."""
    a = arg.strip()
    if os.path.isfile(a):
        with open(a, encoding="utf-8") as fh:
            return resolve_piece(fh.read())
    try:
        if a.startswith("web"):
            return parse_web(a)
        if a.startswith("foliation") or a.startswith("vectorfield"):
            return parse_foliation(a)
        return family(a)
    except InputError:
        raise
    except ValueError as e:
        raise InputError(str(e)) from e


def resolve_web(args) -> WebSpec:
    pieces = [resolve_piece(a) for a in args]
    if not pieces:
        raise InputError("no web given")
    return product(*pieces)


def resolve_foliation(args) -> Foliation:
    pieces = [resolve_piece(a) for a in args]
    if len(pieces) != 1 or not isinstance(pieces[0], Foliation):
        raise InputError("analyze needs exactly one foliation")
    return pieces[0]
