"""Plain-text formats for complexes, chains, cochains and integrands.

Complex files open with the header line `pplateau-complex v1`, then blocks
per dimension:

    dimension 1
    cell e1 measure 3/2 [label]
    face e1 v2 1
    face e1 v1 -1

`face` lines live in the block of the higher-dimensional cell and reference
cells one dimension lower. Chains and cochains are headed `chain <dim>` or
`cochain <dim>` followed by `<cell> <value>` lines; integrands are headed
`integrand identity|alpha <a>|table` with `<theta> <value>` lines for tables.
Rationals are written `p/q` (plain integers when whole), so emission and
parsing round-trip bit-exactly. `#` starts a comment; blank lines are fine.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .complexes import CellComplex, Chain, Cochain
from .errors import DomainError, ParseError
from .functionals import Integrand
from .numeric import format_rational, json_ready, parse_int, to_fraction

COMPLEX_HEADER = "pplateau-complex v1"
OUTPUT_FORMAT = "pplateau-out v1"


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_complex(text: str) -> CellComplex:
    it = _lines(text)
    try:
        _, first = next(it)
    except StopIteration:
        raise ParseError("empty complex file") from None
    if " ".join(first) != COMPLEX_HEADER:
        raise ParseError(f"expected header {COMPLEX_HEADER!r}, got {' '.join(first)!r}")
    cx = CellComplex()
    dim = None
    for lineno, tok in it:
        try:
            if tok[0] == "dimension":
                if len(tok) != 2:
                    raise ParseError("dimension line needs one integer")
                dim = parse_int(tok[1], "dimension")
                if dim < 0:
                    raise ParseError(f"negative dimension {dim}")
            elif tok[0] == "cell":
                if dim is None:
                    raise ParseError("cell line before any dimension block")
                if len(tok) < 4 or tok[2] != "measure":
                    raise ParseError("cell line must read: cell <name> measure <value> [label]")
                label = " ".join(tok[4:]) or None
                cx.add_cell(dim, tok[1], to_fraction(tok[3]), label)
            elif tok[0] == "face":
                if dim is None or dim < 1:
                    raise ParseError("face line outside a positive-dimension block")
                if len(tok) != 4:
                    raise ParseError("face line must read: face <cell> <face> <sign>")
                cx.add_face(dim, tok[1], tok[2], parse_int(tok[3], "incidence sign"))
            else:
                raise ParseError(f"unknown directive {tok[0]!r}")
        except (ParseError, DomainError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return cx


def emit_complex(cx: CellComplex) -> str:
    out = [COMPLEX_HEADER]
    for dim in cx.dims():
        out.append(f"dimension {dim}")
        for cell in cx.cells(dim):
            line = f"cell {cell.name} measure {format_rational(cell.measure)}"
            if cell.label:
                line += f" {cell.label}"
            out.append(line)
        if dim >= 1:
            for cell, face, sign in cx.face_entries(dim):
                out.append(f"face {cell} {face} {sign}")
    return "\n".join(out) + "\n"


def _parse_valued(text: str, kind: str):
    it = _lines(text)
    try:
        _, head = next(it)
    except StopIteration:
        raise ParseError(f"empty {kind} file") from None
    if len(head) != 2 or head[0] != kind:
        raise ParseError(f"expected header '{kind} <dim>', got {' '.join(head)!r}")
    dim = parse_int(head[1], "dimension")
    values: dict[str, Fraction] = {}
    for lineno, tok in it:
        if len(tok) != 2:
            raise ParseError(f"line {lineno}: expected '<cell> <value>'")
        if tok[0] in values:
            raise ParseError(f"line {lineno}: duplicate entry for {tok[0]!r}")
        try:
            values[tok[0]] = to_fraction(tok[1])
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return dim, values


def parse_chain(text: str) -> Chain:
    dim, values = _parse_valued(text, "chain")
    try:
        return Chain(dim, values)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def parse_cochain(text: str) -> Cochain:
    dim, values = _parse_valued(text, "cochain")
    try:
        return Cochain(dim, values)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def emit_chain(chain: Chain) -> str:
    out = [f"chain {chain.dim}"]
    for name, v in chain.items():
        out.append(f"{name} {format_rational(Fraction(v))}")
    return "\n".join(out) + "\n"


def emit_cochain(phi: Cochain) -> str:
    out = [f"cochain {phi.dim}"]
    for name, v in phi.items():
        out.append(f"{name} {format_rational(v)}")
    return "\n".join(out) + "\n"


def parse_integrand(text: str) -> Integrand:
    it = _lines(text)
    try:
        _, head = next(it)
    except StopIteration:
        raise ParseError("empty integrand file") from None
    if head[0] != "integrand" or len(head) < 2:
        raise ParseError("expected header 'integrand identity|alpha <a>|table'")
    kind = head[1]
    try:
        if kind == "identity":
            if len(head) != 2:
                raise ParseError("identity takes no arguments")
            if next(it, None) is not None:
                raise ParseError("identity integrand has no body")
            return Integrand.identity()
        if kind == "alpha":
            if len(head) != 3:
                raise ParseError("alpha needs one exponent")
            if next(it, None) is not None:
                raise ParseError("alpha integrand has no body")
            return Integrand.power(to_fraction(head[2]))
        if kind == "table":
            if len(head) != 2:
                raise ParseError("table header takes no arguments")
            points = []
            for lineno, tok in it:
                if len(tok) != 2:
                    raise ParseError(f"line {lineno}: expected '<theta> <value>'")
                points.append((parse_int(tok[0], "table position"), to_fraction(tok[1])))
            return Integrand.table(points)
    except DomainError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown integrand kind {kind!r}")


def emit_integrand(h: Integrand) -> str:
    if h.kind == "identity":
        return "integrand identity\n"
    if h.kind == "alpha":
        return f"integrand alpha {format_rational(h.alpha)}\n"
    lines = ["integrand table"]
    for t, v in h.points:
        lines.append(f"{t} {format_rational(v)}")
    return "\n".join(lines) + "\n"


# -- path helpers and structured output --------------------------------------


def load_complex(path: Union[str, Path]) -> CellComplex:
    return parse_complex(Path(path).read_text())


def load_chain(path: Union[str, Path]) -> Chain:
    return parse_chain(Path(path).read_text())


def load_cochain(path: Union[str, Path]) -> Cochain:
    return parse_cochain(Path(path).read_text())


def load_integrand(path: Union[str, Path]) -> Integrand:
    return parse_integrand(Path(path).read_text())


def render_output(command: str, payload: dict) -> str:
    """Stable machine-readable envelope: sorted keys, rationals as 'p/q'."""
    doc = {"format": OUTPUT_FORMAT, "command": command}
    doc.update(payload)
    return json.dumps(json_ready(doc), sort_keys=True, indent=2) + "\n"
