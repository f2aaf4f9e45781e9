"""Text formats: schema files (`R/2`), database files (`R(a,b).`), and the
rule syntax for queries (`Ans(x,y) :- R(x,y), S(y,z).`).

All formats are line oriented, whitespace-insensitive, and support `#`
comments.  Parse errors carry the offending line number.
"""
from __future__ import annotations

import re

from .errors import ParseError, UnknownSymbol
from .model import ConjunctiveQuery, ConstantPool, Database, Schema, cq, validate_database

_SYMBOL_RE = re.compile(r"^([A-Za-z_]\w*)\s*/\s*(\d+)$")
_FACT_RE = re.compile(r"^([A-Za-z_]\w*)\s*\(([^()]*)\)\s*\.$")
_CONST_RE = re.compile(r"^[\w.\-]+$")
_VAR_RE = re.compile(r"^[A-Za-z]\w*$")
_RULE_RE = re.compile(r"^([A-Za-z_]\w*)\s*\(([^()]*)\)\s*:-\s*(.*?)\s*\.?$", re.S)
_BODY_ATOM_RE = re.compile(r"([A-Za-z_]\w*)\s*\(([^()]*)\)")


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_schema(text: str) -> Schema:
    symbols: list[tuple[str, int]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        m = _SYMBOL_RE.match(line)
        if not m:
            raise ParseError(f"expected `Name/arity`, got {line!r}", line=no)
        name, ar = m.group(1), int(m.group(2))
        if ar < 1:
            raise ParseError(f"arity of {name} must be >= 1", line=no)
        symbols.append((name, ar))
    if not symbols:
        raise ParseError("schema file declares no symbols")
    return Schema(tuple(symbols))


def parse_database(text: str, schema: Schema, pool: ConstantPool | None = None) -> Database:
    raw: dict[str, list[tuple[str, ...]]] = {name: [] for name in schema.names}
    for no, rawline in enumerate(text.splitlines(), start=1):
        line = _strip(rawline)
        if not line:
            continue
        m = _FACT_RE.match(line)
        if not m:
            raise ParseError(f"expected `R(a,b).`, got {line!r}", line=no)
        name, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
        if name not in schema:
            raise ParseError(f"unknown relation symbol {name!r}", line=no)
        if args == [""]:
            raise ParseError(f"empty argument list in {line!r}", line=no)
        for a in args:
            if not _CONST_RE.match(a):
                raise ParseError(f"bad constant token {a!r}", line=no)
        if len(args) != schema.arity(name):
            raise ParseError(f"{name} expects arity {schema.arity(name)}, got {len(args)}", line=no)
        raw[name].append(tuple(args))
    return validate_database(schema, raw, pool)


def parse_query(text: str, schema: Schema) -> ConjunctiveQuery:
    """Parse rule syntax.  Arguments must be variables (identifiers starting
    with a letter); constants are not permitted in queries."""
    body_lines = []
    for rawline in text.splitlines():
        line = _strip(rawline)
        if line:
            body_lines.append(line)
    source = " ".join(body_lines)
    m = _RULE_RE.match(source)
    if not m:
        raise ParseError(f"expected `Ans(...) :- atom, ...`, got {source!r}")
    head_args = [a.strip() for a in m.group(2).split(",")] if m.group(2).strip() else []
    for v in head_args:
        if not _VAR_RE.match(v):
            raise ParseError(f"bad head variable {v!r}")
    atoms: list[tuple[str, list[str]]] = []
    body = m.group(3)
    consumed = 0
    for am in _BODY_ATOM_RE.finditer(body):
        sym, arglist = am.group(1), [a.strip() for a in am.group(2).split(",")]
        if arglist == [""]:
            raise ParseError(f"empty argument list in atom {sym}()")
        for v in arglist:
            if not _VAR_RE.match(v):
                raise ParseError(f"bad variable {v!r} in atom {sym} (constants are not permitted)")
        if sym not in schema:
            raise UnknownSymbol(f"unknown relation symbol {sym!r}")
        atoms.append((sym, arglist))
        consumed += 1
    if consumed == 0:
        raise ParseError("query body has no atoms")
    leftover = _BODY_ATOM_RE.sub("", body).replace(",", "").strip()
    if leftover:
        raise ParseError(f"trailing junk in query body: {leftover!r}")
    return cq(head_args, atoms, schema)


def format_tuple(db: Database, tup: tuple[int, ...]) -> str:
    return "(" + ",".join(db.display(c) for c in tup) + ")"


def format_query(q: ConjunctiveQuery) -> str:
    head = ",".join(q.var_name(v) for v in q.head)
    body = ", ".join(f"{a.symbol}({','.join(q.var_name(v) for v in a.args)})" for a in q.atoms)
    return f"Ans({head}) :- {body}."
