"""Problem files and substitution text.

A problem file is line oriented::

    # comment
    vars: a:atom, x:list, y:list
    eq: a:x = y:2

Substitutions are written ``{x -> a:y'1, y -> empty}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .engine import is_fresh_name, validate_equation
from .errors import InputError, ParseError
from .expr import EMPTY, IntConst, StrConst, Var, VarType, format_expr
from .subst import Substitution

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<int>-?\d+)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*(?:'[0-9]*)*)
  | (?P<punct>[:=,{}])
    """,
    re.VERBOSE,
)

_TYPES = {t.value: t for t in VarType}


@dataclass
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int | None = None, offset: int = 0) -> list:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            out.append(Token(value if kind == "punct" else kind, value, offset + pos + 1))
        pos = m.end()
    return out


class _Stream:
    def __init__(self, tokens, line, end_column):
        self.tokens, self.i, self.line, self.end = tokens, 0, line, end_column

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, expected: str | None = None) -> Token:
        tok = self.peek()
        if tok is None:
            what = f"expected {expected!r}" if expected else "unexpected end of input"
            raise ParseError(what, self.line, self.end)
        if expected is not None and tok.kind != expected:
            raise ParseError(f"expected {expected!r}, found {tok.text!r}", self.line, tok.column)
        self.i += 1
        return tok

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.text!r}", self.line, tok.column)


def _unescape(lit: str) -> str:
    return re.sub(r"\\(.)", r"\1", lit[1:-1])


def _unit(st: _Stream, decls: dict, allow_negative: bool, allow_fresh: bool):
    tok = st.next()
    if tok.kind == "int":
        if tok.text.startswith("-") and not allow_negative:
            raise ParseError("negative literals are not allowed in equations", st.line, tok.column)
        return IntConst(int(tok.text))
    if tok.kind == "str":
        return StrConst(_unescape(tok.text))
    if tok.kind == "id":
        if tok.text == "empty":
            return EMPTY
        if tok.text in decls:
            return decls[tok.text]
        if allow_fresh and is_fresh_name(tok.text):
            return Var(tok.text, VarType.LIST)
        raise ParseError(f"undeclared variable {tok.text}", st.line, tok.column)
    raise ParseError(f"expected an expression, found {tok.text!r}", st.line, tok.column)


def _expr(st: _Stream, decls, allow_negative=False, allow_fresh=False) -> tuple:
    units = []
    while True:
        u = _unit(st, decls, allow_negative, allow_fresh)
        if u is not EMPTY:
            units.append(u)
        tok = st.peek()
        if tok is None or tok.kind != ":":
            return tuple(units)
        st.next()


def parse_expression(text: str, decls: dict, *, allow_negative: bool = False, allow_fresh: bool = False) -> tuple:
    """Parse a colon-separated expression over declared variables."""
    st = _Stream(tokenize(text), None, len(text) + 1)
    e = _expr(st, decls, allow_negative, allow_fresh)
    st.done()
    return e


@dataclass
class ProblemFile:
    declarations: list = field(default_factory=list)
    equations: list = field(default_factory=list)

    @property
    def vars(self) -> dict:
        return {name: Var(name, vt) for name, vt in self.declarations}


def _declarations(st: _Stream, decls: dict, out: list) -> None:
    while True:
        name = st.next("id")
        if name.text == "empty":
            raise ParseError("'empty' is a keyword", st.line, name.column)
        if is_fresh_name(name.text):
            raise ParseError(
                f"{name.text}: names ending in a prime and digits are reserved for fresh variables",
                st.line,
                name.column,
            )
        st.next(":")
        ty = st.next("id")
        if ty.text not in _TYPES:
            raise ParseError(f"unknown type {ty.text!r}", st.line, ty.column)
        if name.text in decls:
            raise ParseError(f"duplicate declaration of {name.text}", st.line, name.column)
        v = Var(name.text, _TYPES[ty.text])
        decls[name.text] = v
        out.append((name.text, v.vtype))
        tok = st.peek()
        if tok is None:
            return
        st.next(",")


def parse_problem(text: str, *, validate: bool = True) -> ProblemFile:
    """Parse a problem file; with ``validate`` also check the equation shapes."""
    pf = ProblemFile()
    decls: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = re.match(r"\s*(vars|eq)\s*:", line)
        if m is None:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'vars:' or 'eq:'", lineno, col)
        body = line[m.end():]
        st = _Stream(tokenize(body, lineno, m.end()), lineno, len(line) + 1)
        if m.group(1) == "vars":
            if st.peek() is not None:
                _declarations(st, decls, pf.declarations)
        else:
            lhs = _expr(st, decls)
            st.next("=")
            rhs = _expr(st, decls)
            st.done()
            pf.equations.append((lhs, rhs))
    if validate:
        validate_problem(pf)
    return pf


def _strip_comment(line: str) -> str:
    in_str = esc = False
    for i, ch in enumerate(line):
        if esc:
            esc = False
        elif ch == "\\":
            esc = in_str
        elif ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            return line[:i]
    return line


def validate_problem(pf: ProblemFile) -> None:
    """Simplicity, left-linearity, and variable-disjointness across equations."""
    owner: dict = {}
    for i, (lhs, rhs) in enumerate(pf.equations, start=1):
        validate_equation(lhs, rhs)
        mine = {u.name for u in lhs + rhs if isinstance(u, Var)}
        shared = sorted(n for n in mine if n in owner)
        if shared:
            j = min(owner[n] for n in shared)
            noun = "variable" if len(shared) == 1 else "variables"
            raise InputError(
                f"{noun} {', '.join(shared)} shared by equations {j} and {i}; "
                "equations of a system must not share variables"
            )
        owner.update(dict.fromkeys(mine, i))


def format_substitution(s) -> str:
    items = sorted(s.items(), key=lambda kv: kv[0].name)
    return "{" + ", ".join(f"{v.name} -> {format_expr(e)}" for v, e in items) + "}"


def parse_substitution(text: str, decls: dict) -> Substitution:
    """Parse ``{x -> e, ...}``; names with a fresh suffix are list variables."""
    st = _Stream(tokenize(text), None, len(text) + 1)
    st.next("{")
    bindings = {}
    if st.peek() is not None and st.peek().kind == "}":
        st.next()
        st.done()
        return Substitution()
    while True:
        tok = st.next("id")
        if tok.text in decls:
            var = decls[tok.text]
        elif is_fresh_name(tok.text):
            var = Var(tok.text, VarType.LIST)
        else:
            raise ParseError(f"undeclared variable {tok.text}", None, tok.column)
        if var in bindings:
            raise ParseError(f"{tok.text} is bound twice", None, tok.column)
        st.next("arrow")
        bindings[var] = _expr(st, decls, allow_negative=True, allow_fresh=True)
        if st.next().kind == "}":
            break
        if st.tokens[st.i - 1].kind != ",":
            raise ParseError("expected ',' or '}'", None, st.tokens[st.i - 1].column)
    st.done()
    return Substitution(bindings)
