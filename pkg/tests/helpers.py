"""Shorthand for building test inputs from text."""

from auunify.expr import Var, VarType
from auunify.syntax import parse_expression, parse_substitution

L, A, I, S = VarType.LIST, VarType.ATOM, VarType.INT, VarType.STRING

DECLS = {
    name: Var(name, vt)
    for names, vt in (
        ("x y z w x' y' z'", L),
        ("a b c", A),
        ("n m k m' p p'", I),
        ("s t", S),
    )
    for name in names.split()
}


def ex(text: str, decls=None):
    """Parse an expression over the shared declarations."""
    return parse_expression(text, decls or DECLS, allow_negative=True, allow_fresh=True)


def sub(text: str, decls=None):
    return parse_substitution(text, decls or DECLS)


def var(name: str) -> Var:
    return DECLS[name]


def eq(text: str, decls=None):
    lhs, rhs = text.split("=")
    return ex(lhs, decls), ex(rhs, decls)
