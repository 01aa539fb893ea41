"""List expressions over constants, typed variables, ``empty`` and ``:``.

Expressions come in two shapes.  The tree shape (``Empty``, ``IntConst``,
``StrConst``, ``Var``, ``Concat``) mirrors the surface syntax.  The normal
shape is a plain tuple of units (constants and variables) in which
associativity is implicit and ``empty`` has disappeared; the empty tuple is
the empty list.  Every function here accepts either shape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, NamedTuple, Union


class VarType(enum.Enum):
    INT = "int"
    STRING = "string"
    ATOM = "atom"
    LIST = "list"

    def __str__(self) -> str:
        return self.value


# Strict supertypes of each type (int < atom < list, string < atom < list).
_ABOVE = {
    VarType.INT: frozenset({VarType.ATOM, VarType.LIST}),
    VarType.STRING: frozenset({VarType.ATOM, VarType.LIST}),
    VarType.ATOM: frozenset({VarType.LIST}),
    VarType.LIST: frozenset(),
}


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def compare_types(a: VarType, b: VarType) -> Ordering:
    if a is b:
        return Ordering.EQUAL
    if b in _ABOVE[a]:
        return Ordering.LESS
    if a in _ABOVE[b]:
        return Ordering.GREATER
    return Ordering.INCOMPARABLE


def type_leq(a: VarType, b: VarType) -> bool:
    return a is b or b in _ABOVE[a]


def type_lt(a: VarType, b: VarType) -> bool:
    return b in _ABOVE[a]


@dataclass(frozen=True)
class Empty:
    def __str__(self) -> str:
        return "empty"


EMPTY = Empty()


@dataclass(frozen=True)
class IntConst:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class StrConst:
    value: str

    def __str__(self) -> str:
        escaped = self.value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'


@dataclass(frozen=True, order=True)
class Var:
    name: str
    vtype: VarType = VarType.LIST

    def __str__(self) -> str:
        return self.name

    @property
    def is_list(self) -> bool:
        return self.vtype is VarType.LIST


@dataclass(frozen=True)
class Concat:
    left: "Expression"
    right: "Expression"

    def __str__(self) -> str:
        return f"{self.left}:{self.right}"


Unit = Union[IntConst, StrConst, Var]
NormalExpr = tuple  # tuple[Unit, ...]
Expression = Union[Empty, IntConst, StrConst, Var, Concat, tuple]


class TerminationMeasure(NamedTuple):
    """Lexicographically ordered rank of an equation (see ``engine.measure``)."""

    n1: int
    n2: int
    n3: int
    n4: int


def concat(*parts: Expression) -> Expression:
    """Right-nested concatenation of ``parts``; ``concat()`` is ``empty``."""
    if not parts:
        return EMPTY
    return reduce(lambda acc, p: Concat(p, acc), reversed(parts[:-1]), parts[-1])


def normalize(e: Expression) -> NormalExpr:
    """Flatten concatenation and drop ``empty`` units."""
    if isinstance(e, tuple):
        if all(isinstance(u, (IntConst, StrConst, Var)) for u in e):
            return e
        return tuple(u for part in e for u in normalize(part))
    out: list = []
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Concat):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, tuple):
            stack.extend(reversed(node))
        elif isinstance(node, Empty):
            continue
        elif isinstance(node, (IntConst, StrConst, Var)):
            out.append(node)
        else:
            raise TypeError(f"not an expression: {node!r}")
    return tuple(out)


def denormalize(units: Iterable[Unit]) -> Expression:
    """Rebuild a right-nested tree; the inverse of ``normalize`` up to AU."""
    return concat(*tuple(units))


def unit_type(u: Unit) -> VarType:
    if isinstance(u, Var):
        return u.vtype
    if isinstance(u, IntConst):
        return VarType.INT
    return VarType.STRING


def type_of(e: Expression) -> VarType:
    units = normalize(e)
    if len(units) == 1:
        return unit_type(units[0])
    return VarType.LIST


def is_constant(u: Unit) -> bool:
    return not isinstance(u, Var)


def is_list_var(u) -> bool:
    return isinstance(u, Var) and u.vtype is VarType.LIST


def size(e: Expression) -> int:
    """Size counting one per unit and one per concatenation."""
    k = len(normalize(e))
    return 2 * k - 1 if k else 0


def tree_size(e: Expression) -> int:
    """Size of an unnormalized tree, where ``empty`` counts zero."""
    if isinstance(e, tuple):
        return size(e)
    if isinstance(e, Concat):
        return tree_size(e.left) + tree_size(e.right) + 1
    if isinstance(e, Empty):
        return 0
    return 1


def variables(e: Expression) -> frozenset:
    return frozenset(u for u in normalize(e) if isinstance(u, Var))


def list_var_occurrences(e: Expression) -> int:
    return sum(1 for u in normalize(e) if is_list_var(u))


def is_simple(e: Expression) -> bool:
    """At most one occurrence of a list variable (operators cannot be built)."""
    return list_var_occurrences(e) <= 1


def au_equal(e1: Expression, e2: Expression) -> bool:
    return normalize(e1) == normalize(e2)


def format_expr(e: Expression) -> str:
    units = normalize(e)
    if not units:
        return "empty"
    return ":".join(str(u) for u in units)
