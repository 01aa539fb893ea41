"""Path selection: given a known unifier, pick the derivation that covers it.

Both sides of the equation are expanded into tapes where each variable takes
as many cells as its value under the known unifier ``delta`` has units.  Two
pointers then walk the tapes and, at each step, the kinds of the two cells
under them decide which rule to select.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .engine import (
    FreshSupply,
    RuleName,
    Status,
    UnificationProblem,
    check_failure,
    fresh_root,
    make_problem,
    successors,
)
from .errors import InputError, VerificationError
from .expr import Expression, Var, is_list_var, normalize, type_lt
from .subst import GeneralityWitness, Substitution, apply, more_general, restrict


@dataclass(frozen=True)
class PseudoVar:
    """Cell ``index`` (1-based) of a variable's expansion."""

    parent: Var
    index: int

    def __str__(self) -> str:
        return f"{self.parent.name}_{self.index}"


@dataclass(frozen=True)
class EmptyVar:
    """A variable that the known unifier maps to ``empty``."""

    parent: Var

    def __str__(self) -> str:
        return f"{self.parent.name}_e"


@dataclass(frozen=True)
class AtomCell:
    unit: object

    def __str__(self) -> str:
        return str(self.unit)


@dataclass(frozen=True)
class Pad:
    def __str__(self) -> str:
        return "Δ"


PAD = Pad()


class SymbolKind(enum.Enum):
    LIST_VAR = "ListVar"
    ATOM_VAR = "AtomVar"
    ATOM_EXPR = "AtomExpr"
    EMPTY_LIST_VAR = "EmptyListVar"
    EMPTY = "Empty"


ExpandedString = tuple  # tuple of cells


def _expand(side, delta) -> list:
    cells = []
    for u in side:
        if isinstance(u, Var):
            n = len(apply(delta, (u,)))
            if n == 0:
                cells.append(EmptyVar(u))
            else:
                cells.extend(PseudoVar(u, i) for i in range(1, n + 1))
        else:
            cells.append(AtomCell(u))
    return cells


def preprocess(s: Expression, t: Expression, delta: Substitution) -> tuple:
    """Expand both sides under ``delta`` and pad to a common length.

    Both tapes get at least one trailing pad cell, so the end of the input
    is always visible as a cell of kind ``Empty``.
    """
    s, t = normalize(s), normalize(t)
    if apply(delta, s) != apply(delta, t):
        raise InputError("the given substitution is not a unifier of the equation")
    a, b = _expand(s, delta), _expand(t, delta)
    width = max(len(a), len(b))
    if width:
        width += 1
    a += [PAD] * (width - len(a))
    b += [PAD] * (width - len(b))
    return tuple(a), tuple(b)


def _cell(tape, k):
    return tape[k] if 0 <= k < len(tape) else PAD


def lookahead_count(tape, k: int) -> int:
    """Number of cells right of ``k`` that belong to the same list variable."""
    c = _cell(tape, k)
    if not isinstance(c, PseudoVar):
        return 0
    n = 0
    while True:
        d = _cell(tape, k + n + 1)
        if isinstance(d, PseudoVar) and d.parent == c.parent and d.index == c.index + n + 1:
            n += 1
        else:
            return n


def symbol_type(tape, k: int) -> SymbolKind:
    c = _cell(tape, k)
    if isinstance(c, PseudoVar):
        return SymbolKind.LIST_VAR if is_list_var(c.parent) else SymbolKind.ATOM_VAR
    if isinstance(c, EmptyVar):
        return SymbolKind.EMPTY_LIST_VAR
    if isinstance(c, AtomCell):
        return SymbolKind.ATOM_EXPR
    return SymbolKind.EMPTY


def look_ahead(tape, k: int) -> bool:
    """Whether anything but padding follows the symbol (or its block) at ``k``."""
    skip = lookahead_count(tape, k) if symbol_type(tape, k) is SymbolKind.LIST_VAR else 0
    return not isinstance(_cell(tape, k + skip + 1), Pad)


@dataclass
class SelectionStep:
    rule: RuleName
    case: str
    m: int
    n: int
    swapped: bool


@dataclass
class SelectionSequence:
    selections: tuple
    steps: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.selections)

    def __len__(self) -> int:
        return len(self.selections)

    @property
    def cases(self) -> list:
        return [st.case for st in self.steps]

    def __str__(self) -> str:
        return " ".join(str(r) for r in self.selections)


class SelectionError(VerificationError):
    """The case analysis reached a combination that a unifier rules out."""


LV, AV, AE, ELV, EMP = (
    SymbolKind.LIST_VAR,
    SymbolKind.ATOM_VAR,
    SymbolKind.ATOM_EXPR,
    SymbolKind.EMPTY_LIST_VAR,
    SymbolKind.EMPTY,
)

_GRID = {
    (LV, LV): 1, (LV, AV): 2, (LV, AE): 3, (LV, ELV): 4, (LV, EMP): 5,
    (AV, LV): 6, (AV, AV): 7, (AV, AE): 8, (AV, ELV): 9, (AV, EMP): 10,
    (AE, LV): 11, (AE, AV): 12, (AE, AE): 13, (AE, ELV): 14, (AE, EMP): 15,
    (ELV, LV): 16, (ELV, AV): 17, (ELV, AE): 18, (ELV, ELV): 19, (ELV, EMP): 20,
    (EMP, LV): 21, (EMP, AV): 22, (EMP, AE): 23, (EMP, ELV): 24, (EMP, EMP): 25,
}


def select(s: Expression, t: Expression, delta: Substitution) -> SelectionSequence:
    """Compute the rule sequence leading to a unifier at least as general as ``delta``."""
    s, t = normalize(s), normalize(t)
    sa, ta = preprocess(s, t, delta)
    m = n = 0
    swapped = False
    # Atom variables already solved on the path; later cells read as their value.
    bound: dict = {}
    out, steps = [], []
    limit = 4 * (len(sa) + len(ta)) + 8

    def pick(rule, case):
        out.append(rule)
        steps.append(SelectionStep(rule, case, m, n, swapped))

    def atom_value(tape, k):
        c = _cell(tape, k)
        return _resolve(c.parent, bound) if isinstance(c, PseudoVar) else c.unit

    def bind_atom(k_s, k_t):
        rep, value = atom_value(sa, k_s), atom_value(ta, k_t)
        if rep != value:
            bound[rep] = value

    if not sa and not ta:
        pick(RuleName.REMOVE, "3.2.25")
    while m < len(sa) or n < len(ta):
        if len(out) > limit:
            raise SelectionError("selection did not terminate")
        ls, lt = lookahead_count(sa, m), lookahead_count(ta, n)
        ks, kt = symbol_type(sa, m), symbol_type(ta, n)
        # An atom variable solved earlier behaves like its value.
        if ks is AV and not isinstance(atom_value(sa, m), Var):
            ks = AE
        if kt is AV and not isinstance(atom_value(ta, n), Var):
            kt = AE

        def orient(rule, case):
            nonlocal sa, ta, m, n, swapped
            pick(rule, case)
            sa, ta, m, n = ta, sa, n, m
            swapped = not swapped

        if ls < lt:
            if ks is LV:
                pick(RuleName.DECOMP2P, "1.1")
                m, n = m + ls + 1, n + ls + 1
            elif ks is AV:
                orient(RuleName.ORIENT3, "1.2")
            elif ks is AE:
                orient(RuleName.ORIENT1, "1.3")
            elif ks is ELV:
                pick(RuleName.SUBST2, "1.4")
                m += 1
            else:
                raise SelectionError("case 1.5: end of tape facing a list variable")
            continue

        if ls > lt:
            if not look_ahead(sa, m):
                pick(RuleName.SUBST1, "2.1")
                break
            if kt is LV:
                pick(RuleName.DECOMP2, "2.2")
                m, n = m + lt + 1, n + lt + 1
            elif kt in (AV, AE):
                pick(RuleName.SUBST3, "2.3")
                m, n = m + 1, n + 1
            elif kt is ELV:
                # The fresh remainder still covers every cell of the left block.
                pick(RuleName.DECOMP2, "2.4")
                n += 1
            else:
                raise SelectionError("case 2.5: list variable facing end of tape")
            continue

        if ls > 0:
            if not look_ahead(sa, m):
                pick(RuleName.SUBST1, "3.1")
                break
            pick(RuleName.DECOMP1, "3.1")
            m, n = m + ls + 1, n + ls + 1
            continue

        idx = _GRID[(ks, kt)]
        case = f"3.2.{idx}"
        if idx in (1, 2, 3, 19):
            if not look_ahead(sa, m):
                pick(RuleName.SUBST1, case)
                break
            pick(RuleName.DECOMP1, case)
            m, n = m + 1, n + 1
        elif idx == 4:
            if not look_ahead(sa, m):
                pick(RuleName.SUBST1, case)
                break
            pick(RuleName.DECOMP2, case)
            n += 1
        elif idx in (6, 9):
            orient(RuleName.ORIENT3, case)
        elif idx in (7, 8):
            a, b = atom_value(sa, m), atom_value(ta, n)
            if isinstance(b, Var) and type_lt(a.vtype, b.vtype):
                orient(RuleName.ORIENT3, case)
                continue
            if not look_ahead(sa, m):
                if not look_ahead(ta, n):
                    pick(RuleName.SUBST1, case)
                    break
                pick(RuleName.DECOMP4, case)
                bind_atom(m, n)
                m, n = m + 1, n + 1
            else:
                pick(RuleName.DECOMP1P, case)
                bind_atom(m, n)
                m, n = m + 1, n + 1
        elif idx in (11, 12, 14):
            orient(RuleName.ORIENT1, case)
        elif idx == 13:
            if atom_value(sa, m) != atom_value(ta, n):
                raise SelectionError(f"case {case}: distinct constants under a unifier")
            pick(RuleName.DECOMP3, case)
            m, n = m + 1, n + 1
        elif idx in (16, 17, 18):
            pick(RuleName.SUBST2, case)
            m += 1
        elif idx == 20:
            pick(RuleName.SUBST1, case)
            break
        elif idx == 24:
            orient(RuleName.ORIENT4, case)
        elif idx == 25:
            pick(RuleName.REMOVE, case)
            break
        else:
            raise SelectionError(f"case {case} cannot occur under a unifier")
    return SelectionSequence(tuple(out), steps)


def _resolve(u, bound: dict):
    while isinstance(u, Var) and u in bound:
        u = bound[u]
    return u


def _coherent(cell, head, resolved: dict) -> bool:
    """Whether ``head`` (from the replayed problem) stands for ``cell``."""
    if isinstance(cell, Pad):
        return head is None
    if head is None:
        return False
    if isinstance(cell, AtomCell):
        return head == cell.unit
    parent = cell.parent
    if not is_list_var(parent):
        return head == _resolve(parent, resolved)
    # Fresh remainders descend from the variable they split off from.
    return isinstance(head, Var) and (head == parent or fresh_root(head.name) == parent.name)


def verify_selection(
    p: UnificationProblem | tuple,
    b,
    delta: Substitution,
    *,
    steps: list | None = None,
) -> tuple:
    """Replay ``b`` through the rules and justify the result against ``delta``.

    Returns the reached unifier (restricted to the problem's variables) and a
    witness that it is at least as general as ``delta``.
    """
    if not isinstance(p, UnificationProblem):
        p = make_problem(*p)
    selections = tuple(b)
    if steps is None and isinstance(b, SelectionSequence):
        steps = b.steps
    xs = p.variables()
    tapes = None
    if steps:
        tapes = preprocess(p.lhs, p.rhs, delta)
    resolved: dict = {}
    fresh = FreshSupply()
    current = p
    for i, rule in enumerate(selections, start=1):
        if not current.is_active:
            raise VerificationError("path continues past a finished problem", i)
        fail = check_failure(current)
        if fail is not None:
            raise VerificationError(f"problem <{current}> fails by {fail}", i)
        if tapes is not None and i <= len(steps):
            st = steps[i - 1]
            top, bottom = (tapes[1], tapes[0]) if st.swapped else tapes
            lh = current.lhs[0] if current.lhs else None
            rh = current.rhs[0] if current.rhs else None
            if not (_coherent(_cell(top, st.m), lh, resolved)
                    and _coherent(_cell(bottom, st.n), rh, resolved)):
                raise VerificationError(
                    f"heads of <{current}> do not match cells "
                    f"{_cell(top, st.m)} / {_cell(bottom, st.n)}",
                    i,
                )
        options = [c for r, c in successors(current, fresh) if r is rule]
        if not options:
            raise VerificationError(f"{rule} does not apply to <{current}>", i)
        nxt = options[0]
        if rule in (RuleName.DECOMP1P, RuleName.DECOMP4):
            head, value = current.lhs[0], current.rhs[0]
            if head != value:
                resolved[head] = value
        current = nxt
    if current.status is not Status.SOLVED:
        raise VerificationError("path does not end in a solved problem", len(selections))
    sigma = restrict(current.sigma, xs)
    witness = more_general(sigma, delta, xs)
    if witness is None:
        raise VerificationError(
            "reached unifier is not more general than the given one", len(selections)
        )
    return sigma, witness


def check_unifier(lhs: Expression, rhs: Expression, delta: Substitution) -> tuple:
    """Select a path for ``delta`` and verify it; returns (sequence, sigma, witness)."""
    p = make_problem(lhs, rhs)
    seq = select(p.lhs, p.rhs, delta)
    sigma, witness = verify_selection(p, seq, delta)
    return seq, sigma, witness
