"""Rule-based AU-unification of simple list expressions.

Rules only look at the heads of a normalized equation ``lhs = rhs``.  Below,
``u`` and ``L`` are the head and tail of the left side and ``v`` and ``M``
those of the right side.
"""

from __future__ import annotations

import enum
import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import InputError, SearchLimitExceeded, TerminationViolation
from .expr import (
    Expression,
    NormalExpr,
    TerminationMeasure,
    Var,
    VarType,
    format_expr,
    is_constant,
    is_list_var,
    normalize,
    size,
    type_leq,
    type_lt,
    type_of,
    unit_type,
)
from .subst import (
    EMPTY_SUBST,
    Substitution,
    apply,
    compose,
    more_general,
    restrict,
    union_disjoint,
)

NODE_CAP = 100_000


class RuleName(enum.Enum):
    REMOVE = "Remove"
    DECOMP1 = "Decomp1"
    DECOMP1P = "Decomp1'"
    DECOMP2 = "Decomp2"
    DECOMP2P = "Decomp2'"
    DECOMP3 = "Decomp3"
    DECOMP4 = "Decomp4"
    SUBST1 = "Subst1"
    SUBST2 = "Subst2"
    SUBST3 = "Subst3"
    ORIENT1 = "Orient1"
    ORIENT2 = "Orient2"
    ORIENT3 = "Orient3"
    ORIENT4 = "Orient4"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "RuleName":
        for r in cls:
            if r.value == text:
                return r
        raise ValueError(f"unknown rule name {text!r}")


class FailureRule(enum.Enum):
    OCCUR = "Occur"
    CLASH1 = "Clash1"
    CLASH2 = "Clash2"
    CLASH3 = "Clash3"
    CLASH4 = "Clash4"

    def __str__(self) -> str:
        return self.value


class Status(enum.Enum):
    ACTIVE = "active"
    SOLVED = "solved"
    FAILED = "failed"


@dataclass(frozen=True)
class UnificationProblem:
    lhs: NormalExpr | None
    rhs: NormalExpr | None
    sigma: Substitution = EMPTY_SUBST
    status: Status = Status.ACTIVE
    failure: FailureRule | None = None

    @classmethod
    def solved(cls, sigma: Substitution) -> "UnificationProblem":
        return cls(None, None, sigma, Status.SOLVED)

    @classmethod
    def failed(cls, rule: FailureRule, sigma: Substitution) -> "UnificationProblem":
        return cls(None, None, sigma, Status.FAILED, rule)

    @property
    def is_active(self) -> bool:
        return self.status is Status.ACTIVE

    def variables(self) -> frozenset:
        if not self.is_active:
            return frozenset()
        return frozenset(u for u in self.lhs + self.rhs if isinstance(u, Var))

    def __str__(self) -> str:
        if self.status is Status.SOLVED:
            return "solved"
        if self.status is Status.FAILED:
            return f"fail ({self.failure})"
        return f"{format_expr(self.lhs)} = {format_expr(self.rhs)}"


# Fresh variables are named <root>'<n>.  The root drops an earlier suffix so
# repeated freshening reads y'1, y'2 rather than y'1'2.
_FRESH_SUFFIX = re.compile(r"'\d+$")


def fresh_root(name: str) -> str:
    return _FRESH_SUFFIX.sub("", name)


def is_fresh_name(name: str) -> bool:
    return _FRESH_SUFFIX.search(name) is not None


class FreshSupply:
    """Deterministic supply of fresh list variables."""

    def __init__(self, avoid: Iterable[str] = ()):
        self.counter = 0
        self.used = set(avoid)

    def reserve(self, names: Iterable[str]) -> None:
        self.used.update(names)

    def fresh(self, base: Var) -> Var:
        root = fresh_root(base.name)
        while True:
            self.counter += 1
            name = f"{root}'{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return Var(name, VarType.LIST)


def _names_in(p: UnificationProblem) -> set:
    names = {v.name for v in p.variables()}
    names.update(v.name for v in p.sigma.domain)
    names.update(v.name for v in p.sigma.range_vars)
    return names


# -- validation -------------------------------------------------------------


def _check_names(units: Iterable) -> None:
    seen = {}
    for u in units:
        if isinstance(u, Var):
            other = seen.setdefault(u.name, u)
            if other.vtype is not u.vtype:
                raise InputError(
                    f"variable {u.name} is used at two types ({other.vtype} and {u.vtype})"
                )


def validate_equation(lhs: Expression, rhs: Expression) -> tuple:
    """Normalize both sides and enforce simplicity and linearity."""
    s, t = normalize(lhs), normalize(rhs)
    _check_names(s + t)
    for side, name in ((s, "left"), (t, "right")):
        lvars = [u for u in side if is_list_var(u)]
        if len(lvars) > 1:
            if len(set(lvars)) < len(lvars):
                dup = next(v for v in lvars if lvars.count(v) > 1)
                raise InputError(f"list variable {dup.name} is repeated on the {name} side")
            names = ", ".join(v.name for v in lvars)
            raise InputError(f"{name} side is not simple: several list variables ({names})")
    shared = {u for u in s if is_list_var(u)} & {u for u in t if is_list_var(u)}
    if shared:
        names = ", ".join(sorted(v.name for v in shared))
        raise InputError(f"list variable {names} occurs on both sides (not left-linear)")
    return s, t


def make_problem(lhs: Expression, rhs: Expression) -> UnificationProblem:
    s, t = validate_equation(lhs, rhs)
    return UnificationProblem(s, t)


# -- failure rules ----------------------------------------------------------


def _is_atomic_unit(u) -> bool:
    """The ``a, b`` of the rules: a constant or a variable of type at most atom."""
    return not is_list_var(u)


def check_failure(p: UnificationProblem) -> FailureRule | None:
    lhs, rhs = p.lhs, p.rhs
    if len(lhs) == 1 and is_list_var(lhs[0]):
        x = lhs[0]
        if x in rhs and rhs != (x,):
            return FailureRule.OCCUR
    if lhs and rhs and is_constant(lhs[0]) and is_constant(rhs[0]) and lhs[0] != rhs[0]:
        return FailureRule.CLASH1
    if lhs and not rhs and _is_atomic_unit(lhs[0]):
        return FailureRule.CLASH2
    if not lhs and rhs and _is_atomic_unit(rhs[0]):
        return FailureRule.CLASH3
    if len(lhs) == 1 and isinstance(lhs[0], Var):
        a, b = lhs[0].vtype, type_of(rhs)
        if not type_leq(a, b) and not type_leq(b, a):
            return FailureRule.CLASH4
    return None


# -- transformation rules ---------------------------------------------------


def _child(p: UnificationProblem, lhs, rhs, binding: dict | None = None) -> UnificationProblem:
    sigma = p.sigma
    if binding:
        theta = Substitution(binding)
        lhs, rhs = apply(theta, lhs), apply(theta, rhs)
        sigma = compose(sigma, theta)
    return UnificationProblem(tuple(lhs), tuple(rhs), sigma)


def _solved(p: UnificationProblem, binding: dict | None = None) -> UnificationProblem:
    sigma = compose(p.sigma, Substitution(binding)) if binding else p.sigma
    return UnificationProblem.solved(sigma)


def successors(
    p: UnificationProblem, fresh: FreshSupply | None = None
) -> list:
    """All (rule, child) pairs for an active problem, in fixed rule order."""
    if fresh is None:
        fresh = FreshSupply(_names_in(p))
    lhs, rhs = p.lhs, p.rhs
    u = lhs[0] if lhs else None
    v = rhs[0] if rhs else None
    L, M = lhs[1:], rhs[1:]
    out = []

    def add(rule, child):
        out.append((rule, child))

    if lhs == rhs:
        add(RuleName.REMOVE, _solved(p))
    if is_list_var(u) and L and v is not None:
        add(RuleName.DECOMP1, _child(p, L, M, {u: (v,)}))
    if (
        isinstance(u, Var)
        and not u.is_list
        and L
        and v is not None
        and _is_atomic_unit(v)
        and type_leq(unit_type(v), u.vtype)
    ):
        add(RuleName.DECOMP1P, _child(p, L, M, {u: (v,)}))
    if is_list_var(u) and is_list_var(v) and L:
        x1 = fresh.fresh(u)
        add(RuleName.DECOMP2, _child(p, (x1,) + L, M, {u: (v, x1)}))
        y1 = fresh.fresh(v)
        add(RuleName.DECOMP2P, _child(p, L, (y1,) + M, {v: (u, y1)}))
    if u is not None and u == v:
        add(RuleName.DECOMP3, _child(p, L, M))
    if (
        len(lhs) == 1
        and isinstance(u, Var)
        and type_leq(u.vtype, VarType.ATOM)
        and len(rhs) == 2
        and _is_atomic_unit(v)
        and is_list_var(rhs[1])
        and type_leq(unit_type(v), u.vtype)
    ):
        add(RuleName.DECOMP4, _child(p, (), rhs[1:], {u: (v,)}))
    if len(lhs) == 1 and isinstance(u, Var) and type_leq(type_of(rhs), u.vtype):
        # x = x is admitted too, as an identity binding.
        if u not in rhs or rhs == (u,):
            add(RuleName.SUBST1, _solved(p, {u: rhs}))
    if is_list_var(u) and L:
        add(RuleName.SUBST2, _child(p, L, rhs, {u: ()}))
    if is_list_var(u) and L and v is not None and _is_atomic_unit(v):
        x1 = fresh.fresh(u)
        add(RuleName.SUBST3, _child(p, (x1,) + L, M, {u: (v, x1)}))
    if u is not None and is_constant(u) and isinstance(v, Var):
        add(RuleName.ORIENT1, _child(p, rhs, lhs))
    if (
        isinstance(u, Var)
        and L
        and len(rhs) == 1
        and isinstance(v, Var)
        and u.vtype is v.vtype
    ):
        add(RuleName.ORIENT2, _child(p, rhs, lhs))
    if isinstance(u, Var) and isinstance(v, Var) and type_lt(u.vtype, v.vtype):
        add(RuleName.ORIENT3, _child(p, rhs, lhs))
    if not lhs and is_list_var(v):
        add(RuleName.ORIENT4, _child(p, rhs, lhs))
    return out


# -- termination measure ----------------------------------------------------


def _head_type(side: NormalExpr) -> VarType:
    return unit_type(side[0]) if side else VarType.LIST


def measure(p: UnificationProblem) -> TerminationMeasure:
    lhs, rhs = p.lhs, p.rhs
    n2 = 0 if lhs and isinstance(lhs[0], Var) else 1
    # 1 when the left head has the strictly smaller type, so that Orient3
    # (which moves the larger type to the left) decreases it.
    n3 = 1 if type_lt(_head_type(lhs), _head_type(rhs)) else 0
    return TerminationMeasure(size(lhs) + size(rhs), n2, n3, size(lhs))


# Index of the component each rule must strictly decrease, earlier ones equal.
EXPECTED_COLUMN = {
    RuleName.ORIENT1: 1,
    RuleName.ORIENT4: 1,
    RuleName.ORIENT3: 2,
    RuleName.ORIENT2: 3,
}


def decreasing_column(before: TerminationMeasure, after: TerminationMeasure | None) -> int | None:
    """First component where ``after`` is smaller, with all earlier ones equal."""
    if after is None:
        return 0 if before.n1 > 0 else None
    for i, (a, b) in enumerate(zip(before, after)):
        if b < a:
            return i
        if b > a:
            return None
    return None


def check_step(parent: UnificationProblem, rule: RuleName, child: UnificationProblem) -> None:
    before = measure(parent)
    if child.is_active:
        after = measure(child)
        col = decreasing_column(before, after)
    else:
        # A solved problem has no equation left: its size counts as zero,
        # below anything, including the trivial ``empty = empty``.
        after = None
        col = 0
    expected = EXPECTED_COLUMN.get(rule, 0)
    if col != expected:
        raise TerminationViolation(
            f"{rule} on <{parent}>: measure {tuple(before)} -> "
            f"{tuple(after) if after else 'solved'} decreases column {col}, expected {expected}"
        )


# -- search -----------------------------------------------------------------


@dataclass
class TreeNode:
    id: int
    problem: UnificationProblem
    parent: int | None = None
    rule: RuleName | None = None
    children: list = field(default_factory=list)
    dead_end: bool = False


@dataclass
class DerivationTree:
    nodes: list = field(default_factory=list)

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def add(self, problem, parent=None, rule=None) -> TreeNode:
        node = TreeNode(len(self.nodes), problem, parent, rule)
        self.nodes.append(node)
        if parent is not None:
            self.nodes[parent].children.append(node.id)
        return node

    def solved_leaves(self) -> list:
        return [n for n in self.nodes if n.problem.status is Status.SOLVED]

    def failed_leaves(self) -> list:
        return [n for n in self.nodes if n.problem.status is Status.FAILED]

    def dead_ends(self) -> list:
        return [n for n in self.nodes if n.dead_end]

    def edges(self) -> Iterator[tuple]:
        for n in self.nodes:
            if n.parent is not None:
                yield n.parent, n.rule, n.id

    def path(self, node_id: int) -> list:
        """Rule names from the root down to ``node_id``."""
        rules = []
        node = self.nodes[node_id]
        while node.parent is not None:
            if node.rule is not None:
                rules.append(node.rule)
            node = self.nodes[node.parent]
        return rules[::-1]

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class UnifierSet:
    """Unifiers in discovery order, with the variables they are compared on."""

    unifiers: tuple
    problem_vars: frozenset

    def __iter__(self):
        return iter(self.unifiers)

    def __len__(self) -> int:
        return len(self.unifiers)

    def __contains__(self, s) -> bool:
        return s in self.unifiers


def canonical_key(s: Substitution, xs: Iterable[Var]) -> tuple:
    """Rename every variable outside ``xs`` by order of first appearance."""
    keep = set(xs)
    ren: dict = {}
    key = []
    for var in sorted(s):
        image = []
        for u in s[var]:
            if isinstance(u, Var) and u not in keep:
                u = ren.setdefault(u, Var(f"_{len(ren)}", u.vtype))
            image.append(u)
        key.append((var, tuple(image)))
    return tuple(key)


def _as_problem(p, rhs=None) -> UnificationProblem:
    if isinstance(p, UnificationProblem):
        validate_equation(p.lhs, p.rhs)
        return p
    return make_problem(p, rhs)


def unify(
    p,
    rhs: Expression | None = None,
    *,
    fresh: FreshSupply | None = None,
    node_cap: int = NODE_CAP,
    check_termination: bool = True,
) -> tuple:
    """Breadth-first search for all solved forms; returns (UnifierSet, tree).

    Accepts either a ``UnificationProblem`` or two expressions.
    """
    problem = _as_problem(p, rhs)
    xs = problem.variables() | problem.sigma.domain
    if fresh is None:
        fresh = FreshSupply()
    fresh.reserve(_names_in(problem))
    tree = DerivationTree()
    queue = deque([tree.add(problem)])
    found, seen = [], set()
    while queue:
        node = queue.popleft()
        current = node.problem
        rule = check_failure(current)
        if rule is not None:
            tree.add(UnificationProblem.failed(rule, current.sigma), node.id)
            continue
        children = successors(current, fresh)
        if not children:
            node.dead_end = True
            continue
        for r, child in children:
            if check_termination:
                check_step(current, r, child)
            if len(tree) >= node_cap:
                raise SearchLimitExceeded(f"more than {node_cap} nodes")
            c = tree.add(child, node.id, r)
            if child.status is Status.SOLVED:
                sigma = restrict(child.sigma, xs)
                key = canonical_key(sigma, xs)
                if key not in seen:
                    seen.add(key)
                    found.append(sigma)
            else:
                queue.append(c)
    return UnifierSet(tuple(found), frozenset(xs)), tree


def is_instance(s: Substitution, t: Substitution, xs) -> bool:
    """True when ``t`` is an instance of ``s`` on ``xs``."""
    return more_general(s, t, xs) is not None


def minimize(u: UnifierSet) -> UnifierSet:
    """Greedy removal of unifiers that are instances of a retained one."""
    xs = u.problem_vars
    kept: list = []
    for cand in u.unifiers:
        if any(is_instance(k, cand, xs) for k in kept):
            continue
        kept = [k for k in kept if not is_instance(cand, k, xs)]
        kept.append(cand)
    return UnifierSet(tuple(kept), xs)


def solve_system(eqs: Sequence, *, node_cap: int = NODE_CAP) -> UnifierSet:
    """Solve a conjunction of variable-disjoint equations."""
    problems = [make_problem(l, r) for l, r in eqs]
    owner: dict = {}
    for i, p in enumerate(problems):
        for v in p.variables():
            for w, j in owner.items():
                if j != i and w.name == v.name:
                    raise InputError(
                        f"variable {v.name} is shared by equations {j + 1} and {i + 1}"
                    )
            owner.setdefault(v, i)
    fresh = FreshSupply(v.name for v in owner)
    sets = [unify(p, fresh=fresh, node_cap=node_cap)[0] for p in problems]
    xs = frozenset(owner)
    combined = []
    for combo in itertools.product(*(s.unifiers for s in sets)):
        acc = EMPTY_SUBST
        for s in combo:
            acc = union_disjoint(acc, s)
        combined.append(acc)
    return UnifierSet(tuple(combined), xs)


def match_via_unify(pattern: Expression, target: Expression) -> list:
    """AU-matching by running the unifier against a frozen target.

    Target variables become string constants with reserved names, the search
    runs as usual, and bindings are mapped back.  Results whose unfrozen
    bindings are ill-typed are discarded.  Used to cross-check the direct
    matcher in ``subst``.
    """
    from .expr import StrConst
    from .errors import TypingError

    tgt = normalize(target)
    frozen = {u: StrConst(f"\x00{u.name}") for u in tgt if isinstance(u, Var)}
    thaw = {c: v for v, c in frozen.items()}
    solutions, _ = unify(normalize(pattern), tuple(frozen.get(u, u) for u in tgt))
    out = []
    for s in solutions:
        try:
            lam = Substitution({v: tuple(thaw.get(u, u) for u in e) for v, e in s.items()})
        except TypingError:
            continue
        if apply(lam, pattern) == tgt and lam not in out:
            out.append(lam)
    return out
