"""Brute-force ground oracle over a small bounded universe.

Also hosts the random problem generator used by the property suites, since
both are about sampling the same desk-scale space.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .expr import Expression, IntConst, StrConst, Var, VarType, normalize, variables
from .subst import Substitution, apply, more_general


@dataclass(frozen=True)
class GroundConfig:
    int_pool: tuple = (1, 2)
    str_pool: tuple = ("a",)
    max_list_len: int = 2

    def __post_init__(self):
        if not self.int_pool or not self.str_pool:
            raise ValueError("ground pools must be non-empty")
        if self.max_list_len < 0:
            raise ValueError("max_list_len must be non-negative")

    def atoms(self, vtype: VarType) -> list:
        ints = [IntConst(i) for i in self.int_pool]
        strs = [StrConst(s) for s in self.str_pool]
        if vtype is VarType.INT:
            return ints
        if vtype is VarType.STRING:
            return strs
        return ints + strs

    def values(self, var: Var) -> list:
        if not var.is_list:
            return [(a,) for a in self.atoms(var.vtype)]
        pool = self.atoms(VarType.ATOM)
        return [
            tuple(seq)
            for k in range(self.max_list_len + 1)
            for seq in itertools.product(pool, repeat=k)
        ]


DEFAULT_CONFIG = GroundConfig()


def ground_substitutions(vars: Iterable[Var], cfg: GroundConfig = DEFAULT_CONFIG) -> Iterator[Substitution]:
    """Every well-typed ground assignment to ``vars``, lazily."""
    vs = sorted(set(vars))
    choices = [cfg.values(v) for v in vs]
    for combo in itertools.product(*choices):
        yield Substitution(dict(zip(vs, combo)))


def count_ground_substitutions(vars: Iterable[Var], cfg: GroundConfig = DEFAULT_CONFIG) -> int:
    total = 1
    for v in set(vars):
        total *= len(cfg.values(v))
    return total


def iter_ground_unifiers(lhs: Expression, rhs: Expression, cfg: GroundConfig = DEFAULT_CONFIG) -> Iterator[Substitution]:
    s, t = normalize(lhs), normalize(rhs)
    vs, vt = variables(s), variables(t)
    if vs & vt:
        for g in ground_substitutions(vs | vt, cfg):
            if apply(g, s) == apply(g, t):
                yield g
        return
    # Disjoint sides: enumerate each side once and join on the ground value.
    by_value = defaultdict(list)
    for g in ground_substitutions(vt, cfg):
        by_value[apply(g, t)].append(g)
    for g in ground_substitutions(vs, cfg):
        for h in by_value.get(apply(g, s), ()):
            yield Substitution({**dict(g.items()), **dict(h.items())})


def ground_unifiers(lhs: Expression, rhs: Expression, cfg: GroundConfig = DEFAULT_CONFIG) -> set:
    return set(iter_ground_unifiers(lhs, rhs, cfg))


@dataclass
class CompletenessVerdict:
    ok: bool
    checked: int
    counterexample: Substitution | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_completeness(u, lhs: Expression, rhs: Expression, cfg: GroundConfig = DEFAULT_CONFIG) -> CompletenessVerdict:
    """Every ground unifier must be an instance of some member of ``u``."""
    members = list(u)
    xs = variables(lhs) | variables(rhs)
    checked = 0
    for g in iter_ground_unifiers(lhs, rhs, cfg):
        checked += 1
        if not any(more_general(s, g, xs) is not None for s in members):
            return CompletenessVerdict(False, checked, g)
    return CompletenessVerdict(True, checked)


# -- random problems --------------------------------------------------------


_NAMES = {
    VarType.LIST: ("x", "y", "z", "w"),
    VarType.ATOM: ("a", "b", "c"),
    VarType.INT: ("n", "m", "k"),
    VarType.STRING: ("s", "t", "r"),
}
_CONSTS = (IntConst(1), IntConst(2), IntConst(3), StrConst("a"))


@dataclass
class _Names:
    used: dict = field(default_factory=dict)

    def new(self, rng: random.Random, vtype: VarType) -> Var:
        count = self.used.get(vtype, 0)
        self.used[vtype] = count + 1
        base = _NAMES[vtype][count % len(_NAMES[vtype])]
        name = base if count < len(_NAMES[vtype]) else f"{base}{count}"
        return Var(name, vtype)


def random_problem(rng: random.Random, max_units: int = 4, max_vars: int = 3, share_atoms: bool = True) -> tuple:
    """A random valid equation: simple, left-linear sides of at most ``max_units``.

    Atom-level variables may repeat (within or across sides) when
    ``share_atoms`` is set; list variables never do.
    """
    names = _Names()
    atom_pool: list = []

    def side():
        k = rng.randint(0, max_units)
        units, nvars, has_list = [], 0, False
        for _ in range(k):
            r = rng.random()
            if r < 0.35 and not has_list and nvars < max_vars:
                units.append(names.new(rng, VarType.LIST))
                has_list = True
                nvars += 1
            elif r < 0.65 and nvars < max_vars:
                if share_atoms and atom_pool and rng.random() < 0.3:
                    units.append(rng.choice(atom_pool))
                else:
                    vt = rng.choice((VarType.ATOM, VarType.INT, VarType.STRING))
                    v = names.new(rng, vt)
                    atom_pool.append(v)
                    units.append(v)
                nvars += 1
            else:
                units.append(rng.choice(_CONSTS))
        return tuple(units)

    lhs = side()
    rhs = side()
    return lhs, rhs


def random_corpus(seed: int, n: int, **kw) -> list:
    rng = random.Random(seed)
    return [random_problem(rng, **kw) for _ in range(n)]


def random_ground_unifier(
    rng: random.Random, lhs: Expression, rhs: Expression, cfg: GroundConfig = DEFAULT_CONFIG, tries: int = 20
) -> Substitution | None:
    """Sample a ground unifier constructively, or None if none was hit.

    A random ground instance of the left side is drawn, then the right side
    is matched against it.
    """
    from .subst import au_matches

    s, t = normalize(lhs), normalize(rhs)
    vs, vt = sorted(variables(s)), variables(t)
    for _ in range(tries):
        g = Substitution({v: rng.choice(cfg.values(v)) for v in vs})
        target = apply(g, s)
        pattern = apply(g, t)
        matches = [
            m for m in au_matches(pattern, target)
            if all(not isinstance(u, Var) for e in m.values() for u in e)
        ]
        if matches:
            m = rng.choice(matches)
            delta = Substitution({**dict(g.items()), **dict(m.items())})
            free = vt - delta.domain - set(vs)
            if free:
                delta = Substitution({**dict(delta.items()), **{v: rng.choice(cfg.values(v)) for v in free}})
            if apply(delta, s) == apply(delta, t):
                return delta
    return None
