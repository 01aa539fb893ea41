"""Typed substitutions and the generality preorder.

A ``Substitution`` maps variables to normalized expressions.  It is immutable
and hashable, so it can live in sets.  Identity bindings are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import InputError, TypingError
from .expr import (
    Expression,
    NormalExpr,
    Var,
    format_expr,
    is_list_var,
    normalize,
    type_leq,
    type_of,
    unit_type,
)


class Substitution(Mapping):
    """Finite, well-typed map from ``Var`` to normalized expressions."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping | Iterable = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        m = {}
        for var, value in items:
            if not isinstance(var, Var):
                raise TypeError(f"substitution domain must be variables, got {var!r}")
            value = normalize(value)
            if value == (var,):
                continue
            if not type_leq(type_of(value), var.vtype):
                raise TypingError(
                    f"cannot bind {var.name}:{var.vtype} to {format_expr(value)} "
                    f"of type {type_of(value)}"
                )
            m[var] = value
        self._map = m
        self._hash = None

    def __getitem__(self, var: Var) -> NormalExpr:
        return self._map[var]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(
            f"{v.name} -> {format_expr(e)}" for v, e in sorted(self._map.items())
        )
        return f"Substitution({{{body}}})"

    def image(self, var: Var) -> NormalExpr:
        return self._map.get(var, (var,))

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    @property
    def range_vars(self) -> frozenset:
        return frozenset(u for e in self._map.values() for u in e if isinstance(u, Var))


EMPTY_SUBST = Substitution()


def apply(s: Mapping, e: Expression) -> NormalExpr:
    """Replace every variable of ``e`` simultaneously, returning a normal form."""
    out = []
    for u in normalize(e):
        if isinstance(u, Var) and u in s:
            out.extend(s[u])
        else:
            out.append(u)
    return tuple(out)


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """``s1`` followed by ``s2``: x(s1 s2) = (x s1) s2."""
    merged = {v: apply(s2, e) for v, e in s1.items()}
    for v, e in s2.items():
        if v not in s1:
            merged[v] = e
    return Substitution(merged)


def is_idempotent(s: Substitution) -> bool:
    return not (s.domain & s.range_vars)


def restrict(s: Substitution, xs: Iterable[Var]) -> Substitution:
    keep = set(xs)
    return Substitution({v: e for v, e in s.items() if v in keep})


def union_disjoint(s1: Substitution, s2: Substitution) -> Substitution:
    overlap = s1.domain & s2.domain
    if overlap:
        names = ", ".join(sorted(v.name for v in overlap))
        raise InputError(f"substitution domains overlap on {names}")
    clash = (s1.range_vars & s2.domain) | (s2.range_vars & s1.domain)
    if clash:
        names = ", ".join(sorted(v.name for v in clash))
        raise InputError(f"range of one substitution meets the other's domain: {names}")
    return Substitution({**dict(s1.items()), **dict(s2.items())})


@dataclass(frozen=True)
class GeneralityWitness:
    """The instantiation showing one substitution is more general than another."""

    instantiation: Substitution


def _match(pairs: list, k: int, theta: dict) -> Iterator[dict]:
    """Backtracking AU-matcher.

    ``pairs[k:]`` are (pattern, target) unit tuples still to be matched.  Only
    pattern-side variables may be bound; target units are opaque symbols, even
    when they are variables that share a name with a pattern variable.
    """
    if k == len(pairs):
        yield theta
        return
    pat, tgt = pairs[k]
    yield from _match_seq(pairs, k, pat, 0, tgt, 0, theta)


def _match_seq(pairs, k, pat, i, tgt, j, theta):
    if i == len(pat):
        if j == len(tgt):
            yield from _match(pairs, k + 1, theta)
        return
    u = pat[i]
    rest = len(tgt) - j
    if not isinstance(u, Var):
        if rest and tgt[j] == u:
            yield from _match_seq(pairs, k, pat, i + 1, tgt, j + 1, theta)
        return
    if u in theta:
        val = theta[u]
        if tgt[j : j + len(val)] == val:
            yield from _match_seq(pairs, k, pat, i + 1, tgt, j + len(val), theta)
        return
    # Every later non-list pattern unit consumes exactly one target unit.
    needed = sum(1 for p in pat[i + 1 :] if not is_list_var(p) and p not in theta)
    if not is_list_var(u):
        if rest and type_leq(unit_type(tgt[j]), u.vtype):
            theta[u] = (tgt[j],)
            yield from _match_seq(pairs, k, pat, i + 1, tgt, j + 1, theta)
            del theta[u]
        return
    for n in range(0, rest - needed + 1):
        theta[u] = tgt[j : j + n]
        yield from _match_seq(pairs, k, pat, i + 1, tgt, j + n, theta)
        del theta[u]


def au_matches(pattern: Expression, target: Expression) -> Iterator[Substitution]:
    """All λ with apply(λ, pattern) == target, target variables held fixed."""
    for theta in _match([(normalize(pattern), normalize(target))], 0, {}):
        yield Substitution(dict(theta))


def more_general(
    s: Substitution, t: Substitution, xs: Iterable[Var]
) -> GeneralityWitness | None:
    """Return a witness λ with λ(s(x)) =AU t(x) for every x in ``xs``, or None."""
    xs = sorted(set(xs))
    pairs = [(s.image(x), t.image(x)) for x in xs]
    # Cheap necessary condition: constants of the pattern survive instantiation.
    for pat, tgt in pairs:
        if sum(1 for u in pat if not is_list_var(u)) > len(tgt):
            return None
    # Most constrained first: short targets prune quickly.
    pairs.sort(key=lambda p: (len(p[1]), -len(p[0])))
    for theta in _match(pairs, 0, {}):
        lam = Substitution(dict(theta))
        if all(apply(lam, p) == q for p, q in pairs):
            return GeneralityWitness(lam)
    return None


def equivalent(s: Substitution, t: Substitution, xs: Iterable[Var]) -> bool:
    xs = list(xs)
    return more_general(s, t, xs) is not None and more_general(t, s, xs) is not None
