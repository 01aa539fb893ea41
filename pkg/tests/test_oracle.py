import random

import pytest

from auunify.engine import UnifierSet, unify
from auunify.expr import Var, VarType
from auunify.oracle import (
    GroundConfig,
    check_completeness,
    count_ground_substitutions,
    ground_substitutions,
    ground_unifiers,
    random_corpus,
    random_ground_unifier,
)
from auunify.subst import EMPTY_SUBST, apply, more_general

from helpers import eq, ex, sub, var

x, y, a, n = var("x"), var("y"), var("a"), var("n")


class TestGroundSubstitutions:
    def test_int_variable(self):
        assert len(list(ground_substitutions({n}, GroundConfig(int_pool=(1, 2))))) == 2

    def test_list_variable(self):
        cfg = GroundConfig(int_pool=(1,), str_pool=("a",), max_list_len=2)
        # Atoms for list cells come from both pools: 1 + 2 + 4 values.
        got = list(ground_substitutions({x}, cfg))
        assert len(got) == 7
        only_ints = [g for g in got if all(u == ex("1")[0] for u in g[x])] if got else []
        assert {g.get(x, ()) for g in only_ints} == {(), ex("1"), ex("1:1")}

    def test_no_variables(self):
        assert list(ground_substitutions(set())) == [EMPTY_SUBST]

    def test_count_is_product(self):
        vs = {x, y, a, n, var("s")}
        cfg = GroundConfig()
        assert count_ground_substitutions(vs, cfg) == len(list(ground_substitutions(vs, cfg)))
        assert count_ground_substitutions(vs, cfg) == 13 * 13 * 3 * 2 * 1

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            GroundConfig(int_pool=())
        with pytest.raises(ValueError):
            GroundConfig(max_list_len=-1)


class TestGroundUnifiers:
    def test_clash(self):
        assert ground_unifiers(*eq("1:x = 2:y")) == set()

    def test_occur(self):
        assert ground_unifiers(*eq("x = 1:x:2"), GroundConfig(max_list_len=3)) == set()

    def test_contains_empty_assignment(self):
        cfg = GroundConfig(int_pool=(2,), str_pool=("s",), max_list_len=1)
        assert sub("{a -> 2, x -> empty, y -> empty}") in ground_unifiers(*eq("a:x = y:2"), cfg)

    def test_shared_atom_variable(self):
        got = ground_unifiers(*eq("n = y:n"))
        assert got == {sub("{n -> 1, y -> empty}"), sub("{n -> 2, y -> empty}")}

    def test_all_results_unify(self):
        lhs, rhs = eq("x:a:1 = 1:y")
        for g in ground_unifiers(lhs, rhs):
            assert apply(g, lhs) == apply(g, rhs)


class TestCompleteness:
    def test_computed_set_passes(self):
        lhs, rhs = eq("a:x = y:2")
        cfg = GroundConfig(int_pool=(2,), str_pool=("s",), max_list_len=1)
        result, _ = unify(lhs, rhs)
        assert check_completeness(result, lhs, rhs, cfg)
        assert check_completeness(result, lhs, rhs)

    def test_missing_general_unifier_detected(self):
        lhs, rhs = eq("a:x = y:2")
        only_empty = UnifierSet((sub("{a -> 2, x -> empty, y -> empty}"),), frozenset({a, x, y}))
        verdict = check_completeness(only_empty, lhs, rhs)
        assert not verdict
        delta = verdict.counterexample
        assert apply(delta, lhs) == apply(delta, rhs)
        assert len(delta[x]) >= 1
        assert more_general(only_empty.unifiers[0], delta, {a, x, y}) is None

    def test_vacuous(self):
        empty = UnifierSet((), frozenset())
        assert check_completeness(empty, *eq("1 = 2"))


def test_constructed_unifiers_are_unifiers():
    rng = random.Random(2)
    hits = 0
    for lhs, rhs in random_corpus(9, 200):
        d = random_ground_unifier(rng, lhs, rhs)
        if d is not None:
            hits += 1
            assert apply(d, lhs) == apply(d, rhs)
            assert all(not isinstance(u, Var) for e in d.values() for u in e)
    assert hits > 30


def test_constructed_unifier_when_none_exists():
    assert random_ground_unifier(random.Random(0), *eq("1:x = 2:y")) is None


def test_corpus_is_valid_and_reproducible():
    c1, c2 = random_corpus(4, 100), random_corpus(4, 100)
    assert c1 == c2
    for lhs, rhs in c1:
        assert len(lhs) <= 4 and len(rhs) <= 4
        for side in (lhs, rhs):
            assert sum(1 for u in side if isinstance(u, Var)) <= 3
            assert sum(1 for u in side if isinstance(u, Var) and u.vtype is VarType.LIST) <= 1
        unify(lhs, rhs)
