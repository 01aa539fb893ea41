"""Unification modulo associativity and unit for simple list expressions."""

from .engine import (
    DerivationTree,
    FailureRule,
    RuleName,
    UnificationProblem,
    UnifierSet,
    check_failure,
    make_problem,
    measure,
    minimize,
    solve_system,
    successors,
    unify,
)
from .errors import (
    InputError,
    ParseError,
    SearchLimitExceeded,
    TerminationViolation,
    TypingError,
    UnifyError,
    VerificationError,
)
from .expr import (
    EMPTY,
    Concat,
    Empty,
    IntConst,
    StrConst,
    Var,
    VarType,
    au_equal,
    compare_types,
    is_simple,
    normalize,
    size,
    type_of,
    variables,
)
from .oracle import GroundConfig, check_completeness, ground_substitutions, ground_unifiers
from .selector import check_unifier, preprocess, select, verify_selection
from .subst import (
    GeneralityWitness,
    Substitution,
    apply,
    compose,
    is_idempotent,
    more_general,
    union_disjoint,
)
from .syntax import format_substitution, parse_problem, parse_substitution

__version__ = "0.1.0"
