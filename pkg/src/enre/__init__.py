"""Derivatives for regular expressions enhanced with extra language operators."""
from .automata import (
    Counterexample,
    Dfa,
    Equivalent,
    compile as compile_dfa,
    enumerate_words,
    equiv,
    minimize,
    run,
    to_dot,
)
from .derivation import (
    NOT_NULLABLE,
    NULLABLE,
    Nullability,
    Undecided,
    derive,
    derive_word,
    is_nullable,
    matches,
    nullable,
)
from .dspace import check_closure, dplus_contains, dplus_enumerate
from .errors import (
    CapabilityError,
    CapExceeded,
    DefinitionsError,
    EnreError,
    ParseError,
    StateCapExceeded,
    UndecidedError,
)
from .operators import OperatorRegistry, build_registry, derivative_rule, eps_capability
from .oracle import Slice, sem_member, slice_of
from .syntax import (
    EPS,
    NULL,
    Concat,
    Definitions,
    Eps,
    Expr,
    Null,
    Op,
    OpId,
    Star,
    Sym,
    Union,
    load_definitions,
    normalize,
    parse,
    parse_definitions,
    parse_opid,
    pretty,
    smart_concat,
    smart_union,
)
from .transducer import Transducer, build_fst, fst_to_dot, transduce

__all__ = [name for name in dir() if not name.startswith("_")]
