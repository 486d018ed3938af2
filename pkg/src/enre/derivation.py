"""Nullability, Brzozowski derivatives and the word problem."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce

from .errors import CapabilityError, StateCapExceeded, UndecidedError
from .operators import (
    BooleanFn,
    General,
    HookRequest,
    Linear,
    OperatorRegistry,
    SemanticHook,
    derivative_rule,
)
from .syntax import (
    EPS,
    NULL,
    Concat,
    Eps,
    Expr,
    Null,
    Op,
    Star,
    Sym,
    Union,
    Var,
    smart_concat,
    smart_union,
    union_of,
    word_expr,
)


class Nullability(Enum):
    NULLABLE = "nullable"
    NOT_NULLABLE = "not-nullable"

    def __bool__(self):
        return self is Nullability.NULLABLE


NULLABLE = Nullability.NULLABLE
NOT_NULLABLE = Nullability.NOT_NULLABLE


@dataclass(frozen=True)
class Undecided:
    """Nullability could not be decided because of operator ``op``."""

    op: str
    reason: str = ""

    def __bool__(self):
        raise UndecidedError(self.op, self.reason or "nullability undecided")


def nullable(e: Expr, reg: OperatorRegistry) -> Nullability | Undecided:
    """Decide whether the empty word belongs to ``e``'s language."""
    memo = reg.memo("nullable")
    hit = memo.get(e)
    if hit is not None:
        return hit
    match e:
        case Eps() | Star(_):
            out = NULLABLE
        case Null() | Sym(_):
            out = NOT_NULLABLE
        case Union(items):
            out = NOT_NULLABLE
            for item in items:
                n = nullable(item, reg)
                if n is NULLABLE:
                    out = NULLABLE
                    break
                if isinstance(n, Undecided):
                    out = n
        case Concat(left, right):
            out = _and3(nullable(left, reg), lambda: nullable(right, reg))
        case Op(op, args):
            out = _op_nullable(reg[op], args, reg)
        case Var():
            raise TypeError("template variables have no language")
        case _:
            raise TypeError(f"not an expression: {e!r}")
    memo[e] = out
    return out


def is_nullable(e: Expr, reg: OperatorRegistry) -> bool:
    """Like :func:`nullable`, but raises :class:`UndecidedError` instead of returning it."""
    out = nullable(e, reg)
    if isinstance(out, Undecided):
        raise UndecidedError(out.op, out.reason or "nullability undecided")
    return out is NULLABLE


def _and3(first, rest):
    if first is NOT_NULLABLE:
        return first
    second = rest()
    if second is NOT_NULLABLE:
        return second
    if isinstance(first, Undecided):
        return first
    return second


def _op_nullable(definition, args, reg):
    cap = definition.eps
    if isinstance(cap, BooleanFn):
        flags = [nullable(a, reg) for a in args]
        unknown = [i for i, f in enumerate(flags) if isinstance(f, Undecided)]
        if not unknown:
            return NULLABLE if cap([f is NULLABLE for f in flags]) else NOT_NULLABLE
        # still decided if every completion of the unknown flags agrees
        outcomes = set()
        for bits in range(1 << len(unknown)):
            trial = [f is NULLABLE for f in flags]
            for pos, i in enumerate(unknown):
                trial[i] = bool(bits >> pos & 1)
            outcomes.add(cap(trial))
        if len(outcomes) == 1:
            return NULLABLE if outcomes.pop() else NOT_NULLABLE
        return flags[unknown[0]]
    if isinstance(cap, SemanticHook):
        request = HookRequest(cap.kind, (0, 1) if cap.kind == "intersection-emptiness" else (0,), cap.threshold)
        try:
            return NULLABLE if _run_hook(request, args, reg) else NOT_NULLABLE
        except (CapabilityError, StateCapExceeded) as exc:
            culprit = exc.op if isinstance(exc, CapabilityError) else definition.name
            return Undecided(culprit, f"hook for {definition.name}: {exc}")
    return Undecided(definition.name, "operator has no nullability test")


def _run_hook(request: HookRequest, args, reg) -> bool:
    from . import automata

    machines = [automata.hook_dfa(args[i], reg) for i in request.args]
    if request.kind == "emptiness":
        return automata.shortest_accepted(machines[0]) is not None
    if request.kind == "intersection-emptiness":
        return automata.intersects(machines[0], machines[1])
    if request.kind == "shortest-word-bound":
        shortest = automata.shortest_accepted(machines[0])
        return shortest is not None and len(shortest) < request.threshold
    raise ValueError(f"unknown hook kind {request.kind!r}")


def derive(a: str, e: Expr, reg: OperatorRegistry) -> Expr:
    """Syntactic derivative of ``e`` by symbol ``a`` (canonical)."""
    memo = reg.memo("derive")
    hit = memo.get((a, e))
    if hit is not None:
        return hit
    match e:
        case Null() | Eps():
            out = NULL
        case Sym(c):
            out = EPS if c == a else NULL
        case Union(items):
            out = union_of(derive(a, i, reg) for i in items)
        case Concat(left, right):
            out = smart_concat(derive(a, left, reg), right)
            if is_nullable(left, reg):
                out = smart_union(out, derive(a, right, reg))
        case Star(body):
            out = smart_concat(derive(a, body, reg), e)
        case Op(op, args):
            out = _derive_op(a, reg[op], args, reg)
        case Var():
            raise TypeError("template variables cannot be derived")
        case _:
            raise TypeError(f"not an expression: {e!r}")
    memo[(a, e)] = out
    return out


def _derive_op(a, definition, args, reg):
    if isinstance(definition.rule, Linear):
        parts = []
        for term in derivative_rule(definition, a):
            new_args = tuple(derive_word(w, args[i], reg) for w, i in term.args)
            parts.append(smart_concat(word_expr(term.prefix), Op(term.target, new_args)))
        return union_of(parts)
    if isinstance(definition.rule, General):
        variables, template = derivative_rule(definition, a)
        subst = {(w, i): derive_word(w, args[i], reg) for w, i in variables}
        return instantiate(template, subst)
    raise CapabilityError(definition.name, "operator has no derivative rule")


def instantiate(template: Expr, subst: dict) -> Expr:
    """Replace template variables and rebuild bottom-up with smart constructors."""
    match template:
        case Var(word, index):
            return subst[(word, index)]
        case Concat(left, right):
            return smart_concat(instantiate(left, subst), instantiate(right, subst))
        case Union(items):
            return union_of(instantiate(i, subst) for i in items)
        case Star(body):
            return Star(instantiate(body, subst))
        case Op(op, args):
            return Op(op, tuple(instantiate(x, subst) for x in args))
    return template


def derive_word(w: str, e: Expr, reg: OperatorRegistry) -> Expr:
    """Left fold of :func:`derive` over ``w``."""
    return reduce(lambda acc, a: derive(a, acc, reg), w, e)


def check_word(w: str, reg: OperatorRegistry):
    bad = set(w) - set(reg.alphabet)
    if bad:
        raise ValueError(f"symbols outside the alphabet: {''.join(sorted(bad))}")


def matches(e: Expr, w: str, reg: OperatorRegistry) -> bool:
    """Decide ``w in L(e)`` as nullability of the word derivative."""
    check_word(w, reg)
    return is_nullable(derive_word(w, e, reg), reg)
