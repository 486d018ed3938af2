"""Registry of enhanced operators.

Each operator carries two pieces of knowledge:

* how to decide whether the empty word belongs to ``F(L1, ..., Ln)`` -- either
  a boolean function of the arguments' nullability, or a semantic hook that
  inspects the argument languages themselves;
* how to take the left quotient by a symbol -- either a *linear* rule
  (a finite sum of ``v . G(w1\\L_i1, ...)`` terms) or a *general* template over
  word-derivatives of the arguments.

Parameterised families (``hamming[k]``, ``xk[i,k]``, ``hom[H]``...) are
materialised on demand; registering an operator also registers every operator
its derivative rule can produce.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Union as TypingUnion

from .errors import CapabilityError, DefinitionsError
from .syntax import (
    AND,
    NOT,
    Concat,
    Definitions,
    Expr,
    Op,
    OpId,
    Sym,
    Var,
    check_params,
    SIGNATURES,
)

ID = OpId("id")


@dataclass(frozen=True)
class BooleanFn:
    """Truth table indexed by ``sum(flag_i << i)`` over the argument flags."""

    table: tuple[bool, ...]

    def __call__(self, flags) -> bool:
        index = sum(int(bool(f)) << i for i, f in enumerate(flags))
        return self.table[index]

    @property
    def arity(self) -> int:
        return len(self.table).bit_length() - 1


IDENTITY = BooleanFn((False, True))
CONST_TRUE = BooleanFn((True, True))
CONST_FALSE = BooleanFn((False, False))
NEGATION = BooleanFn((True, False))
CONJUNCTION = BooleanFn((False, False, False, True))


@dataclass(frozen=True)
class SemanticHook:
    """Decide nullability by inspecting argument languages.

    ``emptiness``: nullable iff argument 0 is non-empty.
    ``intersection-emptiness``: nullable iff arguments 0 and 1 intersect.
    ``shortest-word-bound``: nullable iff argument 0 has a word shorter than
    ``threshold``.
    """

    kind: str
    threshold: int | None = None


@dataclass(frozen=True)
class HookRequest:
    kind: str
    args: tuple[int, ...]
    threshold: int | None = None


EpsCapability = TypingUnion[BooleanFn, SemanticHook, None]


@dataclass(frozen=True)
class LinearTerm:
    """``prefix . target(D(w_1, r_{a_1}), ...)`` with ``args = ((w_1, a_1), ...)``."""

    prefix: str
    target: OpId
    args: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Linear:
    terms: dict[str, tuple[LinearTerm, ...]]


@dataclass(frozen=True)
class General:
    variables: dict[str, frozenset[tuple[str, int]]]
    templates: dict[str, Expr]


DerivativeRule = TypingUnion[Linear, General, None]


@dataclass(frozen=True)
class OperatorDef:
    opid: OpId
    arity: int
    eps: EpsCapability
    rule: DerivativeRule

    @property
    def name(self) -> str:
        return str(self.opid)

    @property
    def is_linear(self) -> bool:
        return isinstance(self.rule, Linear)

    def targets(self) -> set[OpId]:
        if isinstance(self.rule, Linear):
            return {t.target for terms in self.rule.terms.values() for t in terms}
        if isinstance(self.rule, General):
            found = set()
            for template in self.rule.templates.values():
                stack = [template]
                while stack:
                    node = stack.pop()
                    if isinstance(node, Op):
                        found.add(node.op)
                    stack.extend(node.children)
            return found
        return set()


class OperatorRegistry:
    """Operator definitions for one alphabet and set of homomorphism tables.

    Lookups resolve unseen family members on demand, so the registry behaves
    as the (infinite) closed family while only materialising what is used.
    The ``cache`` dict is per-registry memo space for the derivation and
    automata modules.
    """

    def __init__(self, defs: Definitions):
        self.defs = defs
        self.alphabet: tuple[str, ...] = defs.alphabet
        self._ops: dict[OpId, OperatorDef] = {}
        self._lock = threading.Lock()
        self.cache: dict[str, dict] = {}

    def memo(self, name: str) -> dict:
        table = self.cache.get(name)
        if table is None:
            table = self.cache.setdefault(name, {})
        return table

    def __getitem__(self, opid: OpId) -> OperatorDef:
        found = self._ops.get(opid)
        if found is None:
            self.register(opid)
            found = self._ops[opid]
        return found

    def __contains__(self, opid) -> bool:
        return opid in self._ops

    def __iter__(self):
        return iter(sorted(self._ops, key=lambda o: (o.name, o.params)))

    def __len__(self):
        return len(self._ops)

    def register(self, opid: OpId) -> OperatorDef:
        """Add ``opid`` and its derivation closure."""
        opid = OpId(*opid)
        with self._lock:
            pending = [opid]
            while pending:
                current = pending.pop()
                if current in self._ops:
                    continue
                definition = _make_def(current, self.defs)
                self._ops[current] = definition
                pending.extend(t for t in definition.targets() if t not in self._ops)
        return self._ops[opid]

    def closure(self, opid: OpId) -> set[OpId]:
        """Every operator reachable from ``opid`` through derivative rules."""
        seen = {opid}
        pending = [opid]
        while pending:
            for target in self[pending.pop()].targets():
                if target not in seen:
                    seen.add(target)
                    pending.append(target)
        return seen


def build_registry(defs: Definitions | None = None, ops=()) -> OperatorRegistry:
    """Registry over ``defs`` with the parameter-free operators pre-registered.

    ``ops`` lists extra operator identifiers (e.g. ``OpId("hamming", (2,))``)
    to register eagerly; anything else is resolved on first use.
    """
    reg = OperatorRegistry(defs or Definitions())
    for name, (_, kinds) in SIGNATURES.items():
        if not kinds and name != "suffixes":
            reg.register(OpId(name))
    for table, image in reg.defs.homs.items():
        reg.register(OpId("hinv", (table,)))
        if all(image.values()):
            reg.register(OpId("hom", (table,)))
    for opid in ops:
        reg.register(opid)
    return reg


def eps_capability(op: OperatorDef, arg_flags) -> bool | HookRequest:
    """Nullability of ``op(args)`` given the arguments' nullability flags."""
    cap = op.eps
    if isinstance(cap, BooleanFn):
        flags = tuple(arg_flags)
        if len(flags) != op.arity:
            raise ValueError(f"{op.name} expects {op.arity} flags, got {len(flags)}")
        return cap(flags)
    if isinstance(cap, SemanticHook):
        needed = (0, 1) if cap.kind == "intersection-emptiness" else (0,)
        return HookRequest(cap.kind, needed, cap.threshold)
    raise CapabilityError(op.name, "no nullability test available")


def derivative_rule(op: OperatorDef, a: str):
    """Instantiated rule data for symbol ``a``.

    Linear rules yield a tuple of :class:`LinearTerm`; general rules yield
    ``(variables, template)``.
    """
    rule = op.rule
    if isinstance(rule, Linear):
        return rule.terms[a]
    if isinstance(rule, General):
        return rule.variables[a], rule.templates[a]
    raise CapabilityError(op.name, "operator has no derivative rule")


def _unary_same(opid, alphabet):
    return Linear({a: (LinearTerm("", opid, (((a, 0),))),) for a in alphabet})


def _make_def(opid: OpId, defs: Definitions) -> OperatorDef:
    name, params = opid
    if name not in SIGNATURES or name == "suffixes":
        raise DefinitionsError(f"unknown operator {name!r}")
    problem = check_params(name, params, defs)
    if problem:
        raise DefinitionsError(problem)
    sigma = defs.alphabet
    arity = SIGNATURES[name][0]

    if name == "and":
        rule = Linear({a: (LinearTerm("", AND, ((a, 0), (a, 1))),) for a in sigma})
        return OperatorDef(opid, arity, CONJUNCTION, rule)
    if name == "not":
        return OperatorDef(opid, arity, NEGATION, _unary_same(NOT, sigma))
    if name == "shuffle":
        rule = Linear({
            a: (LinearTerm("", opid, ((a, 0), ("", 1))), LinearTerm("", opid, (("", 0), (a, 1))))
            for a in sigma
        })
        return OperatorDef(opid, arity, CONJUNCTION, rule)
    if name == "shclose":
        variables = {a: frozenset({(a, 0), ("", 0)}) for a in sigma}
        templates = {a: Op(OpId("shuffle"), (Var(a, 0), Op(opid, (Var("", 0),)))) for a in sigma}
        return OperatorDef(opid, arity, CONST_TRUE, General(variables, templates))
    if name == "hinv":
        h = defs.homs[params[0]]
        rule = Linear({a: (LinearTerm("", opid, ((h[a], 0),)),) for a in sigma})
        return OperatorDef(opid, arity, IDENTITY, rule)
    if name == "hom":
        h = defs.homs[params[0]]
        rule = Linear({
            a: tuple(LinearTerm(h[b][1:], opid, ((b, 0),)) for b in sigma if h[b][0] == a)
            for a in sigma
        })
        return OperatorDef(opid, arity, IDENTITY, rule)
    if name == "xk":
        i, k = params
        target = OpId("xk", (k, k))
        rule = Linear({
            a: tuple(
                LinearTerm("", target, (("".join(w) + a, 0),))
                for w in itertools.product(sigma, repeat=i - 1)
            )
            for a in sigma
        })
        return OperatorDef(opid, arity, SemanticHook("shortest-word-bound", i), rule)
    if name == "lquot":
        variables = {a: frozenset({("", 0), ("", 1)}) for a in sigma}
        templates = {a: Op(opid, (Concat(Var("", 0), Sym(a)), Var("", 1))) for a in sigma}
        return OperatorDef(opid, arity, SemanticHook("intersection-emptiness"), General(variables, templates))
    if name == "rquot":
        rule = Linear({a: (LinearTerm("", opid, ((a, 0), ("", 1))),) for a in sigma})
        return OperatorDef(opid, arity, SemanticHook("intersection-emptiness"), rule)
    if name == "prefixes":
        return OperatorDef(opid, arity, SemanticHook("emptiness"), _unary_same(opid, sigma))
    if name == "hamming":
        (k,) = params
        terms = {}
        for a in sigma:
            found = [LinearTerm("", opid, ((a, 0),))]
            if k > 0:
                lower = OpId("hamming", (k - 1,))
                found += [LinearTerm("", lower, ((x, 0),)) for x in sigma if x != a]
            terms[a] = tuple(found)
        return OperatorDef(opid, arity, IDENTITY, Linear(terms))
    if name == "lev":
        (k,) = params
        terms = {}
        for a in sigma:
            found = []
            for n in range(k + 1):
                for w in map("".join, itertools.product(sigma, repeat=n)):
                    # delete w, then match a
                    found.append(LinearTerm("", OpId("lev", (k - n,)), ((w + a, 0),)))
                    if k - n - 1 < 0:
                        continue
                    lower = OpId("lev", (k - n - 1,))
                    # delete w, then substitute a for x
                    found += [LinearTerm("", lower, ((w + x, 0),)) for x in sigma if x != a]
                    # delete w, then insert a
                    found.append(LinearTerm("", lower, ((w, 0),)))
            terms[a] = tuple(found)
        return OperatorDef(opid, arity, SemanticHook("shortest-word-bound", k + 1), Linear(terms))
    if name in ("tilde", "bar"):
        eps = CONST_TRUE if name == "tilde" else CONST_FALSE
        return OperatorDef(opid, arity, eps, _unary_same(ID, sigma))
    if name == "upclose":
        rule = Linear({
            a: (LinearTerm("", opid, (("", 0),)), LinearTerm("", opid, ((a, 0),))) for a in sigma
        })
        return OperatorDef(opid, arity, IDENTITY, rule)
    if name == "id":
        return OperatorDef(opid, arity, IDENTITY, _unary_same(ID, sigma))
    raise DefinitionsError(f"no rule for operator {name!r}")  # pragma: no cover
