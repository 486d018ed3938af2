"""The inductive over-approximation D+(r) of iterated derivatives.

For plain regular expressions::

    D+(0) = {0}      D+(r+s) = D+(r) (+) D+(s)
    D+(1) = {0}      D+(r.s) = D+(r) (.) s (+) SUM D+(s)
    D+(a) = {0, 1}   D+(r*)  = SUM (D+(r) (.) r*)

where ``SUM S`` is the set of all finite sums of elements of ``S`` (the empty
sum being ``0``).  For an enhanced head ``F(r1..rn)`` with linear rules,
D+ consists of sums of terms ``v . G(r1'..rm')`` with ``v`` a suffix of a rule
prefix, ``G`` an enhanced operator of the family and each ``ri'`` drawn from
``D*(rj) = {rj} | D+(rj)``.

Membership never materialises ``SUM S``; it decomposes the summand set of
the candidate instead.  Enumeration does materialise it, under a cap.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .derivation import derive, derive_word
from .errors import CapabilityError, CapExceeded
from .operators import Linear, OperatorRegistry
from .syntax import (
    EPS,
    NULL,
    Concat,
    Eps,
    Expr,
    Null,
    Op,
    OpId,
    Star,
    Sym,
    Union,
    operators_in,
    pretty,
    smart_concat,
    summands,
    union_of,
)

MAX_SUMMANDS = 20


@dataclass(frozen=True)
class DPlusDescriptor:
    """Finite data describing D+ for the enhanced heads of an expression.

    ``prefixes`` holds every suffix of every rule prefix (including the empty
    word), ``heads`` the enhanced operators reachable from those in ``root``.
    """

    root: Expr
    prefixes: frozenset[str]
    heads: frozenset[OpId]


def describe(r: Expr, reg: OperatorRegistry) -> DPlusDescriptor:
    heads = set()
    for op in operators_in(r):
        heads |= reg.closure(op)
    words = {""}
    for op in heads:
        definition = reg[op]
        if not isinstance(definition.rule, Linear):
            raise CapabilityError(definition.name, "D+ is only defined for linear rules")
        for terms in definition.rule.terms.values():
            for term in terms:
                words.update(term.prefix[i:] for i in range(len(term.prefix) + 1))
    return DPlusDescriptor(r, frozenset(words), frozenset(heads))


class DSpace:
    """Membership and enumeration for D+ over one registry, with memo tables."""

    def __init__(self, reg: OperatorRegistry):
        self.reg = reg
        self._contains: dict[tuple[Expr, Expr], bool] = {}
        self._descriptors: dict[Expr, DPlusDescriptor] = {}

    def descriptor(self, r: Expr) -> DPlusDescriptor:
        found = self._descriptors.get(r)
        if found is None:
            found = self._descriptors[r] = describe(r, self.reg)
        return found

    # -- membership ---------------------------------------------------------

    def contains(self, t: Expr, r: Expr) -> bool:
        key = (t, r)
        hit = self._contains.get(key)
        if hit is None:
            hit = self._contains[key] = self._decide(t, r)
        return hit

    def contains_star(self, t: Expr, r: Expr) -> bool:
        """Membership in ``D*(r) = {r} | D+(r)``."""
        return t is r or self.contains(t, r)

    def _decide(self, t: Expr, r: Expr) -> bool:
        if t is NULL:
            return True
        parts = summands(t)
        if len(parts) > MAX_SUMMANDS:
            raise ValueError(f"candidate has {len(parts)} summands; refusing exponential search")
        match r:
            case Null() | Eps():
                return False
            case Sym():
                return t is EPS
            case Union(items):
                return self._cover(parts, [lambda x, i=i: self.contains(x, i) for i in items])
            case Concat(left, right):
                return self._concat(parts, left, right)
            case Star(body):
                return all(self._star_term(p, body, r) for p in parts)
            case Op():
                return all(self._enhanced_term(p, r) for p in parts)
        raise TypeError(f"not an expression: {r!r}")

    def _valid_subsets(self, parts, test) -> list[int]:
        """Bitmasks of non-empty subsets of ``parts`` whose sum passes ``test``."""
        found = []
        for mask in range(1, 1 << len(parts)):
            chosen = union_of(parts[i] for i in range(len(parts)) if mask >> i & 1)
            if test(chosen):
                found.append(mask)
        return found

    def _cover(self, parts, tests) -> bool:
        # each test picks one subset (possibly empty); together they must cover
        full = (1 << len(parts)) - 1
        reach = {0}
        for test in tests:
            options = [0] + self._valid_subsets(parts, test)
            reach = {m | o for m in reach for o in options}
            if full in reach:
                return True
        return full in reach

    def _sum_closure_covers(self, parts, needed: int, test) -> bool:
        covered = 0
        for mask in self._valid_subsets(parts, test):
            covered |= mask
        return covered & needed == needed

    def _concat(self, parts, left, right) -> bool:
        full = (1 << len(parts)) - 1
        index = {p: i for i, p in enumerate(parts)}
        heads = [0]  # head r' (.) right, as a bitmask of summands; 0 is r' = 0
        if right is EPS:
            heads += self._valid_subsets(parts, lambda x: self.contains(x, left))
        elif right is not NULL:
            own = summands(right)
            if all(p in index for p in own) and self.contains(EPS, left):
                heads.append(sum(1 << index[p] for p in own))
            for p in parts:
                if isinstance(p, Concat) and p.right is right and p.left not in (NULL, EPS):
                    if self.contains(p.left, left):
                        heads.append(1 << index[p])
        return any(
            self._sum_closure_covers(parts, full & ~h, lambda x: self.contains(x, right))
            for h in heads
        )

    def _star_term(self, p: Expr, body: Expr, star: Expr) -> bool:
        if p is star:
            return self.contains(EPS, body)
        return (
            isinstance(p, Concat)
            and p.right is star
            and p.left not in (NULL, EPS)
            and self.contains(p.left, body)
        )

    def _enhanced_term(self, p: Expr, r: Op) -> bool:
        desc = self.descriptor(r)
        word = []
        node = p
        while isinstance(node, Concat) and isinstance(node.left, Sym):
            word.append(node.left.char)
            node = node.right
        if not isinstance(node, Op) or "".join(word) not in desc.prefixes:
            return False
        if node.op not in desc.heads or len(node.args) != self.reg[node.op].arity:
            return False
        return all(any(self.contains_star(arg, rj) for rj in r.args) for arg in node.args)

    # -- enumeration --------------------------------------------------------

    def enumerate(self, r: Expr, cap: int) -> frozenset[Expr]:
        memo: dict[Expr, frozenset[Expr]] = {}
        return self._enum(r, cap, memo)

    def _enum(self, r: Expr, cap: int, memo) -> frozenset[Expr]:
        hit = memo.get(r)
        if hit is not None:
            return hit
        match r:
            case Null() | Eps():
                out = {NULL}
            case Sym():
                out = {NULL, EPS}
            case Union(items):
                out = {NULL}
                for item in items:
                    sub = self._enum(item, cap, memo)
                    out = {union_of((x, y)) for x in out for y in sub}
                    _check(out, cap)
            case Concat(left, right):
                heads = {smart_concat(x, right) for x in self._enum(left, cap, memo)}
                tails = _sums(self._enum(right, cap, memo), cap)
                out = {union_of((h, t)) for h in heads for t in tails}
            case Star(body):
                out = set(_sums({smart_concat(x, r) for x in self._enum(body, cap, memo)}, cap))
            case Op():
                out = set(_sums(self._enhanced_terms(r, cap, memo), cap))
            case _:
                raise TypeError(f"not an expression: {r!r}")
        _check(out, cap)
        memo[r] = frozenset(out)
        return memo[r]

    def _enhanced_terms(self, r: Op, cap: int, memo) -> set[Expr]:
        desc = self.descriptor(r)
        pool = set()
        for rj in r.args:
            pool |= self._enum(rj, cap, memo) | {rj}
        pool = sorted(pool, key=lambda e: e.key)
        terms = set()
        for op in sorted(desc.heads):
            arity = self.reg[op].arity
            for args in product(pool, repeat=arity):
                node = Op(op, args)
                for v in desc.prefixes:
                    terms.add(smart_concat(_word(v), node))
                    _check(terms, cap)
        return terms


def _word(v: str) -> Expr:
    e = EPS
    for c in reversed(v):
        e = smart_concat(Sym(c), e)
    return e


def _sums(elements, cap: int) -> set[Expr]:
    """All finite sums of ``elements`` modulo similarity."""
    out = {NULL}
    for x in sorted(set(elements), key=lambda e: e.key):
        out |= {union_of((y, x)) for y in out}
        _check(out, cap)
    return out


def _check(items, cap):
    if len(items) > cap:
        raise CapExceeded(cap)


def dplus_contains(t: Expr, r: Expr, reg: OperatorRegistry) -> bool:
    return DSpace(reg).contains(t, r)


def dplus_enumerate(r: Expr, reg: OperatorRegistry, cap: int = 100_000) -> frozenset[Expr]:
    return DSpace(reg).enumerate(r, cap)


@dataclass(frozen=True)
class ClosureCheck:
    part: int
    expr: Expr
    symbol: str
    passed: bool

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {pretty(self.expr)} {self.symbol}"


@dataclass(frozen=True)
class ClosureReport:
    root: Expr
    checks: tuple[ClosureCheck, ...]

    @property
    def violations(self) -> tuple[ClosureCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def check_closure(r: Expr, reg: OperatorRegistry, sample, space: DSpace | None = None) -> ClosureReport:
    """Check both closure-under-derivation properties of D+(r).

    Part 1: ``D(a, r)`` lies in D+(r) for every symbol.  Part 2: for every
    derivative ``t`` reached along a non-empty sample word, ``t`` and each
    ``D(a, t)`` lie in D+(r).
    """
    space = space or DSpace(reg)
    checks = []
    for a in reg.alphabet:
        checks.append(ClosureCheck(1, r, a, space.contains(derive(a, r, reg), r)))
    reached = []
    seen = set()
    for w in sample:
        if not w:
            continue
        t = derive_word(w, r, reg)
        if t not in seen:
            seen.add(t)
            reached.append(t)
    for t in reached:
        if not space.contains(t, r):
            checks.append(ClosureCheck(2, t, "-", False))
            continue
        for a in reg.alphabet:
            checks.append(ClosureCheck(2, t, a, space.contains(derive(a, t, reg), r)))
    return ClosureReport(r, tuple(checks))
