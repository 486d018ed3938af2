"""Derivative automata: construction, queries, equivalence and DOT export.

States of a :class:`Dfa` are canonical derivatives of the input expression;
two words lead to the same state exactly when their derivatives are similar.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .derivation import Undecided, check_word, derive, nullable
from .errors import CapabilityError, StateCapExceeded, UndecidedError
from .operators import OperatorRegistry
from .syntax import NULL, Expr, Op, Var, pretty

DEFAULT_MAX_STATES = 10000


@dataclass(frozen=True)
class Dfa:
    states: tuple[Expr, ...]
    alphabet: tuple[str, ...]
    delta: dict[tuple[int, str], int]
    start: int
    finals: frozenset[int]

    def __len__(self):
        return len(self.states)

    @property
    def state_ids(self) -> tuple[int, ...]:
        """Interning handles of the state expressions."""
        return tuple(s.uid for s in self.states)

    def step(self, state: int, a: str) -> int:
        return self.delta[(state, a)]


@dataclass(frozen=True)
class Equivalent:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class Counterexample:
    word: str
    side: str  # "first" or "second": the expression that accepts ``word``

    def __bool__(self):
        return False


def check_compilable(e: Expr, reg: OperatorRegistry):
    """Raise :class:`CapabilityError` unless every operator in ``e`` has a linear rule."""
    stack, seen = [e], set()
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        if isinstance(node, Var):
            raise TypeError("template variables cannot be compiled")
        if isinstance(node, Op):
            definition = reg[node.op]
            if not definition.is_linear:
                raise CapabilityError(definition.name, "not linear left derivable; no finite automaton")
            if definition.eps is None:
                raise CapabilityError(definition.name, "no nullability test")
        stack.extend(node.children)


def is_compilable(e: Expr, reg: OperatorRegistry) -> bool:
    try:
        check_compilable(e, reg)
    except CapabilityError:
        return False
    return True


def compile(e: Expr, reg: OperatorRegistry, max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    """Build the total DFA of dissimilar derivatives of ``e``.

    States are numbered in FIFO discovery order with symbols taken in
    alphabet order, so numbering is reproducible.
    """
    if max_states < 1:
        raise ValueError("max_states must be positive")
    check_compilable(e, reg)
    index = {e: 0}
    states = [e]
    delta = {}
    queue = deque([e])
    while queue:
        q = queue.popleft()
        src = index[q]
        for a in reg.alphabet:
            t = derive(a, q, reg)
            dst = index.get(t)
            if dst is None:
                if len(states) >= max_states:
                    raise StateCapExceeded(max_states)
                dst = index[t] = len(states)
                states.append(t)
                queue.append(t)
            delta[(src, a)] = dst
    finals = set()
    for i, q in enumerate(states):
        n = nullable(q, reg)
        if isinstance(n, Undecided):
            raise CapabilityError(n.op, n.reason or "nullability undecided")
        if n:
            finals.add(i)
    return Dfa(tuple(states), tuple(reg.alphabet), delta, 0, frozenset(finals))


def hook_dfa(e: Expr, reg: OperatorRegistry) -> Dfa:
    """Memoised automaton for an argument of a semantic nullability hook."""
    memo = reg.memo("hook_dfa")
    found = memo.get(e)
    if found is None:
        found = memo[e] = compile(e, reg)
    return found


def run(d: Dfa, w: str) -> bool:
    state = d.start
    for a in w:
        if (state, a) not in d.delta:
            raise ValueError(f"symbol {a!r} outside the alphabet")
        state = d.delta[(state, a)]
    return state in d.finals


def shortest_accepted(d: Dfa) -> str | None:
    """Length-lexicographically least accepted word, or ``None`` if the language is empty."""
    parent = {d.start: None}
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        if q in d.finals:
            word = []
            while parent[q] is not None:
                q, a = parent[q]
                word.append(a)
            return "".join(reversed(word))
        for a in d.alphabet:
            t = d.delta[(q, a)]
            if t not in parent:
                parent[t] = (q, a)
                queue.append(t)
    return None


def intersects(d1: Dfa, d2: Dfa) -> bool:
    start = (d1.start, d2.start)
    seen = {start}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        if p in d1.finals and q in d2.finals:
            return True
        for a in d1.alphabet:
            nxt = (d1.delta[(p, a)], d2.delta[(q, a)])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def equiv(e1: Expr, e2: Expr, reg: OperatorRegistry, max_states: int = DEFAULT_MAX_STATES):
    """Breadth-first bisimulation over pairs of derivatives.

    Returns :class:`Equivalent` or the length-lexicographically least
    :class:`Counterexample`.
    """
    check_compilable(e1, reg)
    check_compilable(e2, reg)
    start = (e1, e2)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        left = _decided(pair[0], reg)
        right = _decided(pair[1], reg)
        if left != right:
            word = []
            node = pair
            while parent[node] is not None:
                node, a = parent[node]
                word.append(a)
            return Counterexample("".join(reversed(word)), "first" if left else "second")
        for a in reg.alphabet:
            nxt = (derive(a, pair[0], reg), derive(a, pair[1], reg))
            if nxt not in parent:
                if len(parent) >= max_states:
                    raise StateCapExceeded(max_states)
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return Equivalent()


def _decided(e, reg) -> bool:
    n = nullable(e, reg)
    if isinstance(n, Undecided):
        raise CapabilityError(n.op, n.reason or "nullability undecided")
    return bool(n)


def enumerate_words(e: Expr, reg: OperatorRegistry, max_len: int) -> list[str]:
    """All accepted words of length at most ``max_len`` in length-then-lex order.

    Compilable expressions go through their DFA; anything else is explored
    by deriving along every word, pruning the empty derivative.
    """
    if is_compilable(e, reg):
        try:
            return _dfa_words(compile(e, reg), max_len)
        except (StateCapExceeded, CapabilityError):
            pass
    order = {a: i for i, a in enumerate(reg.alphabet)}
    found = []
    layer = [("", e)]
    for length in range(max_len + 1):
        nxt = []
        for w, q in layer:
            n = nullable(q, reg)
            if isinstance(n, Undecided):
                raise UndecidedError(n.op, n.reason or "nullability undecided")
            if n:
                found.append(w)
            if length < max_len:
                for a in reg.alphabet:
                    t = derive(a, q, reg)
                    if t is not NULL:
                        nxt.append((w + a, t))
        layer = nxt
    return sorted(found, key=lambda w: (len(w), [order[c] for c in w]))


def _dfa_words(d: Dfa, max_len: int) -> list[str]:
    live = _coreachable(d)
    found = []
    layer = [("", d.start)] if d.start in live else []
    for length in range(max_len + 1):
        nxt = []
        for w, q in layer:
            if q in d.finals:
                found.append(w)
            if length < max_len:
                for a in d.alphabet:
                    t = d.delta[(q, a)]
                    if t in live:
                        nxt.append((w + a, t))
        layer = nxt
    return found


def _coreachable(d: Dfa) -> set[int]:
    back: dict[int, set[int]] = {}
    for (q, _), t in d.delta.items():
        back.setdefault(t, set()).add(q)
    live = set(d.finals)
    stack = list(live)
    while stack:
        for q in back.get(stack.pop(), ()):
            if q not in live:
                live.add(q)
                stack.append(q)
    return live


def minimize(d: Dfa) -> Dfa:
    """Hopcroft partition refinement; state expressions keep the first member of each block."""
    n = len(d.states)
    finals = set(d.finals)
    nonfinals = set(range(n)) - finals
    partition = [b for b in (finals, nonfinals) if b]
    inverse: dict[tuple[int, str], set[int]] = {}
    for (q, a), t in d.delta.items():
        inverse.setdefault((t, a), set()).add(q)
    work = [min(partition, key=len)] if len(partition) == 2 else list(partition)
    while work:
        splitter = work.pop()
        for a in d.alphabet:
            pre = set()
            for t in splitter:
                pre |= inverse.get((t, a), set())
            if not pre:
                continue
            refined = []
            for block in partition:
                inside = block & pre
                outside = block - pre
                if inside and outside:
                    refined += [inside, outside]
                    if block in work:
                        work.remove(block)
                        work += [inside, outside]
                    else:
                        work.append(min(inside, outside, key=len))
                else:
                    refined.append(block)
            partition = refined
    block_of = {}
    for block in partition:
        for q in block:
            block_of[q] = block
    # renumber blocks in order of first member along the original numbering
    order = {}
    reps = []
    for q in range(n):
        key = id(block_of[q])
        if key not in order:
            order[key] = len(reps)
            reps.append(q)
    new_index = {q: order[id(block_of[q])] for q in range(n)}
    delta = {(new_index[r], a): new_index[d.delta[(r, a)]] for r in reps for a in d.alphabet}
    finals = frozenset(new_index[q] for q in d.finals)
    return Dfa(tuple(d.states[r] for r in reps), d.alphabet, delta, new_index[d.start], finals)


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(d: Dfa) -> str:
    lines = ["digraph dfa {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for i, q in enumerate(d.states):
        shape = "doublecircle" if i in d.finals else "circle"
        lines.append(f"  q{i} [label={_dot_quote(pretty(q))}, shape={shape}];")
    lines.append(f"  __start -> q{d.start};")
    for i in range(len(d.states)):
        by_target: dict[int, list[str]] = {}
        for a in d.alphabet:
            by_target.setdefault(d.delta[(i, a)], []).append(a)
        for t in sorted(by_target):
            lines.append(f"  q{i} -> q{t} [label={_dot_quote(','.join(by_target[t]))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

