"""Rational transducers for unary, linear operator families.

A unary operator ``F`` whose nullability test is the identity and whose
derivative by ``a`` is ``sum_j v_j . G_j(w_j \\ L)`` yields transitions
``(F, w_j, a v_j, G_j)``: read the input chunk ``w_j``, write ``a v_j``.
Every state is accepting and the initial state is ``F`` itself.

Transition tuples are always ``(source, input_chunk, output_chunk, target)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import CapabilityError
from .operators import IDENTITY, BooleanFn, Linear, OperatorRegistry
from .syntax import OpId


@dataclass(frozen=True)
class Transition:
    source: OpId
    input: str
    output: str
    target: OpId


@dataclass(frozen=True)
class Transducer:
    states: tuple[OpId, ...]
    initial: OpId
    transitions: tuple[Transition, ...]

    @property
    def accepting(self) -> tuple[OpId, ...]:
        return self.states

    def outgoing(self, state: OpId) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.source == state)


@dataclass(frozen=True)
class Transduction:
    """Outputs found within the caps; ``truncated`` if some path was cut off."""

    words: frozenset[str]
    truncated: bool = False

    def __contains__(self, w):
        return w in self.words

    def __iter__(self):
        return iter(sorted(self.words, key=lambda w: (len(w), w)))

    def __len__(self):
        return len(self.words)


def _check_eligible(opid: OpId, reg: OperatorRegistry):
    definition = reg[opid]
    if definition.arity != 1:
        raise CapabilityError(definition.name, "transducers need unary operators")
    if not isinstance(definition.rule, Linear):
        raise CapabilityError(definition.name, "transducers need linear derivative rules")
    if not (isinstance(definition.eps, BooleanFn) and definition.eps.table == IDENTITY.table):
        raise CapabilityError(definition.name, "nullability test is not the identity function")


def build_fst(opid: OpId, reg: OperatorRegistry) -> Transducer:
    """Transducer realising ``opid`` (and, from other states, its family members)."""
    opid = OpId(*opid)
    _check_eligible(opid, reg)
    states = [opid]
    seen = {opid}
    transitions = []
    queue = deque([opid])
    while queue:
        state = queue.popleft()
        _check_eligible(state, reg)
        definition = reg[state]
        for a in reg.alphabet:
            for term in definition.rule.terms[a]:
                ((w, _),) = term.args
                transitions.append(Transition(state, w, a + term.prefix, term.target))
                if term.target not in seen:
                    seen.add(term.target)
                    states.append(term.target)
                    queue.append(term.target)
    unique = list(dict.fromkeys(transitions))
    return Transducer(tuple(states), opid, tuple(unique))


def transduce(t: Transducer, word: str, max_steps: int = 64, max_out: int = 16) -> Transduction:
    """All outputs of paths from the initial state that consume exactly ``word``.

    Outputs longer than ``max_out`` and paths longer than ``max_steps`` are
    cut; ``truncated`` reports whether any cut happened.
    """
    if max_steps < 1 or max_out < 1:
        raise ValueError("caps must be positive")
    by_state: dict[OpId, list[Transition]] = {}
    for tr in t.transitions:
        by_state.setdefault(tr.source, []).append(tr)
    outputs = set()
    truncated = False
    start = (t.initial, 0, "")
    seen = {start}
    layer = [start]
    for step in range(max_steps + 1):
        nxt = []
        for state, pos, out in layer:
            if pos == len(word):
                outputs.add(out)
            for tr in by_state.get(state, ()):
                if not word.startswith(tr.input, pos):
                    continue
                grown = out + tr.output
                if len(grown) > max_out or step == max_steps:
                    truncated = True
                    continue
                config = (tr.target, pos + len(tr.input), grown)
                if config not in seen:
                    seen.add(config)
                    nxt.append(config)
        layer = nxt
        if not layer:
            break
    return Transduction(frozenset(outputs), truncated)


def _label(w: str) -> str:
    return w if w else "@e"


def fst_summary(t: Transducer) -> str:
    lines = [f"states: {len(t.states)}", f"initial: {t.initial}"]
    lines += [f"{tr.source}\t{_label(tr.input)}\t{_label(tr.output)}\t{tr.target}" for tr in t.transitions]
    return "\n".join(lines) + "\n"


def fst_to_dot(t: Transducer) -> str:
    names = {s: f"s{i}" for i, s in enumerate(t.states)}
    lines = ["digraph fst {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in t.states:
        lines.append(f'  {names[s]} [label="{s}", shape=doublecircle];')
    lines.append(f"  __start -> {names[t.initial]};")
    for tr in t.transitions:
        label = f"{_label(tr.input)}/{_label(tr.output)}"
        lines.append(f'  {names[tr.source]} -> {names[tr.target]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
