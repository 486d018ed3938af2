"""Acceptance gate: nine criteria, each checked at its stated size and tolerance.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion
is printed in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass

import pytest

from enre.automata import Equivalent, compile, equiv, run
from enre.corpus import ALL_OPS, CORPUS_DEFS, LINEAR_OPS, plain_corpus, random_corpus
from enre.derivation import Undecided, derive, derive_word, matches, nullable
from enre.dspace import DSpace, check_closure
from enre.errors import CapabilityError
from enre.operators import build_registry
from enre.oracle import Oracle, all_words
from enre.syntax import EPS, NULL, Concat, Op, OpId, Sym, Union, parse, pretty, size, smart_concat, smart_union
from enre.transducer import build_fst, transduce

ALPHABET = CORPUS_DEFS.alphabet
RESULTS: dict[int, "Verdict"] = {}


@dataclass
class Verdict:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"criterion {self.number} {status}: {self.title} ({self.detail}; {self.seconds:.1f}s)"


class Tally:
    def __init__(self):
        self.checks = 0
        self.failures: list[str] = []

    def check(self, cond: bool, what: str):
        self.checks += 1
        if not cond and len(self.failures) < 5:
            self.failures.append(what)
        elif not cond:
            self.failures.append("")

    @property
    def ok(self):
        return self.checks > 0 and not self.failures

    def summary(self, extra=""):
        head = f"{self.checks} checks, {len(self.failures)} failures"
        shown = [f for f in self.failures if f][:3]
        return head + (f"; {extra}" if extra else "") + (f"; e.g. {shown}" if shown else "")


def _fresh():
    reg = build_registry(CORPUS_DEFS)
    return reg, Oracle(reg)


# shared corpus for criteria 1 and 2: size <= 15, every derivable operator family
def full_corpus():
    return random_corpus(500, 15, seed=2024, ops=ALL_OPS)


def criterion_1() -> tuple[bool, str]:
    reg, orc = _fresh()
    corpus = full_corpus()
    t = Tally()
    assert len(corpus) >= 500 and max(size(e) for e in corpus) <= 15
    words = all_words(ALPHABET, 3)
    for e in corpus:
        for w in words:
            d = derive_word(w, e, reg)
            for n in range(6):
                big = orc.slice(e, n + len(w))
                got = orc.slice(d, n)
                t.check(big.complete and got.complete, f"inexact slice for {pretty(e)}")
                expected = {v[len(w):] for v in big.words if v.startswith(w)}
                t.check(got.words == expected, f"{pretty(e)} by {w!r} at n={n}")
    return t.ok, t.summary(f"{len(corpus)} expressions, |w| <= 3, n <= 5")


def criterion_2() -> tuple[bool, str]:
    reg, orc = _fresh()
    t = Tally()
    undecided = 0
    for e in full_corpus():
        outcome = nullable(e, reg)
        if isinstance(outcome, Undecided):
            undecided += 1
            continue
        t.check(bool(outcome) == ("" in orc.slice(e, 0)), pretty(e))
    return t.ok, t.summary(f"{undecided} undecided excluded")


def criterion_3() -> tuple[bool, str]:
    reg, orc = _fresh()
    t = Tally()
    corpus = random_corpus(300, 12, seed=33, ops=ALL_OPS)
    corpus += [parse(s, CORPUS_DEFS) for s in ("shclose(ab)", "shclose(a+b)", "shclose(ab)&(a+b)*", "shclose(a*b)")]
    with_shclose = sum("shclose" in pretty(e) for e in corpus)
    words = all_words(ALPHABET, 6)
    for e in corpus:
        for w in words:
            t.check(matches(e, w, reg) == orc.member(w, e), f"{pretty(e)} on {w!r}")
    sh = parse("shclose(ab)")
    accepted = {w for w in all_words(ALPHABET, 4) if matches(sh, w, reg)}
    t.check(accepted == {"", "ab", "aabb", "abab"}, f"shclose(ab) accepts {sorted(accepted)}")
    return t.ok, t.summary(f"{len(corpus)} expressions ({with_shclose} with shclose), |w| <= 6")


def criterion_4() -> tuple[bool, str]:
    reg, orc = _fresh()
    t = Tally()
    corpus = random_corpus(500, 15, seed=44, ops=LINEAR_OPS)
    words = all_words(ALPHABET, 6)
    largest = 0
    for e in corpus:
        d = compile(e, reg, max_states=10_000)
        largest = max(largest, len(d))
        accepted = {w for w in words if run(d, w)}
        t.check(accepted == orc.slice(e, 6).words, pretty(e))
    states = len(compile(parse("(a+b)*abb"), reg))
    t.check(states == 4, f"(a+b)*abb has {states} states")
    try:
        compile(parse("shclose(ab)"), reg)
        t.check(False, "shclose(ab) compiled")
    except CapabilityError as exc:
        t.check(exc.op == "shclose", str(exc))
    return t.ok, t.summary(f"{len(corpus)} Tier-A expressions, largest DFA {largest} states")


def criterion_5() -> tuple[bool, str]:
    reg, _ = _fresh()
    t = Tally()
    # star height <= 1: D+ of a nested star sums over the whole D+ of its body,
    # which is astronomically large already for (bbb)**
    corpus = plain_corpus(500, 10, seed=55, max_star_height=1)
    largest = 0
    for r in corpus:
        elements = DSpace(reg).enumerate(r, 100_000)
        largest = max(largest, len(elements))
        t.check(NULL in elements, f"0 missing from D+({pretty(r)})")
    ab = DSpace(reg).enumerate(Concat(Sym("a"), Sym("b")), 100)
    t.check(ab == {NULL, EPS, Sym("b"), Union([EPS, Sym("b")])}, f"D+(ab) = {sorted(map(pretty, ab))}")
    # 0 belongs to D+ of every corpus expression, enhanced ones included
    space = DSpace(reg)
    others = plain_corpus(300, 10, seed=56) + random_corpus(300, 10, seed=57, ops=LINEAR_OPS)
    for r in others:
        t.check(space.contains(NULL, r), f"0 not in D+({pretty(r)})")
    return t.ok, t.summary(f"{len(corpus)} enumerated (largest {largest}), {len(others)} null checks")


def criterion_6() -> tuple[bool, str]:
    reg, _ = _fresh()
    t = Tally()
    corpus = plain_corpus(500, 10, seed=66)
    sample = all_words(ALPHABET, 4)
    for r in corpus:
        space = DSpace(reg)
        report = check_closure(r, reg, sample, space)
        for c in report.checks:
            t.check(c.passed, f"part {c.part}: {pretty(r)} -> {pretty(c.expr)} {c.symbol}")
        for q in compile(r, reg).states:
            t.check(q is r or space.contains(q, r), f"state {pretty(q)} of {pretty(r)}")
    return t.ok, t.summary(f"{len(corpus)} plain expressions, sample |w| <= 4")


def criterion_7() -> tuple[bool, str]:
    reg, orc = _fresh()
    t = Tally()
    got = set(transduce(build_fst(OpId("hamming", (1,)), reg), "ab"))
    t.check(got == {"aa", "ab", "bb"}, f"hamming[1] on ab gives {sorted(got)}")
    ops = [OpId("hamming", (k,)) for k in range(3)]
    ops += [OpId("hom", ("H",)), OpId("hinv", ("H",)), OpId("hinv", ("G",)), OpId("upclose"), OpId("id")]
    args = plain_corpus(60, 8, seed=77)
    for opid in ops:
        fst = build_fst(opid, reg)
        for tr in fst.transitions:
            t.check(tr.output != "", f"empty output on {tr}")
        growth = max(1, max(len(tr.input) for tr in fst.transitions))
        for arg in args:
            for n in range(6):
                inputs = orc.slice(arg, n * growth)
                out = set()
                for w in inputs:
                    out |= {v for v in transduce(fst, w, max_steps=64, max_out=n or 1) if len(v) <= n}
                t.check(out == orc.slice(Op(opid, (arg,)), n).words, f"{opid}({pretty(arg)}) at n={n}")
    return t.ok, t.summary(f"{len(ops)} operators x {len(args)} arguments, n <= 5")


def criterion_8() -> tuple[bool, str]:
    reg, _ = _fresh()
    t = Tally()
    rng = random.Random(88)
    pool = random_corpus(400, 10, seed=89, ops=ALL_OPS) + plain_corpus(200, 10, seed=90)
    for _ in range(1000):
        r, s, a = rng.choice(pool), rng.choice(pool), rng.choice(ALPHABET)
        lhs = derive(a, smart_union(r, s), reg)
        t.check(lhs is smart_union(derive(a, r, reg), derive(a, s, reg)), f"union: {pretty(r)} | {pretty(s)}")
        t.check(derive(a, smart_concat(r, s), reg) is derive(a, Concat(r, s), reg), f"concat: {pretty(r)} | {pretty(s)}")
    return t.ok, t.summary("1000 random triples")


def criterion_9() -> tuple[bool, str]:
    reg, orc = _fresh()
    t = Tally()
    left = orc.slice(parse("lquot(@sigma-star, a)"), 1)
    t.check(left.complete and left.words == {"", "a"}, f"quotient slice {sorted(left.words)}")
    t.check("" in orc.slice(parse("xk[2,2](a)"), 1).words, "xk[2,2]({a}) lacks the empty word")
    t.check(orc.slice(parse("xk[2,2](aa)"), 1).words == {"a"}, "xk[2,2]({aa}) slice")
    t.check(isinstance(equiv(parse("tilde(a)"), parse("a+@e"), reg), Equivalent), "tilde(a) vs a+@e")
    return t.ok, t.summary()


CRITERIA = {
    1: ("derivative soundness", criterion_1),
    2: ("nullability vs oracle", criterion_2),
    3: ("word problem", criterion_3),
    4: ("DFA construction", criterion_4),
    5: ("D+ finiteness", criterion_5),
    6: ("closure under derivation", criterion_6),
    7: ("transducers realise operators", criterion_7),
    8: ("derivative identities", criterion_8),
    9: ("reference micro-facts", criterion_9),
}


def evaluate(number: int) -> Verdict:
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like any other
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    verdict = Verdict(number, title, ok, detail, time.perf_counter() - start)
    RESULTS[number] = verdict
    return verdict


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    verdict = evaluate(number)
    assert verdict.ok, verdict.line()


if __name__ == "__main__":
    verdicts = [evaluate(n) for n in sorted(CRITERIA)]
    for v in verdicts:
        print(v.line())
    sys.exit(0 if all(v.ok for v in verdicts) else 1)
