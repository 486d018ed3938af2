import pytest
from hypothesis import given, settings

from enre.automata import compile
from enre.derivation import derive_word
from enre.dspace import DSpace, check_closure, describe, dplus_contains, dplus_enumerate
from enre.errors import CapabilityError, CapExceeded
from enre.oracle import all_words
from enre.syntax import EPS, NULL, Concat, Sym, Union, parse
from strategies import linear, plain

a, b = Sym("a"), Sym("b")


def test_contains_examples(reg):
    r = parse("(a+b)*abb")
    assert dplus_contains(NULL, r, reg)
    assert dplus_contains(EPS, a, reg)
    assert dplus_contains(derive_word("ab", r, reg), r, reg)
    assert dplus_contains(r, r, reg)  # D(b, r) = r
    assert not dplus_contains(a, a, reg)


def test_enumerate_examples(reg):
    assert dplus_enumerate(Concat(a, b), reg) == {NULL, EPS, b, Union([EPS, b])}
    assert dplus_enumerate(a, reg) == {NULL, EPS}
    assert dplus_enumerate(EPS, reg) == {NULL}


def test_enhanced_descriptor(reg):
    desc = describe(parse("hamming[1](ab)"), reg)
    assert desc.prefixes == {""}
    assert {str(op) for op in desc.heads} == {"hamming[0]", "hamming[1]"}
    assert {str(op) for op in describe(parse("upclose(a)"), reg).heads} == {"upclose"}


def test_nonlinear_head_rejected(reg):
    with pytest.raises(CapabilityError):
        dplus_contains(EPS, parse("shclose(a)"), reg)


def test_closure_examples(reg):
    assert check_closure(parse("(a+b)*abb"), reg, all_words("ab", 4)).ok
    assert check_closure(Concat(a, b), reg, all_words("ab", 3)).ok
    report = check_closure(NULL, reg, all_words("ab", 2))
    assert report.ok and report.lines()[0].startswith("PASS")


def test_nested_stars_exceed_any_practical_cap(reg):
    # D+((bbb)*) has 128 elements; one more star sums over 127 of them
    assert len(dplus_enumerate(parse("(bbb)*"), reg)) == 128
    with pytest.raises(CapExceeded):
        dplus_enumerate(parse("(bbb)**"), reg, cap=10_000)
    # membership does not need the enumeration
    r = parse("(bbb)**")
    assert check_closure(r, reg, all_words("ab", 4)).ok


@settings(max_examples=60, deadline=None)
@given(plain(4))
def test_predicate_matches_enumeration(reg, r):
    space = DSpace(reg)
    elements = space.enumerate(r, 100_000)
    assert NULL in elements
    for t in elements:
        assert space.contains(t, r)
    # candidates from a related expression: mostly non-members
    for t in space.enumerate(Concat(r, a), 100_000):
        assert space.contains(t, r) == (t in elements)


@settings(max_examples=80, deadline=None)
@given(plain(8))
def test_closure_plain(reg, r):
    space = DSpace(reg)
    assert check_closure(r, reg, all_words(reg.alphabet, 3), space).ok
    for q in compile(r, reg).states:
        assert q is r or space.contains(q, r)


@settings(max_examples=60, deadline=None)
@given(linear(8))
def test_closure_enhanced(reg, r):
    space = DSpace(reg)
    assert check_closure(r, reg, all_words(reg.alphabet, 3), space).ok
