import pickle

import pytest
from hypothesis import given, settings

from enre.corpus import CORPUS_DEFS
from enre.errors import DefinitionsError, ParseError
from enre.oracle import slice_of
from enre.syntax import (
    EPS,
    NULL,
    Concat,
    Definitions,
    Op,
    OpId,
    Star,
    Sym,
    Union,
    is_canonical,
    normalize,
    parse,
    parse_definitions,
    parse_opid,
    pretty,
    smart_concat,
    smart_union,
)
from strategies import enhanced, plain, raw_plain

a, b, c = Sym("a"), Sym("b"), Sym("c")
ABC = Definitions(("a", "b", "c"))


def test_parse_grammar():
    assert parse("a(b+c)*", ABC) is Concat(a, Star(Union([b, c])))
    assert parse("shuffle(ab, c)", ABC) is Op(OpId("shuffle"), (Concat(a, b), c))
    assert parse("a+(b+a)") is Union([a, b])


def test_parse_atoms_and_sugar():
    assert parse("@0") is NULL
    assert parse("@e") is EPS
    assert parse("@sigma") is Union([a, b])
    assert parse("suffixes(a)") is Op(OpId("lquot"), (Star(Union([a, b])), a))
    assert parse("a&b") is Op(OpId("and"), (a, b))
    assert parse("!a") is Op(OpId("not"), (a,))
    assert parse("hamming[2](a)").op == OpId("hamming", (2,))
    assert parse("xk[1,2](a)").op == OpId("xk", (1, 2))


def test_concat_is_right_nested():
    assert parse("abc", ABC) is Concat(a, Concat(b, c))


@pytest.mark.parametrize(
    "text",
    ["", "a+", "(a", "a)", "hamming(a)", "hamming[x](a)", "xk[3,2](a)", "foo(a)", "c", "hom[Q](a)", "and(a)"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse("ab+)")
    assert info.value.position == 3


def test_erasing_hom_is_rejected():
    defs = parse_definitions("alphabet: a b\nhom E: a -> @e, b -> b\n")
    with pytest.raises(ParseError):
        parse("hom[E](a)", defs)
    assert parse("hinv[E](a)", defs).op == OpId("hinv", ("E",))


def test_definitions_file():
    defs = parse_definitions("# test\nalphabet: a b c\nhom H: a -> bb, b -> @e, c -> c\n")
    assert defs.alphabet == ("a", "b", "c")
    assert defs.homs["H"] == {"a": "bb", "b": "", "c": "c"}
    with pytest.raises(DefinitionsError):
        parse_definitions("alphabet: a b\nhom H: a -> b\n")  # not total
    with pytest.raises(DefinitionsError):
        parse_definitions("alphabet: a b\nhom H: a -> c, b -> b\n")


def test_parse_opid():
    assert parse_opid("hamming[1]") == OpId("hamming", (1,))
    assert parse_opid("upclose") == OpId("upclose")
    with pytest.raises(ParseError):
        parse_opid("hamming")


def test_normalize_examples():
    assert normalize(Union([Union([a, b]), a])) is Union([a, b])
    assert normalize(Union([b, a])) is Union([a, b])
    assert normalize(Union([a, NULL])) is a


def test_smart_constructors():
    assert smart_concat(NULL, b) is NULL
    assert smart_concat(a, NULL) is NULL
    assert smart_concat(EPS, b) is b
    assert smart_concat(a, b) is Concat(a, b)
    assert smart_union(a, a) is a
    assert smart_union(NULL, b) is b
    assert smart_union(b, a) is Union([a, b])


def test_pretty_examples():
    assert pretty(Union([a, b])) == "a+b"
    assert pretty(Concat(a, Star(b))) == "ab*"
    assert pretty(Op(OpId("hamming", (1,)), (Concat(a, b),))) == "hamming[1](ab)"
    assert pretty(NULL) == "@0" and pretty(EPS) == "@e"


def test_interning():
    assert Concat(a, b) is Concat(Sym("a"), Sym("b"))
    assert pickle.loads(pickle.dumps(Star(a))) is Star(a)


@given(enhanced(max_size=15, raw=True))
def test_pretty_roundtrip(e):
    e = normalize(e)
    assert parse(pretty(e), CORPUS_DEFS) is e


@given(raw_plain(10))
def test_normalize_idempotent_and_canonical(e):
    n = normalize(e)
    assert normalize(n) is n
    assert is_canonical(n)


@settings(max_examples=60)
@given(raw_plain(12))
def test_normalize_preserves_slices(e):
    for n in range(5):
        assert slice_of(normalize(e), n).words == slice_of(e, n).words


@given(plain(6), plain(6))
def test_smart_constructors_preserve_slices(r, s):
    assert slice_of(smart_concat(r, s), 4).words == slice_of(Concat(r, s), 4).words
    assert slice_of(smart_union(r, s), 4).words == slice_of(Union([r, s]), 4).words
    assert is_canonical(smart_concat(r, s)) and is_canonical(smart_union(r, s))
