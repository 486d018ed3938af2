"""Command-line front end.

Exit codes: 0 accept/equivalent/success, 1 reject/counterexample/closure
failure, 2 usage or input errors, 3 capability or undecidability errors.
"""
from __future__ import annotations

import argparse
import sys

from . import automata, dspace, transducer
from .derivation import derive_word, matches
from .errors import CapabilityError, CapExceeded, DefinitionsError, ParseError, StateCapExceeded
from .operators import build_registry
from .oracle import all_words, slice_of
from .syntax import Definitions, alphabet_definitions, load_definitions, parse, parse_opid, pretty

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3


def _word(text: str) -> str:
    return "" if text == "@e" else text


def _show(w: str) -> str:
    return w if w else "@e"


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enre", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--defs", help="definitions file (alphabet and hom tables)")
    common.add_argument("--alphabet", help='alphabet, e.g. "abc" or "a b c" (default: a b)')
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", parents=[common], help="decide membership of a word")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-w", "--word", required=True)

    p = sub.add_parser("derive", parents=[common], help="print the derivative by a word")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-w", "--word", required=True)

    p = sub.add_parser("compile", parents=[common], help="build the derivative DFA")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--max-states", type=_positive, default=automata.DEFAULT_MAX_STATES)
    p.add_argument("--minimize", action="store_true")

    p = sub.add_parser("equiv", parents=[common], help="language equivalence")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-f", "--other", required=True)

    p = sub.add_parser("enum", parents=[common], help="list accepted words")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("--max-len", type=_natural, required=True)

    p = sub.add_parser("fst", parents=[common], help="transducer for a unary operator")
    p.add_argument("--op", required=True)
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("transduce", parents=[common], help="apply an operator transducer to a word")
    p.add_argument("--op", required=True)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("--max-steps", type=_positive, default=64)
    p.add_argument("--max-out", type=_positive, default=16)

    p = sub.add_parser("dspace", parents=[common], help="iterated-derivative over-approximation")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--cap", type=_positive, default=100_000)
    p.add_argument("--check-closure", action="store_true")
    p.add_argument("--max-len", type=_natural, default=4)

    p = sub.add_parser("oracle", parents=[common], help="brute-force language slice")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("--max-len", type=_natural, required=True)
    return parser


def _definitions(args) -> Definitions:
    if args.defs and args.alphabet:
        raise DefinitionsError("use either --defs or --alphabet, not both")
    if args.defs:
        return load_definitions(args.defs)
    if args.alphabet:
        return alphabet_definitions(args.alphabet)
    return Definitions()


def execute(args, out=None) -> int:
    """Run a parsed command, writing results to ``out``; returns the exit status."""
    out = out or sys.stdout
    defs = _definitions(args)
    reg = build_registry(defs)

    def emit(text=""):
        out.write(text + "\n")

    cmd = args.command
    if cmd == "fst":
        fst = transducer.build_fst(parse_opid(args.op, defs), reg)
        out.write(transducer.fst_to_dot(fst) if args.dot else transducer.fst_summary(fst))
        return EXIT_OK
    if cmd == "transduce":
        fst = transducer.build_fst(parse_opid(args.op, defs), reg)
        word = _word(args.word)
        _check_symbols(word, defs)
        result = transducer.transduce(fst, word, args.max_steps, args.max_out)
        for w in result:
            emit(_show(w))
        if result.truncated:
            emit("INCOMPLETE")
        return EXIT_OK

    e = parse(args.expr, defs)
    if cmd == "match":
        word = _word(args.word)
        _check_symbols(word, defs)
        accepted = matches(e, word, reg)
        emit("accept" if accepted else "reject")
        return EXIT_OK if accepted else EXIT_NO
    if cmd == "derive":
        word = _word(args.word)
        _check_symbols(word, defs)
        emit(pretty(derive_word(word, e, reg)))
        return EXIT_OK
    if cmd == "compile":
        dfa = automata.compile(e, reg, args.max_states)
        if args.minimize:
            dfa = automata.minimize(dfa)
        if args.dot:
            out.write(automata.to_dot(dfa))
        else:
            emit(f"states: {len(dfa)}")
        return EXIT_OK
    if cmd == "equiv":
        result = automata.equiv(e, parse(args.other, defs), reg)
        if isinstance(result, automata.Equivalent):
            emit("equivalent")
            return EXIT_OK
        emit(f"counterexample: {_show(result.word)}")
        return EXIT_NO
    if cmd == "enum":
        for w in automata.enumerate_words(e, reg, args.max_len):
            emit(_show(w))
        return EXIT_OK
    if cmd == "dspace":
        space = dspace.DSpace(reg)
        status = EXIT_OK
        if args.check_closure:
            report = dspace.check_closure(e, reg, all_words(defs.alphabet, args.max_len), space)
            for line in report.lines():
                emit(line)
            status = EXIT_OK if report.ok else EXIT_NO
        if args.enumerate or not args.check_closure:
            elements = space.enumerate(e, args.cap)
            if args.enumerate:
                for x in sorted(elements, key=lambda x: x.key):
                    emit(pretty(x))
            emit(f"size: {len(elements)}")
        return status
    if cmd == "oracle":
        result = slice_of(e, args.max_len, defs)
        for w in result:
            emit(_show(w))
        if not result.complete:
            emit("INCOMPLETE")
        return EXIT_OK
    raise AssertionError(cmd)  # pragma: no cover


def _check_symbols(word: str, defs: Definitions):
    bad = sorted(set(word) - set(defs.alphabet))
    if bad:
        raise ParseError(f"word uses symbols outside the alphabet: {''.join(bad)}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return execute(args)
    except (ParseError, DefinitionsError, ValueError, OSError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapabilityError, StateCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
