import io
import subprocess
import sys

import pytest

from enre.automata import compile, to_dot
from enre.cli import build_parser, execute, main
from enre.operators import build_registry
from enre.syntax import parse


def run_cli(*argv):
    out = io.StringIO()
    status = execute(build_parser().parse_args(argv), out)
    return status, out.getvalue()


def test_match():
    assert run_cli("match", "-e", "shclose(ab)", "-w", "abab") == (0, "accept\n")
    assert run_cli("match", "-e", "shclose(ab)", "-w", "abba") == (1, "reject\n")
    assert run_cli("match", "-e", "a*", "-w", "@e") == (0, "accept\n")


def test_compile():
    assert run_cli("compile", "-e", "(a+b)*abb") == (0, "states: 4\n")
    status, dot = run_cli("compile", "-e", "(a+b)*abb", "--dot")
    assert dot == to_dot(compile(parse("(a+b)*abb"), build_registry()))
    assert run_cli("compile", "-e", "a*a*", "--minimize") == (0, "states: 2\n")


def test_equiv():
    assert run_cli("equiv", "-e", "a*", "-f", "a*a") == (1, "counterexample: @e\n")
    assert run_cli("equiv", "-e", "tilde(a)", "-f", "a+@e") == (0, "equivalent\n")


def test_derive_enum_oracle():
    assert run_cli("derive", "-e", "shclose(ab)", "-w", "a") == (0, "shuffle(b, shclose(ab))\n")
    assert run_cli("derive", "-e", "ab", "-w", "b") == (0, "@0\n")
    assert run_cli("enum", "-e", "shclose(ab)", "--max-len", "4") == (0, "@e\nab\naabb\nabab\n")
    assert run_cli("oracle", "-e", "lquot(@sigma-star, a)", "--max-len", "1") == (0, "@e\na\n")
    assert run_cli("oracle", "-e", "rquot(a*, b*)", "--max-len", "1")[1].endswith("INCOMPLETE\n")


def test_fst_and_transduce():
    status, text = run_cli("fst", "--op", "hamming[1]")
    assert status == 0 and text.startswith("states: 2\n")
    assert run_cli("transduce", "--op", "hamming[1]", "-w", "ab") == (0, "aa\nab\nbb\n")
    status, text = run_cli("transduce", "--op", "upclose", "-w", "ab", "--max-out", "3")
    assert text.splitlines() == ["ab", "aab", "aba", "abb", "bab", "INCOMPLETE"]


def test_dspace():
    assert run_cli("dspace", "-e", "ab") == (0, "size: 4\n")
    assert run_cli("dspace", "-e", "ab", "--enumerate") == (0, "@0\n@e\nb\n@e+b\nsize: 4\n")
    status, text = run_cli("dspace", "-e", "(a+b)*abb", "--check-closure", "--max-len", "2")
    assert status == 0 and all(line.startswith("PASS") for line in text.splitlines())


def test_defs_file(tmp_path):
    path = tmp_path / "defs.txt"
    path.write_text("alphabet: a b c\nhom H: a -> bc, b -> b, c -> c\n")
    assert run_cli("match", "--defs", str(path), "-e", "hom[H](a*)", "-w", "bcbc") == (0, "accept\n")
    assert run_cli("match", "--alphabet", "abc", "-e", "c*", "-w", "cc") == (0, "accept\n")


def test_error_codes(capsys):
    assert main(["match", "-e", "a+", "-w", "a"]) == 2
    assert main(["match", "-e", "a", "-w", "z"]) == 2
    assert main(["compile", "-e", "shclose(ab)"]) == 3
    assert "shclose" in capsys.readouterr().err
    assert main(["compile", "-e", "(a+b)*abb", "--max-states", "2"]) == 3
    assert main(["fst", "--op", "tilde"]) == 3
    assert main(["dspace", "-e", "(bbb)**", "--enumerate", "--cap", "100"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["compile", "-e", "a", "--max-states", "0"])
    assert info.value.code == 2


def test_module_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "enre", "compile", "-e", "(a+b)*abb"], capture_output=True, text=True
    )
    assert done.returncode == 0 and done.stdout == "states: 4\n"
