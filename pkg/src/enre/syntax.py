"""Syntax trees for enhanced regular expressions.

Every node is hash-consed: constructing the same structure twice returns the
same object, so ``is`` (and the default ``==``/``hash``) is structural
equality and ``node.uid`` serves as a small integer handle.  Canonical
expressions additionally keep unions flattened, sorted, duplicate-free and
free of ``NULL``; for those, identity coincides with similarity (associativity,
commutativity, idempotence and unit laws of ``+``).

Raw, non-canonical trees can still be built by calling ``Union`` directly;
``normalize`` maps them to their canonical representative.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .errors import DefinitionsError, ParseError

_table: dict[tuple, "Expr"] = {}
_lock = threading.Lock()


class OpId(NamedTuple):
    """Operator identifier: a family name plus its parameters."""

    name: str
    params: tuple = ()

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}[{','.join(str(p) for p in self.params)}]"


class Expr:
    __slots__ = ("key", "uid", "__weakref__")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __lt__(self, other: Expr) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {pretty(self)}>"

    def __reduce__(self):
        return (_rebuild, (type(self), self._fields()))

    def _fields(self) -> tuple:
        return ()

    @property
    def children(self) -> tuple[Expr, ...]:
        return ()


def _rebuild(cls, fields):
    return cls(*fields)


def _intern(cls, table_key: tuple, sort_key: tuple, **attrs) -> Expr:
    node = _table.get(table_key)
    if node is not None:
        return node
    with _lock:
        node = _table.get(table_key)
        if node is None:
            node = object.__new__(cls)
            for name, value in attrs.items():
                object.__setattr__(node, name, value)
            object.__setattr__(node, "key", sort_key)
            object.__setattr__(node, "uid", len(_table))
            _table[table_key] = node
    return node


def interned_count() -> int:
    """Number of distinct nodes created in this process."""
    return len(_table)


class Null(Expr):
    __slots__ = ()

    def __new__(cls):
        return _intern(cls, ("null",), (0,))


class Eps(Expr):
    __slots__ = ()

    def __new__(cls):
        return _intern(cls, ("eps",), (1,))


class Sym(Expr):
    __slots__ = ("char",)
    __match_args__ = ("char",)

    def __new__(cls, char: str):
        return _intern(cls, ("sym", char), (2, char), char=char)

    def _fields(self):
        return (self.char,)


class Var(Expr):
    """Template variable standing for the derivative of argument ``index`` by ``word``."""

    __slots__ = ("word", "index")
    __match_args__ = ("word", "index")

    def __new__(cls, word: str, index: int):
        return _intern(cls, ("var", word, index), (3, word, index), word=word, index=index)

    def _fields(self):
        return (self.word, self.index)


class Concat(Expr):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __new__(cls, left: Expr, right: Expr):
        return _intern(
            cls, ("cat", left.uid, right.uid), (4, left.key, right.key), left=left, right=right
        )

    def _fields(self):
        return (self.left, self.right)

    @property
    def children(self):
        return (self.left, self.right)


class Star(Expr):
    __slots__ = ("body",)
    __match_args__ = ("body",)

    def __new__(cls, body: Expr):
        return _intern(cls, ("star", body.uid), (5, body.key), body=body)

    def _fields(self):
        return (self.body,)

    @property
    def children(self):
        return (self.body,)


class Union(Expr):
    __slots__ = ("items",)
    __match_args__ = ("items",)

    def __new__(cls, items: Sequence[Expr]):
        items = tuple(items)
        return _intern(
            cls,
            ("union",) + tuple(i.uid for i in items),
            (6,) + tuple(i.key for i in items),
            items=items,
        )

    def _fields(self):
        return (self.items,)

    @property
    def children(self):
        return self.items


class Op(Expr):
    __slots__ = ("op", "args")
    __match_args__ = ("op", "args")

    def __new__(cls, op: OpId, args: Sequence[Expr]):
        op = OpId(*op)
        args = tuple(args)
        return _intern(
            cls,
            ("op", op) + tuple(a.uid for a in args),
            (7, op.name, op.params) + tuple(a.key for a in args),
            op=op,
            args=args,
        )

    def _fields(self):
        return (self.op, self.args)

    @property
    def children(self):
        return self.args


NULL = Null()
EPS = Eps()

AND = OpId("and")
NOT = OpId("not")
LQUOT = OpId("lquot")


def summands(e: Expr) -> tuple[Expr, ...]:
    """Summands of ``e`` viewed as a (possibly empty or unary) sum."""
    if isinstance(e, Union):
        return e.items
    if e is NULL:
        return ()
    return (e,)


def union_of(exprs: Iterable[Expr]) -> Expr:
    """Canonical sum of canonical expressions."""
    parts = set()
    for e in exprs:
        parts.update(summands(e))
    if not parts:
        return NULL
    if len(parts) == 1:
        return parts.pop()
    return Union(sorted(parts, key=_sort_key))


def _sort_key(e: Expr):
    return e.key


def smart_union(r: Expr, s: Expr) -> Expr:
    """``r (+) s``: the canonical form of ``r + s``."""
    if r is NULL or r is s:
        return s
    if s is NULL:
        return r
    return union_of((r, s))


def smart_concat(r: Expr, s: Expr) -> Expr:
    if r is NULL or s is NULL:
        return NULL
    if s is EPS:
        return r
    if r is EPS:
        return s
    return Concat(r, s)


def word_expr(word: str) -> Expr:
    """Right-nested concatenation spelling ``word`` (``EPS`` when empty)."""
    e = EPS
    for c in reversed(word):
        e = smart_concat(Sym(c), e)
    return e


def sigma(alphabet: Iterable[str]) -> Expr:
    return union_of(Sym(c) for c in alphabet)


def normalize(e: Expr, _memo: dict | None = None) -> Expr:
    """Canonical representative of the similarity class of a raw term.

    Only the laws for ``+`` are applied; concatenations with ``EPS`` or
    ``NULL`` are left alone.
    """
    memo = {} if _memo is None else _memo
    hit = memo.get(e)
    if hit is not None:
        return hit
    match e:
        case Union(items):
            out = union_of(normalize(i, memo) for i in items)
        case Concat(left, right):
            out = Concat(normalize(left, memo), normalize(right, memo))
        case Star(body):
            out = Star(normalize(body, memo))
        case Op(op, args):
            out = Op(op, tuple(normalize(a, memo) for a in args))
        case _:
            out = e
    memo[e] = out
    return out


def is_canonical(e: Expr) -> bool:
    """Structural audit of the union invariants, recursively."""
    stack = [e]
    seen = set()
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        if isinstance(node, Union):
            items = node.items
            if len(items) < 2:
                return False
            if any(isinstance(i, Union) or i is NULL for i in items):
                return False
            if any(items[k].key >= items[k + 1].key for k in range(len(items) - 1)):
                return False
        stack.extend(node.children)
    return True


def size(e: Expr) -> int:
    return 1 + sum(size(c) for c in e.children)


def operators_in(e: Expr) -> set[OpId]:
    found = set()
    stack, seen = [e], set()
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        if isinstance(node, Op):
            found.add(node.op)
        stack.extend(node.children)
    return found


# --------------------------------------------------------------------------
# Definitions file

DEFAULT_ALPHABET = ("a", "b")
RESERVED = set("()+&*!@[],#$") | {" ", "\t", "\n", "\r"}


@dataclass(frozen=True)
class Definitions:
    alphabet: tuple[str, ...] = DEFAULT_ALPHABET
    homs: dict[str, dict[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.alphabet:
            raise DefinitionsError("alphabet must not be empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DefinitionsError("alphabet contains duplicate symbols")
        for c in self.alphabet:
            if len(c) != 1 or c in RESERVED or not c.isprintable():
                raise DefinitionsError(f"invalid alphabet symbol {c!r}")
        for name, table in self.homs.items():
            if set(table) != set(self.alphabet):
                raise DefinitionsError(f"hom {name} must map every alphabet symbol exactly once")
            for image in table.values():
                bad = set(image) - set(self.alphabet)
                if bad:
                    raise DefinitionsError(f"hom {name} image uses symbols outside the alphabet: {sorted(bad)}")

    def __hash__(self):
        return hash((self.alphabet, tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.homs.items()))))


def parse_definitions(text: str) -> Definitions:
    """Read ``alphabet: a b c`` and ``hom H: a -> bb, b -> a`` lines."""
    alphabet = None
    homs: dict[str, dict[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise DefinitionsError(f"line {lineno}: expected 'alphabet:' or 'hom NAME:'")
        head = head.split()
        if head == ["alphabet"]:
            if alphabet is not None:
                raise DefinitionsError(f"line {lineno}: alphabet declared twice")
            alphabet = tuple(body.split())
        elif len(head) == 2 and head[0] == "hom":
            name = head[1]
            if not name.isidentifier():
                raise DefinitionsError(f"line {lineno}: bad hom name {name!r}")
            if name in homs:
                raise DefinitionsError(f"line {lineno}: hom {name} declared twice")
            table = {}
            for entry in body.split(","):
                src, arrow, image = entry.partition("->")
                src, image = src.strip(), image.strip()
                if not arrow or len(src) != 1:
                    raise DefinitionsError(f"line {lineno}: bad hom entry {entry.strip()!r}")
                if src in table:
                    raise DefinitionsError(f"line {lineno}: symbol {src} mapped twice")
                table[src] = "" if image in ("", "@e") else "".join(image.split())
            homs[name] = table
        else:
            raise DefinitionsError(f"line {lineno}: unknown directive {' '.join(head)!r}")
    return Definitions(alphabet or DEFAULT_ALPHABET, homs)


def load_definitions(path: str | Path) -> Definitions:
    return parse_definitions(Path(path).read_text(encoding="utf-8"))


def alphabet_definitions(spec: str) -> Definitions:
    """Definitions from a command-line alphabet such as ``"a b c"`` or ``abc``."""
    symbols = spec.split() if any(ch.isspace() for ch in spec) else list(spec)
    return Definitions(tuple(symbols))


# --------------------------------------------------------------------------
# Concrete syntax

# name -> (arity, parameter kinds)
SIGNATURES: dict[str, tuple[int, tuple[str, ...]]] = {
    "and": (2, ()),
    "not": (1, ()),
    "shuffle": (2, ()),
    "shclose": (1, ()),
    "hom": (1, ("table",)),
    "hinv": (1, ("table",)),
    "xk": (1, ("int", "int")),
    "lquot": (2, ()),
    "rquot": (2, ()),
    "prefixes": (1, ()),
    "suffixes": (1, ()),
    "hamming": (1, ("int",)),
    "lev": (1, ("int",)),
    "tilde": (1, ()),
    "bar": (1, ()),
    "upclose": (1, ()),
    "id": (1, ()),
}

UNION_LEVEL, AND_LEVEL, CONCAT_LEVEL, UNARY_LEVEL = range(4)


def check_params(name: str, params: tuple, defs: Definitions) -> str | None:
    """Return an error message if ``params`` are invalid for operator ``name``."""
    kinds = SIGNATURES[name][1]
    if len(params) != len(kinds):
        return f"{name} expects {len(kinds)} parameter(s), got {len(params)}"
    for kind, p in zip(kinds, params):
        if kind == "int" and not isinstance(p, int):
            return f"{name} expects integer parameters"
        if kind == "table":
            if not isinstance(p, str) or p not in defs.homs:
                return f"unknown hom table {p!r}"
    if name in ("hamming", "lev") and params[0] < 0:
        return f"{name} distance must be non-negative"
    if name == "xk":
        i, k = params
        if not 0 < i <= k:
            return "xk[i,k] requires 0 < i <= k"
    if name == "hom" and any(img == "" for img in defs.homs[params[0]].values()):
        return f"hom {params[0]} is erasing; only non-erasing homomorphisms are supported"
    return None


def pretty(e: Expr) -> str:
    """Render ``e`` in the input grammar with minimal parentheses."""
    return _fmt(e)[0]


def _wrap(e: Expr, level: int) -> str:
    text, lvl = _fmt(e)
    return text if lvl >= level else f"({text})"


def _fmt(e: Expr) -> tuple[str, int]:
    match e:
        case Null():
            return "@0", UNARY_LEVEL
        case Eps():
            return "@e", UNARY_LEVEL
        case Sym(c):
            return c, UNARY_LEVEL
        case Var(word, index):
            return f"${{{word or '@e'},{index}}}", UNARY_LEVEL
        case Star(body):
            text, lvl = _fmt(body)
            if lvl < UNARY_LEVEL:
                text = f"({text})"
            return text + "*", UNARY_LEVEL
        case Concat(left, right):
            lt = _atomic(left)
            rt = _wrap(right, CONCAT_LEVEL)
            return _join_concat(lt, rt), CONCAT_LEVEL
        case Union(items):
            if not items:
                return "@0", UNARY_LEVEL
            return "+".join(_wrap(i, AND_LEVEL) for i in items), UNION_LEVEL
        case Op(op, args) if op == AND and len(args) == 2:
            return f"{_wrap(args[0], AND_LEVEL)}&{_wrap(args[1], CONCAT_LEVEL)}", AND_LEVEL
        case Op(op, args) if op == NOT and len(args) == 1:
            return "!" + _atomic(args[0], allow_star=False), UNARY_LEVEL
        case Op(op, args):
            return f"{op}({', '.join(pretty(a) for a in args)})", UNARY_LEVEL
    raise TypeError(f"not an expression: {e!r}")


def _atomic(e: Expr, allow_star: bool = True) -> str:
    text, lvl = _fmt(e)
    if lvl < UNARY_LEVEL or (not allow_star and isinstance(e, Star)):
        return f"({text})"
    return text


def _join_concat(left: str, right: str) -> str:
    # symbols spelling an operator name directly before '(' would re-parse as a call
    if right[:1] in "([":
        tail = len(left)
        while tail > 0 and (left[tail - 1].isalnum() or left[tail - 1] == "_"):
            tail -= 1
        run = left[tail:]
        if any(run[i:] in SIGNATURES for i in range(len(run))):
            return f"{left} {right}"
    return left + right


def parse(text: str, defs: Definitions | None = None) -> Expr:
    """Parse ``text`` into a canonical expression over ``defs.alphabet``."""
    return _Parser(text, defs or Definitions()).parse()


class _Parser:
    def __init__(self, text: str, defs: Definitions):
        self.text = text
        self.pos = 0
        self.defs = defs
        self.alphabet = set(defs.alphabet)

    def error(self, message: str, pos: int | None = None):
        raise ParseError(message, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return e

    def expr(self) -> Expr:
        items = [self.inter()]
        while self.peek() == "+":
            self.pos += 1
            items.append(self.inter())
        return union_of(items)

    def inter(self) -> Expr:
        e = self.concat()
        while self.peek() == "&":
            self.pos += 1
            e = Op(AND, (e, self.concat()))
        return e

    def concat(self) -> Expr:
        parts = [self.unary()]
        while self.peek() and self.peek() not in "+&),]*":
            parts.append(self.unary())
        return reduce(lambda acc, p: Concat(p, acc), reversed(parts[:-1]), parts[-1])

    def unary(self) -> Expr:
        e = self.atom()
        while self.peek() == "*":
            self.pos += 1
            e = Star(e)
        return e

    def atom(self) -> Expr:
        ch = self.peek()
        start = self.pos
        if not ch:
            self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch == "!":
            self.pos += 1
            return Op(NOT, (self.atom(),))
        if ch == "@":
            for token, value in (
                ("@sigma-star", lambda: Star(sigma(self.defs.alphabet))),
                ("@sigma", lambda: sigma(self.defs.alphabet)),
                ("@0", lambda: NULL),
                ("@e", lambda: EPS),
            ):
                if self.text.startswith(token, self.pos):
                    self.pos += len(token)
                    return value()
            self.error("unknown '@' constant")
        if ch.isalpha() or ch == "_":
            end = start
            while end < len(self.text) and (self.text[end].isalnum() or self.text[end] == "_"):
                end += 1
            name = self.text[start:end]
            if name in SIGNATURES and end < len(self.text) and self.text[end] in "([":
                self.pos = end
                return self.opcall(name, start)
        if ch in RESERVED:
            self.error(f"unexpected {ch!r}")
        if ch not in self.alphabet:
            self.error(f"symbol {ch!r} outside the alphabet {''.join(self.defs.alphabet)}")
        self.pos += 1
        return Sym(ch)

    def opcall(self, name: str, start: int) -> Expr:
        params: list = []
        if self.text[self.pos] == "[":
            self.pos += 1
            params.append(self.param())
            while self.peek() == ",":
                self.pos += 1
                params.append(self.param())
            self.expect("]")
        self.expect("(")
        args = [self.expr()]
        while self.peek() == ",":
            self.pos += 1
            args.append(self.expr())
        self.expect(")")
        arity = SIGNATURES[name][0]
        if len(args) != arity:
            self.error(f"{name} expects {arity} argument(s), got {len(args)}", start)
        problem = check_params(name, tuple(params), self.defs)
        if problem:
            self.error(problem, start)
        if name == "suffixes":
            return Op(LQUOT, (Star(sigma(self.defs.alphabet)), args[0]))
        return Op(OpId(name, tuple(params)), tuple(args))

    def param(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in "_-"):
            self.pos += 1
        token = self.text[start:self.pos]
        if not token:
            self.error("expected a parameter")
        try:
            return int(token)
        except ValueError:
            if not token.isidentifier():
                self.error(f"bad parameter {token!r}", start)
            return token


def parse_opid(text: str, defs: Definitions | None = None) -> OpId:
    """Parse an operator identifier such as ``hamming[1]`` or ``hom[H]``."""
    defs = defs or Definitions()
    text = text.strip()
    name, _, rest = text.partition("[")
    if name not in SIGNATURES or name == "suffixes":
        raise ParseError(f"unknown operator {name!r}")
    params: tuple = ()
    if rest:
        if not rest.endswith("]"):
            raise ParseError(f"malformed operator identifier {text!r}")
        params = tuple(int(p) if p.strip().lstrip("-").isdigit() else p.strip() for p in rest[:-1].split(","))
    problem = check_params(name, params, defs)
    if problem:
        raise ParseError(problem)
    return OpId(name, params)
