"""Seeded random expressions for property checks and experiments.

With ``raw=True`` the generator returns arbitrary, possibly non-canonical
trees (nested unions, unions containing ``NULL``); otherwise it
normalises.  Operator families are chosen so the brute-force oracle can
evaluate every generated expression exactly: quotient operators always get at
least one syntactically finite argument, and size-inflating operators are not
nested inside each other.
"""
from __future__ import annotations

import random

from .syntax import (
    EPS,
    NULL,
    Concat,
    Definitions,
    Expr,
    Op,
    OpId,
    Star,
    Sym,
    Union,
    normalize,
)

CORPUS_DEFS = Definitions(("a", "b"), {"H": {"a": "ab", "b": "b"}, "G": {"a": "b", "b": ""}})

LINEAR_OPS = (
    "and", "not", "shuffle", "hinv", "hom", "xk", "rquot", "prefixes",
    "hamming", "lev", "tilde", "bar", "upclose", "id",
)
FST_OPS = ("hamming", "hom", "hinv", "upclose", "id")
ALL_OPS = LINEAR_OPS + ("shclose", "lquot")
BINARY = {"and", "shuffle", "rquot", "lquot"}
# operators whose oracle evaluation needs larger argument slices
INFLATING = {"xk", "lev", "hinv", "shclose", "lquot", "rquot", "prefixes", "upclose", "not"}


class ExprGenerator:
    def __init__(self, rng: random.Random, defs: Definitions = CORPUS_DEFS, ops=ALL_OPS, raw: bool = False):
        self.rng = rng
        self.defs = defs
        self.ops = tuple(ops)
        self.raw = raw

    def expr(self, size: int) -> Expr:
        e = self._gen(size, inflated=False)
        return e if self.raw else normalize(e)

    def _leaf(self) -> Expr:
        roll = self.rng.random()
        if roll < 0.08:
            return NULL
        if roll < 0.18:
            return EPS
        return Sym(self.rng.choice(self.defs.alphabet))

    def _union(self, parts):
        if self.raw and self.rng.random() < 0.3:
            parts = list(parts) + [NULL]
        return Union(parts)

    def _gen(self, size: int, inflated: bool) -> Expr:
        rng = self.rng
        if size <= 1:
            return self._leaf()
        choices = ["cat", "cat", "union", "star"]
        usable = [
            o for o in self.ops
            if not (inflated and o in INFLATING) and (size >= 3 or o not in BINARY)
        ]
        if usable:
            choices += ["op"] * 2
        kind = rng.choice(choices)
        if kind == "star":
            return Star(self._gen(size - 1, inflated))
        if kind in ("cat", "union"):
            if size < 3:
                return Star(self._gen(size - 1, inflated))
            k = rng.randint(1, size - 2)
            left = self._gen(k, inflated)
            right = self._gen(size - 1 - k, inflated)
            return Concat(left, right) if kind == "cat" else self._union((left, right))
        return self._op(rng.choice(usable), size - 1, inflated)

    def _op(self, name: str, budget: int, inflated: bool) -> Expr:
        rng = self.rng
        inner = inflated or name in INFLATING
        if name in BINARY:
            k = rng.randint(1, budget - 1)
            sizes = (k, budget - k)
        else:
            sizes = (max(budget, 1),)
        if name in ("rquot", "lquot"):
            finite_side = rng.randrange(2)
            args = tuple(
                self._finite(s) if i == finite_side else self._gen(s, True)
                for i, s in enumerate(sizes)
            )
        elif name == "prefixes":
            args = (self._finite(sizes[0]),)
        else:
            args = tuple(self._gen(s, inner) for s in sizes)
        return Op(self._opid(name), args)

    def _opid(self, name: str) -> OpId:
        rng = self.rng
        if name == "hamming":
            return OpId(name, (rng.randint(0, 2),))
        if name == "lev":
            return OpId(name, (rng.randint(0, 1),))
        if name == "xk":
            k = rng.randint(1, 2)
            return OpId(name, (rng.randint(1, k), k))
        if name == "hom":
            tables = sorted(t for t, h in self.defs.homs.items() if all(h.values()))
            return OpId(name, (rng.choice(tables),))
        if name == "hinv":
            return OpId(name, (rng.choice(sorted(self.defs.homs)),))
        return OpId(name)

    def _finite(self, size: int) -> Expr:
        """Star- and complement-free expression, hence a finite language."""
        if size < 3:
            return self._leaf()
        k = self.rng.randint(1, size - 2)
        left, right = self._finite(k), self._finite(size - 1 - k)
        return Concat(left, right) if self.rng.random() < 0.6 else self._union((left, right))


def star_height(e: Expr) -> int:
    match e:
        case Star(body):
            return 1 + star_height(body)
        case Concat(left, right):
            return max(star_height(left), star_height(right))
        case Union(items) | Op(args=items):
            return max((star_height(x) for x in items), default=0)
    return 0


def random_corpus(
    count: int, max_size: int, seed: int = 0, ops=ALL_OPS, defs=CORPUS_DEFS, raw=False, max_star_height=None
):
    """``count`` expressions of size 1..max_size, optionally rejecting deep star nesting."""
    rng = random.Random(seed)
    gen = ExprGenerator(rng, defs, ops, raw)
    out = []
    while len(out) < count:
        e = gen.expr(rng.randint(1, max_size))
        if max_star_height is None or star_height(e) <= max_star_height:
            out.append(e)
    return out


def plain_corpus(count: int, max_size: int, seed: int = 0, defs=CORPUS_DEFS, max_star_height=None):
    return random_corpus(count, max_size, seed, ops=(), defs=defs, max_star_height=max_star_height)
