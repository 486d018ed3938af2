"""Brute-force, length-bounded semantics of enhanced regular expressions.

Every operator is evaluated straight from its set-theoretic definition on
finite slices ``{w in L(e) : |w| <= n}``.  Nothing here touches derivatives,
nullability or automata, so it can serve as ground truth for those modules.

Quotients need witnesses of unbounded length in general.  When one of the
involved languages is syntactically finite the witness length is bounded and
the slice is exact; otherwise witnesses are capped and the slice is flagged
``complete=False``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .syntax import Concat, Definitions, Eps, Expr, Null, Op, Star, Sym, Union, Var


@dataclass(frozen=True)
class Slice:
    bound: int
    words: frozenset[str]
    complete: bool = True

    def __contains__(self, w):
        return w in self.words

    def __iter__(self):
        return iter(sorted(self.words, key=lambda w: (len(w), w)))

    def __len__(self):
        return len(self.words)


def _defs(reg) -> Definitions:
    if reg is None:
        return Definitions()
    return reg if isinstance(reg, Definitions) else reg.defs


def all_words(alphabet, n: int) -> list[str]:
    """Every word over ``alphabet`` of length at most ``n``."""
    out = []
    for length in range(n + 1):
        out.extend(map("".join, itertools.product(alphabet, repeat=length)))
    return out


@lru_cache(maxsize=None)
def interleavings(u: str, v: str) -> frozenset[str]:
    if not u:
        return frozenset((v,))
    if not v:
        return frozenset((u,))
    return frozenset(
        {u[0] + w for w in interleavings(u[1:], v)} | {v[0] + w for w in interleavings(u, v[1:])}
    )


def hamming_ball(u: str, k: int, alphabet) -> set[str]:
    out = {u}
    for m in range(1, min(k, len(u)) + 1):
        for positions in itertools.combinations(range(len(u)), m):
            choices = [[x for x in alphabet if x != u[p]] for p in positions]
            for repl in itertools.product(*choices):
                w = list(u)
                for p, x in zip(positions, repl):
                    w[p] = x
                out.add("".join(w))
    return out


def edit_ball(u: str, k: int, alphabet) -> set[str]:
    """Words reachable from ``u`` by at most ``k`` single-symbol edits."""
    seen = {u}
    frontier = {u}
    for _ in range(k):
        nxt = set()
        for w in frontier:
            for i in range(len(w) + 1):
                for x in alphabet:
                    nxt.add(w[:i] + x + w[i:])
                if i < len(w):
                    nxt.add(w[:i] + w[i + 1:])
                    for x in alphabet:
                        nxt.add(w[:i] + x + w[i + 1:])
        frontier = nxt - seen
        seen |= nxt
    return seen


def superwords(u: str, n: int, alphabet) -> set[str]:
    """Words of length at most ``n`` having ``u`` as a (scattered) subword."""
    if len(u) > n:
        return set()
    seen = {u}
    frontier = {u}
    while frontier:
        nxt = set()
        for w in frontier:
            if len(w) == n:
                continue
            for i in range(len(w) + 1):
                for x in alphabet:
                    nxt.add(w[:i] + x + w[i:])
        frontier = nxt - seen
        seen |= nxt
    return seen


def length_bound(e: Expr, defs: Definitions) -> int | None:
    """Upper bound on word lengths in ``L(e)``; ``-1`` if provably empty, ``None`` if unbounded."""
    match e:
        case Null():
            return -1
        case Eps():
            return 0
        case Sym():
            return 1
        case Union(items):
            bounds = [length_bound(i, defs) for i in items]
            if any(b is None for b in bounds):
                return None
            return max(bounds, default=-1)
        case Concat(left, right):
            return _sum_bound(length_bound(left, defs), length_bound(right, defs))
        case Star(body):
            b = length_bound(body, defs)
            return 0 if b is not None and b <= 0 else None
        case Op(op, args):
            bounds = [length_bound(a, defs) for a in args]
            b = bounds[0]
            name = op.name
            if name == "and":
                known = [x for x in bounds if x is not None]
                return min(known) if known else None
            if name == "not":
                return None
            if name == "shuffle":
                return _sum_bound(*bounds)
            if name == "shclose":
                return 0 if b is not None and b <= 0 else None
            if name == "upclose":
                return -1 if b == -1 else None
            if b is None:
                return None
            if b == -1:
                return 0 if name == "tilde" else -1
            if name == "hom":
                return b * max(len(x) for x in defs.homs[op.params[0]].values())
            if name == "hinv":
                return b if all(defs.homs[op.params[0]].values()) else None
            if name == "lev":
                return b + op.params[0]
            if name == "lquot":
                return bounds[1]
            return b  # id, tilde, bar, hamming, xk, rquot, prefixes
    raise TypeError(f"cannot bound {e!r}")


def _sum_bound(x, y):
    if x == -1 or y == -1:
        return -1
    if x is None or y is None:
        return None
    return x + y


class Oracle:
    """Memoising slice evaluator for one alphabet / definitions set."""

    def __init__(self, reg=None, witness_cap: int | None = None):
        self.defs = _defs(reg)
        self.alphabet = self.defs.alphabet
        self.witness_cap = witness_cap
        self._memo: dict[tuple[Expr, int], tuple[frozenset, bool]] = {}

    def slice(self, e: Expr, n: int) -> Slice:
        words, complete = self._eval(e, n)
        return Slice(n, words, complete)

    def member(self, w: str, e: Expr) -> bool:
        return w in self._eval(e, len(w))[0]

    def _eval(self, e: Expr, n: int) -> tuple[frozenset, bool]:
        key = (e, n)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._compute(e, n)
        return hit

    def _witness(self, n: int, *bounds) -> tuple[int, bool]:
        known = [b for b in bounds if b is not None]
        if known:
            return max(min(known), -1), True
        cap = self.witness_cap if self.witness_cap is not None else 2 * n + 8
        return cap, False

    def _compute(self, e: Expr, n: int) -> tuple[frozenset, bool]:
        match e:
            case Null():
                return frozenset(), True
            case Eps():
                return frozenset(("",)), True
            case Sym(c):
                return (frozenset((c,)) if n >= 1 else frozenset()), True
            case Union(items):
                words, ok = set(), True
                for item in items:
                    w, c = self._eval(item, n)
                    words |= w
                    ok &= c
                return frozenset(words), ok
            case Concat(left, right):
                lw, lc = self._eval(left, n)
                rw, rc = self._eval(right, n)
                return frozenset(_concat(lw, rw, n)), lc and rc
            case Star(body):
                bw, bc = self._eval(body, n)
                return frozenset(_star(bw, n)), bc
            case Op(op, args):
                return self._op(op, args, n)
            case Var():
                raise TypeError("template variables have no language")
        raise TypeError(f"not an expression: {e!r}")

    def _op(self, op, args, n):
        name, params = op
        sigma = self.alphabet
        if name == "and":
            (x, cx), (y, cy) = self._eval(args[0], n), self._eval(args[1], n)
            return x & y, cx and cy
        if name == "not":
            x, c = self._eval(args[0], n)
            return frozenset(w for w in all_words(sigma, n) if w not in x), c
        if name == "shuffle":
            (x, cx), (y, cy) = self._eval(args[0], n), self._eval(args[1], n)
            out = set()
            for u in x:
                for v in y:
                    if len(u) + len(v) <= n:
                        out |= interleavings(u, v)
            return frozenset(out), cx and cy
        if name == "shclose":
            x, c = self._eval(args[0], n)
            factors = [u for u in x if u]
            closure = {""}
            frontier = {""}
            while frontier:
                grown = set()
                for s in frontier:
                    for u in factors:
                        if len(s) + len(u) <= n:
                            grown |= interleavings(u, s)
                frontier = grown - closure
                closure |= grown
            return frozenset(closure), c
        if name == "hom":
            h = self.defs.homs[params[0]]
            x, c = self._eval(args[0], n)
            images = ("".join(h[s] for s in w) for w in x)
            return frozenset(w for w in images if len(w) <= n), c
        if name == "hinv":
            h = self.defs.homs[params[0]]
            reach = n * max(1, max(len(v) for v in h.values()))
            x, c = self._eval(args[0], reach)
            return frozenset(w for w in all_words(sigma, n) if "".join(h[s] for s in w) in x), c
        if name == "xk":
            i, k = params
            x, c = self._eval(args[0], i - 1 + k * n)
            return frozenset(w[i - 1::k] for w in x), c
        if name == "hamming":
            x, c = self._eval(args[0], n)
            out = set()
            for u in x:
                out |= hamming_ball(u, params[0], sigma)
            return frozenset(out), c
        if name == "lev":
            k = params[0]
            x, c = self._eval(args[0], n + k)
            out = set()
            for u in x:
                out |= {w for w in edit_ball(u, k, sigma) if len(w) <= n}
            return frozenset(out), c
        if name in ("tilde", "bar", "id"):
            x, c = self._eval(args[0], n)
            if name == "tilde":
                return x | {""}, c
            if name == "bar":
                return x - {""}, c
            return x, c
        if name == "upclose":
            x, c = self._eval(args[0], n)
            out = set()
            for u in x:
                out |= superwords(u, n, sigma)
            return frozenset(out), c
        if name == "lquot":
            # {v : exists u in U, uv in W}
            cap, exact = self._witness(n, length_bound(args[0], self.defs), length_bound(args[1], self.defs))
            if cap < 0:
                return frozenset(), True
            us, cu = self._eval(args[0], cap)
            ws, cw = self._eval(args[1], cap + n)
            out = {w[len(w) - m:] if m else "" for w in ws for m in range(min(n, len(w)) + 1)
                   if w[:len(w) - m] in us}
            return frozenset(out), exact and cu and cw
        if name == "rquot":
            # {v : exists u in L2, vu in L1}
            cap, exact = self._witness(n, length_bound(args[0], self.defs), length_bound(args[1], self.defs))
            if cap < 0:
                return frozenset(), True
            l1, c1 = self._eval(args[0], cap + n)
            l2, c2 = self._eval(args[1], cap)
            out = {w[:m] for w in l1 for m in range(min(n, len(w)) + 1) if w[m:] in l2}
            return frozenset(out), exact and c1 and c2
        if name == "prefixes":
            cap, exact = self._witness(n, length_bound(args[0], self.defs))
            if cap < 0:
                return frozenset(), True
            x, c = self._eval(args[0], cap + n)
            return frozenset(w[:m] for w in x for m in range(min(n, len(w)) + 1)), exact and c
        raise ValueError(f"oracle has no semantics for operator {op}")


def _concat(left, right, n) -> set[str]:
    by_len: dict[int, list[str]] = {}
    for v in right:
        by_len.setdefault(len(v), []).append(v)
    out = set()
    for u in left:
        room = n - len(u)
        for length, vs in by_len.items():
            if length <= room:
                out.update(u + v for v in vs)
    return out


def _star(body, n) -> set[str]:
    factors = [u for u in body if u]
    closure = {""}
    frontier = {""}
    while frontier:
        grown = {u + s for u in factors for s in frontier if len(u) + len(s) <= n}
        frontier = grown - closure
        closure |= grown
    return closure


def slice_of(e: Expr, n: int, reg=None, witness_cap: int | None = None) -> Slice:
    """Words of length at most ``n`` in ``L(e)``."""
    return Oracle(reg, witness_cap).slice(e, n)


def sem_member(w: str, e: Expr, reg=None) -> bool:
    return Oracle(reg).member(w, e)
