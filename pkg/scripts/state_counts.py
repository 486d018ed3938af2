"""DFA sizes of derivative automata over a random corpus, before and after minimisation."""
import argparse
import statistics
from collections import Counter
from dataclasses import dataclass

from enre.automata import compile, minimize
from enre.errors import StateCapExceeded
from enre.corpus import CORPUS_DEFS, LINEAR_OPS, random_corpus
from enre.operators import build_registry
from enre.syntax import operators_in, pretty


@dataclass
class Config:
    count: int = 300
    max_size: int = 15
    seed: int = 0
    max_states: int = 10_000
    show: int = 5


def run(cfg: Config):
    reg = build_registry(CORPUS_DEFS)
    rows, capped = [], []
    for e in random_corpus(cfg.count, cfg.max_size, cfg.seed, ops=LINEAR_OPS):
        try:
            d = compile(e, reg, cfg.max_states)
        except StateCapExceeded:
            capped.append(e)
            continue
        rows.append((e, len(d), len(minimize(d))))
    sizes = [n for _, n, _ in rows]
    ratio = [m / n for _, n, m in rows]
    print(f"expressions: {len(rows)} compiled, {len(capped)} over {cfg.max_states} states")
    for e in capped:
        print(f"  over cap: {pretty(e)}")
    print(f"states: median {statistics.median(sizes)}, max {max(sizes)}")
    print(f"minimal/derivative ratio: mean {statistics.mean(ratio):.3f}")
    by_op = Counter()
    for e, n, _ in rows:
        for op in operators_in(e):
            by_op[op.name] = max(by_op[op.name], n)
    print("largest DFA by operator family:")
    for name, n in sorted(by_op.items(), key=lambda kv: -kv[1]):
        print(f"  {name:10} {n}")
    print("largest expressions:")
    for e, n, m in sorted(rows, key=lambda r: -r[1])[: cfg.show]:
        print(f"  {n:6} -> {m:5}  {pretty(e)}")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for field, default in Config().__dict__.items():
        p.add_argument(f"--{field.replace('_', '-')}", type=type(default), default=default)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
