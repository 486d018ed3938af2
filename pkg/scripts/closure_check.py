"""Empirical check of D+ finiteness and closure under derivation on random plain expressions."""
import argparse
import time
from dataclasses import dataclass

from enre.corpus import CORPUS_DEFS, plain_corpus, star_height
from enre.dspace import DSpace, check_closure
from enre.errors import CapExceeded
from enre.operators import build_registry
from enre.oracle import all_words
from enre.syntax import pretty


@dataclass
class Config:
    count: int = 300
    max_size: int = 10
    seed: int = 0
    sample_len: int = 4
    cap: int = 100_000


def run(cfg: Config):
    reg = build_registry(CORPUS_DEFS)
    sample = all_words(reg.alphabet, cfg.sample_len)
    violations = capped = 0
    largest = (0, None)
    by_height: dict[int, list[int]] = {}
    start = time.perf_counter()
    for r in plain_corpus(cfg.count, cfg.max_size, cfg.seed):
        space = DSpace(reg)
        report = check_closure(r, reg, sample, space)
        violations += len(report.violations)
        try:
            n = len(space.enumerate(r, cfg.cap))
        except CapExceeded:
            capped += 1
            n = None
        h = star_height(r)
        by_height.setdefault(h, []).append(n)
        if n is not None and n > largest[0]:
            largest = (n, r)
    print(f"expressions: {cfg.count}, closure violations: {violations}")
    print(f"enumerations over cap {cfg.cap}: {capped}")
    for h, ns in sorted(by_height.items()):
        done = [n for n in ns if n is not None]
        print(f"  star height {h}: {len(ns)} expressions, {len(ns) - len(done)} capped, max |D+| {max(done, default=0)}")
    if largest[1] is not None:
        print(f"largest enumerated: {largest[0]} for {pretty(largest[1])}")
    print(f"elapsed: {time.perf_counter() - start:.1f}s")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for field, default in Config().__dict__.items():
        p.add_argument(f"--{field.replace('_', '-')}", type=type(default), default=default)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
