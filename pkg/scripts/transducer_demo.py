"""Build transducers for unary operators and compare their output with the oracle."""
import argparse
from dataclasses import dataclass

from enre.corpus import CORPUS_DEFS
from enre.operators import build_registry
from enre.oracle import Oracle
from enre.syntax import Op, parse, parse_opid
from enre.transducer import build_fst, fst_summary, transduce


@dataclass
class Config:
    ops: str = "hamming[1],lev[1],hom[H],hinv[G],upclose"
    expr: str = "ab+ba"
    max_len: int = 4


def run(cfg: Config):
    reg = build_registry(CORPUS_DEFS)
    orc = Oracle(reg)
    arg = parse(cfg.expr, CORPUS_DEFS)
    for name in cfg.ops.split(","):
        opid = parse_opid(name, CORPUS_DEFS)
        print(f"== {opid}")
        try:
            fst = build_fst(opid, reg)
        except Exception as exc:
            print(f"  no transducer: {exc}")
            continue
        print("  " + fst_summary(fst).rstrip().replace("\n", "\n  "))
        growth = max(1, max(len(tr.input) for tr in fst.transitions))
        out, truncated = set(), False
        for w in orc.slice(arg, cfg.max_len * growth):
            result = transduce(fst, w, max_out=cfg.max_len)
            out |= set(result)
            truncated |= result.truncated
        want = orc.slice(Op(opid, (arg,)), cfg.max_len).words
        verdict = "agrees" if out == want else "DIFFERS"
        print(f"  {opid}({cfg.expr}) up to length {cfg.max_len}: {len(out)} words, oracle {verdict}"
              + (" (some paths cut)" if truncated else ""))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for field, default in Config().__dict__.items():
        p.add_argument(f"--{field.replace('_', '-')}", type=type(default), default=default)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
