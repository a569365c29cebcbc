#!/usr/bin/env python3
"""Compare finite truncations with the exact clopen evaluator.

For each depth k, evaluates the family formulas on the truncation under
p = {c0}, q = {b0} and reports the smallest index where a point value
disagrees with the exact one.  This is how far the boundary effect
reaches, and it justifies the k/2 margin used by the coherence check.
"""
import argparse
from dataclasses import dataclass

from biheyting import fine
from biheyting.families import alpha, beta, delta, gamma, kappa, sh_implication_axiom
from biheyting.fine_suites import shehtman_valuation, truncation_dot
from biheyting.frames import evaluate


@dataclass
class TruncationConfig:
    depths: str = "4,6,8,12,16,20"
    family_max: int = 4
    dot: str = ""


def first_disagreement(k: int, forms) -> int:
    T = fine.truncate(k)
    val = shehtman_valuation()
    fin = {name: T.to_mask(U) for name, U in val.items()}
    worst = k + 1
    for phi in forms:
        sym = fine.eval_symbolic(val, phi)
        trunc = evaluate(T.poset, fin, phi)
        for i, x in enumerate(T.points):
            if (x in sym) != bool(trunc >> i & 1):
                worst = min(worst, x.index)
    return worst


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depths", default=TruncationConfig.depths)
    ap.add_argument("--family-max", type=int, default=TruncationConfig.family_max)
    ap.add_argument("--dot", default="", help="write the Hasse diagram of the first depth here")
    ns = ap.parse_args(argv)
    cfg = TruncationConfig(ns.depths, ns.family_max, ns.dot)

    forms = [f(n) for f in (alpha, beta, gamma, delta, kappa) for n in range(cfg.family_max + 1)]
    forms.append(sh_implication_axiom())
    depths = [int(x) for x in cfg.depths.split(",")]
    print(f"{'k':>3s} {'points':>6s} {'first bad index':>16s} {'k//2':>5s}")
    for k in depths:
        bad = first_disagreement(k, forms)
        shown = "none" if bad > k else str(bad)
        print(f"{k:3d} {fine.truncate(k).poset.n:6d} {shown:>16s} {k // 2:5d}")
    if cfg.dot:
        with open(cfg.dot, "w", encoding="utf-8") as fh:
            fh.write(truncation_dot(depths[0]))
        print(f"wrote {cfg.dot}")


if __name__ == "__main__":
    main()
