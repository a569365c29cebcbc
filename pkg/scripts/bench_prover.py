#!/usr/bin/env python3
"""Time both IPC engines on the family derivation items.

The sequent-calculus engine gets a smaller node budget; items it cannot
settle within it show up as UNKNOWN, which is the point of the comparison.
"""
import argparse
import time
from dataclasses import dataclass

from biheyting.derivations import items
from biheyting.prover import make_prover


@dataclass
class BenchConfig:
    N: int = 1
    g4ip_budget: int = 200_000
    intuit_budget: int = 10**7
    groups: str = "1,2,3,4,5,6"


def run(cfg: BenchConfig):
    groups = {int(g) for g in cfg.groups.split(",") if g}
    provers = {"intuit": (make_prover("intuit", cfg.intuit_budget, 0), cfg.intuit_budget),
               "g4ip": (make_prover("g4ip", cfg.g4ip_budget, 0), cfg.g4ip_budget)}
    rows = []
    for item in items(cfg.N):
        if item.group not in groups:
            continue
        row = [item.id]
        for prover, budget in provers.values():
            t0 = time.perf_counter()
            verdicts = [prover.proves(t) for t in item.tasks(budget)]
            ms = (time.perf_counter() - t0) * 1000
            status = "/".join(v.status[:3] for v in verdicts)
            row += [status, sum(v.nodes for v in verdicts), ms]
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=BenchConfig.N)
    ap.add_argument("--g4ip-budget", type=int, default=BenchConfig.g4ip_budget)
    ap.add_argument("--groups", default=BenchConfig.groups)
    ns = ap.parse_args(argv)
    cfg = BenchConfig(N=ns.N, g4ip_budget=ns.g4ip_budget, groups=ns.groups)
    print(f"{'item':44s} {'intuit':>9s} {'nodes':>7s} {'ms':>8s}   {'g4ip':>9s} {'nodes':>7s} {'ms':>8s}")
    for r in run(cfg):
        print(f"{r[0]:44s} {r[1]:>9s} {r[2]:7d} {r[3]:8.1f}   {r[4]:>9s} {r[5]:7d} {r[6]:8.1f}")


if __name__ == "__main__":
    main()
