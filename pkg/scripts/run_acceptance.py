#!/usr/bin/env python3
"""Run the acceptance battery and write the JSON report."""
import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import List

from biheyting.acceptance import AcceptanceConfig, run_acceptance


@dataclass
class RunConfig:
    output: str = "acceptance_report.json"
    only: List[str] = field(default_factory=list)
    seed: int = 20240611
    samples: int = 10_000


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--output", default=RunConfig.output)
    ap.add_argument("--only", nargs="*", default=[])
    ap.add_argument("--seed", type=int, default=RunConfig.seed)
    ap.add_argument("--samples", type=int, default=RunConfig.samples)
    ns = ap.parse_args(argv)
    cfg = RunConfig(ns.output, ns.only, ns.seed, ns.samples)

    report = run_acceptance(AcceptanceConfig(seed=cfg.seed, samples=cfg.samples), cfg.only or None)
    for rec in report["records"]:
        print(f"{rec['id']:4s} {rec['status']:5s} {rec['time_ms'] / 1000:7.2f}s  {rec['title']}")
    with open(cfg.output, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, default=str)
    print(f"report written to {cfg.output}")
    return 1 if report["summary"]["FAIL"] else 0


if __name__ == "__main__":
    sys.exit(main())
