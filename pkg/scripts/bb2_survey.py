#!/usr/bin/env python3
"""Survey the bb2 characterizations over all small posets.

Prints the posets refuting bb2 with their cover lists, and compares the
two readings of the hereditary double-star check (over upset subspaces
and over downset subspaces).
"""
import argparse
from dataclasses import dataclass

from biheyting.algebra_props import (bb2_characterization_suite, check_doublestar_hereditary)
from biheyting.frames import enumerate_posets


@dataclass
class SurveyConfig:
    n_max: int = 5


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=SurveyConfig.n_max)
    cfg = SurveyConfig(ap.parse_args(argv).n_max)

    rep = bb2_characterization_suite(cfg.n_max, allow_six=cfg.n_max == 6)
    print(f"{rep['posets']} posets, all agree: {rep['all_agree']}, "
          f"bb2 refuted on {rep['bb2_refuting']}, {rep['time_s']}s")
    diverging = []
    for n in range(1, cfg.n_max + 1):
        for P in enumerate_posets(n):
            up = check_doublestar_hereditary(P, over="upsets")
            down = check_doublestar_hereditary(P, over="downsets")
            if not up:
                print(f"  refutes bb2: n={P.n} covers={P.covers()}")
            if up != down:
                diverging.append(P)
    print(f"upset vs downset reading differ on {len(diverging)} posets")
    for P in diverging:
        print(f"  n={P.n} covers={P.covers()}")


if __name__ == "__main__":
    main()
