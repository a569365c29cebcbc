"""The acceptance battery, one test per criterion at its stated tolerance.

Each test prints ``<id> PASS|FAIL <title>``; the lines are also repeated
in the terminal summary (see conftest.py).
"""
import time

import pytest

from biheyting.acceptance import CRITERIA, AcceptanceConfig, run_one
from biheyting.cli import strip_timing

# wall-clock limits per criterion, in seconds
LIMITS = {"C1": 60, "C2": 60, "C5": 600, "C7": 600}
RESULTS = []


@pytest.mark.parametrize("cid,title", [(c[0], c[1]) for c in CRITERIA], ids=[c[0] for c in CRITERIA])
def test_criterion(cid, title):
    t0 = time.perf_counter()
    rec = run_one(cid, AcceptanceConfig())
    elapsed = time.perf_counter() - t0
    line = f"{cid} {rec['status']} {title} ({elapsed:.2f}s)"
    RESULTS.append(line)
    print(line)
    assert rec["status"] == "PASS", rec["details"]
    assert elapsed < LIMITS.get(cid, 600)


def test_seeded_checks_reproduce():
    cfg = AcceptanceConfig(seed=99, samples=2000)
    a, b = run_one("C3", cfg), run_one("C3", cfg)
    assert strip_timing(a) == strip_timing(b)
    assert a["details"]["seed"] == 99
