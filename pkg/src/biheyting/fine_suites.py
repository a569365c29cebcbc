"""Verification suites over the clopen-upset algebra of the Fine space.

``abcd_suite``           named-region identities, exactly, for n ≤ N
``delta0_refutation``    the valuation p = {c0}, q = {b0} and its family values
``sample_validate``      pooled valuations (validity there is not decidable)
``extremal_failure_witness``  why B ∪ C has no clopen closure
``generated_subalgebra`` closure of generators in a finite upset algebra
``truncation_coherence`` finite truncations against the symbolic evaluator
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import fine
from .families import alpha, beta, delta, gamma
from .fine import (EMPTY, FULL, ClopenSet, FinePoint, eval_symbolic, finite,
                   heyting_impl, intersection, named_region, union)
from .formula import Formula, variables
from .frames import FinitePoset, evaluate
from .frames import heyting_impl as finite_impl

__all__ = [
    "abcd_suite", "delta0_refutation", "shehtman_valuation", "PoolConfig", "build_pool",
    "sample_validate", "sample_triples", "extremal_failure_witness", "bc_disagreement", "generated_subalgebra",
    "truncation_coherence", "truncation_dot",
]


def _region(kind: str, n: int, primed: bool = False) -> ClopenSet:
    return named_region(kind, primed, n)


def _meet_all(items: Iterable[ClopenSet]) -> ClopenSet:
    out = FULL
    for x in items:
        out = intersection(out, x)
    return out


def abcd_identities(N: int, corrected: bool = False) -> Iterable[Tuple[str, ClopenSet, ClopenSet]]:
    """(name, lhs, rhs) for every region identity with index ≤ N.

    ``corrected`` adds variants of the B'/C' identities that intersect with
    D'_{n+1} instead of A_n; the plain versions fail from n = 1 on, since
    a_0, ..., a_{n-1} lie in both C_{n+1} and A_n but not above b_{n+2}.
    """
    B = lambda n: _region("B", n)
    C = lambda n: _region("C", n)
    A = lambda n: _region("A", n)
    D = lambda n: _region("D", n)
    Bp = lambda n: _region("B", n, True)
    Cp = lambda n: _region("C", n, True)
    Ap = lambda n: _region("A", n, True)
    Dp = lambda n: _region("D", n, True)
    imp = heyting_impl
    yield "B0=C'1", B(0), Cp(1)
    yield "B0=B'0->C'0", B(0), imp(Bp(0), Cp(0))
    yield "C0=B'1", C(0), Bp(1)
    yield "C0=C'0->B'0", C(0), imp(Cp(0), Bp(0))
    yield "B1=C'2", B(1), Cp(2)
    yield "B1=C0->(B0|B'0)", B(1), imp(C(0), union(B(0), Bp(0)))
    yield "C1=B'2", C(1), Bp(2)
    yield "C1=B0->(C0|C'0)", C(1), imp(B(0), union(C(0), Cp(0)))
    for n in range(N + 1):
        yield f"B{n+2}=C{n+1}->(B{n+1}|C{n})", B(n + 2), imp(C(n + 1), union(B(n + 1), C(n)))
        yield f"C{n+2}=B{n+1}->(C{n+1}|B{n})", C(n + 2), imp(B(n + 1), union(C(n + 1), B(n)))
        yield (f"A{n}=(B{n+2}&C{n+2})->(B{n+1}|C{n+1})", A(n),
               imp(intersection(B(n + 2), C(n + 2)), union(B(n + 1), C(n + 1))))
        yield f"D{n}=A{n}|A{n+1}", D(n), union(A(n), A(n + 1))
        yield f"B'{n+2}=C{n+1}&A{n}", Bp(n + 2), intersection(C(n + 1), A(n))
        yield f"C'{n+2}=B{n+1}&A{n}", Cp(n + 2), intersection(B(n + 1), A(n))
        if corrected:
            # with every A_i, i ≤ n, in place of A_n alone
            yield (f"B'{n+2}=C{n+1}&D'{n+1}", Bp(n + 2), intersection(C(n + 1), Dp(n + 1)))
            yield (f"C'{n+2}=B{n+1}&D'{n+1}", Cp(n + 2), intersection(B(n + 1), Dp(n + 1)))
        yield f"D'{n}=meet(A_i,i<{n})", Dp(n), _meet_all(A(i) for i in range(n))
        yield (f"A'{n}=D'{n}&B{n+2}&C{n+2}", Ap(n),
               intersection(intersection(Dp(n), B(n + 2)), C(n + 2)))


def _first_difference(U: ClopenSet, V: ClopenSet) -> Optional[str]:
    diff = union(fine.difference(U, V), fine.difference(V, U))
    if diff == EMPTY:
        return None
    pts = diff.listed()
    return str(pts[0]) if pts and not diff.cofinite else "∞"


def abcd_suite(N: int = 20, corrected: bool = False) -> Dict:
    if not 0 <= N <= 20:
        raise ValueError("N must be between 0 and 20")
    t0 = time.perf_counter()
    records = []
    for name, lhs, rhs in abcd_identities(N, corrected):
        rec = {"id": name, "status": "PASS" if lhs == rhs else "FAIL",
               "lhs": lhs.to_json(), "rhs": rhs.to_json()}
        if lhs != rhs:
            rec["differs_at"] = _first_difference(lhs, rhs)
        records.append(rec)
    return {"N": N, "records": records,
            "passed": all(r["status"] == "PASS" for r in records),
            "time_s": round(time.perf_counter() - t0, 3)}


def shehtman_valuation() -> Dict[str, ClopenSet]:
    return {"p": finite([FinePoint("C", 0)]), "q": finite([FinePoint("B", 0)])}


def delta0_refutation(n_max: int = 20) -> Dict:
    """Value of delta_0 under p = {c0}, q = {b0}, plus the family/region matches."""
    val = shehtman_valuation()
    witness = eval_symbolic(val, delta(0))
    mismatches = []
    for n in range(n_max + 1):
        for kind, fam in (("B", beta), ("C", gamma), ("A", alpha), ("D", delta)):
            got = eval_symbolic(val, fam(n))
            if got != named_region(kind, False, n):
                mismatches.append(f"{kind}{n}")
    expected = fine.cofinite([FinePoint("D", 0)])
    return {
        "witness": witness,
        "refuted": witness != FULL,
        "witness_is_expected": witness == expected,
        "mismatches": mismatches,
        "n_max": n_max,
    }


# -- sampled validity --------------------------------------------------------------

@dataclass(frozen=True)
class PoolConfig:
    """Valuation pool for ``sample_validate``.

    ``base`` holds every named region with index ≤ ``region_bound`` plus ∅ and
    the top; ``depth`` 2 adds all pairwise unions and intersections of the
    base.  Valuations tried:

    * every assignment of base elements to the variables;
    * every pool element in every variable slot, the other slots filled by
      seeded draws (``partners`` of them) from the whole pool;
    * ``random_valuations`` seeded draws from the whole pool, which also
      contains ``random_upsets`` random clopen upsets.
    """

    region_bound: int = 10
    depth: int = 2
    random_upsets: int = 10_000
    random_max_index: int = 30
    random_max_points: int = 8
    partners: int = 4
    random_valuations: int = 10_000
    seed: int = 20240611
    max_base_assignments: int = 10**5


def build_pool(cfg: PoolConfig) -> Tuple[List[ClopenSet], List[ClopenSet]]:
    """(base, pool); both deduplicated and in a deterministic order."""
    base: Dict[ClopenSet, None] = {EMPTY: None, FULL: None}
    for n in range(cfg.region_bound + 1):
        for kind in fine.KINDS:
            for primed in (False, True):
                base[named_region(kind, primed, n)] = None
    level = list(base)
    pool = dict(base)
    for _ in range(cfg.depth - 1):
        nxt = dict(pool)
        for x, y in itertools.combinations(level, 2):
            nxt.setdefault(union(x, y), None)
            nxt.setdefault(intersection(x, y), None)
        level = list(nxt)
        pool = nxt
    rng = random.Random(cfg.seed)
    for _ in range(cfg.random_upsets):
        U = fine.random_clopen_upset(rng, cfg.random_max_index, cfg.random_max_points)
        pool.setdefault(U, None)
    return list(base), list(pool)


def _valuations(names: Sequence[str], base, pool, cfg: PoolConfig):
    k = len(names)
    if len(base) ** k <= cfg.max_base_assignments:
        for combo in itertools.product(base, repeat=k):
            yield dict(zip(names, combo))
    rng = random.Random(cfg.seed + 1)
    if k > 1:
        for slot in range(k):
            for x in pool:
                for _ in range(cfg.partners):
                    combo = [rng.choice(pool) for _ in range(k)]
                    combo[slot] = x
                    yield dict(zip(names, combo))
    else:
        for x in pool:
            yield {names[0]: x}
    for _ in range(cfg.random_valuations):
        yield {v: rng.choice(pool) for v in names}


def sample_validate(phi: Formula, cfg: Optional[PoolConfig] = None,
                    pool: Optional[Tuple[list, list]] = None) -> Dict:
    """First pooled valuation at which ``phi`` is not the top, if any."""
    cfg = cfg or PoolConfig()
    base, full_pool = pool or build_pool(cfg)
    names = sorted(variables(phi))
    tried = 0
    t0 = time.perf_counter()
    counterexample = None
    if not names:
        tried = 1
        if eval_symbolic({}, phi) != FULL:
            counterexample = {}
    else:
        for val in _valuations(names, base, full_pool, cfg):
            tried += 1
            if eval_symbolic(val, phi) != FULL:
                counterexample = val
                break
    return {"config": asdict(cfg), "pool_size": len(full_pool), "base_size": len(base),
            "valuations": tried, "counterexample": counterexample,
            "time_s": round(time.perf_counter() - t0, 3)}


def sample_triples(phi: Formula, count: int = 10_000, seed: int = 20240611,
                   max_index: int = 12) -> Dict:
    """``phi`` at ``count`` seeded random valuations of random clopen upsets."""
    rng = random.Random(seed)
    names = sorted(variables(phi))
    for i in range(count):
        val = {v: fine.random_clopen_upset(rng, max_index) for v in names}
        if eval_symbolic(val, phi) != FULL:
            return {"valuations": i + 1, "counterexample": val, "seed": seed}
    return {"valuations": count, "counterexample": None, "seed": seed}


# -- failure of extremal order-disconnectedness --------------------------------

def _in_bc(p: FinePoint) -> bool:
    return p.kind in ("B", "C")


def bc_disagreement(U: ClopenSet) -> FinePoint:
    """A point where U and B ∪ C differ (one exists for every clopen U).

    A finite U misses b_{m+1} beyond its largest index m; a cofinite U
    contains a_{m+1} beyond its largest excluded index m.
    """
    m = U.max_index()
    if U.cofinite:
        return FinePoint("A", m + 1)
    return FinePoint("B", m + 1)


def extremal_failure_witness(samples: int = 10_000, seed: int = 7) -> Dict:
    """Representation-level reasons why B ∪ C has no clopen closure.

    (i) B ∪ C is infinite and co-infinite, so no ClopenSet equals it:
    ``bc_disagreement`` names a differing point for any clopen, and this is
    confirmed on ``samples`` seeded random clopens.
    (ii) an open set containing ∞ is cofinite, so a clopen containing
    B ∪ C ∪ {∞} also contains a_i, d_i past its largest excluded index;
    hence B ∪ C ∪ {∞}, which has no A or D points, is not open.
    """
    rng = random.Random(seed)
    witnessed = 0
    for _ in range(samples):
        U = fine.random_clopen_set(rng, max_index=30, max_points=8)
        x = bc_disagreement(U)
        if (x in U) != _in_bc(x):
            witnessed += 1
    bc_not_clopen = witnessed == samples

    tails_ok = 0
    for _ in range(samples):
        excl = [FinePoint(rng.choice(("A", "D")), rng.randint(0, 30))
                for _ in range(rng.randint(0, 8))]
        U = fine.cofinite(excl)  # the general clopen containing B ∪ C ∪ {∞}
        m = U.max_index()
        if all(FinePoint(k, m + 1) in U for k in ("A", "D")):
            tails_ok += 1
    closure_not_open = tails_ok == samples
    return {
        "samples": samples,
        "seed": seed,
        "bc_not_clopen": bc_not_clopen,
        "closure_contains_a_d_tail": closure_not_open,
        "closure_of_bc_not_open": closure_not_open,
        "not_extremally_disconnected": bc_not_clopen and closure_not_open,
    }


# -- finite shadows -------------------------------------------------------------------

def generated_subalgebra(P: FinitePoset, generators: Iterable[int],
                         ops: Sequence[str] = ("and", "or", "imp", "bot", "top"),
                         budget: int = 10**6) -> Tuple[frozenset, bool]:
    """Closure of ``generators`` in Up(P) under ``ops``; (elements, complete)."""
    allowed = set(ops)
    unknown = allowed - {"and", "or", "imp", "bot", "top"}
    if unknown:
        raise ValueError(f"unknown operations: {sorted(unknown)}")
    elems = list(dict.fromkeys(generators))
    if "bot" in allowed and 0 not in elems:
        elems.append(0)
    if "top" in allowed and P.full not in elems:
        elems.append(P.full)
    seen = set(elems)
    steps = 0
    frontier = list(elems)
    while frontier:
        new = []
        for x in frontier:
            for y in list(seen):
                results = []
                if "and" in allowed:
                    results.append(x & y)
                if "or" in allowed:
                    results.append(x | y)
                if "imp" in allowed:
                    results.append(finite_impl(P, x, y))
                    results.append(finite_impl(P, y, x))
                for r in results:
                    steps += 1
                    if steps > budget:
                        return frozenset(seen), False
                    if r not in seen:
                        seen.add(r)
                        new.append(r)
        frontier = new
    return frozenset(seen), True


def truncation_coherence(formulas: Sequence[Formula], k: int,
                         valuation: Optional[Mapping[str, ClopenSet]] = None) -> Dict:
    """Compare truncation and symbolic values on points of index ≤ k // 2."""
    if k < 2:
        raise ValueError("k must be at least 2")
    T = fine.truncate(k)
    val = dict(valuation or shehtman_valuation())
    fin_val = {name: T.to_mask(U) for name, U in val.items()}
    safe = [i for i, p in enumerate(T.points) if p.index <= k // 2]
    disagreements = []
    for phi in formulas:
        sym = eval_symbolic(val, phi)
        trunc = evaluate(T.poset, fin_val, phi)
        bad = [str(T.points[i]) for i in safe
               if (T.points[i] in sym) != bool(trunc >> i & 1)]
        if bad:
            disagreements.append({"formula": str(phi), "points": bad})
    return {"k": k, "margin": k // 2, "formulas": len(formulas),
            "disagreements": disagreements}


def truncation_dot(k: int) -> str:
    return fine.truncate(k).poset.to_dot(name=f"fine_{k}")
