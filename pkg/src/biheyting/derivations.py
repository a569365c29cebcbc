"""Bounded-index derivability checks for the formula families in IPC.

Each ``Item`` is an entailment (or equivalence) between family formulas;
``derivation_suite`` runs all of them up to an index bound and
``cross_validate`` re-checks the verdicts semantically on small posets.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .families import (P, Q, alpha, beta, delta, e_power, gamma, kappa,
                       sh_implication_axiom)
from .formula import Conj, Disj, Formula, Iff, Impl, conj_all, disj_all
from .frames import enumerate_posets, evaluate, validates
from .prover import DEFAULT_BUDGET, DERIVABLE, NOT_DERIVABLE, ProofTask, make_prover

__all__ = ["Item", "items", "derivation_suite", "cross_validate", "negative_controls",
           "scheme_instances", "SuiteConfig", "Record", "summarize"]

PASS, FAIL, UNKNOWN = "PASS", "FAIL", "UNKNOWN"
FAMILIES = {"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta, "kappa": kappa}


@dataclass(frozen=True)
class Item:
    """``lhs ⊢ rhs`` (both ways when ``equivalence``) under extra ``hypotheses``."""

    id: str
    group: int
    lhs: Formula
    rhs: Formula
    equivalence: bool = False
    hypotheses: Tuple[Formula, ...] = ()
    # hypothesis-scheme items: hypotheses are scheme_instances(scheme_range, with_kappa)
    scheme_range: Optional[int] = None
    with_kappa: bool = True

    def escalated_hypotheses(self) -> Tuple[Formula, ...]:
        return scheme_instances(self.scheme_range + 1, self.with_kappa)

    def tasks(self, budget: int, hypotheses=None) -> List[ProofTask]:
        hyps = tuple(self.hypotheses if hypotheses is None else hypotheses)
        out = [ProofTask(hyps + (self.lhs,), self.rhs, budget)]
        if self.equivalence:
            out.append(ProofTask(hyps + (self.rhs,), self.lhs, budget))
        return out


def scheme_instances(j_max: int, with_kappa: bool = True) -> Tuple[Formula, ...]:
    """e^j of the Sh implication axiom (and of kappa_0), for j ≤ j_max."""
    base = (sh_implication_axiom(), kappa(0)) if with_kappa else (sh_implication_axiom(),)
    return tuple(e_power(j, x) for j in range(j_max + 1) for x in base)


def items(N: int) -> Iterator[Item]:
    """All checks with indices ≤ N."""
    r = range(N + 1)
    pq = Iff(P, Q)
    yield Item("1:p|-b0", 1, P, beta(0))
    yield Item("1:q|-g0", 1, Q, gamma(0))
    for n in r:
        yield Item(f"1:b{n}|-b{n+1}", 1, beta(n), beta(n + 1))
        yield Item(f"1:g{n}|-g{n+1}", 1, gamma(n), gamma(n + 1))
        yield Item(f"1:b{n}|-g{n+2}", 1, beta(n), gamma(n + 2))
        yield Item(f"1:g{n}|-b{n+2}", 1, gamma(n), beta(n + 2))
        yield Item(f"1:b{n+1}|-a{n}", 1, beta(n + 1), alpha(n))
        yield Item(f"1:g{n+1}|-a{n}", 1, gamma(n + 1), alpha(n))
    for name, fam in FAMILIES.items():
        for n in r:
            yield Item(f"2:{name}{n}=e^{n}({name}0)", 2, fam(n), e_power(n, fam(0)), True)
    for m in r:
        for n in r:
            yield Item(f"3:e^{m}(p<->q)|-e^{m+n}(p<->q)", 3, e_power(m, pq), e_power(m + n, pq))
    e_pq = e_power(1, Conj(P, Q))
    middle = Conj(e_power(1, pq), Disj(Impl(P, Q), Impl(Q, P)))
    yield Item("4:e(p&q)=e(p<->q)&((p->q)|(q->p))", 4, e_pq, middle, True)
    yield Item("4:e(p&q)=p|q|(p<->q)", 4, e_pq, disj_all([P, Q, pq]), True)
    yield Item("4:e(p<->q)&((p->q)|(q->p))=p|q|(p<->q)", 4, middle, disj_all([P, Q, pq]), True)
    for n in r:
        yield Item(f"4:a{n}=e^{n+2}((p<->q)->p&q)", 4, alpha(n),
                   e_power(n + 2, Impl(pq, Conj(P, Q))), True)
    for m in r:
        for n in r:
            k = m + n + 1
            yield Item(f"5:e^{n+2}(p<->q)|-a{k}", 5, e_power(n + 2, pq), alpha(k))
            yield Item(f"5:(a{k}->a{n})=a{n}", 5, Impl(alpha(k), alpha(n)), alpha(n), True)
            yield Item(f"6:(d{m+n}->a{n})=a{n}", 6, Impl(delta(m + n), alpha(n)), alpha(n), True)
            yield Item(f"6:(a{k}->a{n})=(d{m+n}->a{n})", 6, Impl(alpha(k), alpha(n)),
                       Impl(delta(m + n), alpha(n)), True)
            j = max(m + n - 1, 0)
            yield Item(f"7:H|-d{m+n}->d{m}", 7, sh_implication_axiom(),
                       Impl(delta(m + n), delta(m)), False,
                       scheme_instances(j, False), j, False)
    for m in r:
        for n in r:
            k = m + n + 1
            hyps = scheme_instances(k)
            yield Item(f"8:a{m}|a{k}=d{m}", 8, Disj(alpha(m), alpha(k)), delta(m), True,
                       hyps, k)
            yield Item(f"8:a{m}|d{m+n}=d{m}", 8, Disj(alpha(m), delta(m + n)), delta(m), True,
                       hyps, k)


@dataclass
class SuiteConfig:
    N: int = 2
    budget: int = DEFAULT_BUDGET
    engine: str = "intuit"
    countermodel_size: int = 3


@dataclass
class Record:
    id: str
    status: str
    details: Dict = field(default_factory=dict)
    time_ms: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {"id": self.id, "status": self.status, "details": self.details}
        if timing:
            out["time_ms"] = round(self.time_ms, 3)
        return out


def _run_item(item: Item, prover, budget: int) -> Record:
    t0 = time.perf_counter()
    verdicts = [prover.proves(t) for t in item.tasks(budget)]
    escalated = False
    if item.scheme_range is not None and not all(v.derivable for v in verdicts):
        # one escalation of the instance range before giving up
        hyps = item.escalated_hypotheses()
        verdicts = [prover.proves(t) for t in item.tasks(budget, hyps)]
        escalated = True
    statuses = [v.status for v in verdicts]
    if all(s == DERIVABLE for s in statuses):
        status = PASS
    elif item.scheme_range is not None:
        # instance sets under-approximate the logic: never a refutation
        status = UNKNOWN
    elif any(s == NOT_DERIVABLE for s in statuses):
        status = FAIL
    else:
        status = UNKNOWN
    details = {
        "group": item.group,
        "kind": "equiv" if item.equivalence else "entails",
        "verdicts": [v.to_json(timing=False) for v in verdicts],
    }
    if escalated:
        details["escalated"] = True
    return Record(item.id, status, details, (time.perf_counter() - t0) * 1000)


def derivation_suite(N: int = 2, budget: int = DEFAULT_BUDGET, engine: str = "intuit",
                   prover=None, allow_large: bool = False) -> Dict:
    if N < 0:
        raise ValueError("N must be non-negative")
    if N > 3 or (N == 3 and not allow_large):
        raise ValueError("N > 2 needs allow_large (and N ≤ 3)")
    prover = prover or make_prover(engine, budget, countermodel_size=3)
    records = [_run_item(item, prover, budget) for item in items(N)]
    return {"config": {"N": N, "budget": budget, "engine": prover.engine},
            "records": records, "summary": summarize(records)}


def summarize(records) -> Dict[str, int]:
    out = {PASS: 0, FAIL: 0, UNKNOWN: 0}
    for r in records:
        out[r.status] = out.get(r.status, 0) + 1
    return out


def negative_controls(prover=None) -> List[Record]:
    """Classical tautologies that IPC must reject, with small countermodels."""
    from .parser import parse

    prover = prover or make_prover("intuit", countermodel_size=3)
    out = []
    for name, text in (("lem", "p \\/ -p"), ("peirce", "((p -> q) -> p) -> p")):
        t0 = time.perf_counter()
        v = prover.proves(ProofTask((), parse(text)))
        cm = v.countermodel
        ok = (v.status == NOT_DERIVABLE and cm is not None and cm[0].n <= 3
              and evaluate(cm[0], cm[1], parse(text)) != cm[0].full)
        out.append(Record(f"control:{name}", PASS if ok else FAIL, v.to_json(timing=False),
                          (time.perf_counter() - t0) * 1000))
    return out


def _implication(item: Item, hyps=()) -> Formula:
    return Impl(conj_all(tuple(hyps) + (item.lhs,)), item.rhs)


def cross_validate(records: List[Record], item_index: Dict[str, Item], n_max: int = 4,
                   flip: Optional[str] = None) -> List[Record]:
    """Semantic re-check of every verdict.

    A derivable task must hold in every poset with at most ``n_max`` points;
    a countermodel must refute its task.  ``flip`` names a record whose first
    verdict is inverted before checking (fault injection).
    """
    posets = [P_ for n in range(1, n_max + 1) for P_ in enumerate_posets(n)]
    out = []
    for rec in records:
        item = item_index.get(rec.id)
        verdicts = rec.details.get("verdicts", [])
        if item is None or not verdicts:
            continue
        hyps = item.hypotheses
        if rec.details.get("escalated"):
            hyps = item.escalated_hypotheses()
        tasks = item.tasks(0, hyps)
        problems = []
        for i, (task, v) in enumerate(zip(tasks, verdicts)):
            status = v["verdict"]
            if flip == rec.id and i == 0:
                status = NOT_DERIVABLE if status == DERIVABLE else DERIVABLE
            phi = task.implication()
            if status == DERIVABLE:
                for P_ in posets:
                    if validates(P_, phi) is not None:
                        problems.append(f"direction {i}: derivable but refuted on {P_.to_json()}")
                        break
            elif status == NOT_DERIVABLE:
                cm = v.get("countermodel")
                if cm is None:
                    problems.append(f"direction {i}: not derivable without countermodel")
                    continue
                from .frames import FinitePoset, mask_of
                Pc = FinitePoset.from_json(cm["poset"])
                val = {k: mask_of(x) for k, x in cm["valuation"].items()}
                if evaluate(Pc, val, phi) == Pc.full:
                    problems.append(f"direction {i}: countermodel does not refute")
        out.append(Record(f"xval:{rec.id}", FAIL if problems else PASS,
                          {"problems": problems}))
    return out
