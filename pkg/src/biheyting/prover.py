"""Decision procedures for intuitionistic propositional logic.

Two independent engines share one interface:

``intuit``
    SAT modulo intuitionistic implications (Claessen & Rosén).  Every
    distinct subformula gets a propositional atom with definitional
    clauses; implications contribute an *implication clause*
    ``(a -> b) -> c`` that the classical solver cannot see.  A classical
    model is either refined by a recursive intuitionistic call, which
    learns a new flat clause, or it is the root of a Kripke countermodel.
    Works on the formula DAG, so the exponentially large (as trees)
    family formulas stay cheap.  Default engine.

``g4ip``
    Root-first search in Dyckhoff's contraction-free sequent calculus,
    with eager invertible left rules and a sequent cache.  Terminating
    without loop checks, but its search space explodes on the nested
    two-variable families; used as the cross-check engine on small tasks.

Both return a ``Verdict``; NotDerivable answers come from exhausted
complete search and carry a finite countermodel whenever one could be
built (and checked by evaluation).
"""
from __future__ import annotations

import os
import sys
import threading
import time
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pysat.solvers import Solver

from .formula import (BOTTOM, TOP, Coimpl, Conj, Disj, Formula, Impl, Var,
                      conj_all, subformulas, to_text)
from .frames import FinitePoset, countermodel_search, evaluate

__all__ = [
    "DEFAULT_BUDGET", "ProofTask", "Verdict", "G4ipProver", "IntuitProver",
    "make_prover", "proves", "equiv", "refutes", "DERIVABLE", "NOT_DERIVABLE", "UNKNOWN",
]

DERIVABLE, NOT_DERIVABLE, UNKNOWN = "derivable", "not_derivable", "unknown"
DEFAULT_BUDGET = int(os.environ.get("BIHEYTING_BUDGET", 10**7))
MAX_KRIPKE_WORLDS = 200


@dataclass(frozen=True)
class ProofTask:
    assumptions: Tuple[Formula, ...]
    goal: Formula
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "assumptions", tuple(self.assumptions))
        for phi in (*self.assumptions, self.goal):
            if any(isinstance(n, Coimpl) for n in subformulas(phi)):
                raise ValueError("the IPC prover does not accept coimplication")

    def implication(self) -> Formula:
        return Impl(conj_all(self.assumptions), self.goal) if self.assumptions else self.goal

    def text(self) -> str:
        return ", ".join(to_text(a) for a in self.assumptions) + " |- " + to_text(self.goal)


@dataclass
class Verdict:
    status: str
    countermodel: Optional[Tuple[FinitePoset, Dict[str, int]]] = None
    nodes: int = 0
    time_ms: float = 0.0

    @property
    def derivable(self) -> bool:
        return self.status == DERIVABLE

    def to_json(self, timing: bool = True) -> dict:
        out = {"verdict": self.status, "nodes": self.nodes}
        if timing:
            out["time_ms"] = round(self.time_ms, 3)
        if self.countermodel is not None:
            P, val = self.countermodel
            out["countermodel"] = {"poset": P.to_json(),
                                   "valuation": {k: [i for i in range(P.n) if v >> i & 1]
                                                 for k, v in sorted(val.items())}}
        return out


class _OutOfBudget(Exception):
    pass


def _run_deep(fn):
    """Run ``fn`` on a thread with a large stack; searches recurse deeply."""
    result = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 200_000))
        try:
            result["value"] = fn()
        except BaseException as exc:  # re-raised in the caller
            result["error"] = exc
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
    if "error" in result:
        raise result["error"]
    return result["value"]


class _BaseProver:
    engine = ""

    def __init__(self, budget: int = DEFAULT_BUDGET, countermodel_size: int = 4):
        self.budget = budget
        self.countermodel_size = countermodel_size
        self.nodes = 0
        self._limit = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self._limit:
            raise _OutOfBudget

    def _decide(self, assumptions, goal):
        """Return (answer, countermodel-or-None); may raise _OutOfBudget."""
        raise NotImplementedError

    def proves(self, task: ProofTask) -> Verdict:
        start = self.nodes
        t0 = time.perf_counter()
        self._limit = self.nodes + task.budget
        try:
            answer, cm = _run_deep(lambda: self._decide(task.assumptions, task.goal))
        except _OutOfBudget:
            return Verdict(UNKNOWN, None, self.nodes - start, (time.perf_counter() - t0) * 1000)
        nodes = self.nodes - start
        if answer:
            return Verdict(DERIVABLE, None, nodes, (time.perf_counter() - t0) * 1000)
        # prefer a smallest model; fall back to the one the search produced
        small = None
        if self.countermodel_size > 0:
            small = countermodel_search(task.implication(), self.countermodel_size)
        if small is not None:
            cm = small
        elif cm is not None and not refutes(cm, task.implication()):
            cm = None  # never attach an unchecked model
        return Verdict(NOT_DERIVABLE, cm, nodes, (time.perf_counter() - t0) * 1000)


def refutes(countermodel, phi: Formula) -> bool:
    P, val = countermodel
    return evaluate(P, val, phi) != P.full


# -- G4ip ------------------------------------------------------------------------

_CLOSED = None  # antecedent containing ⊥


class G4ipProver(_BaseProver):
    """Contraction-free sequent search; the cache persists across queries."""

    engine = "g4ip"

    def __init__(self, budget: int = DEFAULT_BUDGET, countermodel_size: int = 4):
        super().__init__(budget, countermodel_size)
        self.cache: Dict[Tuple[FrozenSet[Formula], Formula], bool] = {}

    def _add(self, base: FrozenSet[Formula], new: Iterable[Formula]):
        """Saturate ``base`` ∪ ``new`` under the invertible left rules."""
        ctx = set(base)
        todo = list(new)
        while todo:
            phi = todo.pop()
            if phi in ctx or phi is TOP:
                continue
            if phi is BOTTOM:
                return _CLOSED
            t = type(phi)
            if t is Conj:
                todo.append(phi.left)
                todo.append(phi.right)
            elif t is Var:
                ctx.add(phi)
                fired = [x for x in ctx if type(x) is Impl and x.left is phi]
                for x in fired:
                    ctx.discard(x)
                    todo.append(x.right)
            elif t is Impl:
                a, b = phi.left, phi.right
                ta = type(a)
                if b is TOP or a is BOTTOM:
                    continue
                if a is TOP:
                    todo.append(b)
                elif ta is Var:
                    if a in ctx:
                        todo.append(b)
                    else:
                        ctx.add(phi)
                elif ta is Conj:
                    todo.append(Impl(a.left, Impl(a.right, b)))
                elif ta is Disj:
                    todo.append(Impl(a.left, b))
                    todo.append(Impl(a.right, b))
                else:  # (C -> D) -> B waits for the non-invertible rule
                    ctx.add(phi)
            else:
                ctx.add(phi)
        return frozenset(ctx)

    def _prove(self, ctx: FrozenSet[Formula], goal: Formula) -> bool:
        key = (ctx, goal)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        self._tick()
        result = self._search(ctx, goal)
        self.cache[key] = result
        return result

    def _search(self, ctx, goal) -> bool:
        if goal is TOP or goal in ctx:
            return True
        tg = type(goal)
        if tg is Conj:
            return self._prove(ctx, goal.left) and self._prove(ctx, goal.right)
        if tg is Impl:
            extended = self._add(ctx, [goal.left])
            return extended is _CLOSED or self._prove(extended, goal.right)
        disjunctions = [x for x in ctx if type(x) is Disj]
        if disjunctions:
            d = min(disjunctions, key=lambda x: x.uid)
            rest = ctx - {d}
            for branch in (d.left, d.right):
                sub = self._add(rest, [branch])
                if sub is not _CLOSED and not self._prove(sub, goal):
                    return False
            return True
        if tg is Disj and (self._prove(ctx, goal.left) or self._prove(ctx, goal.right)):
            return True
        for x in sorted((x for x in ctx if type(x) is Impl and type(x.left) is Impl),
                        key=lambda x: x.uid):
            c, d, b = x.left.left, x.left.right, x.right
            rest = ctx - {x}
            left = self._add(rest, [Impl(d, b)])
            if left is not _CLOSED and not self._prove(left, Impl(c, d)):
                continue
            right = self._add(rest, [b])
            if right is _CLOSED or self._prove(right, goal):
                return True
        return False

    def _decide(self, assumptions, goal):
        ctx = self._add(frozenset(), list(assumptions))
        if ctx is _CLOSED:
            return True, None
        return self._prove(ctx, goal), None


# -- SAT modulo intuitionistic implications -----------------------------------------

class _Clausified:
    """Definitional clauses for a fixed set of formulas, plus a SAT solver."""

    def __init__(self, formulas: Sequence[Formula], solver_name: str = "m22"):
        self.atom: Dict[Formula, int] = {}
        self.var_atoms: Dict[str, int] = {}
        self.implications: List[Tuple[int, int, int]] = []
        clauses: List[List[int]] = []
        for phi in formulas:
            for node in subformulas(phi):
                if node in self.atom:
                    continue
                x = len(self.atom) + 1
                self.atom[node] = x
                if isinstance(node, Var):
                    self.var_atoms[node.name] = x
                elif node is TOP:
                    clauses.append([x])
                elif node is BOTTOM:
                    clauses.append([-x])
                else:
                    y, z = self.atom[node.left], self.atom[node.right]
                    if isinstance(node, Conj):
                        clauses += [[-x, y], [-x, z], [-y, -z, x]]
                    elif isinstance(node, Disj):
                        clauses += [[-x, y, z], [-y, x], [-z, x]]
                    else:
                        # x ∧ y → z, z → x, and the implication clause (y → z) → x
                        clauses += [[-x, -y, z], [-z, x]]
                        self.implications.append((y, z, x))
        self.solver = Solver(name=solver_name, bootstrap_with=clauses)

    def close(self):
        self.solver.delete()


class IntuitProver(_BaseProver):
    """Decides IPC by refining classical models with implication clauses.

    ``prove(A, q)`` asks whether the atoms ``A`` entail atom ``q``.  While the
    solver finds a model M of A ∪ {¬q}, each implication clause (a → b) → c
    with a, b, c false in M is tried recursively as prove(M ∪ {a}, b); a
    success yields the learned clause (core ∖ {a}) → c, which excludes M.
    If every such call fails, M is the root of a Kripke countermodel whose
    successors are the recursive countermodels.  Sequent answers are cached.
    """

    engine = "intuit"

    def __init__(self, budget: int = DEFAULT_BUDGET, countermodel_size: int = 4):
        super().__init__(budget, countermodel_size)
        self.cache_hits = 0

    def _decide(self, assumptions, goal):
        cl = _Clausified([*assumptions, goal])
        try:
            self._cl = cl
            self._cache: Dict[Tuple[FrozenSet[int], int], tuple] = {}
            A = frozenset(cl.atom[a] for a in assumptions)
            ok, info = self._prove(A, cl.atom[goal])
            if ok:
                return True, None
            return False, self._kripke(info, cl)
        finally:
            cl.close()
            self._cl = None

    def _prove(self, A: FrozenSet[int], q: int):
        key = (A, q)
        hit = self._cache.get(key)
        if hit is not None:
            self.cache_hits += 1
            return hit
        result = self._prove_uncached(A, q)
        self._cache[key] = result
        return result

    def _prove_uncached(self, A: FrozenSet[int], q: int):
        solver = self._cl.solver
        implications = self._cl.implications
        assumptions = sorted(A)
        while True:
            self._tick()
            if not solver.solve(assumptions=assumptions + [-q]):
                core = solver.get_core() or []
                return True, frozenset(l for l in core if l > 0 and l in A)
            model = solver.get_model()
            true = frozenset(l for l in model if l > 0)
            children = []
            learned = False
            for a, b, c in implications:
                if a in true or b in true or c in true:
                    continue
                ok, info = self._prove(true | {a}, b)
                if ok:
                    solver.add_clause([-l for l in info if l != a] + [c])
                    learned = True
                    break
                children.append(info)
            if not learned:
                return False, (true, children)

    @staticmethod
    def _kripke(tree, cl: _Clausified):
        """Flatten a countermodel tree into a poset and valuation (None if too big)."""
        worlds: List[FrozenSet[int]] = []
        covers = []
        stack = [(tree, None)]
        while stack:
            (true, children), parent = stack.pop()
            idx = len(worlds)
            if idx >= MAX_KRIPKE_WORLDS:
                return None
            worlds.append(true)
            if parent is not None:
                covers.append((parent, idx))
            for child in children:
                stack.append((child, idx))
        P = FinitePoset.from_covers(len(worlds), covers)
        val = {name: sum(1 << w for w, t in enumerate(worlds) if x in t)
               for name, x in cl.var_atoms.items()}
        return P, val


def make_prover(engine: str = "intuit", budget: int = DEFAULT_BUDGET,
                countermodel_size: int = 4) -> _BaseProver:
    if engine == "intuit":
        return IntuitProver(budget, countermodel_size)
    if engine == "g4ip":
        return G4ipProver(budget, countermodel_size)
    raise ValueError(f"unknown engine {engine!r}")


def proves(task: ProofTask, prover: Optional[_BaseProver] = None) -> Verdict:
    return (prover or IntuitProver()).proves(task)


def equiv(phi: Formula, psi: Formula, budget: int = DEFAULT_BUDGET,
          prover: Optional[_BaseProver] = None) -> Tuple[Verdict, Verdict]:
    """Verdicts for phi ⊢ psi and psi ⊢ phi."""
    prover = prover or IntuitProver()
    return (prover.proves(ProofTask((phi,), psi, budget)),
            prover.proves(ProofTask((psi,), phi, budget)))
