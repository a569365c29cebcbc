"""Relative density, the star and double-star properties, and the bb2 characterizations.

Everything here works on the upset algebra Up(P) of a finite poset, with
upsets and downsets as bitmasks (see ``frames``).  An interval [0, u] of
Up(P) is realized as Up(P restricted to u): its elements are the upsets of P
inside u and its implication is ``u & (x -> y)``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional

from .families import bb2, delta, sh_axioms
from .frames import (BudgetExceeded, FinitePoset, all_downsets, all_upsets,
                     canonical_key, down_closure, enumerate_posets, heyting_impl,
                     is_upset, validates)

__all__ = [
    "w", "dense_over", "regular_over", "RelativizedAlgebra", "check_star",
    "check_star_hereditary", "nowhere_cofinal", "check_doublestar",
    "check_doublestar_hereditary", "w_identity", "bb2_characterization_suite",
    "finite_incompleteness_shadow", "join_distributes_over_meets",
]

DEFAULT_CHECK_BUDGET = 10**8


def w(P: FinitePoset, a: int, b: int) -> int:
    """(b -> a) -> a"""
    return heyting_impl(P, heyting_impl(P, b, a), a)


def _require_below(a: int, b: int):
    if a & ~b:
        raise ValueError("precondition a ⊆ b violated")


def dense_over(P: FinitePoset, b: int, a: int) -> bool:
    _require_below(a, b)
    return heyting_impl(P, b, a) == a


def regular_over(P: FinitePoset, b: int, a: int) -> bool:
    _require_below(a, b)
    return w(P, a, b) == b


@dataclass(frozen=True)
class RelativizedAlgebra:
    """The interval [0, u] of Up(base), computed inside ``base`` directly."""

    base: FinitePoset
    u: int

    def __post_init__(self):
        if not is_upset(self.base, self.u):
            raise ValueError("u must be an upset")

    def elements(self) -> List[int]:
        return [x for x in all_upsets(self.base) if not x & ~self.u]

    def impl(self, x: int, y: int) -> int:
        return self.u & heyting_impl(self.base, x, y)

    @property
    def top(self) -> int:
        return self.u


def _star_violation(elements: List[int], impl, top: int, budget: int) -> Optional[tuple]:
    """First (a, b, c, d) breaking the star property in an algebra given by its elements.

    Star: if d = a ∨ b = a ∨ c = b ∨ c is dense over each of a, b, c, then d = 1.
    """
    steps = 0
    for i, a in enumerate(elements):
        for b in elements[i:]:
            d = a | b
            if d == top:
                continue
            if impl(d, a) != a or impl(d, b) != b:
                continue
            need = (d & ~a) | (d & ~b)
            for c in elements:
                steps += 1
                if steps > budget:
                    raise BudgetExceeded("star check exceeded its budget")
                if c & ~d or need & ~c:
                    continue
                if impl(d, c) == c:
                    return a, b, c, d
    return None


def check_star(P: FinitePoset, u: Optional[int] = None, budget: int = DEFAULT_CHECK_BUDGET) -> bool:
    """The star property in the interval [0, u] (all of Up(P) when u is None)."""
    if u is None or u == P.full:
        return _star_violation(all_upsets(P), lambda x, y: heyting_impl(P, x, y),
                               P.full, budget) is None
    sub, _ = P.restrict(u)
    return check_star(sub, None, budget)


def check_star_hereditary(P: FinitePoset, budget: int = DEFAULT_CHECK_BUDGET) -> bool:
    return all(check_star(P, u, budget) for u in all_upsets(P))


def nowhere_cofinal(P: FinitePoset, D: int, E: int) -> bool:
    """↓(E ∖ D) = E, for downsets D ⊆ E."""
    full = P.full
    if not (is_upset(P, full & ~D) and is_upset(P, full & ~E)):
        raise ValueError("D and E must be downsets")
    _require_below(D, E)
    return down_closure(P, E & ~D) == E


def _doublestar_violation(P: FinitePoset, budget: int) -> Optional[tuple]:
    downs = all_downsets(P)
    steps = 0
    for i, A in enumerate(downs):
        for B in downs[i:]:
            D = A & B
            if not D:
                continue
            if down_closure(P, A & ~D) != A or down_closure(P, B & ~D) != B:
                continue
            forbidden = (A | B) & ~D
            for C in downs:
                steps += 1
                if steps > budget:
                    raise BudgetExceeded("double-star check exceeded its budget")
                if C & forbidden or D & ~C:
                    continue
                if down_closure(P, C & ~D) == C:
                    return A, B, C, D
    return None


def check_doublestar(P: FinitePoset, restrict_to: Optional[int] = None,
                     budget: int = DEFAULT_CHECK_BUDGET) -> bool:
    """The double-star property in the subspace ``restrict_to`` (all of P when None).

    Double star: if D = A ∩ B = A ∩ C = B ∩ C is nowhere cofinal in each of
    the downsets A, B, C, then D is empty.
    """
    if restrict_to is None or restrict_to == P.full:
        return _doublestar_violation(P, budget) is None
    sub, _ = P.restrict(restrict_to)
    return _doublestar_violation(sub, budget) is None


def check_doublestar_hereditary(P: FinitePoset, over: str = "upsets",
                                budget: int = DEFAULT_CHECK_BUDGET) -> bool:
    """The double-star property in every subspace of the given kind.

    ``over="upsets"`` ranges over the subspaces dual to the intervals [0, u];
    ``over="downsets"`` ranges over downsets, where nowhere-cofinality is
    intrinsic and the check reduces to the one on P itself.
    """
    if over == "upsets":
        regions = all_upsets(P)
    elif over == "downsets":
        regions = all_downsets(P)
    else:
        raise ValueError("over must be 'upsets' or 'downsets'")
    return all(check_doublestar(P, S, budget) for S in regions)


def w_identity(P: FinitePoset) -> bool:
    """w_{a∨b}(c) ∧ w_{a∨c}(b) ∧ w_{b∨c}(a) = a∨b∨c for all upsets a, b, c."""
    ups = all_upsets(P)
    for a in ups:
        for b in ups:
            for c in ups:
                lhs = w(P, a | b, c) & w(P, a | c, b) & w(P, b | c, a)
                if lhs != a | b | c:
                    return False
    return True


def _poset_stream(n_max: int, allow_six: bool) -> Iterator[FinitePoset]:
    if n_max > 6 or (n_max == 6 and not allow_six):
        raise BudgetExceeded("n_max above 5 needs allow_six (and at most 6)")
    for n in range(1, n_max + 1):
        yield from enumerate_posets(n)


def bb2_characterization_suite(n_max: int = 5, allow_six: bool = False) -> Dict:
    """Compare four descriptions of bb2-validity on every small poset."""
    phi = bb2()
    records = []
    first_divergence = None
    t0 = time.perf_counter()
    for P in _poset_stream(n_max, allow_six):
        rec = {
            "canonical_key": list(canonical_key(P.n, P.up)),
            "n": P.n,
            "bb2_valid": validates(P, phi) is None,
            "w_identity": w_identity(P),
            "star_h": check_star_hereditary(P),
            "doublestar_h": check_doublestar_hereditary(P),
        }
        rec["agree"] = len({rec["bb2_valid"], rec["w_identity"], rec["star_h"],
                            rec["doublestar_h"]}) == 1
        if not rec["agree"] and first_divergence is None:
            first_divergence = P.to_json()
        records.append(rec)
    return {
        "n_max": n_max,
        "posets": len(records),
        "all_agree": all(r["agree"] for r in records),
        "first_divergence": first_divergence,
        "bb2_refuting": sum(not r["bb2_valid"] for r in records),
        "records": records,
        "time_s": round(time.perf_counter() - t0, 3),
    }


def finite_incompleteness_shadow(n_max: int = 5) -> Dict:
    """On finite (hence complete) upset algebras, Sh-validity forces delta_0."""
    axioms = sh_axioms()
    d0 = delta(0)
    checked = sh_models = 0
    violations = []
    for n in range(1, n_max + 1):
        for P in enumerate_posets(n):
            checked += 1
            if all(validates(P, ax) is None for ax in axioms):
                sh_models += 1
                if validates(P, d0) is not None:
                    violations.append(P.to_json())
    return {"n_max": n_max, "posets": checked, "sh_models": sh_models,
            "violations": violations}


def join_distributes_over_meets(P: FinitePoset) -> bool:
    """a ∨ ⋀S = ⋀{a ∨ s : s ∈ S} for every upset a and family S of upsets.

    In a finite algebra every family is finite, so the binary law gives the
    rest by induction; both the binary law and the family of all upsets are
    checked directly.
    """
    ups = all_upsets(P)
    full = P.full
    for a in ups:
        everything = full
        for s in ups:
            everything &= s
        if a | everything != _meet(a | s for s in ups):
            return False
        for s in ups:
            for t in ups:
                if a | (s & t) != (a | s) & (a | t):
                    return False
    return True


def _meet(xs) -> int:
    out = -1
    for x in xs:
        out &= x
    return out
