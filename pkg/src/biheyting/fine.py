"""Exact symbolic model of the compactified Fine frame X_F and its clopen upsets.

Points are a_i, b_i, c_i, d_i (i ≥ 0) and the limit point ∞.  The order is
generated by the covers

    b_{n+1} < b_n,   c_{n+1} < c_n,   b_{n+2} < c_n,   c_{n+2} < b_n,
    a_n < b_{n+1},   a_n < c_{n+1},   d_n < a_n,       d_n < d_{n+1},

together with d_i ≤ ∞ ≤ b_j, c_j.  Clopen sets are the finite sets avoiding
∞ and the cofinite sets containing ∞; a ``ClopenSet`` stores the finite
member set or the finite set of excluded points as a bitmask, point
``(kind, i)`` living at bit ``4*i + lane(kind)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Tuple

from .formula import BOTTOM, TOP, Coimpl, Conj, Disj, Formula, Impl, Var, subformulas
from .frames import FinitePoset, members as mask_members

__all__ = [
    "FinePoint", "INF", "leq", "ClopenSet", "ClopenUpset", "EMPTY", "FULL",
    "finite", "cofinite", "complement", "union", "intersection", "difference",
    "up_closure", "down_closure", "meet", "join", "heyting_impl", "coimpl",
    "eval_symbolic", "named_region", "truncate", "Truncation", "cover_pairs",
    "random_clopen_set", "random_clopen_upset",
]

KINDS = ("A", "B", "C", "D")
LANE = {"A": 0, "B": 1, "C": 2, "D": 3}


class FinePoint(NamedTuple):
    kind: str
    index: Optional[int] = None

    def __str__(self):
        return "inf" if self.kind == "Inf" else f"{self.kind.lower()}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "FinePoint":
        text = text.strip()
        if text in ("inf", "∞", "Inf"):
            return INF
        kind, idx = text[0].upper(), int(text[1:])
        if kind not in LANE or idx < 0:
            raise ValueError(f"bad point {text!r}")
        return cls(kind, idx)


INF = FinePoint("Inf", None)


def leq(x: FinePoint, y: FinePoint) -> bool:
    """x ≤ y in X_F, by closed-form index rules."""
    if x == y:
        return True
    kx, ky = x.kind, y.kind
    if kx == "D":
        if ky == "D" or ky == "A":
            return x.index <= y.index
        return True  # below ∞, hence below every b and c
    if kx == "Inf":
        return ky in ("B", "C")
    if ky in ("A", "D", "Inf"):
        return False
    if kx == "A":
        return y.index <= x.index + 1
    if kx == ky:
        return y.index <= x.index
    return y.index <= x.index - 2


def cover_pairs(k: int) -> List[Tuple[FinePoint, FinePoint]]:
    """Cover list (lower, upper) restricted to points of ``truncate(k)``."""
    pts = set(truncation_points(k))
    out = []
    for n in range(k + 1):
        cand = [
            (FinePoint("B", n + 1), FinePoint("B", n)),
            (FinePoint("C", n + 1), FinePoint("C", n)),
            (FinePoint("B", n + 2), FinePoint("C", n)),
            (FinePoint("C", n + 2), FinePoint("B", n)),
            (FinePoint("A", n), FinePoint("B", n + 1)),
            (FinePoint("A", n), FinePoint("C", n + 1)),
            (FinePoint("D", n), FinePoint("A", n)),
            (FinePoint("D", n), FinePoint("D", n + 1)),
        ]
        out.extend((x, y) for x, y in cand if x in pts and y in pts)
    return out


# -- bit-level helpers --------------------------------------------------------

def _repunit(n: int) -> int:
    """Bits 0, 4, ..., 4(n-1)."""
    return ((1 << (4 * n)) - 1) // 15 if n > 0 else 0


def _prefix(kind: str, n: int) -> int:
    """Points of ``kind`` with index < n."""
    return _repunit(n) << LANE[kind] if n > 0 else 0


def _bit(p: FinePoint) -> int:
    return 1 << (4 * p.index + LANE[p.kind])


def _lane(mask: int, kind: str) -> int:
    return mask & _prefix(kind, (mask.bit_length() + 3) // 4 + 1)


def _min_index(lane_mask: int) -> int:
    return ((lane_mask & -lane_mask).bit_length() - 1) // 4


def _max_index(lane_mask: int) -> int:
    return (lane_mask.bit_length() - 1) // 4


def _points(mask: int) -> Iterator[FinePoint]:
    while mask:
        low = mask & -mask
        pos = low.bit_length() - 1
        yield FinePoint(KINDS[pos % 4], pos // 4)
        mask ^= low


def _up_finite(p: FinePoint) -> int:
    """↑p for p in A ∪ B ∪ C (a finite set)."""
    n = p.index
    if p.kind == "A":
        return _bit(p) | _prefix("B", n + 2) | _prefix("C", n + 2)
    other = "C" if p.kind == "B" else "B"
    return _prefix(p.kind, n + 1) | _prefix(other, n - 1)


def _down_finite(p: FinePoint) -> int:
    """↓p for p in A ∪ D (a finite set)."""
    if p.kind == "A":
        return _bit(p) | _prefix("D", p.index + 1)
    return _prefix("D", p.index + 1)


def _not_below(p: FinePoint) -> int:
    """X ∖ ↓p for p in B ∪ C (a finite set)."""
    n = p.index
    other = "C" if p.kind == "B" else "B"
    return _prefix(p.kind, n) | _prefix(other, n + 2) | _prefix("A", n - 1)


def _not_above_d(n: int) -> int:
    """X ∖ ↑d_n."""
    return _prefix("D", n) | _prefix("A", n)


# -- clopen sets --------------------------------------------------------------

class ClopenSet:
    """A finite subset of F, or a cofinite subset of X_F containing ∞.

    ``mask`` holds the members (finite case) or the excluded points
    (cofinite case).  Instances are immutable and hashable.
    """

    __slots__ = ("cofinite", "mask")

    def __init__(self, cofinite: bool, mask: int):
        if mask < 0:
            raise ValueError("mask must be non-negative")
        object.__setattr__(self, "cofinite", bool(cofinite))
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("ClopenSet is immutable")

    def __eq__(self, other):
        return (isinstance(other, ClopenSet) and self.cofinite == other.cofinite
                and self.mask == other.mask)

    def __hash__(self):
        return hash((self.cofinite, self.mask))

    def __repr__(self):
        pts = ", ".join(str(p) for p in self.listed())
        return f"{'Cofinite' if self.cofinite else 'Finite'}({{{pts}}})"

    @property
    def is_finite(self) -> bool:
        return not self.cofinite

    def listed(self) -> List[FinePoint]:
        """Members (finite) or excluded points (cofinite), in canonical order."""
        return sorted(_points(self.mask), key=lambda p: (LANE[p.kind], p.index))

    def __contains__(self, p: FinePoint) -> bool:
        if p.kind == "Inf":
            return self.cofinite
        inside = bool(self.mask & _bit(p))
        return inside != self.cofinite

    def max_index(self) -> int:
        return _max_index(self.mask) if self.mask else -1

    def is_upset(self) -> bool:
        return up_closure(self) == self

    def is_downset(self) -> bool:
        return down_closure(self) == self

    def to_json(self) -> dict:
        return {"mode": "cofinite" if self.cofinite else "finite",
                "points": [[p.kind, p.index] for p in self.listed()]}

    @classmethod
    def from_json(cls, data) -> "ClopenSet":
        mode = data["mode"]
        if mode not in ("finite", "cofinite"):
            raise ValueError(f"unknown mode {mode!r}")
        pts = [FinePoint(k, int(i)) for k, i in data["points"]]
        return finite(pts) if mode == "finite" else cofinite(pts)


# The clopen upsets are the ClopenSets passing ``is_upset``; they share the type.
ClopenUpset = ClopenSet

EMPTY = ClopenSet(False, 0)
FULL = ClopenSet(True, 0)


def _mask(points: Iterable[FinePoint]) -> int:
    m = 0
    for p in points:
        if p.kind == "Inf":
            raise ValueError("∞ is never listed explicitly")
        if p.kind not in LANE or p.index is None or p.index < 0:
            raise ValueError(f"bad point {p!r}")
        m |= _bit(p)
    return m


def finite(points: Iterable[FinePoint]) -> ClopenSet:
    return ClopenSet(False, _mask(points))


def cofinite(excluded: Iterable[FinePoint] = ()) -> ClopenSet:
    return ClopenSet(True, _mask(excluded))


def complement(U: ClopenSet) -> ClopenSet:
    return ClopenSet(not U.cofinite, U.mask)


def union(U: ClopenSet, V: ClopenSet) -> ClopenSet:
    if U.cofinite:
        if V.cofinite:
            return ClopenSet(True, U.mask & V.mask)
        return ClopenSet(True, U.mask & ~V.mask)
    if V.cofinite:
        return ClopenSet(True, V.mask & ~U.mask)
    return ClopenSet(False, U.mask | V.mask)


def intersection(U: ClopenSet, V: ClopenSet) -> ClopenSet:
    if U.cofinite:
        if V.cofinite:
            return ClopenSet(True, U.mask | V.mask)
        return ClopenSet(False, V.mask & ~U.mask)
    if V.cofinite:
        return ClopenSet(False, U.mask & ~V.mask)
    return ClopenSet(False, U.mask & V.mask)


def difference(U: ClopenSet, V: ClopenSet) -> ClopenSet:
    return intersection(U, complement(V))


def down_closure(U: ClopenSet) -> ClopenSet:
    m = U.mask
    if U.cofinite:
        # y stays outside ↓U iff ↑y misses U; points of D and ∞ lie below ∞ ∈ U
        out = 0
        for p in _points(m):
            if p.kind != "D" and not (_up_finite(p) & ~m):
                out |= _bit(p)
        return ClopenSet(True, out)
    bl, cl = _lane(m, "B"), _lane(m, "C")
    if bl or cl:
        # only the least-indexed b and c matter: ↓b_m grows as m decreases
        excl = -1
        if bl:
            excl &= _not_below(FinePoint("B", _min_index(bl)))
        if cl:
            excl &= _not_below(FinePoint("C", _min_index(cl)))
        return ClopenSet(True, excl & ~_lane(m, "A"))
    al, dl = _lane(m, "A"), _lane(m, "D")
    if not (al | dl):
        return EMPTY
    return ClopenSet(False, al | _prefix("D", _max_index(al | dl) + 1))


def up_closure(U: ClopenSet) -> ClopenSet:
    m = U.mask
    if U.cofinite:
        # y stays outside ↑U iff ↓y misses U; points of B, C lie above ∞ ∈ U
        out = 0
        for p in _points(m):
            if p.kind in ("A", "D") and not (_down_finite(p) & ~m):
                out |= _bit(p)
        return ClopenSet(True, out)
    al, dl = _lane(m, "A"), _lane(m, "D")
    if dl:
        return ClopenSet(True, _not_above_d(_min_index(dl)) & ~al)
    bl, cl = _lane(m, "B"), _lane(m, "C")
    nb = nc = 0  # prefix lengths
    if al:
        top = _max_index(al) + 2
        nb, nc = max(nb, top), max(nc, top)
    if bl:
        i = _max_index(bl)
        nb, nc = max(nb, i + 1), max(nc, i - 1)
    if cl:
        i = _max_index(cl)
        nc, nb = max(nc, i + 1), max(nb, i - 1)
    return ClopenSet(False, al | _prefix("B", nb) | _prefix("C", nc))


# -- the bi-Heyting algebra of clopen upsets ----------------------------------

def meet(U: ClopenSet, V: ClopenSet) -> ClopenSet:
    return intersection(U, V)


def join(U: ClopenSet, V: ClopenSet) -> ClopenSet:
    return union(U, V)


def heyting_impl(U: ClopenSet, V: ClopenSet) -> ClopenSet:
    """U → V = X ∖ ↓(U ∖ V)."""
    return complement(down_closure(difference(U, V)))


def coimpl(U: ClopenSet, V: ClopenSet) -> ClopenSet:
    """U ← V = ↑(V ∖ U)."""
    return up_closure(difference(V, U))


class SymbolicEvaluator:
    """Evaluates formulas in the algebra of clopen upsets, caching the operations."""

    def __init__(self, cache_limit: int = 1 << 20):
        self.cache_limit = cache_limit
        self._impl: Dict[Tuple[ClopenSet, ClopenSet], ClopenSet] = {}
        self._programs: Dict[Formula, list] = {}

    def impl(self, U, V):
        key = (U, V)
        hit = self._impl.get(key)
        if hit is None:
            hit = heyting_impl(U, V)
            if len(self._impl) >= self.cache_limit:
                self._impl.clear()
            self._impl[key] = hit
        return hit

    def program(self, phi: Formula):
        prog = self._programs.get(phi)
        if prog is None:
            nodes = list(subformulas(phi))
            index = {node: k for k, node in enumerate(nodes)}
            prog = []
            for node in nodes:
                if isinstance(node, Var):
                    prog.append(("var", node.name, None))
                elif node is TOP:
                    prog.append(("const", FULL, None))
                elif node is BOTTOM:
                    prog.append(("const", EMPTY, None))
                else:
                    op = {Conj: "and", Disj: "or", Impl: "imp", Coimpl: "coimp"}[type(node)]
                    prog.append((op, index[node.left], index[node.right]))
            self._programs[phi] = prog
        return prog

    def run(self, valuation: Mapping[str, ClopenSet], phi: Formula, trace: bool = False):
        prog = self.program(phi)
        out = [None] * len(prog)
        impl = self.impl
        for k, (op, a, b) in enumerate(prog):
            if op == "imp":
                out[k] = impl(out[a], out[b])
            elif op == "and":
                out[k] = intersection(out[a], out[b])
            elif op == "or":
                out[k] = union(out[a], out[b])
            elif op == "var":
                try:
                    out[k] = valuation[a]
                except KeyError:
                    raise KeyError(f"unbound variable: {a}") from None
            elif op == "const":
                out[k] = a
            else:
                out[k] = coimpl(out[a], out[b])
        return out if trace else out[-1]


_default_evaluator = SymbolicEvaluator()


def eval_symbolic(valuation: Mapping[str, ClopenSet], phi: Formula) -> ClopenSet:
    """Exact value of ``phi`` in the clopen-upset algebra under ``valuation``."""
    for name, U in valuation.items():
        if not U.is_upset():
            raise ValueError(f"V({name}) is not an upset: {U!r}")
    return _default_evaluator.run(valuation, phi)


def point_set(p: FinePoint) -> ClopenSet:
    if p.kind == "Inf":
        raise ValueError("{∞} is not clopen")
    return ClopenSet(False, _bit(p))


def named_region(kind: str, primed: bool, n: int) -> ClopenSet:
    """Unprimed: complement of ↓x; primed: ↑x, for x = kind_n."""
    kind = kind.upper()
    if kind not in LANE or n < 0:
        raise ValueError(f"bad region {kind}{n}")
    s = point_set(FinePoint(kind, n))
    return up_closure(s) if primed else complement(down_closure(s))


# -- random sampling ------------------------------------------------------------

def random_points(rng: random.Random, max_index: int, count: int) -> List[FinePoint]:
    return [FinePoint(rng.choice(KINDS), rng.randint(0, max_index)) for _ in range(count)]


def random_clopen_set(rng: random.Random, max_index: int = 12, max_points: int = 6) -> ClopenSet:
    pts = random_points(rng, max_index, rng.randint(0, max_points))
    return cofinite(pts) if rng.random() < 0.5 else finite(pts)


def random_clopen_upset(rng: random.Random, max_index: int = 12, max_points: int = 4) -> ClopenSet:
    """Up-close a random finite seed, or take the complement of a down-closed one."""
    pts = random_points(rng, max_index, rng.randint(0, max_points))
    if rng.random() < 0.5:
        return up_closure(finite(pts))
    return complement(down_closure(finite(pts)))


# -- finite truncations ---------------------------------------------------------

def truncation_points(k: int) -> List[FinePoint]:
    pts = [FinePoint("D", i) for i in range(k)]
    pts += [FinePoint("A", i) for i in range(k)]
    pts += [FinePoint("B", i) for i in range(k + 1)]
    pts += [FinePoint("C", i) for i in range(k + 1)]
    return pts


@dataclass(frozen=True)
class Truncation:
    k: int
    poset: FinitePoset
    points: Tuple[FinePoint, ...]
    index: Dict[FinePoint, int] = field(repr=False, compare=False)

    def to_mask(self, U: ClopenSet) -> int:
        """Restriction of U to the truncation, as a poset subset mask."""
        return sum(1 << i for i, p in enumerate(self.points) if p in U)

    def members(self, mask: int) -> List[FinePoint]:
        return [self.points[i] for i in mask_members(mask)]


def truncate(k: int) -> Truncation:
    """Induced subposet on b_i, c_i (i ≤ k) and a_i, d_i (i ≤ k-1)."""
    if k < 2:
        raise ValueError("truncation depth must be at least 2")
    pts = truncation_points(k)
    n = len(pts)
    rows = tuple(tuple(leq(x, y) for y in pts) for x in pts)
    poset = FinitePoset(n, rows, tuple(str(p) for p in pts))
    return Truncation(k, poset, tuple(pts), {p: i for i, p in enumerate(pts)})
