"""Finite posets as Kripke frames and their bi-Heyting algebras of upsets.

Subsets of a poset with ``n`` elements are ``int`` bitmasks (bit ``i`` set
iff element ``i`` is a member).  Upsets, downsets and valuations all use
this encoding; ``members`` converts back to sorted index lists.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .formula import BOTTOM, TOP, Coimpl, Conj, Disj, Formula, Impl, Var, subformulas

__all__ = [
    "BudgetExceeded", "FinitePoset", "chain", "antichain", "members", "mask_of",
    "up_closure", "down_closure", "all_upsets", "all_downsets", "heyting_impl", "coimpl",
    "is_upset", "evaluate", "validates", "enumerate_posets", "canonical_key",
    "countermodel_search", "Compiled", "compile_formula",
]

MAX_UPSET_N = 12
MAX_ENUM_N = 7


class BudgetExceeded(RuntimeError):
    """An exhaustive operation would exceed its configured budget."""


def members(mask: int) -> List[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """A finite partial order on ``range(n)``; ``leq[i][j]`` means i ≤ j.

    Optional ``labels`` name the elements (used for DOT export and reports).
    """

    n: int
    leq: Tuple[Tuple[bool, ...], ...]
    labels: Optional[Tuple[str, ...]] = None
    up: Tuple[int, ...] = field(init=False, repr=False)
    down: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        leq = tuple(tuple(bool(v) for v in row) for row in self.leq)
        if len(leq) != self.n or any(len(row) != self.n for row in leq):
            raise ValueError("leq must be an n×n matrix")
        object.__setattr__(self, "leq", leq)
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError("one label per element required")
            object.__setattr__(self, "labels", tuple(self.labels))
        n = self.n
        for i in range(n):
            if not leq[i][i]:
                raise ValueError(f"not reflexive at {i}")
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise ValueError(f"not antisymmetric at ({i}, {j})")
                if leq[i][j]:
                    for k in range(n):
                        if leq[j][k] and not leq[i][k]:
                            raise ValueError(f"not transitive at ({i}, {j}, {k})")
        up = tuple(mask_of(j for j in range(n) if leq[i][j]) for i in range(n))
        down = tuple(mask_of(j for j in range(n) if leq[j][i]) for i in range(n))
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)

    # structural identity ignores labels
    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.n == other.n and self.leq == other.leq

    def __hash__(self):
        return hash((self.n, self.leq))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @classmethod
    def from_covers(cls, n: int, covers: Iterable[Sequence[int]], labels=None) -> "FinitePoset":
        """Reflexive-transitive closure of the cover pairs (i, j), meaning i < j."""
        reach = [1 << i for i in range(n)]
        succ = [0] * n
        for i, j in covers:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"cover ({i}, {j}) out of range")
            if i == j:
                raise ValueError(f"cover ({i}, {j}) is reflexive")
            succ[i] |= 1 << j
        changed = True
        while changed:
            changed = False
            for i in range(n):
                new = reach[i] | succ[i]
                for j in members(succ[i]):
                    new |= reach[j]
                if new != reach[i]:
                    reach[i] = new
                    changed = True
        leq = tuple(tuple(bool(reach[i] >> j & 1) for j in range(n)) for i in range(n))
        return cls(n, leq, labels)

    @classmethod
    def from_up_masks(cls, n: int, up: Sequence[int], labels=None) -> "FinitePoset":
        leq = tuple(tuple(bool(up[i] >> j & 1) for j in range(n)) for i in range(n))
        return cls(n, leq, labels)

    def covers(self) -> List[Tuple[int, int]]:
        """Pairs (i, j) with i < j and nothing strictly between."""
        out = []
        for i in range(self.n):
            strict = self.up[i] & ~(1 << i)
            for j in members(strict):
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        return out

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def restrict(self, subset: int) -> Tuple["FinitePoset", List[int]]:
        """Induced subposet on ``subset``; returns it and the old index of each new element."""
        idx = members(subset)
        leq = tuple(tuple(self.leq[a][b] for b in idx) for a in idx)
        labels = tuple(self.label(a) for a in idx) if self.labels is not None else None
        return FinitePoset(len(idx), leq, labels), idx

    def to_json(self, with_labels: bool = False) -> dict:
        out = {"n": self.n, "covers": [list(c) for c in self.covers()]}
        if with_labels and self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data) -> "FinitePoset":
        if isinstance(data, str):
            data = json.loads(data)
        labels = data.get("labels")
        return cls.from_covers(int(data["n"]), data.get("covers", []),
                               tuple(labels) if labels is not None else None)

    def to_dot(self, name: str = "poset") -> str:
        """Hasse diagram, bigger elements drawn on top."""
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
        for i in range(self.n):
            lines.append(f'  n{i} [label="{self.label(i)}"];')
        for i, j in self.covers():
            lines.append(f"  n{i} -> n{j} [arrowhead=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def chain(n: int) -> FinitePoset:
    return FinitePoset.from_covers(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> FinitePoset:
    return FinitePoset.from_covers(n, [])


def up_closure(P: FinitePoset, S: int) -> int:
    out = 0
    for i in members(S):
        out |= P.up[i]
    return out


def down_closure(P: FinitePoset, S: int) -> int:
    out = 0
    for i in members(S):
        out |= P.down[i]
    return out


def is_upset(P: FinitePoset, S: int) -> bool:
    return up_closure(P, S) == S


def _closure_tables(P: FinitePoset):
    """Lookup tables of ↑S and ↓S for every subset S (n ≤ MAX_UPSET_N)."""
    cached = P.__dict__.get("_tables")
    if cached is not None:
        return cached
    if P.n > MAX_UPSET_N:
        raise BudgetExceeded(f"closure tables need n ≤ {MAX_UPSET_N}, got {P.n}")
    size = 1 << P.n
    up = [0] * size
    down = [0] * size
    for S in range(1, size):
        low = S & -S
        i = low.bit_length() - 1
        up[S] = up[S ^ low] | P.up[i]
        down[S] = down[S ^ low] | P.down[i]
    tables = (up, down)
    P.__dict__["_tables"] = tables  # cache on the frozen instance
    return tables


def all_upsets(P: FinitePoset) -> List[int]:
    """Every upset exactly once, in increasing bitmask order."""
    if P.n > MAX_UPSET_N:
        raise BudgetExceeded(f"all_upsets is limited to n ≤ {MAX_UPSET_N}")
    up, _ = _closure_tables(P)
    return [S for S in range(1 << P.n) if up[S] == S]


def all_downsets(P: FinitePoset) -> List[int]:
    full = P.full
    return sorted(full & ~U for U in all_upsets(P))


def heyting_impl(P: FinitePoset, U: int, V: int) -> int:
    """U → V = X ∖ ↓(U ∖ V)."""
    return P.full & ~down_closure(P, U & ~V)


def coimpl(P: FinitePoset, U: int, V: int) -> int:
    """U ← V = ↑(V ∖ U)."""
    return up_closure(P, V & ~U)


class _LazyClosure:
    """Table-like closure operator for posets too large for full tables."""

    def __init__(self, P: FinitePoset, point_masks: Sequence[int]):
        self.point_masks = point_masks

    def __getitem__(self, S: int) -> int:
        out = 0
        for i in members(S):
            out |= self.point_masks[i]
        return out


class Compiled:
    """A formula flattened to straight-line code over subset bitmasks."""

    def __init__(self, phi: Formula):
        nodes = list(subformulas(phi))
        index = {node: k for k, node in enumerate(nodes)}
        self.variables = sorted({n.name for n in nodes if isinstance(n, Var)})
        var_slot = {name: k for k, name in enumerate(self.variables)}
        program = []
        for node in nodes:
            if isinstance(node, Var):
                program.append(("var", var_slot[node.name], 0))
            elif node is TOP:
                program.append(("top", 0, 0))
            elif node is BOTTOM:
                program.append(("bot", 0, 0))
            else:
                op = {Conj: "and", Disj: "or", Impl: "imp", Coimpl: "coimp"}[type(node)]
                program.append((op, index[node.left], index[node.right]))
        self.program = program

    def run(self, P: FinitePoset, values: Sequence[int]) -> int:
        if P.n <= MAX_UPSET_N:
            up, down = _closure_tables(P)
        else:
            up = _LazyClosure(P, P.up)
            down = _LazyClosure(P, P.down)
        full = P.full
        out = [0] * len(self.program)
        for k, (op, a, b) in enumerate(self.program):
            if op == "imp":
                out[k] = full & ~down[out[a] & ~out[b]]
            elif op == "and":
                out[k] = out[a] & out[b]
            elif op == "or":
                out[k] = out[a] | out[b]
            elif op == "var":
                out[k] = values[a]
            elif op == "coimp":
                out[k] = up[out[b] & ~out[a]]
            elif op == "top":
                out[k] = full
            else:
                out[k] = 0
        return out[-1]


def compile_formula(phi: Formula) -> Compiled:
    return Compiled(phi)


def evaluate(P: FinitePoset, valuation: Mapping[str, int], phi: Formula) -> int:
    """Truth set of ``phi`` (an upset) under ``valuation``."""
    prog = compile_formula(phi)
    missing = [v for v in prog.variables if v not in valuation]
    if missing:
        raise KeyError(f"unbound variable(s): {', '.join(missing)}")
    for name in prog.variables:
        if not is_upset(P, valuation[name]):
            raise ValueError(f"V({name}) is not an upset")
    return prog.run(P, [valuation[v] for v in prog.variables])


def _repunit(width: int, times: int) -> int:
    """Bit pattern with a 1 every ``width`` bits, ``times`` ones."""
    return ((1 << (width * times)) - 1) // ((1 << width) - 1)


def run_bundle(prog: Compiled, P: FinitePoset, columns: Sequence[int], copies: int) -> int:
    """Evaluate ``prog`` on ``copies`` disjoint copies of ``P`` at once.

    Element ``i`` of copy ``c`` is bit ``c*n + i``; ``columns[k]`` holds the
    value of variable ``k`` in every copy.  Heyting operations act copywise on
    a disjoint union, so one pass over the program evaluates ``copies``
    valuations.
    """
    n = P.n
    lane = _repunit(n, copies)
    full = lane * P.full
    above = [members(P.up[i]) for i in range(n)]
    below = [members(P.down[i]) for i in range(n)]

    def close(S, rel):
        out = 0
        for i in range(n):
            hit = 0
            for j in rel[i]:
                hit |= S >> j
            out |= (hit & lane) << i
        return out

    out = [0] * len(prog.program)
    for k, (op, a, b) in enumerate(prog.program):
        if op == "imp":
            out[k] = full & ~close(out[a] & ~out[b], above)
        elif op == "and":
            out[k] = out[a] & out[b]
        elif op == "or":
            out[k] = out[a] | out[b]
        elif op == "var":
            out[k] = columns[a]
        elif op == "coimp":
            out[k] = close(out[b] & ~out[a], below)
        elif op == "top":
            out[k] = full
        else:
            out[k] = 0
    return out[-1]


BUNDLE_COPIES = 1 << 12


def validates(P: FinitePoset, phi: Formula, budget: int = 10**7,
              compiled: Optional[Compiled] = None) -> Optional[Dict[str, int]]:
    """None if every valuation makes ``phi`` true everywhere, else the first counterexample.

    Valuations are enumerated lexicographically: variables in sorted order,
    each ranging over ``all_upsets(P)`` in increasing order.  Trailing
    variables are evaluated in bundles (see ``run_bundle``).
    """
    prog = compiled or compile_formula(phi)
    ups = all_upsets(P)
    k, m, n = len(prog.variables), len(ups), P.n
    total = m ** k
    if total > budget:
        raise BudgetExceeded(f"{total} valuations exceed budget {budget}")
    inner = 0
    while inner < k and m ** (inner + 1) <= BUNDLE_COPIES:
        inner += 1
    outer = k - inner
    copies = m ** inner
    lane = _repunit(n, copies)
    columns_inner = []
    for t in range(inner):
        reps = m ** (inner - 1 - t)
        # each upset repeated ``reps`` times, the whole run tiled
        block = sum((u * _repunit(n, reps)) << (i * n * reps) for i, u in enumerate(ups))
        columns_inner.append(block * _repunit(n * m * reps, m ** t))
    full = lane * P.full
    for head in itertools.product(range(m), repeat=outer):
        columns = [ups[i] * lane for i in head] + columns_inner
        bad = full & ~run_bundle(prog, P, columns, copies)
        if bad:
            c = ((bad & -bad).bit_length() - 1) // n
            tail = []
            for t in range(inner):
                tail.append((c // m ** (inner - 1 - t)) % m)
            idx = list(head) + tail
            return {v: ups[i] for v, i in zip(prog.variables, idx)}
    return None


# -- enumeration up to isomorphism -------------------------------------------

def _invariants(n: int, up: Sequence[int], down: Sequence[int]) -> List[tuple]:
    sig = []
    for i in range(n):
        su = up[i] & ~(1 << i)
        sd = down[i] & ~(1 << i)
        upper_covers = sum(1 for j in members(su) if not (su & down[j] & ~(1 << j)))
        lower_covers = sum(1 for j in members(sd) if not (sd & up[j] & ~(1 << j)))
        sig.append((bin(sd).count("1"), bin(su).count("1"), lower_covers, upper_covers))
    return sig


def canonical_key(n: int, up: Sequence[int]) -> Tuple[int, ...]:
    """Isomorphism-invariant key: the least relabelled up-mask vector.

    Relabellings are restricted to orders that sort elements by a cheap
    invariant signature, which keeps the search far below n! in practice.
    """
    down = [0] * n
    for i in range(n):
        for j in members(up[i]):
            down[j] |= 1 << i
    sig = _invariants(n, up, down)
    order = sorted(range(n), key=lambda i: sig[i])
    blocks = [list(g) for _, g in itertools.groupby(order, key=lambda i: sig[i])]
    best = None
    for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [x for part in parts for x in part]
        pos = [0] * n
        for new, old in enumerate(perm):
            pos[old] = new
        key = tuple(sum(1 << pos[j] for j in members(up[old])) for old in perm)
        if best is None or key < best:
            best = key
    return best


def enumerate_posets(n: int, up_to_iso: bool = True) -> Iterator[FinitePoset]:
    """All posets on n elements: one per isomorphism class, or every labelled one.

    Classes are grown from those of size n-1 by adding a new maximal
    element above a downset; output is sorted by canonical key.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_ENUM_N or (not up_to_iso and n > 6):
        raise BudgetExceeded(f"poset enumeration size guard exceeded (n={n})")
    keys = _iso_classes(n)
    if up_to_iso:
        for key in keys:
            yield FinitePoset.from_up_masks(n, key)
        return
    seen = set()
    labelled = []
    for key in keys:
        for perm in itertools.permutations(range(n)):
            up = [0] * n
            for i in range(n):
                up[perm[i]] = sum(1 << perm[j] for j in members(key[i]))
            t = tuple(up)
            if t not in seen:
                seen.add(t)
                labelled.append(t)
    for t in sorted(labelled):
        yield FinitePoset.from_up_masks(n, t)


_ISO_CACHE: Dict[int, List[Tuple[int, ...]]] = {0: [()]}


def _iso_classes(n: int) -> List[Tuple[int, ...]]:
    if n in _ISO_CACHE:
        return _ISO_CACHE[n]
    found = set()
    for key in _iso_classes(n - 1):
        m = n - 1
        base = FinitePoset.from_up_masks(m, key)
        for below in all_downsets(base):
            up = list(key)
            for i in members(below):
                up[i] |= 1 << m
            up.append(1 << m)
            found.add(canonical_key(n, up))
    _ISO_CACHE[n] = sorted(found)
    return _ISO_CACHE[n]


def countermodel_search(phi: Formula, n_max: int, budget: int = 10**7):
    """Smallest-first search for a finite Kripke countermodel.

    Returns ``(poset, valuation)`` or None; None is not a proof of validity.
    """
    prog = compile_formula(phi)
    for n in range(1, n_max + 1):
        for P in enumerate_posets(n):
            cex = validates(P, phi, budget=budget, compiled=prog)
            if cex is not None:
                return P, cex
    return None
