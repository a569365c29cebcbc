"""Propositional formulas over ⊥, ⊤, ∧, ∨, → and ← (coimplication).

Nodes are hash-consed: building the same tree twice returns the same
object, so equality is identity and hashing is O(1).  The family
formulas are exponentially large as trees but small as DAGs, and every
traversal in this package memoizes on node identity for that reason.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterator, Mapping

__all__ = [
    "Formula", "Var", "Bottom", "Top", "Conj", "Disj", "Impl", "Coimpl",
    "BOTTOM", "TOP", "Neg", "CoNeg", "Iff", "conj_all", "disj_all",
    "variables", "size", "dag_size", "substitute", "to_text", "subformulas",
]


class Formula:
    __slots__ = ("__weakref__", "uid")
    _table: Dict[tuple, "Formula"] = {}
    _counter = [0]

    arity = 0
    symbol = ""

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __delattr__(self, name):
        raise AttributeError("formulas are immutable")

    # structural equality == identity thanks to interning
    def __reduce__(self):
        return (self.__class__, self._args())

    def _args(self):
        return ()

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"<{to_text(self)}>"

    # operator sugar, handy in tests and scripts
    def __and__(self, other):
        return Conj(self, other)

    def __or__(self, other):
        return Disj(self, other)

    def __rshift__(self, other):
        return Impl(self, other)

    def __lshift__(self, other):
        return Coimpl(self, other)


class Var(Formula):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        key = (cls, name)
        node = Formula._table.get(key)
        if node is None:
            node = object.__new__(cls)
            object.__setattr__(node, "name", name)
            _stamp(node)
            Formula._table[key] = node
        return node

    def _args(self):
        return (self.name,)


class _Const(Formula):
    __slots__ = ()

    def __new__(cls):
        key = (cls,)
        node = Formula._table.get(key)
        if node is None:
            node = object.__new__(cls)
            _stamp(node)
            Formula._table[key] = node
        return node


class Bottom(_Const):
    __slots__ = ()


class Top(_Const):
    __slots__ = ()


class _Binary(Formula):
    __slots__ = ("left", "right")
    arity = 2

    def __new__(cls, left: Formula, right: Formula):
        if not isinstance(left, Formula) or not isinstance(right, Formula):
            raise TypeError(f"{cls.__name__} expects Formula arguments")
        key = (cls, id(left), id(right))
        node = Formula._table.get(key)
        if node is None:
            node = object.__new__(cls)
            object.__setattr__(node, "left", left)
            object.__setattr__(node, "right", right)
            _stamp(node)
            Formula._table[key] = node
        return node

    def _args(self):
        return (self.left, self.right)


class Conj(_Binary):
    __slots__ = ()
    symbol = "/\\"


class Disj(_Binary):
    __slots__ = ()
    symbol = "\\/"


class Impl(_Binary):
    __slots__ = ()
    symbol = "->"


class Coimpl(_Binary):
    """``Coimpl(a, b)`` is interpreted as the upset generated by V(b) minus V(a)."""
    __slots__ = ()
    symbol = "<-"


def _stamp(node):
    object.__setattr__(node, "uid", Formula._counter[0])
    Formula._counter[0] += 1


BOTTOM = Bottom()
TOP = Top()


def Neg(phi: Formula) -> Formula:
    return Impl(phi, BOTTOM)


def CoNeg(phi: Formula) -> Formula:
    # co-negation: the least upset whose union with V(phi) is everything
    return Coimpl(phi, TOP)


def Iff(phi: Formula, psi: Formula) -> Formula:
    return Conj(Impl(phi, psi), Impl(psi, phi))


def conj_all(items) -> Formula:
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for x in items[1:]:
        out = Conj(out, x)
    return out


def disj_all(items) -> Formula:
    items = list(items)
    if not items:
        return BOTTOM
    out = items[0]
    for x in items[1:]:
        out = Disj(out, x)
    return out


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Distinct subformulas, children before parents."""
    seen = set()
    stack = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded or not isinstance(node, _Binary):
            seen.add(node)
            yield node
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))


def variables(phi: Formula) -> frozenset:
    return frozenset(n.name for n in subformulas(phi) if isinstance(n, Var))


def size(phi: Formula) -> int:
    """Number of nodes of the formula as a tree."""
    memo: Dict[Formula, int] = {}
    for node in subformulas(phi):
        if isinstance(node, _Binary):
            memo[node] = 1 + memo[node.left] + memo[node.right]
        else:
            memo[node] = 1
    return memo[phi]


def dag_size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def map_bottom_up(phi: Formula, leaf: Callable[[Formula], Formula]) -> Formula:
    """Rebuild ``phi`` replacing every leaf by ``leaf(node)``."""
    memo: Dict[Formula, Formula] = {}
    for node in subformulas(phi):
        if isinstance(node, _Binary):
            memo[node] = type(node)(memo[node.left], memo[node.right])
        else:
            memo[node] = leaf(node)
    return memo[phi]


def substitute(phi: Formula, sigma: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution of ``sigma[name]`` for each variable ``name``."""
    def leaf(node):
        if isinstance(node, Var):
            return sigma.get(node.name, node)
        return node
    return map_bottom_up(phi, leaf)


# -- printing ---------------------------------------------------------------

PREC_IFF, PREC_IMP, PREC_OR, PREC_AND, PREC_PREFIX, PREC_ATOM = 1, 2, 3, 4, 5, 6

_UNICODE = {
    "/\\": "∧", "\\/": "∨", "->": "→", "<-": "←", "<->": "↔",
    "-": "¬", "~": "∼", "T": "⊤", "F": "⊥",
}


def _view(phi: Formula):
    """Classify a node for printing: (kind, precedence, parts)."""
    if isinstance(phi, Var):
        return "atom", PREC_ATOM, (phi.name,)
    if phi is TOP:
        return "atom", PREC_ATOM, ("T",)
    if phi is BOTTOM:
        return "atom", PREC_ATOM, ("F",)
    if isinstance(phi, Conj):
        l, r = phi.left, phi.right
        if (isinstance(l, Impl) and isinstance(r, Impl)
                and l.left is r.right and l.right is r.left):
            return "iff", PREC_IFF, (l.left, l.right)
        return "and", PREC_AND, (l, r)
    if isinstance(phi, Disj):
        return "or", PREC_OR, (phi.left, phi.right)
    if isinstance(phi, Impl):
        if phi.right is BOTTOM:
            return "neg", PREC_PREFIX, (phi.left,)
        return "imp", PREC_IMP, (phi.left, phi.right)
    if isinstance(phi, Coimpl):
        if phi.right is TOP:
            return "coneg", PREC_PREFIX, (phi.left,)
        return "coimp", PREC_IMP, (phi.left, phi.right)
    raise TypeError(f"not a formula: {phi!r}")


def to_text(phi: Formula, unicode: bool = False) -> str:
    """Canonical text with the minimum number of parentheses."""
    sym = (lambda s: _UNICODE[s]) if unicode else (lambda s: s)
    memo: Dict[Formula, str] = {}

    def wrap(child, need):
        text = memo[child]
        return f"({text})" if need else text

    def render(node):
        kind, prec, parts = _view(node)
        if kind == "atom":
            name = parts[0]
            return sym(name) if name in ("T", "F") else name
        if kind in ("neg", "coneg"):
            (x,) = parts
            op = sym("-") if kind == "neg" else sym("~")
            return op + wrap(x, _view(x)[1] < PREC_PREFIX)
        a, b = parts
        pa, pb = _view(a)[1], _view(b)[1]
        if kind == "iff":
            return f"{wrap(a, pa <= PREC_IFF)} {sym('<->')} {wrap(b, pb <= PREC_IFF)}"
        if kind in ("and", "or"):
            op = sym("/\\") if kind == "and" else sym("\\/")
            return f"{wrap(a, pa < prec)} {op} {wrap(b, pb <= prec)}"
        op = sym("->") if kind == "imp" else sym("<-")
        return f"{wrap(a, pa <= PREC_IMP)} {op} {wrap(b, pb < PREC_IMP)}"

    # iterative post-order over the printing view (Iff/Neg hide some nodes)
    stack = [(phi, False)]
    while stack:
        node, ready = stack.pop()
        if node in memo:
            continue
        kind, _, parts = _view(node)
        children = [] if kind == "atom" else list(parts)
        if ready or not children:
            memo[node] = render(node)
        else:
            stack.append((node, True))
            for c in reversed(children):
                if c not in memo:
                    stack.append((c, False))
    return memo[phi]
