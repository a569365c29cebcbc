import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from biheyting import fine
from biheyting.acceptance import cover_closure
from biheyting.fine import (EMPTY, FULL, INF, ClopenSet, FinePoint, coimpl, complement, cofinite,
                            difference, down_closure, eval_symbolic, finite, heyting_impl,
                            intersection, leq, named_region, truncate, union, up_closure)
from biheyting.formula import Var
from biheyting.parser import parse

pt = FinePoint.parse
points = st.builds(FinePoint, st.sampled_from(fine.KINDS), st.integers(0, 12))
clopens = st.builds(lambda cof, pts: cofinite(pts) if cof else finite(pts),
                    st.booleans(), st.lists(points, max_size=6))
upsets = st.builds(lambda cof, pts: complement(down_closure(finite(pts))) if cof
                   else up_closure(finite(pts)), st.booleans(), st.lists(points, max_size=4))

K = 24
ORACLE_PTS = fine.truncation_points(K)
REACH = cover_closure(ORACLE_PTS, fine.cover_pairs(K))


def oracle_leq(x, y):
    return y in REACH[x]


def test_order_examples():
    assert leq(INF, pt("b5")) and leq(pt("d3"), INF)
    assert leq(pt("a0"), pt("b1")) and leq(pt("b2"), pt("c0"))
    assert not leq(pt("a0"), pt("a1"))
    assert all(leq(pt("d0"), x) for x in ORACLE_PTS)
    assert not leq(pt("b0"), INF) and not leq(INF, pt("a3"))


def test_closed_form_rules():
    for m in range(12):
        for n in range(12):
            assert leq(FinePoint("C", m), FinePoint("B", n)) == (m >= n + 2)
            assert leq(FinePoint("A", m), FinePoint("B", n)) == (m >= n - 1)


@given(points, points, points)
def test_order_is_a_partial_order(x, y, z):
    assert leq(x, x)
    if x != y:
        assert not (leq(x, y) and leq(y, x))
    if leq(x, y) and leq(y, z):
        assert leq(x, z)


@given(points, points)
def test_order_matches_cover_closure(x, y):
    assert leq(x, y) == oracle_leq(x, y)


def test_truncation_shape():
    T = truncate(2)
    assert T.poset.n == 10
    assert truncate(4).poset.n == 18
    with pytest.raises(ValueError):
        truncate(1)


def test_boolean_examples():
    b0 = finite([pt("b0")])
    assert complement(b0) == cofinite([pt("b0")])
    assert intersection(FULL, finite([pt("a1"), pt("c2")])) == finite([pt("a1"), pt("c2")])
    assert difference(cofinite([pt("a1")]), cofinite([pt("c2")])) == finite([pt("c2")])
    assert INF in FULL and INF not in b0


@given(clopens, clopens, clopens)
def test_boolean_laws(U, V, W):
    assert complement(complement(U)) == U
    assert complement(union(U, V)) == intersection(complement(U), complement(V))
    assert complement(intersection(U, V)) == union(complement(U), complement(V))
    assert union(union(U, V), W) == union(U, union(V, W))
    assert intersection(intersection(U, V), W) == intersection(U, intersection(V, W))
    assert difference(U, V) == intersection(U, complement(V))


@given(clopens)
def test_json_roundtrip(U):
    assert ClopenSet.from_json(json.loads(json.dumps(U.to_json()))) == U


def _oracle_closure(U, downward):
    """Closure membership for points of index ≤ K/2, via the cover closure."""
    gens = [x for x in ORACLE_PTS if x in U]
    out = {}
    for y in ORACLE_PTS:
        if y.index <= K // 2:
            out[y] = any(oracle_leq(y, g) if downward else oracle_leq(g, y) for g in gens)
    return out


@given(st.builds(lambda cof, pts: cofinite(pts) if cof else finite(pts),
                 st.booleans(), st.lists(st.builds(FinePoint, st.sampled_from(fine.KINDS),
                                                   st.integers(0, 8)), max_size=5)))
def test_closures_match_oracle(U):
    for downward, cl in ((True, down_closure), (False, up_closure)):
        got = cl(U)
        for y, inside in _oracle_closure(U, downward).items():
            assert (y in got) == inside, (U, downward, y)
        meets = any(x.kind in (("B", "C") if downward else ("D",)) for x in ORACLE_PTS if x in U)
        assert (INF in got) == (U.cofinite or meets)


@given(clopens, clopens)
def test_closure_laws(U, V):
    W = union(U, V)
    for cl in (up_closure, down_closure):
        c = cl(U)
        assert difference(U, c) == EMPTY
        assert cl(c) == c
        assert difference(c, cl(W)) == EMPTY
    assert up_closure(U).is_upset() and down_closure(U).is_downset()


def test_closure_examples():
    assert down_closure(finite([pt("a2")])) == finite([pt("a2"), pt("d2"), pt("d1"), pt("d0")])
    assert down_closure(finite([pt("b0")])) == cofinite([pt("c0"), pt("c1")])
    assert up_closure(finite([pt("d1")])) == cofinite([pt("d0"), pt("a0")])


def test_implication_examples():
    c0 = finite([pt("c0")])
    assert heyting_impl(c0, EMPTY) == finite([pt("b0"), pt("b1")])
    for U in (EMPTY, FULL, c0):
        assert heyting_impl(U, U) == FULL
        assert coimpl(FULL, U) == EMPTY


@given(upsets, upsets, upsets)
def test_residuation(U, V, W):
    imp, co = heyting_impl(U, V), coimpl(U, V)
    assert imp.is_upset() and co.is_upset()
    assert (difference(intersection(W, U), V) == EMPTY) == (difference(W, imp) == EMPTY)
    assert (difference(V, union(U, W)) == EMPTY) == (difference(co, W) == EMPTY)


def test_residuation_on_ten_thousand_triples():
    rng = random.Random(11)
    for _ in range(10_000):
        U, V, W = (fine.random_clopen_upset(rng) for _ in range(3))
        imp, co = heyting_impl(U, V), coimpl(U, V)
        assert (difference(intersection(W, U), V) == EMPTY) == (difference(W, imp) == EMPTY)
        assert (difference(V, union(U, W)) == EMPTY) == (difference(co, W) == EMPTY)


def test_named_regions():
    assert named_region("D", False, 0) == cofinite([pt("d0")])
    assert named_region("B", True, 0) == finite([pt("b0")])
    assert named_region("A", False, 1) == cofinite([pt("a1"), pt("d1"), pt("d0")])
    with pytest.raises(ValueError):
        named_region("E", False, 0)


def test_symbolic_evaluation_examples():
    val = {"p": finite([pt("c0")]), "q": finite([pt("b0")])}
    assert eval_symbolic(val, parse("-p")) == finite([pt("b0"), pt("b1")])
    assert eval_symbolic(val, parse("p \\/ q")) == finite([pt("b0"), pt("c0")])
    with pytest.raises(ValueError):
        eval_symbolic({"p": finite([pt("d0")])}, Var("p"))
    with pytest.raises(KeyError):
        eval_symbolic({}, Var("p"))


def test_truncation_evaluation_of_beta2():
    from biheyting.families import beta
    from biheyting.frames import evaluate
    T = truncate(6)
    val = {"p": T.to_mask(finite([pt("c0")])), "q": T.to_mask(finite([pt("b0")]))}
    got = evaluate(T.poset, val, beta(2))
    expected = T.to_mask(named_region("B", False, 2))
    assert got == expected


def test_point_parsing():
    assert str(pt("c12")) == "c12" and pt("inf") is INF
    with pytest.raises(ValueError):
        pt("x1")
