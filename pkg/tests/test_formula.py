import pickle

import pytest
from hypothesis import given

from biheyting.formula import (BOTTOM, TOP, Coimpl, Conj, Disj, Impl, Var, dag_size,
                               size, substitute, subformulas, to_text, variables)
from biheyting.parser import ParseError, parse, parse_sequent, tokenize

from conftest import formulas

p, q, r = Var("p"), Var("q"), Var("r")


def test_interning_makes_equal_trees_identical():
    assert Impl(p, Conj(q, r)) is Impl(Var("p"), Conj(Var("q"), Var("r")))
    assert Impl(p, q) != Impl(q, p)


def test_formulas_are_immutable():
    with pytest.raises(AttributeError):
        p.name = "x"


def test_pickle_roundtrip_keeps_identity():
    phi = Coimpl(Disj(p, q), Impl(r, BOTTOM))
    assert pickle.loads(pickle.dumps(phi)) is phi


@given(formulas())
def test_print_parse_roundtrip(phi):
    assert parse(to_text(phi)) is phi


@given(formulas())
def test_unicode_print_parse_roundtrip(phi):
    assert parse(to_text(phi, unicode=True)) is phi


def test_precedence_and_associativity():
    assert parse("p -> q -> r") is Impl(p, Impl(q, r))
    assert parse("p /\\ q \\/ r") is Disj(Conj(p, q), r)
    assert parse("p <- q <- r") is Coimpl(p, Coimpl(q, r))
    assert parse("p -> q <- r") is Impl(p, Coimpl(q, r))
    assert parse("-p") is Impl(p, BOTTOM)
    assert parse("~p") is Coimpl(p, TOP)


def test_sequent_parsing():
    hyps, goal = parse_sequent("p, p -> q |- q")
    assert hyps == [p, Impl(p, q)] and goal is q
    assert parse_sequent("|- p \\/ -p")[0] == []


@pytest.mark.parametrize("text,line,column", [
    ("p ->", 1, 5),
    ("(p /\\ q", 1, 8),
    ("p q", 1, 3),
    ("p\n  -> $", 2, 6),
])
def test_parse_errors_report_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_tokenize_tracks_columns():
    toks = tokenize("p->q")
    assert [(t.text, t.column) for t in toks[:3]] == [("p", 1), ("->", 2), ("q", 4)]


@given(formulas(), formulas(), formulas())
def test_substitution_composes(phi, a, b):
    s1 = {"p": a}
    s2 = {"p": b, "q": b}
    lhs = substitute(substitute(phi, s1), s2)
    rhs = substitute(phi, {"p": substitute(a, s2), "q": b, "r": substitute(r, s2)})
    assert lhs is rhs


@given(formulas())
def test_identity_substitution(phi):
    assert substitute(phi, {}) is phi
    assert substitute(phi, {v: Var(v) for v in variables(phi)}) is phi


@given(formulas())
def test_subformulas_children_first(phi):
    seen = set()
    for node in subformulas(phi):
        for child in getattr(node, "left", None), getattr(node, "right", None):
            assert child is None or child in seen
        seen.add(node)
    assert dag_size(phi) == len(seen) <= size(phi)
