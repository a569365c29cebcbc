import pytest
from hypothesis import given
from hypothesis import strategies as st

from biheyting.families import P, Q, alpha, beta, e_power, kappa
from biheyting.formula import Conj, Iff, Impl, disj_all
from biheyting.frames import chain, enumerate_posets, validates
from biheyting.parser import parse, parse_sequent
from biheyting.prover import (DERIVABLE, NOT_DERIVABLE, UNKNOWN, ProofTask, equiv, make_prover,
                              proves, refutes)

from conftest import formulas

IPC_FORMULAS = formulas(max_leaves=7, coimpl=False)
POSETS_4 = [X for n in range(1, 5) for X in enumerate_posets(n)]


def task(text, budget=10**6):
    hyps, goal = parse_sequent(text)
    return ProofTask(tuple(hyps), goal, budget)


@pytest.mark.parametrize("engine", ["intuit", "g4ip"])
@pytest.mark.parametrize("text,status", [
    ("|- p -> p", DERIVABLE),
    ("p |- q -> p", DERIVABLE),
    ("|- p \\/ -p", NOT_DERIVABLE),
    ("|- ((p -> q) -> p) -> p", NOT_DERIVABLE),
    ("|- --(p \\/ -p)", DERIVABLE),
    ("|- (p -> q) \\/ (q -> p)", NOT_DERIVABLE),
    ("p -> q, q -> r |- p -> r", DERIVABLE),
    ("p /\\ (q \\/ r) |- p /\\ q \\/ p /\\ r", DERIVABLE),
    ("--p |- p", NOT_DERIVABLE),
    ("F |- q", DERIVABLE),
])
def test_examples(engine, text, status):
    v = make_prover(engine).proves(task(text))
    assert v.status == status
    if status == NOT_DERIVABLE:
        assert v.countermodel is not None
        assert refutes(v.countermodel, task(text).implication())


def test_excluded_middle_countermodel_is_the_two_chain():
    v = proves(task("|- p \\/ -p"))
    P_, val = v.countermodel
    assert P_ == chain(2) and val == {"p": 0b10}


def test_coimplication_rejected():
    with pytest.raises(ValueError):
        ProofTask((), parse("p <- q"))


def test_unknown_on_tiny_budget():
    v = make_prover("g4ip").proves(ProofTask((), e_power(2, Iff(P, Q)) >> alpha(1), budget=3))
    assert v.status == UNKNOWN and v.countermodel is None


def test_equiv_examples():
    phi = alpha(1)
    assert all(v.derivable for v in equiv(phi, phi))
    lhs = e_power(1, Conj(P, Q))
    assert all(v.derivable for v in equiv(lhs, disj_all([P, Q, Iff(P, Q)])))
    for n in range(3):
        target = e_power(n + 2, Impl(Iff(P, Q), Conj(P, Q)))
        assert all(v.derivable for v in equiv(alpha(n), target))


@given(IPC_FORMULAS)
def test_engines_agree(phi):
    a = make_prover("intuit", countermodel_size=0).proves(ProofTask((), phi, 10**6))
    b = make_prover("g4ip", countermodel_size=0).proves(ProofTask((), phi, 10**6))
    assert a.status == b.status != UNKNOWN


@given(IPC_FORMULAS)
def test_verdicts_are_sound_and_certified(phi):
    v = make_prover("intuit").proves(ProofTask((), phi))
    if v.derivable:
        assert all(validates(X, phi) is None for X in POSETS_4)
    else:
        assert v.status == NOT_DERIVABLE and refutes(v.countermodel, phi)


@given(IPC_FORMULAS, st.lists(IPC_FORMULAS, max_size=2), IPC_FORMULAS)
def test_extra_assumptions_keep_derivability(goal, hyps, extra):
    prover = make_prover("intuit", countermodel_size=0)
    if prover.proves(ProofTask(tuple(hyps), goal)).derivable:
        assert prover.proves(ProofTask(tuple(hyps) + (extra,), goal)).derivable


@given(IPC_FORMULAS)
def test_determinism(phi):
    runs = [make_prover("intuit").proves(ProofTask((), phi)) for _ in range(2)]
    assert runs[0].to_json(timing=False) == runs[1].to_json(timing=False)


def test_family_derivations():
    prover = make_prover("intuit")
    assert prover.proves(ProofTask((beta(0),), beta(1))).derivable
    assert prover.proves(ProofTask((beta(2),), alpha(1))).derivable
    assert not prover.proves(ProofTask((), kappa(0))).derivable


def test_verdict_json_shape():
    v = proves(task("|- p \\/ -p"))
    js = v.to_json()
    assert set(js) == {"verdict", "nodes", "time_ms", "countermodel"}
    assert js["countermodel"] == {"poset": {"n": 2, "covers": [[0, 1]]}, "valuation": {"p": [1]}}
    assert "time_ms" not in v.to_json(timing=False)


def test_unknown_engine():
    with pytest.raises(ValueError):
        make_prover("tableau")
