import pytest

from biheyting import fine
from biheyting.families import alpha, beta, delta, gamma, kappa, sh_implication_axiom
from biheyting.fine import FULL, FinePoint, cofinite, finite, named_region
from biheyting.fine_suites import (PoolConfig, abcd_identities, abcd_suite, bc_disagreement,
                                   build_pool, delta0_refutation, extremal_failure_witness,
                                   generated_subalgebra, sample_triples, sample_validate,
                                   shehtman_valuation, truncation_coherence, truncation_dot)
from biheyting.frames import chain

pt = FinePoint.parse
SMALL_POOL = PoolConfig(region_bound=4, random_upsets=300, random_valuations=300)


def _ids(N, corrected=False):
    return {name: lhs == rhs for name, lhs, rhs in abcd_identities(N, corrected)}


def test_low_index_identities():
    ok = _ids(2)
    for name in ("B0=C'1", "B0=B'0->C'0", "D0=A0|A1", "B'2=C1&A0", "C'2=B1&A0"):
        assert ok[name], name


def test_literal_primed_identities_break_from_index_one():
    # a0 is in C2 and in A1 but not above b3
    a0 = pt("a0")
    C2, A1 = named_region("C", False, 2), named_region("A", False, 1)
    assert a0 in C2 and a0 in A1 and a0 not in named_region("B", True, 3)
    suite = abcd_suite(5)
    failed = sorted(r["id"] for r in suite["records"] if r["status"] == "FAIL")
    expected = sorted([f"B'{n+2}=C{n+1}&A{n}" for n in range(1, 6)]
                      + [f"C'{n+2}=B{n+1}&A{n}" for n in range(1, 6)])
    assert failed == expected
    assert all(r["differs_at"] == "a0" for r in suite["records"] if r["status"] == "FAIL")


def test_corrected_primed_identities_hold():
    suite = abcd_suite(20, corrected=True)
    failed = [r["id"] for r in suite["records"] if r["status"] == "FAIL"]
    assert len(suite["records"]) == 218
    assert all(("'" in name.split("=")[0]) and "&A" in name for name in failed)
    assert all(ok for name, ok in _ids(20, True).items() if "D'" in name.split("=")[1])


def test_abcd_bound():
    with pytest.raises(ValueError):
        abcd_suite(21)


def test_delta0_refutation():
    r = delta0_refutation(20)
    assert r["refuted"] and r["witness_is_expected"] and r["mismatches"] == []
    assert r["witness"] == cofinite([pt("d0")])


def test_family_values_under_the_valuation():
    val = shehtman_valuation()
    assert fine.eval_symbolic(val, beta(0)) == named_region("B", False, 0)
    assert fine.eval_symbolic(val, alpha(3)) == named_region("A", False, 3)
    assert fine.eval_symbolic(val, gamma(7)) == named_region("C", False, 7)
    assert fine.eval_symbolic(val, delta(0)) != FULL


def test_pool_shape():
    base, pool = build_pool(PoolConfig(random_upsets=0))
    assert len(base) == len(set(base)) == 84
    assert set(base) <= set(pool) and len(pool) == len(set(pool))
    assert all(U.is_upset() for U in pool)
    assert build_pool(SMALL_POOL) == build_pool(SMALL_POOL)


def test_sampling_small_pool():
    for phi in (kappa(0), sh_implication_axiom()):
        assert sample_validate(phi, SMALL_POOL)["counterexample"] is None
    cex = sample_validate(delta(0), SMALL_POOL)["counterexample"]
    expected = {"p": finite([pt("c0")]), "q": finite([pt("b0")])}
    mirrored = {"p": expected["q"], "q": expected["p"]}
    assert cex in (expected, mirrored)
    assert fine.eval_symbolic(expected, delta(0)) != FULL


def test_sample_triples_is_seeded():
    from biheyting.families import bb2
    a = sample_triples(bb2(), 200, seed=3)
    assert a == sample_triples(bb2(), 200, seed=3)
    assert a["counterexample"] is None and a["valuations"] == 200


def test_bc_disagreement_on_examples():
    for U in (finite([]), finite([pt("b4"), pt("a9")]), cofinite([]), cofinite([pt("c3")])):
        x = bc_disagreement(U)
        assert (x in U) != (x.kind in ("B", "C"))


def test_extremal_witness():
    r = extremal_failure_witness(500, seed=1)
    assert r["bc_not_clopen"] and r["closure_of_bc_not_open"]
    assert r["not_extremally_disconnected"]


def test_generated_subalgebra_contains_point_upsets():
    T = fine.truncate(6)
    gens = [T.to_mask(finite([pt("b0")])), T.to_mask(finite([pt("c0")]))]
    elems, complete = generated_subalgebra(T.poset, gens)
    assert complete and 0 in elems and T.poset.full in elems
    for n in range(4):
        for kind in ("B", "C", "A"):
            assert T.to_mask(named_region(kind, True, n)) in elems, (kind, n)


def test_generated_subalgebra_trivial_and_budget():
    P = chain(3)
    elems, complete = generated_subalgebra(P, [P.full])
    assert complete and elems == {0, P.full}
    _, complete = generated_subalgebra(fine.truncate(6).poset, [1, 2], budget=10)
    assert not complete
    with pytest.raises(ValueError):
        generated_subalgebra(P, [], ops=("xor",))


@pytest.mark.parametrize("k", [8, 12, 16, 20])
def test_truncation_coherence(k):
    forms = [f(n) for f in (alpha, beta, gamma, delta, kappa) for n in range(4)]
    forms.append(sh_implication_axiom())
    r = truncation_coherence(forms, k)
    assert r["disagreements"] == [] and r["margin"] == k // 2


def test_truncation_dot_is_deterministic():
    dot = truncation_dot(4)
    assert dot == truncation_dot(4)
    assert dot.count("label=") == 18 and 'label="b0"' in dot
