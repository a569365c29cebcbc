import pytest

from biheyting.derivations import (Item, cross_validate, items, negative_controls, scheme_instances,
                                derivation_suite)


@pytest.fixture(scope="module")
def suite():
    return derivation_suite(2)


@pytest.fixture(scope="module")
def index():
    return {it.id: it for it in items(2)}


def test_item_ids_are_unique(index):
    assert len(index) == len(list(items(2))) == 113


def test_every_item_passes(suite):
    assert suite["summary"] == {"PASS": 113, "FAIL": 0, "UNKNOWN": 0}
    by_id = {r.id: r for r in suite["records"]}
    for key in ("1:b0|-b1", "7:H|-d1->d0", "8:a0|a1=d0", "8:a0|a2=d0", "4:e(p&q)=p|q|(p<->q)"):
        assert by_id[key].status == "PASS", key


def test_summary_matches_records(suite):
    tally = {}
    for r in suite["records"]:
        tally[r.status] = tally.get(r.status, 0) + 1
    assert {k: v for k, v in suite["summary"].items() if v} == tally


def test_scheme_instances():
    inst = scheme_instances(2)
    assert len(inst) == 6 and len(set(inst)) == 6
    assert len(scheme_instances(2, with_kappa=False)) == 3


def test_scheme_items_never_fail():
    # with no hypotheses at all item 7 cannot be derived; it must not read as a refutation
    from biheyting.derivations import _run_item
    from biheyting.prover import make_prover
    it = next(i for i in items(1) if i.id == "7:H|-d1->d0")
    bare = Item(it.id, it.group, it.lhs, it.rhs, False, (), -1, False)
    rec = _run_item(bare, make_prover("intuit"), 10**5)
    assert rec.status in ("PASS", "UNKNOWN")


def test_negative_controls():
    controls = negative_controls()
    assert [c.status for c in controls] == ["PASS", "PASS"]
    for c in controls:
        assert c.details["countermodel"]["poset"]["n"] <= 3


def test_cross_validation_passes(suite, index):
    xval = cross_validate(suite["records"] + negative_controls(), index)
    assert xval and all(r.status == "PASS" for r in xval)


def test_cross_validation_catches_a_flipped_verdict(suite, index):
    xval = cross_validate(suite["records"], index, flip="1:p|-b0")
    bad = [r for r in xval if r.status == "FAIL"]
    assert [r.id for r in bad] == ["xval:1:p|-b0"]


def test_bounds():
    with pytest.raises(ValueError):
        derivation_suite(3)
    with pytest.raises(ValueError):
        derivation_suite(-1)


def test_cross_validation_rechecks_countermodels():
    from biheyting.formula import TOP
    from biheyting.parser import parse
    from biheyting.prover import make_prover
    from biheyting.derivations import _run_item
    it = Item("lem", 0, TOP, parse("p \\/ -p"))
    rec = _run_item(it, make_prover("intuit"), 10**5)
    assert rec.status == "FAIL"
    assert [r.status for r in cross_validate([rec], {"lem": it})] == ["PASS"]
    flipped = cross_validate([rec], {"lem": it}, flip="lem")
    assert flipped[0].status == "FAIL" and "refuted" in flipped[0].details["problems"][0]
