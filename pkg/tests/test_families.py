import pytest
from hypothesis import given

from biheyting.families import (FamilyName, alpha, bb2, beta, delta, e_power, family, gamma,
                                kappa, sh_axioms, shehtman_e)
from biheyting.formula import Var, dag_size, size, to_text, variables
from biheyting.parser import parse

from conftest import pq_formulas

NAMES = ["alpha", "beta", "gamma", "delta", "kappa"]
POOL = [family(name, n) for name in NAMES for n in range(3)]


@pytest.mark.parametrize("name", NAMES)
def test_family_variables(name):
    for n in range(7):
        assert variables(family(name, n)) == {"p", "q"}


def test_bb2_variables_and_axioms():
    assert variables(bb2()) == {"p", "q", "r"}
    assert sh_axioms()[1] is kappa(0) and sh_axioms()[2] is bb2()


def test_recurrences():
    p, q = Var("p"), Var("q")
    assert beta(0) is parse("q -> p") and gamma(0) is parse("p -> q")
    assert beta(1) is parse("(p -> q) -> (q -> p) \\/ q")
    assert beta(4) is (gamma(3) >> (beta(3) | gamma(2)))
    assert gamma(4) is (beta(3) >> (gamma(3) | beta(2)))
    assert alpha(2) is ((beta(4) & gamma(4)) >> (beta(3) | gamma(3)))
    assert delta(1) is (alpha(1) | alpha(2))
    assert kappa(1) is (alpha(2) >> (alpha(1) | beta(3)))
    assert p is Var("p") and q is Var("q")


def test_family_lookup_aliases():
    assert family("α", 2) is alpha(2)
    assert family(FamilyName.DELTA, 1) is delta(1)
    with pytest.raises(ValueError):
        family("beta", -1)


@pytest.mark.parametrize("phi", POOL, ids=str)
def test_e_power_composes(phi):
    for m in range(7):
        for n in range(7 - m):
            assert e_power(m + n, phi) is e_power(m, e_power(n, phi))


@given(pq_formulas())
def test_e_growth_is_linear(phi):
    assert size(shehtman_e(phi)) <= 3 * size(phi) + 2
    assert size(shehtman_e(phi)) >= size(phi)


def test_e_growth_on_families():
    for phi in POOL:
        sizes = [size(e_power(j, phi)) for j in range(6)]
        assert sizes == sorted(sizes)
        assert all(b <= 3 * a + 2 for a, b in zip(sizes, sizes[1:]))


def test_e_rejects_extra_variables():
    with pytest.raises(ValueError):
        shehtman_e(Var("r"))
    with pytest.raises(ValueError):
        e_power(-1, Var("p"))


@pytest.mark.parametrize("name", NAMES)
def test_family_print_parse_roundtrip(name):
    for n in range(7):
        phi = family(name, n)
        assert parse(to_text(phi)) is phi


def test_dags_stay_small():
    # trees grow exponentially, the shared DAG only linearly
    assert size(alpha(20)) > 10**6
    assert dag_size(alpha(20)) < 200
