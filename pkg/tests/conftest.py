import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from biheyting.formula import BOTTOM, TOP, Coimpl, Conj, Disj, Impl, Var

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ATOMS = st.sampled_from([Var("p"), Var("q"), Var("r"), BOTTOM, TOP])


def formulas(max_leaves=8, coimpl=True, atoms=ATOMS):
    ops = [Conj, Disj, Impl] + ([Coimpl] if coimpl else [])

    def extend(children):
        return st.builds(lambda op, a, b: op(a, b), st.sampled_from(ops), children, children)

    return st.recursive(atoms, extend, max_leaves=max_leaves)


def pq_formulas(max_leaves=6):
    return formulas(max_leaves, coimpl=False,
                    atoms=st.sampled_from([Var("p"), Var("q"), BOTTOM, TOP]))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
