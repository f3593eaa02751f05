from importlib.resources import files

from hypothesis import settings
from hypothesis import strategies as st

from hypsys.fileio import read_derivation_file
from hypsys.syntax import BOT, TOP, And, Atom, Hypersequent, Imp, Or, Sequent

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FIX = files("hypsys") / "fixtures"
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

atoms = st.sampled_from([Atom(x) for x in ("p", "q", "r", "s")])
formulas = st.recursive(
    atoms | st.just(BOT) | st.just(TOP),
    lambda sub: st.builds(And, sub, sub) | st.builds(Or, sub, sub) | st.builds(Imp, sub, sub),
    max_leaves=8,
)
sequents = st.builds(Sequent, st.lists(formulas, max_size=3).map(tuple), st.none() | formulas)
hypersequents = st.lists(sequents, min_size=1, max_size=3).map(Hypersequent)


def fixture(name):
    return read_derivation_file(FIX / name)
