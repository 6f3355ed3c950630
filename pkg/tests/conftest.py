import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from syntaxdiag.formula import (  # noqa: E402
    Atom,
    Conjunction,
    Disjunction,
    Equivalence,
    FalseConst,
    Implication,
    Negation,
    TrueConst,
    parse_formula,
)
from syntaxdiag.kb import make_kb  # noqa: E402

ROOT = Path(__file__).parent.parent

WORKED_DEFAULTS = [
    "a -> b & e & f",
    "a -> c & d",
    "~b | ~d",
    "e",
    "~b & ~c & ~e & g",
    "b & ~c & d & ~e & ~g",
]
WORKED_QUERIES = ["a", "b | c", "c", "b", "f", "~d", "g", "(b | c | ~e) & g", "~g", "~f"]
# reference marks, columns R1 R6 R3 R2 R8 R7 R5 R4
REFERENCE_TABLE = {
    "a": "xxxxxxxx",
    "b | c": "xxxxxx-x",
    "c": "-xxxxx-x",
    "b": "-x-x-x-x",
    "f": "--xxxxxx",
    "~d": "---x---x",
    "g": "----xx-x",
    "(b | c | ~e) & g": "----xxxx",
    "~g": "-------x",
    "~f": "--------",
}


@pytest.fixture
def worked_kb():
    return make_kb(["a"], WORKED_DEFAULTS)


def P(text):
    return parse_formula(text)


ATOMS = st.sampled_from(["a", "b", "c", "d", "p", "q"]).map(Atom)


def formulas(max_leaves=8):
    return st.recursive(
        st.one_of(ATOMS, st.just(TrueConst()), st.just(FalseConst())),
        lambda sub: st.one_of(
            sub.map(Negation),
            st.tuples(sub, sub).map(lambda t: Conjunction(*t)),
            st.tuples(sub, sub).map(lambda t: Disjunction(*t)),
            st.tuples(sub, sub).map(lambda t: Implication(*t)),
            st.tuples(sub, sub).map(lambda t: Equivalence(*t)),
        ),
        max_leaves=max_leaves,
    )


# acceptance criteria report, filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{status}] criterion {num:>2}: {text}")
