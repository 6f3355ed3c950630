import io

import pytest

from conftest import ROOT
from syntaxdiag.cli import asymptotic, fmt_env, leading_term, run
from syntaxdiag.epsilon import EPS, ONE, EpsilonPoly, EpsilonRatio

KB = str(ROOT / "kbs" / "worked_example.kb")
QUERIES = str(ROOT / "kbs" / "worked_queries.txt")
TWO = str(ROOT / "kbs" / "two_levels.kb")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def bad_facts(tmp_path):
    p = tmp_path / "bad.kb"
    p.write_text("facts:\np\n~p\ndefaults:\nq\n")
    return str(p)


def test_validate():
    code, out, _ = cli("validate", KB)
    assert code == 0
    assert "facts satisfiable: yes" in out
    assert "facts+defaults satisfiable: no" in out


def test_inspect():
    code, out, _ = cli("inspect", KB)
    assert code == 0
    assert "counts: 1 6 7 3 0 0 0" in out
    rows = {line.split()[0]: line.split() for line in out.splitlines() if line.startswith("{")}
    assert rows["{A1,A2,A4}"][1:4] == ["maxcard", "1/3", "+"]
    assert rows["{A3,A5}"][1:3] == ["irredundant", "O(e)"]
    assert rows["{A6}"][1:3] == ["irredundant", "O(e^2)"]
    assert rows["{A1,A5,A6}"][1] == "yes"


def test_fault():
    code, out, _ = cli("fault", KB)
    assert code == 0
    lines = {line.split()[0]: line for line in out.splitlines()[1:]}
    assert "4/3*e" in lines["A4"]
    assert "1/3 + O(e)" in lines["A1"]


def test_bel_with_epsilon():
    code, out, _ = cli("bel", KB, "b | c", "--epsilon", "1/100")
    assert code == 0
    assert "summary: limit=1 order=0" in out
    assert "value@1/100: 0.9933" in out


def test_query_single_relation():
    code, out, _ = cli("query", KB, "g", "--relation", "r8")
    assert code == 0
    body = out.splitlines()[1].split()
    assert body[:4] == ["R8", "yes", "x", "x"]


def test_table_annotates_disagreements():
    code, out, _ = cli("table", KB, QUERIES)
    assert code == 0
    notes = [line for line in out.splitlines() if line.startswith("* ")]
    assert len(notes) == 2
    assert notes[0].startswith("* (f, R6): expected -, computed x")
    assert notes[1].startswith("* ((b | c | ~e) & g, R5): expected x, computed -")


def test_table_tsv():
    code, out, _ = cli("table", KB, QUERIES, "--format", "tsv")
    assert code == 0
    cells = [line.split("\t") for line in out.splitlines()]
    assert len(cells) == 80
    assert ["cell", "f", "R6", "x", "x", "x", "annotated"] in cells


def test_prioritized():
    code, out, _ = cli("prioritized", TWO, "p & q")
    assert code == 0
    assert "{A1,A3}" in out and "entailed: yes" in out


def test_random_check_small():
    code, out, _ = cli("random-check", "--kbs", "20", "--seed", "3")
    assert code == 0
    assert len(out.splitlines()) >= 6


def test_repeatable_output():
    assert cli("inspect", KB, "--epsilon", "1/10") == cli("inspect", KB, "--epsilon", "1/10")
    assert cli("random-check", "--kbs", "10") == cli("random-check", "--kbs", "10")


class TestExitCodes:
    def test_no_command(self):
        assert cli()[0] == 1

    def test_unknown_relation(self):
        assert cli("query", KB, "a", "--relation", "r12")[0] == 1

    def test_missing_file(self, tmp_path):
        assert cli("validate", str(tmp_path / "nope.kb"))[0] == 1

    @pytest.mark.parametrize("eps", ["0", "1", "2/1", "x"])
    def test_bad_epsilon(self, eps):
        assert cli("bel", KB, "a", "--epsilon", eps)[0] == 1

    def test_inconsistent_facts(self, bad_facts):
        code, _, err = cli("bel", bad_facts, "q")
        assert code == 2 and "inconsistent" in err

    def test_r9_allowed_with_inconsistent_facts(self, bad_facts):
        code, out, _ = cli("query", bad_facts, "q", "--relation", "r9")
        assert code == 0 and "n/a" in out

    def test_formula_parse_error(self):
        assert cli("bel", KB, "a &")[0] == 3

    def test_kb_parse_error(self, tmp_path):
        p = tmp_path / "broken.kb"
        p.write_text("facts:\n(a\n")
        code, _, err = cli("validate", str(p))
        assert code == 3 and "line 2" in err

    def test_validate_tolerates_bad_facts(self, bad_facts):
        code, out, _ = cli("validate", bad_facts)
        assert code == 0 and "facts satisfiable: no" in out


def test_formatting_helpers():
    assert fmt_env({0, 2}) == "{A1,A3}"
    assert fmt_env(()) == "{}"
    assert asymptotic(EpsilonRatio(ONE, EpsilonPoly([3]))) == "1/3"
    assert asymptotic(EpsilonRatio(EPS ** 2, ONE - EPS)) == "O(e^2)"
    assert leading_term(EpsilonRatio(EpsilonPoly([0, 4]), EpsilonPoly([3, 1]))) == "4/3*e"
