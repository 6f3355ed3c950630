"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 inconsistent facts, 3 parse error,
4 a ``random-check`` property failed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import checks
from .belief import BeliefReport, belief, posterior_env, posterior_fault
from .epsilon import EpsilonRatio, limit_at_zero, order_at_zero, render
from .formula import FormulaSyntaxError, parse_formula, to_text
from .kb import FactsInconsistentError, KBSyntaxError, KnowledgeBase, load_kb, validate
from .lattice import count_consistent, lattice
from .prioritized import lex_preferred, prioritized_entails
from .randomkb import consistent_corpus, corpus
from .relations import ALL_RELATIONS, TABLE_ORDER, RelationId, decide, entailment_table, render_table

EXIT_OK, EXIT_USAGE, EXIT_FACTS, EXIT_PARSE, EXIT_CHECK = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- formatting ---------------------------------------------------------------

def fmt_env(env) -> str:
    return "{" + ",".join(f"A{i + 1}" for i in sorted(env)) + "}"


def fmt_order(o) -> str:
    return "ZERO" if o == float("inf") else str(o)


def fmt_k(k) -> str:
    return "-inf" if k == float("-inf") else str(k)


def asymptotic(r: EpsilonRatio) -> str:
    """Leading behaviour: ``1/3 + O(e)``, ``O(e^2)``, ``1`` or ``0``."""
    if r.is_zero():
        return "0"
    o = order_at_zero(r)
    if o == 0:
        lim = limit_at_zero(r)
        exact = r.num * lim.denominator == r.den * lim.numerator
        return str(lim) if exact else f"{lim} + O(e)"
    return "O(e)" if o == 1 else f"O(e^{o})"


def leading_term(r: EpsilonRatio) -> str:
    if r.is_zero():
        return "0"
    o = order_at_zero(r)
    c = r.series(o + 1)[o]
    if o == 0:
        return str(c)
    return f"{c}*e" if o == 1 else f"{c}*e^{o}"


def fmt_value(r: EpsilonRatio, eps: Fraction | None) -> str:
    if eps is None:
        return ""
    v = r(eps)
    return f"{float(v):.12g}"


def parse_eps(text: str) -> Fraction:
    try:
        e = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--epsilon expects p/q, got {text!r}") from None
    if not 0 < e < 1:
        raise UsageError("--epsilon must lie strictly between 0 and 1")
    return e


class Out:
    """Collects rows and renders them as aligned text or TSV."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []

    def kv(self, key: str, value) -> None:
        if self.fmt == "tsv":
            self.lines.append(f"{key}\t{value}")
        else:
            self.lines.append(f"{key}: {value}")

    def table(self, kind: str, header: list[str], rows: list[list[str]]) -> None:
        if self.fmt == "tsv":
            for row in rows:
                self.lines.append("\t".join([kind, *row]))
            return
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
        self.lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        for row in rows:
            self.lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())

    def text(self, line: str) -> None:
        self.lines.append(line)

    def emit(self, stream) -> None:
        for line in self.lines:
            print(line, file=stream)


# -- commands -------------------------------------------------------------------

def _load(path: str) -> KnowledgeBase:
    return load_kb(Path(path).read_text(encoding="utf-8"))


def _require_facts(kb: KnowledgeBase) -> None:
    if not lattice(kb).facts_consistent:
        raise FactsInconsistentError("facts are inconsistent; no consistent environment exists")


def _read_queries(path: str) -> tuple[list, list[list[str] | None]]:
    """Queries file: one formula per line, optional ``=> x - ...`` expected marks."""
    queries, expected = [], []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        text, _, marks = line.partition("=>")
        try:
            queries.append(parse_formula(text.strip()))
        except FormulaSyntaxError as e:
            raise KBSyntaxError(str(e), lineno) from e
        expected.append(marks.split() if marks.strip() else None)
    return queries, expected


def cmd_validate(args, out: Out) -> int:
    kb = _load(args.kb)
    for line in validate(kb).lines():
        key, _, value = line.partition(": ")
        out.kv(key, value)
    return EXIT_OK


def cmd_inspect(args, out: Out) -> int:
    kb = _load(args.kb)
    _require_facts(kb)
    lat = lattice(kb)
    cl = lat.classify()
    eps = args.epsilon
    out.kv("defaults", kb.n)
    out.kv("counts", " ".join(str(c) for c in count_consistent(kb)))
    out.kv("maxcard size", cl.maxcard_size)
    out.kv("maxcard count", len(cl.maxcard))
    maxset = set(cl.maxcard)
    rows = []
    for env in sorted(cl.irredundant, key=lambda e: (-len(e), sorted(e))):
        r = posterior_env(kb, env)
        row = [fmt_env(env), "maxcard" if env in maxset else "irredundant", asymptotic(r),
               str(limit_at_zero(r)), fmt_order(order_at_zero(r)),
               ", ".join(to_text(kb.defaults[i]) for i in sorted(env)) or "-"]
        if eps is not None:
            row.append(fmt_value(r, eps))
        rows.append(row)
    header = ["environment", "kind", "posterior", "limit", "order", "defaults"]
    out.table("env", header + (["value"] if eps is not None else []), rows)
    out.table("candidate", ["minimal candidate", "mincard"],
              [[fmt_env(c), "yes" if c in set(cl.mincard_candidates) else "no"]
               for c in sorted(cl.minimal_candidates, key=lambda e: (len(e), sorted(e)))])
    out.kv("P(consistent)", render(posterior_env(kb, ()).den))
    return EXIT_OK


def cmd_fault(args, out: Out) -> int:
    kb = _load(args.kb)
    _require_facts(kb)
    rows = []
    for a in range(kb.n):
        r = posterior_fault(kb, a)
        row = [f"A{a + 1}", to_text(kb.defaults[a]), asymptotic(r), leading_term(r),
               str(limit_at_zero(r)), fmt_order(order_at_zero(r))]
        if args.epsilon is not None:
            row.append(fmt_value(r, args.epsilon))
        rows.append(row)
    out.table("fault", ["assumption", "default", "posterior", "leading", "limit", "order"]
              + (["value"] if args.epsilon is not None else []), rows)
    return EXIT_OK


def _belief_lines(rep: BeliefReport, out: Out, eps) -> None:
    out.kv("query", to_text(rep.query))
    out.kv("bel", str(rep.bel))
    out.kv("summary", f"limit={rep.limit} order={fmt_order(rep.order)}")
    out.kv("k_psi", fmt_k(rep.k_psi))
    out.kv("u_psi", rep.u_psi)
    out.kv("lex", " ".join(str(c) for c in rep.lex))
    if eps is not None:
        out.kv(f"value@{eps}", fmt_value(rep.bel, eps))


def cmd_bel(args, out: Out) -> int:
    kb = _load(args.kb)
    psi = parse_formula(args.formula)
    _require_facts(kb)
    _belief_lines(belief(kb, psi), out, args.epsilon)
    return EXIT_OK


def _relations(text: str) -> list[RelationId]:
    if text.strip().lower() == "all":
        return list(ALL_RELATIONS)
    try:
        return [RelationId.parse(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_query(args, out: Out) -> int:
    kb = _load(args.kb)
    psi = parse_formula(args.formula)
    rels = _relations(args.relation)
    if any(r is not RelationId.R9 for r in rels):
        _require_facts(kb)
    rows = []
    for r in rels:
        v = decide(kb, psi, r)
        rows.append([str(r), "yes" if v.entailed else "no", _route(v.belief_route), _route(v.scenario_route),
                     "flagged" if v.flagged else "", v.evidence])
    out.table("verdict", ["relation", "entailed", "belief", "scenario", "flag", "evidence"], rows)
    return EXIT_OK


def _route(b) -> str:
    return "n/a" if b is None else ("x" if b else "-")


def cmd_table(args, out: Out) -> int:
    kb = _load(args.kb)
    queries, expected = _read_queries(args.queries)
    rels = _relations(args.relations) if args.relations else list(TABLE_ORDER)
    if any(r is not RelationId.R9 for r in rels):
        _require_facts(kb)
    table = entailment_table(kb, queries, rels)
    notes = {}
    for i, marks in enumerate(expected):
        if marks is None:
            continue
        if len(marks) != len(rels):
            raise UsageError(f"query {i + 1}: {len(marks)} expected marks for {len(rels)} relations")
        for j, m in enumerate(marks):
            got = table[i][j].mark
            want = "x" if m.lower() in ("x", "×", "+") else "-"
            if got != want:
                notes[(i, j)] = f"expected {want}, computed {got} ({table[i][j].evidence})"
    if args.format == "tsv":
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                out.text("\t".join(["cell", to_text(v.query), str(v.relation), v.mark,
                                    _route(v.belief_route), _route(v.scenario_route),
                                    "annotated" if (i, j) in notes else ("flagged" if v.flagged else "")]))
    else:
        for line in render_table(table, rels, notes):
            out.text(line)
    return EXIT_OK


def cmd_prioritized(args, out: Out) -> int:
    kb = _load(args.kb)
    psi = parse_formula(args.formula)
    _require_facts(kb)
    pref = lex_preferred(kb)
    out.table("preferred", ["preferred sub-base", "defaults"],
              [[fmt_env(e), ", ".join(to_text(kb.defaults[i]) for i in sorted(e)) or "-"] for e in pref])
    v = prioritized_entails(kb, psi)
    out.kv("query", to_text(psi))
    out.kv("entailed", "yes" if v.entailed else "no")
    out.kv("routes", f"belief={_route(v.belief_route)} scenario={_route(v.scenario_route)}")
    out.kv("evidence", v.evidence)
    return EXIT_OK


def cmd_random_check(args, out: Out) -> int:
    kbs = corpus(args.seed, args.kbs, args.max_defaults, args.max_atoms)
    cons = consistent_corpus(args.seed + 1, max(1, args.kbs // 2), args.max_defaults, args.max_atoms)
    leveled = corpus(args.seed + 2, max(1, args.kbs // 4), args.max_defaults, args.max_atoms, levels=3)
    results = [
        checks.precedence(kbs),
        checks.route_agreement(kbs),
        checks.collapse(cons),
        checks.safety(kbs),
        checks.asymptotics(kbs),
        checks.prioritized(kbs, leveled),
    ]
    for res in results:
        out.text(res.line())
        for f in res.failures[:10]:
            out.text(f"  {f}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="syntaxdiag", description="Default reasoning as probabilistic diagnosis.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, kb=True):
        if kb:
            sp.add_argument("kb", help="knowledge base file")
        sp.add_argument("--format", choices=("table", "tsv"), default="table")
        sp.add_argument("--epsilon", type=str, default=None, help="also evaluate ratios at e = p/q")
        return sp

    common(sub.add_parser("validate", help="check facts and KB satisfiability"))
    common(sub.add_parser("inspect", help="environments, candidates and posteriors"))
    common(sub.add_parser("fault", help="posterior fault probability of each source"))
    sp = common(sub.add_parser("bel", help="belief of deducibility of a formula"))
    sp.add_argument("formula")
    sp = common(sub.add_parser("query", help="decide consequence relations"))
    sp.add_argument("formula")
    sp.add_argument("--relation", default="all", help="r1..r9, comma list, or all")
    sp = common(sub.add_parser("table", help="entailment table for a queries file"))
    sp.add_argument("queries")
    sp.add_argument("--relations", default=None, help="comma list; default r1,r6,r3,r2,r8,r7,r5,r4")
    sp = common(sub.add_parser("prioritized", help="lexicographic prioritized entailment"))
    sp.add_argument("formula")
    sp = common(sub.add_parser("random-check", help="randomized property sweeps"), kb=False)
    sp.add_argument("--kbs", type=int, default=200)
    sp.add_argument("--max-defaults", type=int, default=6)
    sp.add_argument("--max-atoms", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    return p


COMMANDS = {
    "validate": cmd_validate,
    "inspect": cmd_inspect,
    "fault": cmd_fault,
    "bel": cmd_bel,
    "query": cmd_query,
    "table": cmd_table,
    "prioritized": cmd_prioritized,
    "random-check": cmd_random_check,
}


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        args.epsilon = parse_eps(args.epsilon) if args.epsilon is not None else None
        out = Out(args.format)
        code = COMMANDS[args.command](args, out)
        out.emit(stdout)
        return code
    except UsageError as e:
        print(str(e), file=stderr)
        return EXIT_USAGE
    except FactsInconsistentError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_FACTS
    except (KBSyntaxError, FormulaSyntaxError) as e:
        print(f"parse error: {e}", file=stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))
