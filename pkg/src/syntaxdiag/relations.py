"""Nine consequence relations, each decided twice.

The *belief route* reads the exact belief ratios: limits at zero, asymptotic
orders, and "for every small enough e" comparisons. The *scenario route*
inspects maxcard and irredundant environments one at a time, plus the
per-cardinality counts for R7. The two must agree. R6 is the one known
exception: when exactly half of the maxcard scenarios entail the query, the
exact belief can still exceed 1/2 through lower-order terms. There the
majority count decides and the verdict is flagged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import sat
from .belief import BeliefReport, belief
from .epsilon import DivergesAtZero, EpsilonRatio, eventually_greater, limit_at_zero
from .formula import Atom, Formula, Negation, TOP, atoms_of, to_text
from .kb import FactsInconsistentError, KnowledgeBase
from .lattice import lattice, top_index


class RelationId(enum.Enum):
    R1 = 1
    R2 = 2
    R3 = 3
    R4 = 4
    R5 = 5
    R6 = 6
    R7 = 7
    R8 = 8
    R9 = 9

    @classmethod
    def parse(cls, text: str) -> "RelationId":
        t = text.strip().upper()
        if not t.startswith("R"):
            t = "R" + t
        try:
            return cls[t]
        except KeyError:
            raise ValueError(f"unknown relation {text!r}") from None

    def __str__(self):
        return self.name


ALL_RELATIONS = tuple(RelationId)
# column order of the worked example's table (no R9 column there)
TABLE_ORDER = tuple(RelationId[f"R{i}"] for i in (1, 6, 3, 2, 8, 7, 5, 4))

# Implications Ri => Rj derived from the scenario characterizations.
DERIVED_EDGES = tuple(
    (RelationId[f"R{i}"], RelationId[f"R{j}"])
    for i, j in ((9, 1), (1, 3), (1, 6), (3, 2), (3, 8), (6, 2), (6, 7), (5, 8), (8, 7), (7, 4), (2, 4))
)


@dataclass(frozen=True)
class Verdict:
    relation: RelationId | str
    query: Formula
    entailed: bool
    belief_route: bool | None
    scenario_route: bool
    flagged: bool = False
    evidence: str = ""

    @property
    def mark(self) -> str:
        return "x" if self.entailed else "-"


def _lex_greater(a: Sequence[int], b: Sequence[int]) -> bool:
    """Compare count vectors from the highest cardinality down."""
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return x > y
    return False


class _Scenarios:
    """Per-environment entailment facts, computed one environment at a time."""

    def __init__(self, kb: KnowledgeBase, strategy: str):
        self.lat = lattice(kb, strategy)
        k, maxc = self.lat.maxcard_masks()
        self.k = k
        self.maxcard = [int(m) for m in maxc]
        self.irredundant = [int(m) for m in self.lat.irredundant_masks()]
        self._memo: dict[tuple[int, Formula], bool] = {}

    def entails(self, mask: int, q: Formula) -> bool:
        key = (mask, q)
        hit = self._memo.get(key)
        if hit is None:
            hit = self.lat.env_entails([i for i in range(self.lat.n) if mask >> i & 1], q)
            self._memo[key] = hit
        return hit

    def maxcard_entailing(self, q: Formula) -> int:
        return sum(self.entails(m, q) for m in self.maxcard)

    def top_card(self, q: Formula) -> float | int:
        # entailment grows with the environment, so the top is reached on an irredundant one
        sizes = [bin(m).count("1") for m in self.irredundant if self.entails(m, q)]
        return max(sizes) if sizes else -math.inf


_scenario_cache: dict[tuple[KnowledgeBase, str], _Scenarios] = {}


def _scenarios(kb: KnowledgeBase, strategy: str) -> _Scenarios:
    key = (kb, strategy)
    sc = _scenario_cache.get(key)
    if sc is None:
        if len(_scenario_cache) > 256:
            _scenario_cache.clear()
        sc = _scenario_cache[key] = _Scenarios(kb, strategy)
    return sc


def _belief_route(r: RelationId, pos: BeliefReport, negr: BeliefReport) -> bool:
    b, nb = pos.bel, negr.bel
    if r is RelationId.R1:
        return pos.limit == 1
    if r is RelationId.R2:
        return pos.limit > 0
    if r is RelationId.R3:
        return pos.limit > 0 and negr.limit == 0
    if r is RelationId.R4:
        return eventually_greater(b, 0)
    if r is RelationId.R5:
        return eventually_greater(b, 0) and nb.is_zero()
    if r is RelationId.R6:
        return eventually_greater(b, Fraction(1, 2))
    if r is RelationId.R7:
        return eventually_greater(b, nb)
    if r is RelationId.R8:
        if not eventually_greater(b, 0):
            return False
        try:
            return limit_at_zero(EpsilonRatio(nb.num, b.num)) == 0
        except DivergesAtZero:
            return False
    if r is RelationId.R9:
        return pos.is_one()
    raise ValueError(r)


def _scenario_route(r: RelationId, sc: _Scenarios, kb: KnowledgeBase, q: Formula,
                    nq: Formula) -> tuple[bool, str]:
    p = len(sc.maxcard)
    if r is RelationId.R1:
        u = sc.maxcard_entailing(q)
        return u == p, f"{u}/{p} maxcard scenarios entail"
    if r is RelationId.R2:
        u = sc.maxcard_entailing(q)
        return u > 0, f"{u}/{p} maxcard scenarios entail"
    if r is RelationId.R3:
        u, v = sc.maxcard_entailing(q), sc.maxcard_entailing(nq)
        return u > 0 and v == 0, f"{u}/{p} maxcard entail, {v}/{p} entail the negation"
    if r is RelationId.R4:
        w = sum(sc.entails(m, q) for m in sc.irredundant)
        return w > 0, f"{w}/{len(sc.irredundant)} irredundant scenarios entail"
    if r is RelationId.R5:
        w = sum(sc.entails(m, q) for m in sc.irredundant)
        v = sum(sc.entails(m, nq) for m in sc.irredundant)
        return w > 0 and v == 0, f"{w} irredundant entail, {v} entail the negation"
    if r is RelationId.R6:
        u = sc.maxcard_entailing(q)
        return 2 * u > p, f"{u}/{p} maxcard scenarios entail"
    if r is RelationId.R7:
        lp, ln = sc.lat.count_entailing(q), sc.lat.count_entailing(nq)
        return _lex_greater(lp, ln), f"L={list(lp)} vs L(neg)={list(ln)}"
    if r is RelationId.R8:
        kq, kn = sc.top_card(q), sc.top_card(nq)
        return kq > kn, f"k_psi={kq} k_neg={kn}"
    raise ValueError(r)


def decide(kb: KnowledgeBase, psi: Formula, r: RelationId, strategy: str = "auto") -> Verdict:
    if r is RelationId.R9:
        scen = sat.entails(kb.facts, psi)
        if not sat.is_satisfiable(kb.facts):
            return Verdict(r, psi, scen, None, scen, evidence="facts inconsistent")
        bel_route = belief(kb, psi, strategy).is_one()
        return Verdict(r, psi, scen, bel_route, scen, flagged=bel_route != scen,
                       evidence="facts entail" if scen else "facts do not entail")
    if not lattice(kb, strategy).facts_consistent:
        raise FactsInconsistentError("facts are inconsistent")
    nq = Negation(psi)
    pos, negr = belief(kb, psi, strategy), belief(kb, nq, strategy)
    bel_route = _belief_route(r, pos, negr)
    scen, evidence = _scenario_route(r, _scenarios(kb, strategy), kb, psi, nq)
    flagged = bel_route != scen
    if flagged and r is RelationId.R6:
        evidence += f"; tie: exact Bel {'exceeds' if bel_route else 'does not exceed'} 1/2 near 0"
    elif flagged:
        evidence += "; ROUTE MISMATCH"
    return Verdict(r, psi, scen, bel_route, scen, flagged, evidence)


def entailment_table(kb: KnowledgeBase, queries: Sequence[Formula],
                     rels: Sequence[RelationId] = TABLE_ORDER, strategy: str = "auto") -> list[list[Verdict]]:
    return [[decide(kb, q, r, strategy) for r in rels] for q in queries]


def render_table(table: list[list[Verdict]], rels: Sequence[RelationId],
                 notes: dict[tuple[int, int], str] | None = None) -> list[str]:
    """Rows as ``query  x - x ...``; ``*`` marks annotated or flagged cells."""
    notes = notes or {}
    labels = [to_text(row[0].query) if row else "" for row in table]
    width = max([len(s) for s in labels] + [5])
    lines = [" " * width + "  " + " ".join(f"{str(r):>3}" for r in rels)]
    for i, row in enumerate(table):
        cells = []
        for j, v in enumerate(row):
            star = "*" if (i, j) in notes or v.flagged else " "
            cells.append(f"{v.mark:>2}{star}")
        lines.append((f"{labels[i]:<{width}}  " + " ".join(cells)).rstrip())
    for (i, j), text in sorted(notes.items()):
        lines.append(f"* ({labels[i]}, {rels[j]}): {text}")
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            if v.flagged and (i, j) not in notes:
                lines.append(f"* ({labels[i]}, {rels[j]}): {v.evidence}")
    return lines


def probe_queries(kb: KnowledgeBase, extra: Iterable[Formula] = ()) -> list[Formula]:
    """Every atom of the KB, its negation, then ``extra`` (deduplicated, in order)."""
    out: list[Formula] = []
    for name in sorted(atoms_of(kb.formulas())):
        out += [Atom(name), Negation(Atom(name))]
    for q in extra:
        if q not in out:
            out.append(q)
    return out


@dataclass(frozen=True)
class Violation:
    kb_index: int
    query: Formula
    edge: tuple[RelationId, RelationId]


def precedence_check(sample: Sequence[KnowledgeBase],
                     edges: Sequence[tuple[RelationId, RelationId]] = DERIVED_EDGES,
                     extra_queries: Iterable[Formula] = ()) -> list[Violation]:
    """Every ``Ri => Rj`` edge tested on each KB and probe query; returns the failures."""
    extra_queries = list(extra_queries)
    out: list[Violation] = []
    for idx, kb in enumerate(sample):
        for q in probe_queries(kb, extra_queries):
            cache: dict[RelationId, bool] = {}

            def holds(r):
                if r not in cache:
                    cache[r] = decide(kb, q, r).entailed
                return cache[r]

            for i, j in edges:
                if holds(i) and not holds(j):
                    out.append(Violation(idx, q, (i, j)))
    return out


def transitive_closure(edges: Iterable[tuple[RelationId, RelationId]]) -> set[tuple[RelationId, RelationId]]:
    reach = set(edges)
    changed = True
    while changed:
        changed = False
        for a, b in list(reach):
            for c, d in list(reach):
                if b == c and (a, d) not in reach:
                    reach.add((a, d))
                    changed = True
    return reach


def safety_probe(kb: KnowledgeBase, rels: Sequence[RelationId] = ALL_RELATIONS,
                 queries: Iterable[Formula] = ()) -> dict[RelationId, list[Formula]]:
    """For each relation, the probe queries ``q`` with both ``q`` and ``~q`` entailed."""
    qs = probe_queries(kb, queries)
    out: dict[RelationId, list[Formula]] = {}
    for r in rels:
        out[r] = [q for q in qs if decide(kb, q, r).entailed and decide(kb, Negation(q), r).entailed]
    return out


def tautology_row(kb: KnowledgeBase, rels: Sequence[RelationId] = ALL_RELATIONS) -> list[Verdict]:
    return [decide(kb, TOP, r) for r in rels]
