"""Randomized property sweeps over seeded KB corpora (used by ``random-check``)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import sat
from .belief import belief, posterior_env, posterior_fault
from .epsilon import limit_at_zero, order_at_zero
from .formula import Negation
from .kb import KnowledgeBase
from .lattice import lattice, mask_env
from .prioritized import lex_preferred, prioritized_entails, scheduled_posteriors
from .relations import ALL_RELATIONS, DERIVED_EDGES, RelationId, decide, precedence_check, probe_queries


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" ({'; '.join(self.notes)})" if self.notes else ""
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures{extra}"


def route_agreement(kbs: list[KnowledgeBase]) -> CheckResult:
    res = CheckResult("route agreement")
    ties = 0
    for idx, kb in enumerate(kbs):
        lat = lattice(kb)
        k, maxc = lat.maxcard_masks()
        for q in probe_queries(kb):
            for r in ALL_RELATIONS:
                v = decide(kb, q, r)
                res.cases += 1
                if v.belief_route == v.scenario_route:
                    continue
                if r is RelationId.R6:
                    u = sum(lat.env_entails(mask_env(int(m)), q) for m in maxc)
                    if 2 * u == len(maxc):
                        ties += 1
                        continue
                res.failures.append(f"kb#{idx} {r} {q}: belief={v.belief_route} scenario={v.scenario_route}")
    res.notes.append(f"{ties} flagged R6 ties")
    return res


def precedence(kbs: list[KnowledgeBase]) -> CheckResult:
    res = CheckResult("precedence edges")
    res.cases = len(kbs) * len(DERIVED_EDGES)
    for v in precedence_check(kbs, DERIVED_EDGES):
        res.failures.append(f"kb#{v.kb_index} {v.edge[0]}->{v.edge[1]} on {v.query}")
    return res


def collapse(kbs: list[KnowledgeBase]) -> CheckResult:
    res = CheckResult("consistent-KB collapse")
    for idx, kb in enumerate(kbs):
        for q in probe_queries(kb):
            classical = sat.entails(kb.formulas(), q)
            from_facts = sat.entails(kb.facts, q)
            for r in ALL_RELATIONS:
                res.cases += 1
                want = from_facts if r is RelationId.R9 else classical
                if decide(kb, q, r).entailed != want:
                    res.failures.append(f"kb#{idx} {r} {q}")
    return res


def safety(kbs: list[KnowledgeBase]) -> CheckResult:
    res = CheckResult("safety")
    unsafe = Counter()
    for kb in kbs:
        for r in ALL_RELATIONS:
            res.cases += 1
            if any(decide(kb, q, r).entailed and decide(kb, Negation(q), r).entailed
                   for q in probe_queries(kb)):
                unsafe[r] += 1
    for r, c in sorted(unsafe.items(), key=lambda t: t[0].value):
        if r not in (RelationId.R2, RelationId.R4):
            res.failures.append(f"{r} unsafe on {c} KBs")
    res.notes.append("unsafe: " + (", ".join(f"{r}x{c}" for r, c in sorted(unsafe.items(), key=lambda t: t[0].value)) or "none"))
    return res


def asymptotics(kbs: list[KnowledgeBase]) -> CheckResult:
    """Posterior and belief leading terms against their closed forms."""
    res = CheckResult("asymptotic closed forms")
    for idx, kb in enumerate(kbs):
        lat = lattice(kb)
        k, maxc = lat.maxcard_masks()
        maxc = [mask_env(int(m)) for m in maxc]
        p = len(maxc)
        irr = [mask_env(int(m)) for m in lat.irredundant_masks()]
        for m in lat.consistent_masks():
            e = mask_env(int(m))
            r = posterior_env(kb, e)
            res.cases += 1
            want = (Fraction(1, p), 0) if len(e) == k else (Fraction(0), k - len(e))
            if (limit_at_zero(r), order_at_zero(r)) != want:
                res.failures.append(f"kb#{idx} posterior {sorted(e)}")
        for a in range(kb.n):
            r = posterior_fault(kb, a)
            res.cases += 1
            absent = sum(a not in e for e in maxc)
            if absent:
                ok = limit_at_zero(r) == Fraction(absent, p)
            else:
                r_prime = sum(a not in e and len(e) == k - 1 for e in irr)
                ok = r.series(2) == [0, 1 + Fraction(r_prime, p)]
            if not ok:
                res.failures.append(f"kb#{idx} fault A{a + 1}")
        for q in probe_queries(kb):
            rep = belief(kb, q)
            res.cases += 1
            hits = [e for e in map(lambda m: mask_env(int(m)), lat.consistent_masks()) if lat.env_entails(e, q)]
            if not hits:
                ok = rep.bel.is_zero()
            else:
                kq = max(len(e) for e in hits)
                u = sum(len(e) == kq for e in hits)
                ok = (rep.limit == Fraction(u, p) and rep.order == 0) if kq == k else \
                    (rep.order == k - kq and rep.limit == 0)
            if not ok:
                res.failures.append(f"kb#{idx} belief {q}")
    return res


def prioritized(single: list[KnowledgeBase], leveled: list[KnowledgeBase]) -> CheckResult:
    res = CheckResult("prioritized reduction/correspondence")
    for idx, kb in enumerate(single):
        for q in probe_queries(kb):
            res.cases += 1
            if prioritized_entails(kb, q).entailed != decide(kb, q, RelationId.R1).entailed:
                res.failures.append(f"single kb#{idx} {q}")
    for idx, kb in enumerate(leveled):
        res.cases += 1
        post = scheduled_posteriors(kb)
        nonzero = {e for e, r in post.items() if limit_at_zero(r) != 0}
        preferred = set(lex_preferred(kb))
        limits = {limit_at_zero(post[e]) for e in preferred}
        if nonzero != preferred or limits != {Fraction(1, len(preferred))}:
            res.failures.append(f"leveled kb#{idx}")
    return res
