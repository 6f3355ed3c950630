import random
from itertools import combinations

import pytest

import oracle
from conftest import P
from syntaxdiag.epsilon import EPS, ONE, env_weight, limit_at_zero
from syntaxdiag.formula import TOP, atoms
from syntaxdiag.kb import FactsInconsistentError, KnowledgeBase, make_kb
from syntaxdiag.prioritized import (
    EpsilonSchedule,
    default_schedule,
    lex_preferred,
    prioritized_entails,
    schedule_weight,
    scheduled_posteriors,
)
from syntaxdiag.randomkb import corpus, random_formula
from syntaxdiag.relations import RelationId, decide, probe_queries

TWO_LEVELS = make_kb([], ["p", "~p", "q"], levels=[1, 2, 2])


class TestSchedule:
    def test_default(self):
        s = default_schedule(TWO_LEVELS)
        assert s.fmax == 3 and s.exponents == (4, 1)

    def test_three_levels(self):
        kb = make_kb([], ["a", "b", "c"], levels=[1, 2, 3])
        assert default_schedule(kb).exponents == (16, 4, 1)

    @pytest.mark.parametrize("fmax,ds", [(2, (2, 1)), (2, (3, 2)), (0, (1,)), (2, ())])
    def test_invalid(self, fmax, ds):
        with pytest.raises(ValueError):
            EpsilonSchedule(fmax, ds)

    def test_single_level_is_env_weight(self, worked_kb):
        s = default_schedule(worked_kb)
        for k in range(7):
            env = range(k)
            assert schedule_weight(s, worked_kb, env) == env_weight(6, k)

    def test_empty_environment_two_singletons(self):
        kb = make_kb([], ["p", "q"], levels=[1, 2])
        assert schedule_weight(EpsilonSchedule(2, (3, 1)), kb, ()) == EPS ** 4

    def test_full_environment(self):
        w = schedule_weight(default_schedule(TWO_LEVELS), TWO_LEVELS, {0, 1, 2})
        assert w == (ONE - EPS ** 4) * (ONE - EPS) ** 2
        assert w[0] == 1

    def test_levels_are_separated(self):
        # losing one level-1 default outweighs losing every level-2 default
        s = EpsilonSchedule(3, (4, 1))
        kb = make_kb([], ["a", "b", "c", "d"], levels=[1, 2, 2, 2])
        assert schedule_weight(s, kb, {1, 2, 3}).low_degree() > schedule_weight(s, kb, {0}).low_degree()


class TestLexPreferred:
    def test_two_level_example(self):
        assert lex_preferred(TWO_LEVELS) == [frozenset({0, 2})]

    def test_single_level_is_maxcard(self, worked_kb):
        assert set(lex_preferred(worked_kb)) == set(oracle.Brute(worked_kb).maxcard)

    def test_facts_inconsistent(self):
        with pytest.raises(FactsInconsistentError):
            lex_preferred(make_kb(["p", "~p"], ["q"], levels=[1]))


class TestPrioritizedEntails:
    def test_worked_example(self, worked_kb):
        v = prioritized_entails(worked_kb, P("b | c"))
        assert v.entailed and v.belief_route

    def test_two_level_example(self):
        assert prioritized_entails(TWO_LEVELS, P("p & q")).entailed
        assert not prioritized_entails(TWO_LEVELS, P("~p")).entailed

    def test_tautology(self):
        for kb in corpus(seed=3, count=20, levels=3):
            assert prioritized_entails(kb, TOP).entailed


def _brute_preferred(kb):
    """Maximal consistent subsets under the level-1-first comparison, by enumeration."""
    brute = oracle.Brute(kb)

    def profile(e):
        return tuple(sum(1 for i in e if kb.levels[i] == lv) for lv in range(1, kb.num_levels + 1))

    best = max(profile(e) for e in brute.consistent)
    return {e for e in brute.consistent if profile(e) == best}


LEVELED = corpus(seed=404, count=40, max_defaults=6, max_atoms=4, levels=2) + \
    corpus(seed=405, count=40, max_defaults=6, max_atoms=4, levels=3)


@pytest.mark.parametrize("idx", range(len(LEVELED)))
def test_correspondence(idx):
    kb = LEVELED[idx]
    preferred = set(lex_preferred(kb))
    assert preferred == _brute_preferred(kb)
    limits = {e: limit_at_zero(r) for e, r in scheduled_posteriors(kb).items()}
    alive = {e for e, lim in limits.items() if lim != 0}
    assert alive == preferred
    assert {limits[e] for e in alive} == {limits[next(iter(alive))]}


@pytest.mark.parametrize("idx", range(len(LEVELED)))
def test_routes_agree(idx):
    kb = LEVELED[idx]
    rng = random.Random(idx)
    names = sorted({a for f in kb.formulas() for a in atoms(f)}) or ["a"]
    for q in probe_queries(kb, [random_formula(rng, names, 2)]):
        v = prioritized_entails(kb, q)
        assert v.belief_route == v.scenario_route
        brute = oracle.Brute(kb)
        assert v.entailed == all(brute.entails(e, q) for e in _brute_preferred(kb))


def test_single_level_reduces_to_r1():
    rng = random.Random(7)
    for kb in corpus(seed=9, count=40):
        names = sorted({a for f in kb.formulas() for a in atoms(f)}) or ["a"]
        for q in probe_queries(kb, [random_formula(rng, names, 2)]):
            assert prioritized_entails(kb, q).entailed == decide(kb, q, RelationId.R1).entailed


def test_preference_is_strict_partial_order():
    for kb in LEVELED[:20]:
        brute = oracle.Brute(kb)

        def profile(e):
            return tuple(sum(1 for i in e if kb.levels[i] == lv) for lv in range(1, kb.num_levels + 1))

        envs = brute.consistent
        for a in envs:
            assert not profile(a) > profile(a)
        for a, b in combinations(envs, 2):
            assert not (profile(a) > profile(b) and profile(b) > profile(a))
        pref = lex_preferred(kb)
        for a, b in combinations(pref, 2):
            assert profile(a) == profile(b)


def test_levels_change_the_answer():
    flat = KnowledgeBase(TWO_LEVELS.facts, TWO_LEVELS.defaults)
    assert not prioritized_entails(flat, P("p")).entailed
    assert prioritized_entails(TWO_LEVELS, P("p")).entailed
