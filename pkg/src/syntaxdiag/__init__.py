"""Syntax-based default reasoning as probabilistic model-based diagnosis."""

from .belief import BeliefReport, belief, posterior_env, posterior_fault, prob_consistency
from .epsilon import EpsilonPoly, EpsilonRatio, env_weight, eventually_greater, limit_at_zero, order_at_zero
from .formula import parse_formula, to_text
from .kb import FactsInconsistentError, KnowledgeBase, add_evidence, load_kb, make_kb, validate
from .lattice import classify_environments, count_consistent, count_entailing
from .prioritized import lex_preferred, prioritized_entails
from .relations import RelationId, Verdict, decide, entailment_table

__all__ = [
    "BeliefReport", "EpsilonPoly", "EpsilonRatio", "FactsInconsistentError", "KnowledgeBase",
    "RelationId", "Verdict", "add_evidence", "belief", "classify_environments", "count_consistent",
    "count_entailing", "decide", "entailment_table", "env_weight", "eventually_greater",
    "lex_preferred", "limit_at_zero", "load_kb", "make_kb", "order_at_zero", "parse_formula",
    "posterior_env", "posterior_fault", "prioritized_entails", "prob_consistency", "to_text",
    "validate",
]
