"""Posterior probabilities of environments and the belief of deducibility.

Every source fails independently with the same infinitesimal probability
``e``. An environment with ``k`` of ``n`` assumptions has prior weight
``e**(n-k) * (1-e)**k``; conditioning on "the true environment is
consistent" divides by the total weight of the consistent environments.
All ratios returned here share that denominator verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .epsilon import EpsilonPoly, EpsilonRatio, env_weight, limit_at_zero, order_at_zero, weighted_sum
from .formula import Formula
from .kb import FactsInconsistentError, KnowledgeBase
from .lattice import CountVector, env_mask, lattice, top_index


def prob_consistency(kb: KnowledgeBase, strategy: str = "auto") -> EpsilonPoly:
    """Total prior weight of the consistent environments (zero if the facts clash)."""
    lat = lattice(kb, strategy)
    return weighted_sum(lat.count_consistent(), kb.n)


def _denominator(kb: KnowledgeBase, strategy: str) -> EpsilonPoly:
    den = prob_consistency(kb, strategy)
    if den.is_zero():
        raise FactsInconsistentError("facts are inconsistent: conditioning event has probability 0")
    return den


def posterior_env(kb: KnowledgeBase, env: Iterable[int], strategy: str = "auto") -> EpsilonRatio:
    den = _denominator(kb, strategy)
    env = frozenset(env)
    if not lattice(kb, strategy).consistent[env_mask(env)]:
        return EpsilonRatio(EpsilonPoly(), den)
    return EpsilonRatio(env_weight(kb.n, len(env)), den)


def posterior_fault(kb: KnowledgeBase, a: int, strategy: str = "auto") -> EpsilonRatio:
    """Probability that source ``a`` is faulty, given consistency."""
    if not 0 <= a < kb.n:
        raise ValueError(f"assumption id {a} out of range for n={kb.n}")
    den = _denominator(kb, strategy)
    counts = lattice(kb, strategy).count_consistent(exclude=a)
    return EpsilonRatio(weighted_sum(counts, kb.n), den)


@dataclass(frozen=True, eq=False)
class BeliefReport:
    """Exact belief of deducibility of ``query`` plus its asymptotic summary.

    ``lex[k]`` counts consistent environments of cardinality ``k`` whose
    context entails the query; ``k_psi`` is the top nonzero index of ``lex``
    (``-inf`` if none) and ``u_psi`` the count there.
    """

    query: Formula
    bel: EpsilonRatio
    limit: Fraction
    order: float | int
    k_psi: float | int
    u_psi: int
    lex: CountVector
    consistent: CountVector

    @property
    def p(self) -> int:
        """Number of maxcard consistent environments."""
        return self.consistent[top_index(self.consistent)]

    @property
    def k(self) -> int:
        return top_index(self.consistent)

    def is_one(self) -> bool:
        return self.bel.num == self.bel.den


def belief(kb: KnowledgeBase, psi: Formula, strategy: str = "auto") -> BeliefReport:
    den = _denominator(kb, strategy)
    lat = lattice(kb, strategy)
    lex = lat.count_entailing(psi)
    bel = EpsilonRatio(weighted_sum(lex, kb.n), den)
    k_psi = top_index(lex)
    return BeliefReport(
        query=psi,
        bel=bel,
        limit=limit_at_zero(bel),
        order=order_at_zero(bel),
        k_psi=k_psi,
        u_psi=0 if k_psi == -math.inf else lex[k_psi],
        lex=lex,
        consistent=lat.count_consistent(),
    )
