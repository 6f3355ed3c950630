"""Prioritized knowledge bases: lexicographic preference and level-wise fault rates.

Level 1 is the most important. A sub-base is preferred to another when, at
the most important level where their retained counts differ, it retains
more defaults.

Sources on level ``i`` fail with probability ``e**d_i``. The exponents
shrink towards the least important level (``d_m = 1``) and each level's
exponent exceeds ``fmax`` times the next one, so losing a single default
on a level always costs more than losing every default on all less
important levels combined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .epsilon import ONE, EpsilonPoly, EpsilonRatio, limit_at_zero
from .formula import Formula
from .kb import FactsInconsistentError, KnowledgeBase
from .lattice import env_mask, lattice, mask_env
from .relations import Verdict


@dataclass(frozen=True)
class EpsilonSchedule:
    fmax: int
    exponents: tuple[int, ...]  # exponents[i - 1] is d_i for level i

    def __post_init__(self):
        if self.fmax < 1:
            raise ValueError("fmax must be positive")
        ds = self.exponents
        if not ds or ds[-1] != 1 or any(d < 1 for d in ds):
            raise ValueError(f"least important level must have exponent 1, got {ds}")
        for hi, lo in zip(ds, ds[1:]):
            if hi < lo * (self.fmax + 1):
                raise ValueError(f"exponents {ds} do not separate levels for fmax={self.fmax}")

    def exponent(self, level: int) -> int:
        return self.exponents[level - 1]


def default_schedule(kb: KnowledgeBase) -> EpsilonSchedule:
    fmax = max(kb.n, 1)
    m = kb.num_levels
    return EpsilonSchedule(fmax, tuple((fmax + 1) ** (m - i) for i in range(1, m + 1)))


def _profile(kb: KnowledgeBase, env: frozenset[int]) -> tuple[int, ...]:
    present = [0] * kb.num_levels
    for i in env:
        present[kb.levels[i] - 1] += 1
    return tuple(present)


def _level_sizes(kb: KnowledgeBase) -> tuple[int, ...]:
    return tuple(len(kb.level_members(lv)) for lv in range(1, kb.num_levels + 1))


def _profile_weight(sched: EpsilonSchedule, sizes: tuple[int, ...], present: tuple[int, ...]) -> EpsilonPoly:
    w = ONE
    for lv, (size, kept) in enumerate(zip(sizes, present), start=1):
        d = sched.exponent(lv)
        w = w * EpsilonPoly.monomial(1, d * (size - kept)) * (ONE - EpsilonPoly.monomial(1, d)) ** kept
    return w


def schedule_weight(sched: EpsilonSchedule, kb: KnowledgeBase, env: Iterable[int]) -> EpsilonPoly:
    """Prior weight of ``env`` when level-i sources fail with probability e**d_i."""
    env = frozenset(env)
    if len(sched.exponents) < kb.num_levels:
        raise ValueError("schedule has fewer levels than the KB")
    return _profile_weight(sched, _level_sizes(kb), _profile(kb, env))


def _preferred(p: tuple[int, ...], q: tuple[int, ...]) -> bool:
    """Retained-count profile ``p`` lexicographically beats ``q`` (level 1 first)."""
    return p > q


def lex_preferred(kb: KnowledgeBase, strategy: str = "auto") -> list[frozenset[int]]:
    lat = lattice(kb, strategy)
    if not lat.facts_consistent:
        raise FactsInconsistentError("facts are inconsistent")
    envs = [mask_env(int(m)) for m in lat.irredundant_masks()]
    profiles = {e: _profile(kb, e) for e in envs}
    best = max(profiles.values())
    return sorted((e for e in envs if profiles[e] == best), key=sorted)


class _Weighted:
    """Schedule-weighted sums over consistent environments, grouped by profile."""

    def __init__(self, kb: KnowledgeBase, sched: EpsilonSchedule, strategy: str):
        self.kb, self.sched = kb, sched
        self.lat = lattice(kb, strategy)
        if not self.lat.facts_consistent:
            raise FactsInconsistentError("facts are inconsistent")
        self.sizes = _level_sizes(kb)
        n = kb.n
        codes = np.zeros(1 << n, dtype=np.int64)
        idx = np.arange(1 << n, dtype=np.int64)
        base = n + 1
        for i, lv in enumerate(kb.levels):
            codes += ((idx >> i) & 1) * base ** (kb.num_levels - lv)
        self.codes = codes
        self._weights: dict[int, EpsilonPoly] = {}
        self.den = self.total(self.lat.consistent)

    def _decode(self, code: int) -> tuple[int, ...]:
        base = self.kb.n + 1
        out = []
        for _ in range(self.kb.num_levels):
            out.append(code % base)
            code //= base
        return tuple(reversed(out))

    def weight(self, code: int) -> EpsilonPoly:
        w = self._weights.get(code)
        if w is None:
            w = self._weights[code] = _profile_weight(self.sched, self.sizes, self._decode(code))
        return w

    def total(self, flags: np.ndarray) -> EpsilonPoly:
        codes, counts = np.unique(self.codes[flags], return_counts=True)
        out = EpsilonPoly()
        for c, k in zip(codes, counts):
            out = out + int(k) * self.weight(int(c))
        return out

    def posterior(self, env: Iterable[int]) -> EpsilonRatio:
        mask = env_mask(env)
        if not self.lat.consistent[mask]:
            return EpsilonRatio(EpsilonPoly(), self.den)
        return EpsilonRatio(self.weight(int(self.codes[mask])), self.den)


def scheduled_posteriors(kb: KnowledgeBase, sched: EpsilonSchedule | None = None,
                         strategy: str = "auto") -> dict[frozenset[int], EpsilonRatio]:
    """Posterior of every consistent environment under the level schedule."""
    w = _Weighted(kb, sched or default_schedule(kb), strategy)
    return {mask_env(int(m)): w.posterior(mask_env(int(m))) for m in w.lat.consistent_masks()}


def scheduled_belief(kb: KnowledgeBase, psi: Formula, sched: EpsilonSchedule | None = None,
                     strategy: str = "auto") -> EpsilonRatio:
    w = _Weighted(kb, sched or default_schedule(kb), strategy)
    return EpsilonRatio(w.total(w.lat.entailing(psi)), w.den)


def prioritized_entails(kb: KnowledgeBase, psi: Formula, sched: EpsilonSchedule | None = None,
                        strategy: str = "auto") -> Verdict:
    preferred = lex_preferred(kb, strategy)
    lat = lattice(kb, strategy)
    hits = sum(lat.env_entails(e, psi) for e in preferred)
    scen = hits == len(preferred)
    bel = scheduled_belief(kb, psi, sched, strategy)
    lim: Fraction = limit_at_zero(bel)
    bel_route = lim == 1
    evidence = f"{hits}/{len(preferred)} preferred sub-bases entail; limit={lim}"
    if bel_route != scen:
        evidence += "; ROUTE MISMATCH"
    return Verdict("LEX", psi, scen, bel_route, scen, bel_route != scen, evidence)
