"""Environments of a knowledge base and their classification.

An environment is a set of assumption ids. Internally every per-environment
fact is a numpy boolean array of length ``2**n`` indexed by the environment's
bitmask (bit ``i`` set iff assumption ``i`` is in the environment).

Three strategies fill those arrays and must agree exactly:

``models``
    Enumerate valuations of the KB's atoms once. Each model of the facts
    satisfies a set of defaults (its *mask*); an environment is consistent iff
    it is a subset of some model's mask, i.e. the downward closure of the
    masks. ``Context(E) |= q`` iff no model of ``facts & ~q`` has a mask
    containing ``E``. Fast when there are few atoms.
``dfs``
    Depth-first growth from the empty environment, consulting the SAT engine
    and never descending below an inconsistent set (consistency is closed
    under subsets, so every superset of a nogood is a nogood).
``sweep``
    Every one of the ``2**n`` environments checked independently with the
    truth-table backend. Reference only.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import sat
from .formula import Formula, atoms, atoms_of, evaluate_columns
from .kb import FactsInconsistentError, KnowledgeBase

Environment = frozenset
CountVector = tuple

STRATEGIES = ("auto", "models", "dfs", "sweep")
MAX_DEFAULTS = 24
MODEL_MAX_ATOMS = 20


def env_mask(env: Iterable[int]) -> int:
    m = 0
    for i in env:
        m |= 1 << i
    return m


def mask_env(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def context_generators(kb: KnowledgeBase, env: Iterable[int]) -> list[Formula]:
    """Facts plus the defaults selected by ``env``; Context(env) is their closure."""
    env = sorted(set(env))
    for i in env:
        if not 0 <= i < kb.n:
            raise ValueError(f"assumption id {i} out of range for n={kb.n}")
    return list(kb.facts) + [kb.defaults[i] for i in env]


def top_index(counts: Sequence[int]) -> float | int:
    """Largest k with counts[k] > 0, or ``-math.inf`` if all are zero."""
    for k in range(len(counts) - 1, -1, -1):
        if counts[k]:
            return k
    return -math.inf


def down_closure(seeds: np.ndarray, n: int) -> np.ndarray:
    """Boolean array marking every subset of some seed mask."""
    out = np.zeros(1 << n, dtype=bool)
    out[seeds] = True
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 0, :] |= view[:, 1, :]
    return out


def has_proper_superset(flags: np.ndarray, n: int) -> np.ndarray:
    """Mark masks E such that E | {i} is flagged for some i not in E."""
    out = np.zeros_like(flags)
    for i in range(n):
        out.reshape(-1, 2, 1 << i)[:, 0, :] |= flags.reshape(-1, 2, 1 << i)[:, 1, :]
    return out


@lru_cache(maxsize=32)
def _popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc.reshape(-1, 2, 1 << i)[:, 1, :] += 1
    return pc


def _counts(flags: np.ndarray, n: int) -> CountVector:
    return tuple(int(c) for c in np.bincount(_popcounts(n)[flags], minlength=n + 1))


@dataclass(frozen=True)
class Classification:
    consistent: tuple[frozenset[int], ...]
    irredundant: tuple[frozenset[int], ...]
    maxcard_size: int
    maxcard: tuple[frozenset[int], ...]
    mincard_candidates: tuple[frozenset[int], ...]
    minimal_candidates: tuple[frozenset[int], ...]


class EnvironmentLattice:
    """Consistency and entailment facts for every environment of one KB."""

    def __init__(self, kb: KnowledgeBase, strategy: str = "auto", backend: str = "dpll"):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
        if kb.n > MAX_DEFAULTS:
            raise ValueError(f"{kb.n} defaults exceed the supported maximum of {MAX_DEFAULTS}")
        self.kb = kb
        self.n = kb.n
        self.full = (1 << kb.n) - 1
        self.kb_atoms = sorted(atoms_of(kb.formulas()))
        if strategy == "auto":
            strategy = "models" if len(self.kb_atoms) <= MODEL_MAX_ATOMS else "dfs"
        self.strategy = strategy
        self.backend = "truth-table" if strategy == "sweep" else backend
        # entailment arrays are cached per query; plain dict writes are atomic,
        # so concurrent fills at worst recompute (last writer wins)
        self._entailing: dict[Formula, np.ndarray] = {}
        self._bad_masks: dict[Formula, np.ndarray] = {}
        if strategy == "models":
            self._init_models()
        elif strategy == "dfs":
            self.consistent = self._dfs_consistent()
        else:
            self.consistent = np.array(
                [sat.is_satisfiable(self._generators(m), backend="truth-table") for m in range(1 << self.n)],
                dtype=bool,
            )
        self.facts_consistent = bool(self.consistent[0])

    # -- construction --------------------------------------------------------

    def _generators(self, mask: int) -> list[Formula]:
        return list(self.kb.facts) + [self.kb.defaults[i] for i in range(self.n) if mask >> i & 1]

    def _table(self, names: list[str]) -> tuple[dict[str, np.ndarray], int]:
        size = 1 << len(names)
        idx = np.arange(size, dtype=np.int64)
        cols = {name: ((idx >> j) & 1).astype(bool) for j, name in enumerate(names)}
        return cols, size

    def _init_models(self) -> None:
        cols, size = self._table(self.kb_atoms)
        facts_ok = np.ones(size, dtype=bool)
        for f in self.kb.facts:
            facts_ok &= evaluate_columns(f, cols, size)
        masks = np.zeros(size, dtype=np.int64)
        for i, d in enumerate(self.kb.defaults):
            masks |= evaluate_columns(d, cols, size).astype(np.int64) << i
        self._cols, self._size = cols, size
        self._facts_ok, self._masks = facts_ok, masks
        self.consistent = down_closure(np.unique(masks[facts_ok]), self.n)

    def _dfs_consistent(self) -> np.ndarray:
        out = np.zeros(1 << self.n, dtype=bool)
        if not sat.is_satisfiable(self.kb.facts, backend=self.backend):
            return out
        out[0] = True
        stack = [0]
        while stack:
            mask = stack.pop()
            # extend only with ids above the highest member: each subset visited once
            start = mask.bit_length()
            for i in range(start, self.n):
                child = mask | (1 << i)
                if sat.is_satisfiable(self._generators(child), backend=self.backend):
                    out[child] = True
                    stack.append(child)
        return out

    # -- queries --------------------------------------------------------------

    def is_consistent(self, env: Iterable[int]) -> bool:
        return bool(self.consistent[env_mask(env)])

    def _query_bad_masks(self, q: Formula) -> np.ndarray:
        """Masks of models of ``facts & ~q`` (models strategy only)."""
        cached = self._bad_masks.get(q)
        if cached is not None:
            return cached
        extra = sorted(atoms(q) - set(self.kb_atoms))
        if not extra:
            qv = evaluate_columns(q, self._cols, self._size)
            bad = self._masks[self._facts_ok & ~qv]
        else:
            # fresh atoms are unconstrained by the KB: tile the base table
            reps = 1 << len(extra)
            size = self._size * reps
            cols = {k: np.tile(v, reps) for k, v in self._cols.items()}
            block = np.repeat(np.arange(reps, dtype=np.int64), self._size)
            for j, name in enumerate(extra):
                cols[name] = ((block >> j) & 1).astype(bool)
            qv = evaluate_columns(q, cols, size)
            bad = np.tile(self._masks, reps)[np.tile(self._facts_ok, reps) & ~qv]
        bad = np.unique(bad)
        self._bad_masks[q] = bad
        return bad

    def entailing(self, q: Formula) -> np.ndarray:
        """Boolean array: environment is consistent and its context entails ``q``."""
        cached = self._entailing.get(q)
        if cached is not None:
            return cached
        if self.strategy == "models":
            out = self.consistent & ~down_closure(self._query_bad_masks(q), self.n)
        elif self.strategy == "dfs":
            out = np.zeros(1 << self.n, dtype=bool)
            for mask in np.flatnonzero(self.consistent):
                mask = int(mask)
                # context grows with the environment: a subset that entails q settles it
                if any(out[mask & ~(1 << i)] for i in range(self.n) if mask >> i & 1):
                    out[mask] = True
                else:
                    out[mask] = sat.entails(self._generators(mask), q, backend=self.backend)
        else:
            out = np.array(
                [bool(self.consistent[m]) and sat.entails(self._generators(m), q, backend="truth-table")
                 for m in range(1 << self.n)],
                dtype=bool,
            )
        self._entailing[q] = out
        return out

    def env_entails(self, env: Iterable[int], q: Formula) -> bool:
        """Whether Context(env) entails ``q``, decided for this one environment.

        Does not use the closure arrays, so it can cross-check them.
        """
        mask = env_mask(env)
        if self.strategy == "models":
            bad = self._query_bad_masks(q)
            return not bool(np.any((bad & mask) == mask))
        return sat.entails(self._generators(mask), q, backend=self.backend)

    def count_consistent(self, exclude: int | None = None) -> CountVector:
        flags = self.consistent
        if exclude is not None:
            flags = flags & ~self._has_bit(exclude)
        return _counts(flags, self.n)

    def count_entailing(self, q: Formula) -> CountVector:
        return _counts(self.entailing(q), self.n)

    def _has_bit(self, i: int) -> np.ndarray:
        return (np.arange(1 << self.n, dtype=np.int64) >> i & 1).astype(bool)

    def consistent_masks(self) -> np.ndarray:
        return np.flatnonzero(self.consistent)

    def irredundant_masks(self) -> np.ndarray:
        return np.flatnonzero(self.consistent & ~has_proper_superset(self.consistent, self.n))

    def maxcard_masks(self) -> tuple[int, np.ndarray]:
        masks = self.consistent_masks()
        if masks.size == 0:
            raise FactsInconsistentError("facts are inconsistent: no consistent environment")
        pc = _popcounts(self.n)[masks]
        k = int(pc.max())
        return k, masks[pc == k]

    def classify(self) -> Classification:
        if not self.consistent[0]:
            raise FactsInconsistentError("facts are inconsistent: no consistent environment")
        k, maxc = self.maxcard_masks()
        irr = self.irredundant_masks()
        to_envs = lambda ms: tuple(mask_env(int(m)) for m in ms)
        comp = lambda ms: tuple(mask_env(self.full & ~int(m)) for m in ms)
        return Classification(
            consistent=to_envs(self.consistent_masks()),
            irredundant=to_envs(irr),
            maxcard_size=k,
            maxcard=to_envs(maxc),
            mincard_candidates=comp(maxc),
            minimal_candidates=comp(irr),
        )


_cache_lock = threading.Lock()
_lattices: dict[tuple[KnowledgeBase, str, str], EnvironmentLattice] = {}
_CACHE_LIMIT = 256


def lattice(kb: KnowledgeBase, strategy: str = "auto", backend: str = "dpll") -> EnvironmentLattice:
    """Shared, lazily built lattice for ``kb`` (built once per key)."""
    key = (kb, strategy, backend)
    lat = _lattices.get(key)
    if lat is None:
        lat = EnvironmentLattice(kb, strategy, backend)
        with _cache_lock:
            if len(_lattices) >= _CACHE_LIMIT:
                _lattices.pop(next(iter(_lattices)))
            _lattices.setdefault(key, lat)
    return lat


# -- module-level operations -------------------------------------------------

def is_consistent_env(kb: KnowledgeBase, env: Iterable[int], backend: str = "dpll") -> bool:
    return sat.is_satisfiable(context_generators(kb, env), backend=backend)


def classify_environments(kb: KnowledgeBase, strategy: str = "auto") -> Classification:
    return lattice(kb, strategy).classify()


def count_consistent(kb: KnowledgeBase, strategy: str = "auto") -> CountVector:
    return lattice(kb, strategy).count_consistent()


def count_entailing(kb: KnowledgeBase, q: Formula, strategy: str = "auto") -> CountVector:
    return lattice(kb, strategy).count_entailing(q)


def entails_in_env(kb: KnowledgeBase, env: Iterable[int], q: Formula, backend: str = "dpll") -> bool:
    return sat.entails(context_generators(kb, env), q, backend=backend)
