"""Seeded random formulas and knowledge bases for property sweeps."""

from __future__ import annotations

import random
from itertools import product

from . import sat
from .formula import (
    Atom,
    Conjunction,
    Disjunction,
    Equivalence,
    Formula,
    Implication,
    Negation,
    evaluate,
)
from .kb import KnowledgeBase

ATOM_NAMES = ("a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p")


def random_formula(rng: random.Random, names: list[str], depth: int = 2) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        f: Formula = Atom(rng.choice(names))
        return Negation(f) if rng.random() < 0.4 else f
    r = rng.random()
    if r < 0.12:
        return Negation(random_formula(rng, names, depth - 1))
    node = (Conjunction if r < 0.5 else Disjunction if r < 0.8 else Implication if r < 0.95 else Equivalence)
    return node(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def random_kb(rng: random.Random, max_defaults: int = 6, max_atoms: int = 5,
              min_defaults: int = 1, fact_prob: float = 0.3, levels: int = 1) -> KnowledgeBase:
    """Random KB whose facts are satisfiable.

    With ``levels > 1`` every default is put on a random level and each of
    the ``levels`` levels is used at least once (if there are enough defaults).
    """
    names = list(ATOM_NAMES[:rng.randint(2, max_atoms) if max_atoms >= 2 else 1])
    n = rng.randint(min_defaults, max_defaults)
    while True:
        facts = tuple(random_formula(rng, names, 1) for _ in range(1 if rng.random() < fact_prob else 0))
        if sat.is_satisfiable(facts):
            break
    defaults = tuple(random_formula(rng, names, rng.randint(0, 2)) for _ in range(n))
    if levels <= 1 or n == 0:
        return KnowledgeBase(facts, defaults)
    m = min(levels, n)
    lv = [rng.randint(1, m) for _ in range(n)]
    for want, pos in zip(range(1, m + 1), rng.sample(range(n), m)):
        lv[pos] = want
    return KnowledgeBase(facts, defaults, tuple(lv), prioritized=True)


def random_consistent_kb(rng: random.Random, max_defaults: int = 6, max_atoms: int = 5) -> KnowledgeBase:
    """Random KB all of whose formulas hold in one hidden valuation."""
    names = list(ATOM_NAMES[:rng.randint(2, max_atoms)])
    world = {name: rng.random() < 0.5 for name in names}

    def true_formula(depth):
        while True:
            f = random_formula(rng, names, depth)
            if evaluate(f, world):
                return f

    n = rng.randint(1, max_defaults)
    facts = tuple(true_formula(1) for _ in range(1 if rng.random() < 0.3 else 0))
    defaults = tuple(true_formula(rng.randint(0, 2)) for _ in range(n))
    return KnowledgeBase(facts, defaults)


def corpus(seed: int, count: int, max_defaults: int = 6, max_atoms: int = 5, levels: int = 1) -> list[KnowledgeBase]:
    rng = random.Random(seed)
    return [random_kb(rng, max_defaults, max_atoms, levels=levels) for _ in range(count)]


def consistent_corpus(seed: int, count: int, max_defaults: int = 6, max_atoms: int = 5) -> list[KnowledgeBase]:
    rng = random.Random(seed)
    return [random_consistent_kb(rng, max_defaults, max_atoms) for _ in range(count)]


def all_valuations(names: list[str]):
    for bits in product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))
