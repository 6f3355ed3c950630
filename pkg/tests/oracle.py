"""Brute-force reference computations.

Everything here enumerates subsets with itertools and valuations with truth
tables. Nothing touches the lattice, polynomial or relation code under test.
Probabilities are evaluated exactly at a rational e with Fractions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

from syntaxdiag.formula import Negation, atoms_of, evaluate


def models(fs, names=None):
    names = sorted(set(names or ()) | atoms_of(fs))
    for bits in product((False, True), repeat=len(names)):
        v = dict(zip(names, bits))
        if all(evaluate(f, v) for f in fs):
            yield v


def satisfiable(fs) -> bool:
    return next(models(list(fs)), None) is not None


def entails(fs, q) -> bool:
    return not satisfiable(list(fs) + [Negation(q)])


def subsets(n):
    for k in range(n + 1):
        for c in combinations(range(n), k):
            yield frozenset(c)


def generators(kb, env):
    return list(kb.facts) + [kb.defaults[i] for i in sorted(env)]


class Brute:
    """All environments of a KB, classified by exhaustive enumeration."""

    def __init__(self, kb):
        self.kb = kb
        self.n = kb.n
        self.consistent = [e for e in subsets(kb.n) if satisfiable(generators(kb, e))]
        cset = set(self.consistent)
        self.irredundant = [e for e in self.consistent
                            if not any(e | {i} in cset for i in range(kb.n) if i not in e)]
        self.k = max((len(e) for e in self.consistent), default=None)
        self.maxcard = [e for e in self.consistent if len(e) == self.k]
        self._ent = {}

    def entails(self, env, q) -> bool:
        key = (env, q)
        if key not in self._ent:
            self._ent[key] = entails(generators(self.kb, env), q)
        return self._ent[key]

    def counts(self):
        c = [0] * (self.n + 1)
        for e in self.consistent:
            c[len(e)] += 1
        return c

    def counts_entailing(self, q):
        c = [0] * (self.n + 1)
        for e in self.consistent:
            if self.entails(e, q):
                c[len(e)] += 1
        return c

    # exact probabilities at a rational point
    def prior(self, env, eps: Fraction) -> Fraction:
        return eps ** (self.n - len(env)) * (1 - eps) ** len(env)

    def p_consistent(self, eps):
        return sum(self.prior(e, eps) for e in self.consistent)

    def bel(self, q, eps: Fraction) -> Fraction:
        return sum(self.prior(e, eps) for e in self.consistent if self.entails(e, q)) / self.p_consistent(eps)

    def fault(self, a, eps):
        return sum(self.prior(e, eps) for e in self.consistent if a not in e) / self.p_consistent(eps)

    # scenario characterizations, straight from the environment sets
    def k_of(self, q):
        ks = [len(e) for e in self.consistent if self.entails(e, q)]
        return max(ks) if ks else -math.inf

    def u(self, k, q):
        return sum(1 for e in self.consistent if len(e) == k and self.entails(e, q))

    def relation(self, r: int, q) -> bool:
        nq = Negation(q)
        p = len(self.maxcard)
        mq = sum(self.entails(e, q) for e in self.maxcard)
        mn = sum(self.entails(e, nq) for e in self.maxcard)
        anyq = any(self.entails(e, q) for e in self.consistent)
        anyn = any(self.entails(e, nq) for e in self.consistent)
        if r == 1:
            return mq == p
        if r == 2:
            return mq > 0
        if r == 3:
            return mq > 0 and mn == 0
        if r == 4:
            return anyq
        if r == 5:
            return anyq and not anyn
        if r == 6:
            return 2 * mq > p
        if r == 7:
            for k in range(self.n, -1, -1):
                a, b = self.u(k, q), self.u(k, nq)
                if a != b:
                    return a > b
            return False
        if r == 8:
            return self.k_of(q) > self.k_of(nq)
        if r == 9:
            return entails(self.kb.facts, q)
        raise ValueError(r)
