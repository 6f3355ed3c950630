"""Satisfiability and classical entailment for finite formula sets.

Two backends answer the same questions:

* ``"dpll"`` (default): Tseitin encoding to CNF, then backtracking search
  with unit propagation. Original atoms are branched on first, in
  lexicographic order, so runs are reproducible.
* ``"truth-table"``: exhaustive enumeration of valuations. Used as the
  reference oracle; refuses more than ``TRUTH_TABLE_MAX_ATOMS`` atoms.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable

from .formula import (
    Atom,
    Conjunction,
    Disjunction,
    Equivalence,
    FalseConst,
    Formula,
    Implication,
    Negation,
    TrueConst,
    atoms_of,
    evaluate,
)

TRUTH_TABLE_MAX_ATOMS = 22
BACKENDS = ("dpll", "truth-table")


def is_satisfiable(fs: Iterable[Formula], backend: str = "dpll") -> bool:
    fs = list(fs)
    if backend == "dpll":
        return _dpll_satisfiable(fs)
    if backend == "truth-table":
        return truth_table_satisfiable(fs)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def entails(fs: Iterable[Formula], q: Formula, backend: str = "dpll") -> bool:
    return not is_satisfiable([*fs, Negation(q)], backend=backend)


# ---------------------------------------------------------------------------
# truth tables

def truth_table_satisfiable(fs: list[Formula]) -> bool:
    names = sorted(atoms_of(fs))
    if len(names) > TRUTH_TABLE_MAX_ATOMS:
        raise ValueError(f"truth table over {len(names)} atoms is too large")
    for bits in product((False, True), repeat=len(names)):
        v = dict(zip(names, bits))
        if all(evaluate(f, v) for f in fs):
            return True
    return False


# ---------------------------------------------------------------------------
# Tseitin + DPLL

class _Encoder:
    """Tseitin encoding into integer clauses (DIMACS-style literals)."""

    def __init__(self, names: list[str]):
        self.var = {name: i + 1 for i, name in enumerate(names)}
        self.next_var = len(names) + 1
        self.clauses: list[list[int]] = []
        self.cache: dict[Formula, int] = {}

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def lit(self, f: Formula) -> int:
        if isinstance(f, Atom):
            return self.var[f.name]
        if isinstance(f, Negation):
            return -self.lit(f.child)
        if f in self.cache:
            return self.cache[f]
        x = self.fresh()
        cl = self.clauses
        if isinstance(f, TrueConst):
            cl.append([x])
        elif isinstance(f, FalseConst):
            cl.append([-x])
        else:
            a = self.lit(f.left)
            b = self.lit(f.right)
            if isinstance(f, Conjunction):
                cl += [[-x, a], [-x, b], [x, -a, -b]]
            elif isinstance(f, Disjunction):
                cl += [[-x, a, b], [x, -a], [x, -b]]
            elif isinstance(f, Implication):
                cl += [[-x, -a, b], [x, a], [x, -b]]
            elif isinstance(f, Equivalence):
                cl += [[-x, -a, b], [-x, a, -b], [x, a, b], [x, -a, -b]]
            else:
                raise TypeError(f"not a formula: {f!r}")
        self.cache[f] = x
        return x

    def assert_formula(self, f: Formula) -> None:
        # top-level conjunctions split into separate roots
        if isinstance(f, Conjunction):
            self.assert_formula(f.left)
            self.assert_formula(f.right)
        elif isinstance(f, Disjunction):
            self.clauses.append([self.lit(f.left), self.lit(f.right)])
        else:
            self.clauses.append([self.lit(f)])


def to_cnf(fs: list[Formula]) -> tuple[list[list[int]], int, int]:
    """Return (clauses, number of original atoms, total variables)."""
    names = sorted(atoms_of(fs))
    enc = _Encoder(names)
    for f in fs:
        enc.assert_formula(f)
    return enc.clauses, len(names), enc.next_var - 1


def _dpll_satisfiable(fs: list[Formula]) -> bool:
    if not fs:
        return True
    clauses, _, nvars = to_cnf(fs)
    return dpll(clauses, nvars)


def dpll(clauses: list[list[int]], nvars: int) -> bool:
    """Decide a CNF over variables 1..nvars. Branches on the lowest free variable."""
    assign = [0] * (nvars + 1)
    occurs: list[list[int]] = [[] for _ in range(2 * nvars + 2)]
    clauses = [sorted(set(c)) for c in clauses]
    for ci, c in enumerate(clauses):
        if not c:
            return False
        if any(-l in c for l in c):
            continue
        for l in c:
            occurs[_slot(l)].append(ci)
    trail: list[int] = []

    def value(l: int) -> int:
        a = assign[abs(l)]
        return a if l > 0 else -a

    def propagate(queue: list[int]) -> bool:
        while queue:
            l = queue.pop()
            v = value(l)
            if v == 1:
                continue
            if v == -1:
                return False
            assign[abs(l)] = 1 if l > 0 else -1
            trail.append(abs(l))
            for ci in occurs[_slot(-l)]:
                unassigned = None
                n_free = 0
                sat = False
                for m in clauses[ci]:
                    vm = value(m)
                    if vm == 1:
                        sat = True
                        break
                    if vm == 0:
                        n_free += 1
                        unassigned = m
                        if n_free > 1:
                            break
                if sat or n_free > 1:
                    continue
                if n_free == 0:
                    return False
                queue.append(unassigned)
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            assign[trail.pop()] = 0

    units = [c[0] for c in clauses if len(c) == 1]
    if not propagate(units):
        return False

    def search() -> bool:
        var = next((v for v in range(1, nvars + 1) if assign[v] == 0), None)
        if var is None:
            return all(any(value(l) == 1 for l in c) for c in clauses)
        for lit in (var, -var):
            mark = len(trail)
            if propagate([lit]) and search():
                return True
            undo(mark)
        return False

    return search()


def _slot(l: int) -> int:
    return 2 * l if l > 0 else -2 * l + 1
