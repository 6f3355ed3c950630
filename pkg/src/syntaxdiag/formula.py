"""Propositional formulas: AST, parser, printer and evaluation.

Concrete syntax (tightest binding first)::

    ~   negation
    &   conjunction
    |   disjunction
    ->  implication (right-associative)
    <-> equivalence

``true`` and ``false`` are the constants; atoms match ``[A-Za-z_][A-Za-z0-9_]*``.
Binary chains of ``&``, ``|`` and ``<->`` are nested to the right, so
``b & e & f`` parses as ``Conjunction(b, Conjunction(e, f))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union


class FormulaSyntaxError(ValueError):
    """Malformed formula text. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class MissingAtomError(KeyError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not _ATOM_RE.fullmatch(self.name) or self.name in _KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Negation:
    child: "Formula"


@dataclass(frozen=True)
class Conjunction:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Disjunction:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implication:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Equivalence:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class FalseConst:
    pass


Formula = Union[
    Atom, Negation, Conjunction, Disjunction, Implication, Equivalence, TrueConst, FalseConst
]

TOP = TrueConst()
BOTTOM = FalseConst()

_BINARY = (Conjunction, Disjunction, Implication, Equivalence)
_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = frozenset({"true", "false"})


def neg(f: Formula) -> Formula:
    return Negation(f)


def conj(*fs: Formula) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``true``."""
    if not fs:
        return TOP
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Conjunction(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return BOTTOM
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Disjunction(f, out)
    return out


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(<->)|(->)|([~&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", text, start)
        tok = next(g for g in m.groups() if g is not None)
        tokens.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def position(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", self.text, self.position())
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, got {tok!r}", self.text, self.position())
        self.i += 1
        return tok

    def parse(self) -> Formula:
        if not self.tokens:
            raise FormulaSyntaxError("empty formula", self.text, 0)
        f = self.equiv()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.text, self.position())
        return f

    def _chain(self, op: str, sub, node):
        items = [sub()]
        while self.peek() == op:
            self.take()
            items.append(sub())
        out = items[-1]
        for f in reversed(items[:-1]):
            out = node(f, out)
        return out

    def equiv(self) -> Formula:
        return self._chain("<->", self.impl, Equivalence)

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implication(left, self.impl())
        return left

    def disj(self) -> Formula:
        return self._chain("|", self.conj, Disjunction)

    def conj(self) -> Formula:
        return self._chain("&", self.unary, Conjunction)

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Negation(self.unary())
        if tok == "(":
            self.take()
            f = self.equiv()
            self.take(")")
            return f
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", self.text, self.position())
        if tok == "true":
            self.take()
            return TOP
        if tok == "false":
            self.take()
            return BOTTOM
        if _ATOM_RE.fullmatch(tok):
            self.take()
            return Atom(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", self.text, self.position())


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula tree.

    >>> parse_formula("~b | ~d")
    Disjunction(left=Negation(child=Atom(name='b')), right=Negation(child=Atom(name='d')))
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {Equivalence: 1, Implication: 2, Disjunction: 3, Conjunction: 4}
_SYMBOL = {Equivalence: "<->", Implication: "->", Disjunction: "|", Conjunction: "&"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def to_text(f: Formula) -> str:
    """Render ``f`` in the concrete syntax with minimal parentheses."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, Negation):
        inner = to_text(f.child)
        return "~" + (inner if _prec(f.child) == 5 else f"({inner})")
    p = _prec(f)
    # every binary chain nests to the right, so a same-level left child needs parens
    left = to_text(f.left)
    if _prec(f.left) <= p:
        left = f"({left})"
    right = to_text(f.right)
    if _prec(f.right) < p:
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


# ---------------------------------------------------------------------------
# semantics

def atoms(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Negation):
            stack.append(g.child)
        elif isinstance(g, _BINARY):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def atoms_of(fs) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for f in fs:
        out |= atoms(f)
    return out


def evaluate(f: Formula, v: Mapping[str, bool]) -> bool:
    """Truth value of ``f`` under the valuation ``v``.

    Raises MissingAtomError if ``v`` does not cover an atom of ``f``.
    """
    if isinstance(f, Atom):
        try:
            return bool(v[f.name])
        except KeyError:
            raise MissingAtomError(f.name) from None
    if isinstance(f, TrueConst):
        return True
    if isinstance(f, FalseConst):
        return False
    if isinstance(f, Negation):
        return not evaluate(f.child, v)
    if isinstance(f, Conjunction):
        return evaluate(f.left, v) and evaluate(f.right, v)
    if isinstance(f, Disjunction):
        return evaluate(f.left, v) or evaluate(f.right, v)
    if isinstance(f, Implication):
        return (not evaluate(f.left, v)) or evaluate(f.right, v)
    if isinstance(f, Equivalence):
        return evaluate(f.left, v) == evaluate(f.right, v)
    raise TypeError(f"not a formula: {f!r}")


def evaluate_columns(f: Formula, columns: Mapping[str, "object"], size: int):
    """Vectorised evaluation over numpy boolean columns, one column per atom."""
    import numpy as np

    if isinstance(f, Atom):
        try:
            return columns[f.name]
        except KeyError:
            raise MissingAtomError(f.name) from None
    if isinstance(f, TrueConst):
        return np.ones(size, dtype=bool)
    if isinstance(f, FalseConst):
        return np.zeros(size, dtype=bool)
    if isinstance(f, Negation):
        return ~evaluate_columns(f.child, columns, size)
    left = evaluate_columns(f.left, columns, size)
    right = evaluate_columns(f.right, columns, size)
    if isinstance(f, Conjunction):
        return left & right
    if isinstance(f, Disjunction):
        return left | right
    if isinstance(f, Implication):
        return ~left | right
    if isinstance(f, Equivalence):
        return left == right
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Negation):
        yield from subformulas(f.child)
    elif isinstance(f, _BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
