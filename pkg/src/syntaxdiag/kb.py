"""Knowledge bases: hard facts plus a labelled multiset of defaults.

File format (UTF-8, line oriented, ``#`` starts a comment)::

    facts:
    a
    defaults:
    a -> b & e & f
    defaults[2]:
    ~b | ~d

``defaults:`` is shorthand for ``defaults[1]:``. Level 1 is the most
important level. Level headers may appear in any order but each level at
most once, and the levels used must be exactly 1..m.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from . import sat
from .formula import Formula, FormulaSyntaxError, parse_formula, to_text


class FactsInconsistentError(ValueError):
    """The hard facts are unsatisfiable, so no environment is consistent."""


class KBSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class KnowledgeBase:
    """``facts`` are never retracted; ``defaults[i]`` is labelled by assumption ``i``.

    ``levels[i]`` is the priority level of default ``i`` (1 = most important).
    A KB without explicit levels has every default on level 1.
    """

    facts: tuple[Formula, ...] = ()
    defaults: tuple[Formula, ...] = ()
    levels: tuple[int, ...] | None = None
    prioritized: bool = field(default=False)

    def __post_init__(self):
        object.__setattr__(self, "facts", tuple(self.facts))
        object.__setattr__(self, "defaults", tuple(self.defaults))
        if self.levels is None:
            object.__setattr__(self, "levels", (1,) * len(self.defaults))
        else:
            levels = tuple(self.levels)
            if len(levels) != len(self.defaults):
                raise ValueError("levels must assign a level to every default")
            used = sorted(set(levels))
            if used and used != list(range(1, used[-1] + 1)):
                raise ValueError(f"levels must be contiguous from 1, got {used}")
            object.__setattr__(self, "levels", levels)

    @property
    def n(self) -> int:
        return len(self.defaults)

    @property
    def num_levels(self) -> int:
        return max(self.levels, default=1)

    def level_members(self, level: int) -> list[int]:
        return [i for i, lv in enumerate(self.levels) if lv == level]

    def default(self, i: int) -> Formula:
        return self.defaults[i]

    def formulas(self) -> tuple[Formula, ...]:
        return self.facts + self.defaults


def make_kb(facts: Iterable[Formula | str] = (), defaults: Iterable[Formula | str] = (),
            levels: Iterable[int] | None = None) -> KnowledgeBase:
    """Build a KB, parsing any string entries."""
    def conv(fs):
        return tuple(parse_formula(f) if isinstance(f, str) else f for f in fs)

    lv = None if levels is None else tuple(levels)
    return KnowledgeBase(conv(facts), conv(defaults), lv, prioritized=lv is not None)


def add_evidence(kb: KnowledgeBase, phi: Formula) -> KnowledgeBase:
    """Return ``kb`` with ``phi`` appended to the hard facts."""
    return replace(kb, facts=kb.facts + (phi,))


def load_kb(text: str) -> KnowledgeBase:
    facts: list[Formula] = []
    defaults: list[Formula] = []
    levels: list[int] = []
    section: str | None = None
    level = 0
    seen_levels: set[int] = set()
    explicit = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "facts:":
            section = "facts"
            continue
        if line.startswith("defaults") and line.endswith(":"):
            head = line[len("defaults"):-1].strip()
            if head == "":
                level = 1
            elif head.startswith("[") and head.endswith("]") and head[1:-1].strip().isdigit():
                level = int(head[1:-1])
                explicit = True
                if level < 1:
                    raise KBSyntaxError("level must be >= 1", lineno)
            else:
                raise KBSyntaxError(f"bad section header {line!r}", lineno)
            if level in seen_levels:
                raise KBSyntaxError(f"duplicate header for level {level}", lineno)
            seen_levels.add(level)
            section = "defaults"
            continue
        if section is None:
            raise KBSyntaxError("formula outside of a 'facts:' or 'defaults:' section", lineno)
        try:
            f = parse_formula(line)
        except FormulaSyntaxError as e:
            raise KBSyntaxError(str(e), lineno) from e
        if section == "facts":
            facts.append(f)
        else:
            defaults.append(f)
            levels.append(level)
    if seen_levels and sorted(seen_levels) != list(range(1, max(seen_levels) + 1)):
        raise KBSyntaxError(f"priority levels must be 1..m without gaps, got {sorted(seen_levels)}",
                            lineno if text else 0)
    if not explicit:
        return KnowledgeBase(tuple(facts), tuple(defaults))
    return KnowledgeBase(tuple(facts), tuple(defaults), tuple(levels), prioritized=True)


def dump_kb(kb: KnowledgeBase) -> str:
    lines = ["facts:"]
    lines += [to_text(f) for f in kb.facts]
    if not kb.prioritized:
        lines.append("defaults:")
        lines += [to_text(f) for f in kb.defaults]
    else:
        runs: list[tuple[int, list[int]]] = []
        for i, lv in enumerate(kb.levels):
            if runs and runs[-1][0] == lv:
                runs[-1][1].append(i)
            else:
                runs.append((lv, [i]))
        if len({lv for lv, _ in runs}) != len(runs):
            # interleaved levels cannot keep declaration order; group them instead
            runs = [(lv, kb.level_members(lv)) for lv in range(1, kb.num_levels + 1)]
        for level, members in runs:
            lines.append(f"defaults[{level}]:")
            lines += [to_text(kb.defaults[i]) for i in members]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ValidationReport:
    facts_satisfiable: bool
    kb_satisfiable: bool
    n: int
    level_sizes: tuple[int, ...]

    def lines(self) -> list[str]:
        return [
            f"facts satisfiable: {'yes' if self.facts_satisfiable else 'no'}",
            f"facts+defaults satisfiable: {'yes' if self.kb_satisfiable else 'no'}",
            f"defaults: {self.n}",
            "levels: " + " ".join(f"{i + 1}:{s}" for i, s in enumerate(self.level_sizes)),
        ]


def validate(kb: KnowledgeBase, backend: str = "dpll") -> ValidationReport:
    sizes = tuple(len(kb.level_members(lv)) for lv in range(1, kb.num_levels + 1)) if kb.n else ()
    return ValidationReport(
        facts_satisfiable=sat.is_satisfiable(kb.facts, backend=backend),
        kb_satisfiable=sat.is_satisfiable(kb.formulas(), backend=backend),
        n=kb.n,
        level_sizes=sizes,
    )
