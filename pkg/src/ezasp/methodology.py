"""Construct-order and defined-before-used checks.

The construct order is the seven-category sequence enforced by
``check_ordering``; ``check_stratification`` reduces stratification to a
textual rule: every predicate must be defined (somewhere) before it is
used, where predicates defined by other files of a configured multi-file
program count as defined before everything in this file.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    Category,
    Construct,
    E_UNDEFINED,
    Program,
    SourceSpan,
    W_ORDER,
    W_STRAT,
    classify,
    make_diagnostic,
)


@dataclass(frozen=True)
class Occurrence:
    file: str
    construct_index: int
    span: SourceSpan


@dataclass
class PredicateIndex:
    """Definition and usage locations per predicate name/arity."""

    definitions: dict = field(default_factory=dict)  # PredicateKey -> [Occurrence]
    usages: dict = field(default_factory=dict)  # PredicateKey -> [Occurrence]

    def add_construct(self, construct: Construct, index: int, file: str) -> None:
        for key, span in construct.defined_occurrences:
            self.definitions.setdefault(key, []).append(Occurrence(file, index, span))
        for key, span in construct.used_occurrences:
            self.usages.setdefault(key, []).append(Occurrence(file, index, span))

    def earliest_definition(self, key) -> int | None:
        occurrences = self.definitions.get(key)
        if not occurrences:
            return None
        return min(o.construct_index for o in occurrences)


def build_index(program: Program) -> PredicateIndex:
    index = PredicateIndex()
    for i, construct in enumerate(program.constructs):
        index.add_construct(construct, i, program.file)
    return index


def check_ordering(program: Program) -> list:
    """W-ORDER for every construct whose category precedes one already seen."""
    diagnostics = []
    max_seen: Category | None = None
    for construct in program.constructs:
        category = classify(construct)
        if max_seen is not None and category < max_seen:
            message = (
                f"a {category.display_name} must appear before all "
                f"{max_seen.display_name} constructs"
            )
            diagnostics.append(make_diagnostic(W_ORDER, construct.span, message, program.file))
        if max_seen is None or category > max_seen:
            max_seen = category
    return diagnostics


def check_stratification(program: Program, external: frozenset | set = frozenset()) -> list:
    """Defined-before-used check.

    Per usage: predicates defined in other configured files (``external``)
    never warn; a predicate with no definition in this file is an
    E-UNDEFINED error; one defined only later is a W-STRAT warning.  A
    construct that itself defines the predicate it uses is exempt.
    """
    index = build_index(program)
    diagnostics = []
    for i, construct in enumerate(program.constructs):
        for key, span in construct.used_occurrences:
            if key in external:
                continue
            earliest = index.earliest_definition(key)
            if earliest is None:
                message = f"'{key}' is used but never defined"
                diagnostics.append(make_diagnostic(E_UNDEFINED, span, message, program.file))
            elif earliest > i:
                message = f"'{key}' is used before it is defined"
                diagnostics.append(make_diagnostic(W_STRAT, span, message, program.file))
    return diagnostics
