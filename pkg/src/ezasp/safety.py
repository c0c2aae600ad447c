"""Unsafe-variable detection for parsed constructs.

A variable is safe when the grounder can bind it to a finite set of
values.  Per rule we collect every variable occurrence, seed a grounded
set from the occurrences that bind (positive body atoms, one-sided
equalities, choice-condition occurrences), link the two sides of
two-sided comparisons, and close the grounded set under those links.
Choice elements get their own context: a variable may be safe inside its
element even if unbound elsewhere, and condition bindings also ground the
same name in the rest of the rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    Arithmetic,
    Comparison,
    ConstantDecl,
    Construct,
    Diagnostic,
    E_UNSAFE,
    Literal,
    OptimizeStatement,
    RuleLike,
    ShowStatement,
    SourceSpan,
    Variable,
    WeakConstraint,
    make_diagnostic,
)

# Comparators that bind a one-sided comparison, by syntactic position.
# Negation flips the comparator first, so "not X != 1" binds in a body.
BODY_GROUNDING_OPS = ("=", "==")
HEAD_GROUNDING_OPS = ("!=",)

_FLIPPED = {"=": "!=", "==": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}


@dataclass(frozen=True)
class ContextReport:
    context_variables: frozenset
    context_grounded: frozenset
    context_linked: tuple  # of (frozenset, frozenset)


@dataclass(frozen=True)
class SafetyReport:
    total_variables: frozenset
    grounded_variables: frozenset
    linked_variables: tuple  # of (frozenset, frozenset)
    contexts: tuple  # of ContextReport
    unsafe: tuple  # of (variable id, occurrence spans) in document order

    @property
    def unsafe_names(self) -> frozenset:
        return frozenset(name for name, _ in self.unsafe)

    @property
    def is_safe(self) -> bool:
        return not self.unsafe


def term_variables(term) -> list:
    """All Variable nodes inside a term, in source order."""
    if isinstance(term, Variable):
        return [term]
    if isinstance(term, Arithmetic):
        return term_variables(term.left) + term_variables(term.right)
    if hasattr(term, "args"):  # Function
        found = []
        for arg in term.args:
            found.extend(term_variables(arg))
        return found
    return []


def propagate_links(grounded: set, links) -> set:
    """Least fixpoint of the linked-set rule.

    For any pair (A, B): once every variable of one side is grounded, the
    whole other side is grounded too.  Terminates because the set only
    grows inside a finite universe.
    """
    result = set(grounded)
    changed = True
    while changed:
        changed = False
        for side_a, side_b in links:
            if side_a and side_a <= result and not side_b <= result:
                result |= side_b
                changed = True
            if side_b and side_b <= result and not side_a <= result:
                result |= side_a
                changed = True
    return result


@dataclass
class _Scope:
    occurrences: list = field(default_factory=list)  # Variable nodes, source order
    grounded_seeds: set = field(default_factory=set)
    links: list = field(default_factory=list)

    def names(self) -> set:
        return {v.name for v in self.occurrences}

    def add_occurrences(self, variables) -> None:
        self.occurrences.extend(variables)

    def add_comparison(self, literal: Literal, grounding_ops) -> None:
        comparison = literal.body
        op = _FLIPPED[comparison.op] if literal.negated else comparison.op
        left = term_variables(comparison.left)
        right = term_variables(comparison.right)
        self.add_occurrences(left)
        self.add_occurrences(right)
        if op not in grounding_ops:
            return
        left_names = {v.name for v in left}
        right_names = {v.name for v in right}
        if left_names and right_names:
            self.links.append((frozenset(left_names), frozenset(right_names)))
        elif left_names or right_names:
            self.grounded_seeds |= left_names | right_names

    def add_body_literal(self, literal: Literal) -> None:
        if isinstance(literal.body, Comparison):
            self.add_comparison(literal, BODY_GROUNDING_OPS)
            return
        variables = [v for arg in literal.body.args for v in term_variables(arg)]
        self.add_occurrences(variables)
        if not literal.negated:
            self.grounded_seeds |= {v.name for v in variables}


def analyze_safety(construct: Construct) -> SafetyReport:
    """Compute the per-rule safety verdict and attach it to the construct.

    Choice elements (and optimization elements) are analyzed as contexts:
    their condition bindings count inside the element and also ground the
    same variable names at rule level, while link-derived groundings stay
    local to the element.
    """
    kind = construct.kind
    rule = _Scope()
    contexts: list = []

    if isinstance(kind, RuleLike):
        for atom in kind.head_atoms:
            rule.add_occurrences([v for arg in atom.args for v in term_variables(arg)])
        if kind.choice is not None:
            for bound in (kind.choice.lower, kind.choice.upper):
                if bound is not None:
                    rule.add_occurrences(term_variables(bound))
            for element in kind.choice.elements:
                contexts.append(_element_scope(element.head.args, element.condition))
        for literal in kind.body:
            rule.add_body_literal(literal)
    elif isinstance(kind, WeakConstraint):
        for literal in kind.body:
            rule.add_body_literal(literal)
        for term in (kind.weight, kind.priority, *kind.terms):
            if term is not None:
                rule.add_occurrences(term_variables(term))
    elif isinstance(kind, OptimizeStatement):
        for element in kind.elements:
            tuple_terms = [t for t in (element.weight, element.priority, *element.terms) if t is not None]
            tuple_vars = [v for t in tuple_terms for v in term_variables(t)]
            contexts.append(_element_scope_from_vars(tuple_vars, element.condition))
    elif isinstance(kind, (ConstantDecl, ShowStatement)):
        pass
    else:
        raise TypeError(f"unknown construct kind: {kind!r}")

    # Condition bindings leak to rule level: an occurrence that grounds
    # inside an element also grounds the same name in the rest of the rule.
    global_seeds = set(rule.grounded_seeds)
    for scope in contexts:
        global_seeds |= scope.grounded_seeds
    global_grounded = propagate_links(global_seeds, rule.links)

    context_reports = []
    unsafe_occurrences: list = []
    for scope in contexts:
        grounded = propagate_links(scope.grounded_seeds | global_grounded, scope.links)
        context_reports.append(
            ContextReport(frozenset(scope.names()), frozenset(grounded), tuple(scope.links))
        )
        unsafe_occurrences.extend(v for v in scope.occurrences if v.name not in grounded)
    unsafe_occurrences.extend(v for v in rule.occurrences if v.name not in global_grounded)

    all_occurrences = list(rule.occurrences)
    for scope in contexts:
        all_occurrences.extend(scope.occurrences)

    unsafe = _group_unsafe(unsafe_occurrences)
    report = SafetyReport(
        total_variables=frozenset(v.name for v in all_occurrences),
        grounded_variables=frozenset(global_grounded) & frozenset(v.name for v in all_occurrences),
        linked_variables=tuple(rule.links),
        contexts=tuple(context_reports),
        unsafe=unsafe,
    )
    construct.var_report = report
    return report


def _element_scope(head_args, condition) -> _Scope:
    head_vars = [v for arg in head_args for v in term_variables(arg)]
    return _element_scope_from_vars(head_vars, condition)


def _element_scope_from_vars(local_vars, condition) -> _Scope:
    scope = _Scope()
    scope.add_occurrences(local_vars)
    for literal in condition:
        scope.add_body_literal(literal)
    return scope


def _span_key(span: SourceSpan):
    return (span.start.line, span.start.column)


def _group_unsafe(occurrences) -> tuple:
    by_name: dict = {}
    for var in occurrences:
        by_name.setdefault(var.name, []).append(var)
    grouped = []
    for name, variables in by_name.items():
        spans = tuple(sorted((v.span for v in variables), key=_span_key))
        grouped.append((name, spans))
    grouped.sort(key=lambda item: _span_key(item[1][0]))
    return tuple(grouped)


def unsafe_diagnostic(construct: Construct, file: str) -> Diagnostic | None:
    """One E-UNSAFE per construct, anchored at the first unsafe occurrence
    and naming every unsafe variable."""
    report = construct.var_report
    if report is None:
        report = analyze_safety(construct)
    if report.is_safe:
        return None
    names = []
    for name, _ in report.unsafe:
        display = "_" if name.startswith("_#") else name
        if display not in names:
            names.append(display)
    first_span = report.unsafe[0][1][0]
    message = f"unsafe variables: {', '.join(names)}"
    return make_diagnostic(E_UNSAFE, first_span, message, file)
