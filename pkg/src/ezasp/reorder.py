"""Automatic program reordering.

Four phases: partition the source into comment-carrying blocks, group the
blocks by construct category, topologically sort the sections whose
constructs both define and use predicates (facts, choice rules,
definitions), and re-emit the block texts with one blank line between
blocks.  Dependency cycles cannot be fixed by reordering; the involved
blocks keep their original relative order and a W-CYCLE warning is
attached.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .methodology import PredicateIndex, build_index
from .syntax import (
    CRITICAL_CATEGORIES,
    Category,
    Construct,
    Program,
    SourcePos,
    SourceSpan,
    W_CYCLE,
    classify,
    make_diagnostic,
    slice_span,
)


class RefusedOnSyntaxError(Exception):
    """Reordering is refused while the program has syntax errors."""


@dataclass
class Block:
    """A construct plus the comments that travel with it.

    ``construct`` is None only for the trailing comment block that owns
    comments after the final construct; it is always emitted last.
    """

    construct: Optional[Construct]
    extended_span: SourceSpan
    text: str
    doc_index: int

    @property
    def category(self) -> Optional[Category]:
        return classify(self.construct) if self.construct is not None else None


def _pos_tuple(pos: SourcePos):
    return (pos.line, pos.column)


def partition_blocks(program: Program) -> list:
    """Split the program into reorderable blocks.

    Each construct's span widens upward over the comments between it and
    the previous construct (leading file comments go to the first block)
    and downward over comments starting on its last line.  Comments after
    the final construct form a trailing block of their own.
    """
    if program.syntax_errors:
        raise RefusedOnSyntaxError(
            f"{program.file}: cannot reorder a program with syntax errors"
        )
    comments = sorted(program.comments, key=lambda c: _pos_tuple(c.span.start))
    blocks: list = []
    claimed = 0
    for doc_index, construct in enumerate(program.constructs):
        start = construct.span.start
        end = construct.span.end
        following = (
            program.constructs[doc_index + 1].span.start
            if doc_index + 1 < len(program.constructs)
            else None
        )
        while claimed < len(comments) and _pos_tuple(comments[claimed].span.start) < _pos_tuple(
            construct.span.start
        ):
            if _pos_tuple(comments[claimed].span.start) < _pos_tuple(start):
                start = comments[claimed].span.start
            claimed += 1
        # trailing comments: on the construct's last line, but still ahead of
        # any construct that shares that line
        while (
            claimed < len(comments)
            and comments[claimed].span.start.line == construct.span.end.line
            and (following is None or _pos_tuple(comments[claimed].span.start) < _pos_tuple(following))
        ):
            end = comments[claimed].span.end
            claimed += 1
        span = SourceSpan(start, end)
        blocks.append(Block(construct, span, slice_span(program.source, span), doc_index))
    if claimed < len(comments):
        span = SourceSpan(comments[claimed].span.start, comments[-1].span.end)
        blocks.append(Block(None, span, slice_span(program.source, span), len(program.constructs)))
    return blocks


def group_by_category(blocks) -> dict:
    """Stable partition of construct blocks into the seven category groups."""
    groups: dict = {category: [] for category in Category}
    for block in blocks:
        if block.construct is not None:
            groups[block.category].append(block)
    return groups


def _section_edges(section, index: PredicateIndex) -> dict:
    """Dependency edges within one section: user block -> definer blocks."""
    section_indices = {block.doc_index for block in section}
    by_doc = {block.doc_index: block for block in section}
    edges: dict = {block.doc_index: [] for block in section}
    for block in section:
        targets = []
        for key in sorted(block.construct.uses, key=lambda k: (k.name, k.arity)):
            for occurrence in index.definitions.get(key, ()):  # definers before users
                definer = occurrence.construct_index
                if definer != block.doc_index and definer in section_indices:
                    targets.append(definer)
        edges[block.doc_index] = sorted(set(targets), key=lambda d: by_doc[d].doc_index)
    return edges


def _strongly_connected_components(nodes, edges) -> list:
    """Tarjan's algorithm, iterative; components come out in discovery order."""
    index_of: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    components: list = []
    counter = [0]

    def visit(root):
        work = [(root, iter(edges[root]))]
        index_of[root] = lowlink[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index_of:
                    index_of[succ] = lowlink[succ] = counter[0]
                    counter[0] += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(edges[succ])))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index_of[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index_of[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(sorted(component))

    for node in nodes:
        if node not in index_of:
            visit(node)
    return components


def sort_section(section, index: PredicateIndex, file: str = ""):
    """Topologically sort one critical section's blocks.

    Definers come before users.  The depth-first search walks blocks in
    document order and explores each block's dependencies in document
    order, so independent blocks keep their original relative order and
    the result is deterministic.  Blocks on a dependency cycle keep their
    original relative order and contribute one W-CYCLE diagnostic.

    Returns (sorted blocks, diagnostics).
    """
    if len(section) <= 1:
        return list(section), []
    edges = _section_edges(section, index)
    nodes = [block.doc_index for block in section]
    components = _strongly_connected_components(nodes, edges)
    component_of = {}
    for scc_id, members in enumerate(components):
        for member in members:
            component_of[member] = scc_id
    scc_rank = {scc_id: min(members) for scc_id, members in enumerate(components)}
    scc_edges: dict = {scc_id: [] for scc_id in range(len(components))}
    for node, targets in edges.items():
        for target in targets:
            a, b = component_of[node], component_of[target]
            if a != b and b not in scc_edges[a]:
                scc_edges[a].append(b)
    for scc_id in scc_edges:
        scc_edges[scc_id].sort(key=lambda s: scc_rank[s])

    emitted: list = []
    visited: set = set()

    def emit(scc_id):
        if scc_id in visited:
            return
        visited.add(scc_id)
        for dep in scc_edges[scc_id]:
            emit(dep)
        emitted.append(scc_id)

    for scc_id in sorted(scc_edges, key=lambda s: scc_rank[s]):
        emit(scc_id)

    by_doc = {block.doc_index: block for block in section}
    ordered: list = []
    diagnostics: list = []
    for scc_id in emitted:
        members = components[scc_id]
        ordered.extend(by_doc[m] for m in members)
        if len(members) > 1:
            first = by_doc[members[0]].construct
            involved = sorted(
                {str(key) for m in members for key in by_doc[m].construct.defines}
            )
            message = (
                "circular dependency among "
                f"{len(members)} constructs ({', '.join(involved)}) "
                "cannot be resolved by reordering"
            )
            diagnostics.append(make_diagnostic(W_CYCLE, first.span, message, file))
    return ordered, diagnostics


def reorder_program(program: Program, index: Optional[PredicateIndex] = None):
    """Rewrite the program into category order with stratified sections.

    Returns (new source text, diagnostics).  The multiset of block texts
    is preserved exactly; blocks are joined by one blank line and the
    output ends with a single newline.  Raises RefusedOnSyntaxError when
    the program has syntax errors.
    """
    if index is None:
        index = build_index(program)
    blocks = partition_blocks(program)
    if not blocks:
        return program.source, []
    trailing = [b for b in blocks if b.construct is None]
    groups = group_by_category(blocks)
    diagnostics: list = []
    ordered: list = []
    for category in Category:
        section = groups[category]
        if category in CRITICAL_CATEGORIES and len(section) > 1:
            section, cycle_diags = sort_section(section, index, program.file)
            diagnostics.extend(cycle_diags)
        ordered.extend(section)
    ordered.extend(trailing)
    new_source = "\n\n".join(block.text for block in ordered) + "\n"
    return new_source, diagnostics
