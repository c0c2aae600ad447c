import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genprograms import program_sources
from ezasp.syntax import (
    Category,
    ChoiceHead,
    ConstantDecl,
    E_SYNTAX,
    OptimizeStatement,
    PredicateKey,
    RuleLike,
    ShowStatement,
    SourcePos,
    SourceSpan,
    WeakConstraint,
    classify,
    compute_underline_span,
    parse_program,
    slice_span,
    span_visible_length,
)


def single(source):
    program = parse_program(source)
    assert not program.syntax_errors, program.syntax_errors
    assert len(program.constructs) == 1
    return program.constructs[0]


class TestParsing:
    def test_simple_fact(self):
        construct = single("p(1..3).")
        assert isinstance(construct.kind, RuleLike)
        assert construct.kind.body == ()
        assert construct.defines == {PredicateKey("p", 1)}
        assert construct.uses == frozenset()

    def test_zero_arity_atoms(self):
        construct = single("a :- b, not c.")
        assert construct.defines == {PredicateKey("a", 0)}
        assert construct.uses == {PredicateKey("b", 0), PredicateKey("c", 0)}

    def test_constraint_has_empty_head(self):
        construct = single(":- edge(X,X).")
        assert isinstance(construct.kind, RuleLike)
        assert construct.kind.head_atoms == ()
        assert construct.uses == {PredicateKey("edge", 2)}

    def test_choice_rule_with_bounds_and_condition(self):
        construct = single("1 { in(X) : node(X) } 3 :- start.")
        choice = construct.kind.choice
        assert isinstance(choice, ChoiceHead)
        assert choice.lower is not None and choice.upper is not None
        assert construct.defines == {PredicateKey("in", 1)}
        assert construct.uses == {PredicateKey("node", 1), PredicateKey("start", 0)}

    def test_const_declaration(self):
        construct = single("#const n = 10.")
        assert isinstance(construct.kind, ConstantDecl)
        assert construct.kind.name == "n"

    def test_show_statement(self):
        construct = single("#show reached/2.")
        assert isinstance(construct.kind, ShowStatement)
        assert construct.kind.target == PredicateKey("reached", 2)
        assert construct.uses == {PredicateKey("reached", 2)}

    def test_weak_constraint(self):
        construct = single(":~ cost(C). [C@1, C]")
        assert isinstance(construct.kind, WeakConstraint)
        assert construct.kind.priority is not None
        assert construct.uses == {PredicateKey("cost", 1)}

    def test_optimize_statement(self):
        construct = single("#minimize { C@2, X : cost(X, C) ; 1 : fallback }.")
        assert isinstance(construct.kind, OptimizeStatement)
        assert construct.kind.directive == "minimize"
        assert len(construct.kind.elements) == 2
        assert construct.uses == {PredicateKey("cost", 2), PredicateKey("fallback", 0)}

    def test_comment_kinds_are_captured(self):
        program = parse_program("% line\np. %* inline *% q :- p.\n%* multi\nline *%\nr :- q.")
        assert [c.text for c in program.comments[:2]] == ["% line", "%* inline *%"]
        assert len(program.comments) == 3
        assert len(program.constructs) == 3

    def test_comment_inside_construct_stays_in_raw_text(self):
        source = "a :- b, % wait\n     c."
        program = parse_program(source)
        assert not program.syntax_errors
        assert program.comments == []
        assert "% wait" in program.constructs[0].raw_text

    def test_raw_text_matches_span(self):
        source = "p(1).  q :- p(1).\n{ a(X) : b(X) }."
        program = parse_program(source)
        for construct in program.constructs:
            assert slice_span(source, construct.span) == construct.raw_text

    def test_empty_and_whitespace_sources(self):
        for source in ("", "   \n\n  ", "% only a comment\n"):
            program = parse_program(source)
            assert program.constructs == []
            assert program.syntax_errors == []


class TestSyntaxErrors:
    def test_missing_terminator_against_following_fact(self):
        program = parse_program("#const a = 2\nq(1).")
        assert [d.code for d in program.syntax_errors] == [E_SYNTAX]
        # the declaration is kept and the next statement still parses
        assert len(program.constructs) == 2
        diagnostic = program.syntax_errors[0]
        assert diagnostic.span.start.line == 0
        assert diagnostic.span.end.line == 1

    def test_dangling_comparator(self):
        program = parse_program("a :- q(X) ==.")
        assert [d.code for d in program.syntax_errors] == [E_SYNTAX]
        assert program.constructs == []

    def test_missing_parenthesis(self):
        program = parse_program("p(.")
        assert [d.code for d in program.syntax_errors] == [E_SYNTAX]

    def test_unsupported_directives_rejected(self):
        for source in ("#external p(1).", "#program base.", "#count { }."):
            program = parse_program(source)
            assert any(d.code == E_SYNTAX for d in program.syntax_errors), source

    def test_disjunction_in_head_rejected(self):
        program = parse_program("a, b :- c.")
        assert [d.code for d in program.syntax_errors] == [E_SYNTAX]

    def test_one_error_per_malformed_statement(self):
        program = parse_program("p(. q(. r(1).")
        assert len(program.syntax_errors) == 2
        assert len(program.constructs) == 1

    def test_error_count_stable_across_inputs(self):
        program = parse_program("p(1) q(2).\nvalid.")
        assert len(program.syntax_errors) == 1
        assert [str(k) for c in program.constructs for k in c.defines] == ["valid/0"]

    def test_lexer_error_keeps_statement(self):
        program = parse_program("a :- q(X), $ r(X).")
        assert len(program.syntax_errors) == 1
        assert len(program.constructs) == 1

    def test_stray_terminator(self):
        program = parse_program("p. . q.")
        assert len(program.syntax_errors) == 1
        assert len(program.constructs) == 2


class TestErrorShowcase:
    ANNOTATED_LINES = (1, 4, 7, 10)

    def test_each_snippet_is_one_error_on_its_line(self, error_showcase_source):
        program = parse_program(error_showcase_source, "error_showcase.lp")
        assert len(program.syntax_errors) == 4
        for diagnostic, line in zip(program.syntax_errors, self.ANNOTATED_LINES):
            covered = range(diagnostic.span.start.line, diagnostic.span.end.line + 1)
            assert line in covered

    def test_every_span_is_five_characters(self, error_showcase_source):
        program = parse_program(error_showcase_source, "error_showcase.lp")
        for diagnostic in program.syntax_errors:
            assert span_visible_length(diagnostic.span, error_showcase_source) == 5

    def test_snippets_standalone(self, error_showcase_source):
        blocks = [b for b in error_showcase_source.split("\n\n") if b.strip()]
        assert len(blocks) == 4
        for block in blocks:
            program = parse_program(block)
            assert len(program.syntax_errors) == 1, block


class TestUnderlinePlacement:
    def test_centered_mid_line(self):
        source = "x" * 40 + "\n"
        span = compute_underline_span(SourcePos(0, 10), source)
        assert span == SourceSpan(SourcePos(0, 8), SourcePos(0, 13))

    def test_line_start_previous_line_open(self):
        source = "a :- q(X),\n$ rest(X)."
        span = compute_underline_span(SourcePos(1, 0), source)
        assert span == SourceSpan(SourcePos(0, 8), SourcePos(1, 3))
        assert span_visible_length(span, source) == 5

    def test_line_start_previous_line_closed(self):
        source = "p.\n$ quux."
        span = compute_underline_span(SourcePos(1, 0), source)
        assert span == SourceSpan(SourcePos(1, 0), SourcePos(1, 5))

    def test_line_end_construct_closed_extends_backward(self):
        source = "a :- q(X) ==."
        span = compute_underline_span(SourcePos(0, 12), source)
        assert span == SourceSpan(SourcePos(0, 8), SourcePos(0, 13))

    def test_line_end_construct_open_cascades(self):
        source = "#const a = 2\nq(1)."
        span = compute_underline_span(SourcePos(0, 12), source)
        assert span == SourceSpan(SourcePos(0, 10), SourcePos(1, 3))

    def test_comment_terminator_does_not_count(self):
        # the '.' on the previous line is inside a comment, so the underline
        # borrows from that line rather than extending forward
        source = "a :- q(X) % note.\n$ b."
        span = compute_underline_span(SourcePos(1, 0), source)
        assert span.start.line == 0

    def test_file_shorter_than_underline(self):
        source = "p(."
        span = compute_underline_span(SourcePos(0, 2), source)
        assert span_visible_length(span, source) == 3


class TestClassification:
    CASES = [
        ("#const n = 2.", Category.CONSTANT_DECL),
        ("p(1).", Category.FACT),
        ("p.", Category.FACT),
        ("1 { in(X) : node(X) } 3 :- start.", Category.CHOICE_RULE),
        ("{ a }.", Category.CHOICE_RULE),
        ("q :- p.", Category.DEFINITION),
        (":- edge(X,X).", Category.CONSTRAINT),
        (":~ cost(C). [C@1]", Category.OPTIMIZATION),
        ("#maximize { 1 : p }.", Category.OPTIMIZATION),
        ("#show p/1.", Category.SHOW),
    ]

    @pytest.mark.parametrize("source,expected", CASES)
    def test_category(self, source, expected):
        assert classify(single(source)) == expected


_FUZZ_ALPHABET = string.ascii_letters + string.digits + " .,:;(){}[]%*#=<>!+-/@\"_\n~"


class TestResilience:
    @given(st.text(alphabet=_FUZZ_ALPHABET, max_size=200))
    @settings(max_examples=300, deadline=None)
    def test_parser_never_raises(self, source):
        program = parse_program(source)
        assert program is not None
        for diagnostic in program.syntax_errors:
            assert diagnostic.code == E_SYNTAX

    @given(st.text(alphabet=_FUZZ_ALPHABET, max_size=120))
    @settings(max_examples=200, deadline=None)
    def test_raw_text_fidelity(self, source):
        program = parse_program(source)
        for construct in program.constructs:
            assert slice_span(source, construct.span) == construct.raw_text

    @given(program_sources(max_constructs=10))
    @settings(max_examples=150, deadline=None)
    def test_spans_are_disjoint_and_cover_all_non_whitespace(self, source):
        program = parse_program(source)
        assert not program.syntax_errors
        cells = [list(line) for line in source.split("\n")]
        spans = [c.span for c in program.constructs] + [c.span for c in program.comments]
        for span in spans:
            for line in range(span.start.line, span.end.line + 1):
                begin = span.start.column if line == span.start.line else 0
                stop = span.end.column if line == span.end.line else len(cells[line])
                for col in range(begin, stop):
                    assert cells[line][col] is not None, "overlapping spans"
                    cells[line][col] = None
        leftover = "".join(ch for line in cells for ch in line if ch is not None)
        assert leftover.strip() == ""
