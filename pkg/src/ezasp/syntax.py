"""Tokenizer and construct-level parser for a clingo-style ASP fragment.

The accepted language covers normal rules, integrity constraints, choice
rules with optional cardinality bounds and per-element conditions,
``#const`` declarations, ``#show name/arity`` statements, ``#minimize`` /
``#maximize`` statements, weak constraints (``:~ Body. [w@p,t]``),
intervals (``l..u``), arithmetic terms, and comparisons.  Anything else is
rejected with an E-SYNTAX diagnostic and the parser resynchronizes at the
next statement terminator or directive start, so a single malformed
statement yields a single diagnostic and parsing never aborts.

Positions are 0-based (line, column) pairs measured in Unicode scalar
values.  Every construct records the exact source slice it covers, which
downstream reordering relies on.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Union

# Diagnostic codes.  E-* carry severity "error", W-* carry "warning".
E_SYNTAX = "E-SYNTAX"
E_UNSAFE = "E-UNSAFE"
E_UNDEFINED = "E-UNDEFINED"
W_ORDER = "W-ORDER"
W_STRAT = "W-STRAT"
W_CYCLE = "W-CYCLE"

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"

UNDERLINE_LENGTH = 5


def severity_for_code(code: str) -> str:
    return SEVERITY_ERROR if code.startswith("E-") else SEVERITY_WARNING


@dataclass(frozen=True, order=True)
class SourcePos:
    line: int
    column: int


@dataclass(frozen=True)
class SourceSpan:
    start: SourcePos
    end: SourcePos  # exclusive

    def __post_init__(self) -> None:
        if (self.end.line, self.end.column) < (self.start.line, self.start.column):
            raise ValueError(f"span end {self.end} precedes start {self.start}")


@dataclass(frozen=True)
class PredicateKey:
    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    span: SourceSpan
    message: str
    file: str

    def sort_key(self):
        return (self.span.start.line, self.span.start.column, self.code, self.message)


def make_diagnostic(code: str, span: SourceSpan, message: str, file: str) -> Diagnostic:
    return Diagnostic(severity_for_code(code), code, span, message, file)


# ---------------------------------------------------------------------------
# Terms and atoms


@dataclass(frozen=True)
class Constant:
    # int, symbolic constant name, or quoted string (kept with quotes)
    value: Union[int, str]


@dataclass(frozen=True)
class Variable:
    name: str
    span: SourceSpan
    anonymous: bool = False

    @property
    def display_name(self) -> str:
        return "_" if self.anonymous else self.name


@dataclass(frozen=True)
class Function:
    name: str
    args: tuple


@dataclass(frozen=True)
class Arithmetic:
    op: str  # one of + - * / ..
    left: "Term"
    right: "Term"


Term = Union[Constant, Variable, Function, Arithmetic]


@dataclass(frozen=True)
class Atom:
    predicate: PredicateKey
    args: tuple
    span: SourceSpan


@dataclass(frozen=True)
class Comparison:
    op: str  # = == != < <= > >=
    left: Term
    right: Term


@dataclass(frozen=True)
class Literal:
    negated: bool
    body: Union[Atom, Comparison]


@dataclass(frozen=True)
class ChoiceElement:
    head: Atom
    condition: tuple  # of Literal


@dataclass(frozen=True)
class ChoiceHead:
    lower: Optional[Term]
    upper: Optional[Term]
    elements: tuple  # of ChoiceElement


# ---------------------------------------------------------------------------
# Construct kinds


@dataclass(frozen=True)
class ConstantDecl:
    name: str
    value: Term


@dataclass(frozen=True)
class RuleLike:
    head_atoms: tuple  # of Atom; empty for constraints
    choice: Optional[ChoiceHead]
    body: tuple  # of Literal


@dataclass(frozen=True)
class WeakConstraint:
    body: tuple  # of Literal
    weight: Term
    priority: Optional[Term]
    terms: tuple  # of Term


@dataclass(frozen=True)
class OptimizeElement:
    weight: Term
    priority: Optional[Term]
    terms: tuple  # of Term
    condition: tuple  # of Literal


@dataclass(frozen=True)
class OptimizeStatement:
    directive: str  # "minimize" | "maximize"
    elements: tuple  # of OptimizeElement


@dataclass(frozen=True)
class ShowStatement:
    target: PredicateKey
    target_span: SourceSpan


ConstructKind = Union[ConstantDecl, RuleLike, WeakConstraint, OptimizeStatement, ShowStatement]


class Category(IntEnum):
    """The fixed construct order the methodology checks enforce."""

    CONSTANT_DECL = 0
    FACT = 1
    CHOICE_RULE = 2
    DEFINITION = 3
    CONSTRAINT = 4
    OPTIMIZATION = 5
    SHOW = 6

    @property
    def display_name(self) -> str:
        return _CATEGORY_NAMES[self]


_CATEGORY_NAMES = {
    Category.CONSTANT_DECL: "constant declaration",
    Category.FACT: "fact",
    Category.CHOICE_RULE: "choice rule",
    Category.DEFINITION: "definition",
    Category.CONSTRAINT: "constraint",
    Category.OPTIMIZATION: "optimization statement",
    Category.SHOW: "show statement",
}

# Categories whose constructs both define and use predicates; only these are
# eligible for dependency-based sorting during reordering.
CRITICAL_CATEGORIES = (Category.FACT, Category.CHOICE_RULE, Category.DEFINITION)


@dataclass
class Construct:
    kind: ConstructKind
    span: SourceSpan
    raw_text: str
    defines: frozenset  # of PredicateKey
    uses: frozenset  # of PredicateKey
    defined_occurrences: tuple  # of (PredicateKey, SourceSpan)
    used_occurrences: tuple  # of (PredicateKey, SourceSpan)
    var_report: object = None  # SafetyReport, filled by ezasp.safety


@dataclass(frozen=True)
class Comment:
    span: SourceSpan
    text: str


@dataclass
class Program:
    constructs: list
    comments: list  # of Comment, excluding comments embedded inside construct spans
    syntax_errors: list  # of Diagnostic
    file: str
    source: str


def classify(construct: Construct) -> Category:
    """Assign one of the seven methodology categories to a parsed construct."""
    kind = construct.kind
    if isinstance(kind, ConstantDecl):
        return Category.CONSTANT_DECL
    if isinstance(kind, ShowStatement):
        return Category.SHOW
    if isinstance(kind, (WeakConstraint, OptimizeStatement)):
        return Category.OPTIMIZATION
    if isinstance(kind, RuleLike):
        if kind.choice is not None:
            return Category.CHOICE_RULE
        if not kind.head_atoms:
            return Category.CONSTRAINT
        if kind.body:
            return Category.DEFINITION
        return Category.FACT
    raise TypeError(f"unknown construct kind: {kind!r}")


# ---------------------------------------------------------------------------
# Lexer

_DIRECTIVES = ("#const", "#show", "#minimize", "#maximize")

_PUNCT2 = (":-", ":~", "..", "==", "!=", "<=", ">=")
_PUNCT1 = ".,;:(){}[]=<>+-*/@"


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "variable", "anonymous", "integer", "string",
    #            "directive", "not", "eof", or the punctuation itself
    text: str
    start: SourcePos
    end: SourcePos


@dataclass
class _LexResult:
    tokens: list
    comments: list  # of Comment
    errors: list  # of (SourcePos, message)


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> _LexResult:
    tokens: list = []
    comments: list = []
    errors: list = []
    line = 0
    col = 0
    i = 0
    n = len(source)

    def pos() -> SourcePos:
        return SourcePos(line, col)

    def advance(count: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if i < n and source[i] == "\n":
                line += 1
                col = 0
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        start = pos()
        if ch == "%":
            if source.startswith("%*", i):
                depth = 0
                text_start = i
                while i < n:
                    if source.startswith("%*", i):
                        depth += 1
                        advance(2)
                    elif source.startswith("*%", i):
                        depth -= 1
                        advance(2)
                        if depth == 0:
                            break
                    else:
                        advance()
                comments.append(Comment(SourceSpan(start, pos()), source[text_start:i]))
            else:
                text_start = i
                while i < n and source[i] != "\n":
                    advance()
                comments.append(Comment(SourceSpan(start, pos()), source[text_start:i]))
            continue
        if ch == '"':
            text_start = i
            advance()
            terminated = False
            while i < n and source[i] != "\n":
                if source[i] == "\\" and i + 1 < n:
                    advance(2)
                    continue
                if source[i] == '"':
                    advance()
                    terminated = True
                    break
                advance()
            if not terminated:
                errors.append((start, "unterminated string literal"))
            tokens.append(Token("string", source[text_start:i], start, pos()))
            continue
        if ch.isdigit():
            text_start = i
            while i < n and source[i].isdigit():
                advance()
            tokens.append(Token("integer", source[text_start:i], start, pos()))
            continue
        if _is_ident_start(ch):
            text_start = i
            while i < n and _is_ident_char(source[i]):
                advance()
            text = source[text_start:i]
            if text == "not":
                kind = "not"
            elif text == "_":
                kind = "anonymous"
            elif text[0] == "_" or text[0].isupper():
                kind = "variable"
            else:
                kind = "ident"
            tokens.append(Token(kind, text, start, pos()))
            continue
        if ch == "#":
            matched = None
            for directive in _DIRECTIVES:
                if source.startswith(directive, i):
                    after = i + len(directive)
                    if after >= n or not _is_ident_char(source[after]):
                        matched = directive
                        break
            if matched is not None:
                advance(len(matched))
                tokens.append(Token("directive", matched, start, pos()))
            else:
                # Unknown directive: lex it as one token so the parser can
                # reject it with a single diagnostic.
                text_start = i
                advance()
                while i < n and _is_ident_char(source[i]):
                    advance()
                tokens.append(Token("directive", source[text_start:i], start, pos()))
            continue
        two = source[i : i + 2]
        if two in _PUNCT2:
            advance(2)
            tokens.append(Token(two, two, start, pos()))
            continue
        if ch in _PUNCT1:
            advance()
            tokens.append(Token(ch, ch, start, pos()))
            continue
        errors.append((start, f"unexpected character {ch!r}"))
        advance()

    eof_pos = pos()
    tokens.append(Token("eof", "", eof_pos, eof_pos))
    return _LexResult(tokens, comments, errors)


# ---------------------------------------------------------------------------
# Underline placement

def _line_texts(source: str) -> list:
    return source.split("\n")


def _code_line_texts(source: str) -> list:
    """Per-line text with comments and string contents blanked out.

    Used for the "ends with statement terminator" checks of the underline
    rules; a ``.`` inside a comment or string must not count.
    """
    lines = _line_texts(source)
    masked = [list(text) for text in lines]
    lexed = tokenize(source)
    spans = [c.span for c in lexed.comments]
    spans.extend(SourceSpan(t.start, t.end) for t in lexed.tokens if t.kind == "string")
    for span in spans:
        for ln in range(span.start.line, span.end.line + 1):
            if ln >= len(masked):
                continue
            begin = span.start.column if ln == span.start.line else 0
            stop = span.end.column if ln == span.end.line else len(masked[ln])
            for c in range(begin, min(stop, len(masked[ln]))):
                masked[ln][c] = " "
    return ["".join(chars) for chars in masked]


def _ends_with_terminator(code_line: str) -> bool:
    return code_line.rstrip().endswith(".")


def span_visible_length(span: SourceSpan, source: str) -> int:
    """Number of non-newline characters the span covers."""
    lines = _line_texts(source)
    if span.start.line == span.end.line:
        return span.end.column - span.start.column
    total = len(lines[span.start.line]) - span.start.column
    for ln in range(span.start.line + 1, span.end.line):
        total += len(lines[ln])
    total += span.end.column
    return total


def compute_underline_span(offending: SourcePos, source: str) -> SourceSpan:
    """Place the five-character error underline around the offending symbol.

    The span is centered at the offending symbol.  Near a line start the
    underline borrows the end of the previous line when that line does not
    close a statement, otherwise it extends forward; near a line end it
    extends backward when the line closes with the terminator, otherwise it
    cascades onto the next line.  Shorter files get shorter spans.
    """
    lines = _line_texts(source)
    code_lines = _code_line_texts(source)
    ln = min(max(offending.line, 0), len(lines) - 1)
    raw = lines[ln]
    col = min(max(offending.column, 0), len(raw))

    begin = col - 2
    end = col + 3
    lead_deficit = max(0, -begin)
    begin = max(begin, 0)
    trail_deficit = max(0, end - len(raw))
    end = min(end, len(raw))

    prev_part = None  # (line, start column) borrowed from the previous line
    next_part = None  # (line, end column) cascaded onto the next line

    if lead_deficit:
        prev = ln - 1
        if prev >= 0 and not _ends_with_terminator(code_lines[prev]):
            take = min(lead_deficit, len(lines[prev]))
            if take:
                prev_part = (prev, len(lines[prev]) - take)
            lead_deficit -= take
        if lead_deficit:  # previous line closed a statement (or ran out): extend forward
            extra = min(lead_deficit, len(raw) - end)
            end += extra
            lead_deficit -= extra

    if trail_deficit:
        if _ends_with_terminator(code_lines[ln]) or ln + 1 >= len(lines):
            take = min(trail_deficit, begin)
            begin -= take
            trail_deficit -= take
            if trail_deficit and prev_part is None:
                prev = ln - 1
                if prev >= 0 and not _ends_with_terminator(code_lines[prev]):
                    take = min(trail_deficit, len(lines[prev]))
                    if take:
                        prev_part = (prev, len(lines[prev]) - take)
                    trail_deficit -= take
        else:
            nxt = ln + 1
            next_part = (nxt, min(trail_deficit, len(lines[nxt])))
            trail_deficit -= next_part[1]
            if trail_deficit:
                take = min(trail_deficit, begin)
                begin -= take
                trail_deficit -= take

    start_pos = SourcePos(*prev_part) if prev_part else SourcePos(ln, begin)
    end_pos = SourcePos(*next_part) if next_part else SourcePos(ln, end)
    return SourceSpan(start_pos, end_pos)


# ---------------------------------------------------------------------------
# Parser

_CMP_OPS = ("=", "==", "!=", "<", "<=", ">", ">=")
_TERM_START = ("ident", "variable", "anonymous", "integer", "string", "(", "-")


class _ParseError(Exception):
    def __init__(self, message: str, pos: SourcePos):
        super().__init__(message)
        self.message = message
        self.pos = pos


class _Parser:
    def __init__(self, source: str, file: str):
        self.source = source
        self.file = file
        lexed = tokenize(source)
        self.tokens = lexed.tokens
        self.comments = lexed.comments
        self.idx = 0
        self.anon_counter = 0
        self.diagnostics: list = []
        for pos, message in lexed.errors:
            self._emit(pos, message)

    # -- token helpers

    def _peek(self) -> Token:
        return self.tokens[self.idx]

    def _prev(self) -> Optional[Token]:
        return self.tokens[self.idx - 1] if self.idx > 0 else None

    def _advance(self) -> Token:
        tok = self.tokens[self.idx]
        if tok.kind != "eof":
            self.idx += 1
        return tok

    def _accept(self, kind: str) -> Optional[Token]:
        if self._peek().kind == kind:
            return self._advance()
        return None

    def _expect(self, kind: str, what: str) -> Token:
        tok = self._peek()
        if tok.kind != kind:
            raise _ParseError(f"expected {what}", tok.start)
        return self._advance()

    def _fail(self, message: str) -> None:
        raise _ParseError(message, self._peek().start)

    def _emit(self, pos: SourcePos, message: str) -> None:
        span = compute_underline_span(pos, self.source)
        self.diagnostics.append(make_diagnostic(E_SYNTAX, span, message, self.file))

    # -- error recovery

    def _expect_terminator(self) -> None:
        """Consume the statement terminator, or recover from its absence.

        When the next token sits on a later line (or at end of file) the
        statement is treated as complete except for its terminator: one
        diagnostic is emitted at the gap and parsing continues with the next
        statement.  A same-line surprise is a genuine parse error instead.
        """
        if self._accept("."):
            return
        tok = self._peek()
        prev = self._prev()
        if tok.kind == "eof" or (prev is not None and tok.start.line > prev.end.line):
            anchor = prev.end if prev is not None else tok.start
            self._emit(anchor, "missing statement terminator '.'")
            return
        raise _ParseError("expected '.'", tok.start)

    def _resynchronize(self, statement_start: int) -> None:
        if self.idx == statement_start:
            self._advance()
        depth = 0
        while True:
            tok = self._peek()
            if tok.kind == "eof":
                return
            if tok.kind in ("(", "{", "["):
                depth += 1
            elif tok.kind in (")", "}", "]"):
                depth = max(0, depth - 1)
            elif tok.kind == "." and depth == 0:
                self._advance()
                return
            elif tok.kind == "directive" and depth == 0:
                return
            self._advance()

    # -- grammar

    def parse_program(self) -> Program:
        constructs: list = []
        while self._peek().kind != "eof":
            start_idx = self.idx
            try:
                construct = self._parse_statement()
                if construct is not None:
                    constructs.append(construct)
            except _ParseError as err:
                self._emit(err.pos, err.message)
                self._resynchronize(start_idx)
        visible_comments = [
            c for c in self.comments if not _span_within_constructs(c.span, constructs)
        ]
        return Program(constructs, visible_comments, self.diagnostics, self.file, self.source)

    def _finish(self, start: Token, kind: ConstructKind) -> Construct:
        last = self._prev()
        span = SourceSpan(start.start, last.end)
        raw = _slice(self.source, span)
        defined, used = _occurrences(kind)
        return Construct(
            kind=kind,
            span=span,
            raw_text=raw,
            defines=frozenset(k for k, _ in defined),
            uses=frozenset(k for k, _ in used),
            defined_occurrences=tuple(defined),
            used_occurrences=tuple(used),
        )

    def _parse_statement(self) -> Optional[Construct]:
        tok = self._peek()
        if tok.kind == "directive":
            if tok.text == "#const":
                return self._parse_const()
            if tok.text == "#show":
                return self._parse_show()
            if tok.text in ("#minimize", "#maximize"):
                return self._parse_optimize()
            self._advance()
            raise _ParseError(f"unsupported directive '{tok.text}'", tok.start)
        if tok.kind == ":~":
            return self._parse_weak_constraint()
        if tok.kind == ":-":
            start = self._advance()
            body = self._parse_literals()
            self._expect_terminator()
            return self._finish(start, RuleLike((), None, tuple(body)))
        if tok.kind == ".":
            # The stray terminator is its own recovery point.
            self._advance()
            self._emit(tok.start, "unexpected '.'")
            return None
        return self._parse_rule()

    def _parse_const(self) -> Construct:
        start = self._advance()
        name = self._expect("ident", "a lowercase constant name")
        self._expect("=", "'='")
        value = self._parse_term(allow_variables=False)
        self._expect_terminator()
        return self._finish(start, ConstantDecl(name.text, value))

    def _parse_show(self) -> Construct:
        start = self._advance()
        name = self._expect("ident", "a predicate name")
        self._expect("/", "'/' between predicate name and arity")
        arity = self._expect("integer", "a predicate arity")
        self._expect_terminator()
        key = PredicateKey(name.text, int(arity.text))
        return self._finish(start, ShowStatement(key, SourceSpan(name.start, arity.end)))

    def _parse_optimize(self) -> Construct:
        start = self._advance()
        directive = start.text.lstrip("#")
        self._expect("{", "'{'")
        elements: list = []
        if self._peek().kind != "}":
            while True:
                elements.append(self._parse_optimize_element())
                if not self._accept(";"):
                    break
        self._expect("}", "'}' or ';'")
        self._expect_terminator()
        return self._finish(start, OptimizeStatement(directive, tuple(elements)))

    def _parse_optimize_element(self) -> OptimizeElement:
        weight = self._parse_term()
        priority = self._parse_term() if self._accept("@") else None
        terms: list = []
        while self._accept(","):
            terms.append(self._parse_term())
        condition: list = []
        if self._accept(":"):
            condition = self._parse_literals()
        return OptimizeElement(weight, priority, tuple(terms), tuple(condition))

    def _parse_weak_constraint(self) -> Construct:
        start = self._advance()
        body: list = []
        if self._peek().kind != ".":
            body = self._parse_literals()
        self._expect(".", "'.'")
        if self._peek().kind != "[":
            self._emit(self._prev().end, "missing '[weight@priority,...]' after weak constraint")
            return self._finish(start, WeakConstraint(tuple(body), Constant(1), None, ()))
        self._advance()
        weight = self._parse_term()
        priority = self._parse_term() if self._accept("@") else None
        terms: list = []
        while self._accept(","):
            terms.append(self._parse_term())
        self._expect("]", "']'")
        return self._finish(start, WeakConstraint(tuple(body), weight, priority, tuple(terms)))

    def _parse_rule(self) -> Construct:
        start = self._peek()
        choice: Optional[ChoiceHead] = None
        head_atoms: tuple = ()
        if start.kind == "{":
            choice = self._parse_choice(lower=None)
        else:
            term = self._parse_term()
            if self._peek().kind == "{":
                choice = self._parse_choice(lower=term)
            else:
                head_atoms = (self._term_to_atom(term, start),)
        body: list = []
        if self._accept(":-"):
            body = self._parse_literals()
        self._expect_terminator()
        return self._finish(start, RuleLike(head_atoms, choice, tuple(body)))

    def _parse_choice(self, lower: Optional[Term]) -> ChoiceHead:
        self._expect("{", "'{'")
        elements: list = []
        if self._peek().kind != "}":
            while True:
                elements.append(self._parse_choice_element())
                if not self._accept(";"):
                    break
        self._expect("}", "'}' or ';'")
        upper = None
        if self._peek().kind in _TERM_START:
            upper = self._parse_term()
        return ChoiceHead(lower, upper, tuple(elements))

    def _parse_choice_element(self) -> ChoiceElement:
        start = self._peek()
        head = self._term_to_atom(self._parse_term(), start)
        condition: list = []
        if self._accept(":"):
            condition = self._parse_literals()
        return ChoiceElement(head, tuple(condition))

    def _parse_literals(self) -> list:
        literals = [self._parse_literal()]
        while self._accept(","):
            literals.append(self._parse_literal())
        return literals

    def _parse_literal(self) -> Literal:
        negated = self._accept("not") is not None
        start = self._peek()
        term = self._parse_term()
        op_tok = self._peek()
        if op_tok.kind in _CMP_OPS:
            self._advance()
            right = self._parse_term()
            return Literal(negated, Comparison(op_tok.text, term, right))
        return Literal(negated, self._term_to_atom(term, start))

    def _term_to_atom(self, term: Term, start: Token) -> Atom:
        last = self._prev()
        span = SourceSpan(start.start, last.end)
        if isinstance(term, Function):
            return Atom(PredicateKey(term.name, len(term.args)), term.args, span)
        if isinstance(term, Constant) and isinstance(term.value, str) and not term.value.startswith('"'):
            return Atom(PredicateKey(term.value, 0), (), span)
        raise _ParseError("expected an atom", start.start)

    # -- terms

    def _parse_term(self, allow_variables: bool = True) -> Term:
        left = self._parse_additive(allow_variables)
        if self._accept(".."):
            right = self._parse_additive(allow_variables)
            return Arithmetic("..", left, right)
        return left

    def _parse_additive(self, allow_variables: bool) -> Term:
        left = self._parse_multiplicative(allow_variables)
        while self._peek().kind in ("+", "-"):
            op = self._advance().text
            right = self._parse_multiplicative(allow_variables)
            left = Arithmetic(op, left, right)
        return left

    def _parse_multiplicative(self, allow_variables: bool) -> Term:
        left = self._parse_unary(allow_variables)
        while self._peek().kind in ("*", "/"):
            op = self._advance().text
            right = self._parse_unary(allow_variables)
            left = Arithmetic(op, left, right)
        return left

    def _parse_unary(self, allow_variables: bool) -> Term:
        if self._accept("-"):
            operand = self._parse_unary(allow_variables)
            if isinstance(operand, Constant) and isinstance(operand.value, int):
                return Constant(-operand.value)
            return Arithmetic("-", Constant(0), operand)
        return self._parse_primary(allow_variables)

    def _parse_primary(self, allow_variables: bool) -> Term:
        tok = self._peek()
        if tok.kind == "integer":
            self._advance()
            return Constant(int(tok.text))
        if tok.kind == "string":
            self._advance()
            return Constant(tok.text)
        if tok.kind == "variable":
            if not allow_variables:
                raise _ParseError("variables are not allowed here", tok.start)
            self._advance()
            return Variable(tok.text, SourceSpan(tok.start, tok.end))
        if tok.kind == "anonymous":
            if not allow_variables:
                raise _ParseError("variables are not allowed here", tok.start)
            self._advance()
            self.anon_counter += 1
            return Variable(f"_#{self.anon_counter}", SourceSpan(tok.start, tok.end), anonymous=True)
        if tok.kind == "ident":
            self._advance()
            if self._accept("("):
                args = [self._parse_term(allow_variables)]
                while self._accept(","):
                    args.append(self._parse_term(allow_variables))
                self._expect(")", "')' or ','")
                return Function(tok.text, tuple(args))
            return Constant(tok.text)
        if tok.kind == "(":
            self._advance()
            inner = self._parse_term(allow_variables)
            self._expect(")", "')'")
            return inner
        raise _ParseError("expected a term", tok.start)


def _slice(source: str, span: SourceSpan) -> str:
    lines = _line_texts(source)
    if span.start.line == span.end.line:
        return lines[span.start.line][span.start.column : span.end.column]
    parts = [lines[span.start.line][span.start.column :]]
    parts.extend(lines[ln] for ln in range(span.start.line + 1, span.end.line))
    parts.append(lines[span.end.line][: span.end.column])
    return "\n".join(parts)


def _span_within_constructs(span: SourceSpan, constructs: list) -> bool:
    for construct in constructs:
        c = construct.span
        if (c.start.line, c.start.column) <= (span.start.line, span.start.column) and (
            span.end.line,
            span.end.column,
        ) <= (c.end.line, c.end.column):
            return True
    return False


def _atom_occurrences(literals) -> list:
    found = []
    for lit in literals:
        if isinstance(lit.body, Atom):
            found.append((lit.body.predicate, lit.body.span))
    return found


def _occurrences(kind: ConstructKind):
    defined: list = []
    used: list = []
    if isinstance(kind, RuleLike):
        for atom in kind.head_atoms:
            defined.append((atom.predicate, atom.span))
        if kind.choice is not None:
            for element in kind.choice.elements:
                defined.append((element.head.predicate, element.head.span))
                used.extend(_atom_occurrences(element.condition))
        used.extend(_atom_occurrences(kind.body))
    elif isinstance(kind, WeakConstraint):
        used.extend(_atom_occurrences(kind.body))
    elif isinstance(kind, OptimizeStatement):
        for element in kind.elements:
            used.extend(_atom_occurrences(element.condition))
    elif isinstance(kind, ShowStatement):
        used.append((kind.target, kind.target_span))
    return defined, used


def parse_program(source: str, file: str = "<string>") -> Program:
    """Parse ``source`` into a construct-level program model.

    Never raises: malformed regions become E-SYNTAX diagnostics and parsing
    resumes at the next statement terminator or directive.
    """
    return _Parser(source, file).parse_program()


def slice_span(source: str, span: SourceSpan) -> str:
    """Exact source text covered by ``span``."""
    return _slice(source, span)
