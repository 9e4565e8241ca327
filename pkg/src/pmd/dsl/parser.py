"""Tokenizer and recursive-descent parser for the mission-rule language.

Grammar (clauses are `.`-terminated, `%` starts a line comment):

    clause  := weighted (';' weighted)* '.'            annotated disjunction / fact
             | atom '~' sym '(' num ',' num ')' rest   distributional fact
             | atom (':-' body)? '.'                   rule or plain fact
    weighted:= number '::' atom
    body    := conj (';' conj)*
    conj    := literal (',' literal)*
    literal := '\\+' atom | operand (cmp operand)?
    cmp     := '<' | '>' | '=<' | '>='

Unsupported Prolog constructs (cuts, lists, arithmetic, nested compound
terms, parenthesized body groups) are parse errors rather than silent no-ops.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .ast import (
    AnnotatedDisjunction,
    Atom,
    BernoulliFact,
    Body,
    Compare,
    DistributionalFact,
    Literal,
    Neg,
    NormalDistribution,
    Number,
    Pos,
    Program,
    Rule,
    Symbol,
    Variable,
)


class ParseError(Exception):
    """Syntax error with position and the token set that would have been accepted."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>%[^\n]*)
  | (?P<newline>\n)
  | (?P<number>\d+/\d+|\d+\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)
  | (?P<implies>:-)
  | (?P<weight>::)
  | (?P<le>=<)
  | (?P<ge>>=)
  | (?P<lt><)
  | (?P<gt>>)
  | (?P<tilde>~)
  | (?P<negate>\\\+)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<semi>;)
  | (?P<dot>\.)
  | (?P<minus>-)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


END = "end of input"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, len(source) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.current
        if tok.kind != "end":
            self.pos += 1
        return tok

    def check(self, kind: str) -> bool:
        return self.current.kind == kind

    def accept(self, kind: str) -> Token | None:
        if self.check(kind):
            return self.advance()
        return None

    def expect(self, kind: str, expected: tuple[str, ...]) -> Token:
        tok = self.accept(kind)
        if tok is None:
            self.fail(expected)
        return tok

    def fail(self, expected: tuple[str, ...]):
        tok = self.current
        shown = tok.text if tok.kind != "end" else END
        raise ParseError(f"unexpected {shown!r}", tok.line, tok.column, expected)

    # --- grammar ---

    def program(self) -> Program:
        clauses = []
        lines = []
        while not self.check("end"):
            start = self.current.line
            clauses.append(self.clause())
            lines.append(start)
        return Program(tuple(clauses), tuple(lines))

    def clause(self):
        if self.check("number"):
            return self.weighted_clause()
        head = self.atom()
        if self.accept("tilde"):
            return self.distributional(head)
        if self.accept("implies"):
            body = self.body()
            self.expect("dot", ("'.'",))
            return Rule(head, body)
        self.expect("dot", ("'.'", "':-'", "'~'"))
        return Rule(head, ((),))

    def weighted_clause(self):
        alternatives = [self.weighted_alternative()]
        while self.accept("semi"):
            alternatives.append(self.weighted_alternative())
        if self.check("implies"):
            tok = self.current
            raise ParseError(
                "bodies are not supported on probabilistic facts", tok.line, tok.column, ("'.'",)
            )
        self.expect("dot", ("'.'", "';'"))
        if len(alternatives) == 1:
            p, head = alternatives[0]
            return BernoulliFact(p, head)
        return AnnotatedDisjunction(tuple(alternatives))

    def weighted_alternative(self) -> tuple[Fraction, Atom]:
        p = self.number()
        self.expect("weight", ("'::'",))
        return p, self.atom()

    def distributional(self, head: Atom) -> DistributionalFact:
        name_tok = self.expect("name", ("distribution name",))
        self.expect("lparen", ("'('",))
        mean = self.signed_number()
        self.expect("comma", ("','",))
        sigma = self.signed_number()
        self.expect("rparen", ("')'",))
        body: Body = ()
        if self.accept("implies"):
            body = self.body()
        self.expect("dot", ("'.'",))
        return DistributionalFact(head, NormalDistribution(mean, sigma, name_tok.text), body)

    def body(self) -> Body:
        disjuncts = [self.conjunction()]
        while self.accept("semi"):
            disjuncts.append(self.conjunction())
        return tuple(disjuncts)

    def conjunction(self) -> tuple[Literal, ...]:
        literals = [self.literal()]
        while self.accept("comma"):
            literals.append(self.literal())
        return tuple(literals)

    def literal(self) -> Literal:
        if self.accept("negate"):
            return Neg(self.atom())
        if self.check("lparen"):
            tok = self.current
            raise ParseError(
                "parenthesized body groups are not supported", tok.line, tok.column, ("atom",)
            )
        left = self.operand()
        op = self.compare_op()
        if op is None:
            if not isinstance(left, Atom):
                self.fail(("atom", "comparison operator"))
            return Pos(left)
        right = self.operand()
        return Compare(left, op, right)

    def compare_op(self) -> str | None:
        for kind, op in (("lt", "<"), ("gt", ">"), ("le", "=<"), ("ge", ">=")):
            if self.accept(kind):
                return op
        return None

    def operand(self):
        if self.check("number") or self.check("minus"):
            return Number(self.signed_number())
        if self.check("var"):
            return Variable(self.advance().text)
        if self.check("name"):
            return self.atom()
        self.fail(("atom", "variable", "number"))

    def atom(self) -> Atom:
        name = self.expect("name", ("atom",))
        args: list = []
        if self.accept("lparen"):
            args.append(self.term())
            while self.accept("comma"):
                args.append(self.term())
            self.expect("rparen", ("')'", "','"))
        return Atom(name.text, tuple(args))

    def term(self):
        if self.check("number") or self.check("minus"):
            return Number(self.signed_number())
        if self.check("var"):
            return Variable(self.advance().text)
        if self.check("name"):
            name = self.advance()
            if self.check("lparen"):
                raise ParseError(
                    "nested compound terms are not supported", name.line, name.column, ("','", "')'")
                )
            return Symbol(name.text)
        self.fail(("term",))

    def signed_number(self) -> Fraction:
        if self.accept("minus"):
            return -self.number()
        return self.number()

    def number(self) -> Fraction:
        tok = self.expect("number", ("number",))
        return Fraction(tok.text)


def parse(source: str) -> Program:
    """Parse source text into a Program; raises ParseError on malformed input."""
    return _Parser(tokenize(source)).program()
