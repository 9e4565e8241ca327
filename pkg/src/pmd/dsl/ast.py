"""AST for the probabilistic mission-rule language.

Values are immutable; numbers are exact rationals so that `1/10` and `0.1`
survive parsing without binary-float surprises. Conversion to floats happens
only at inference time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class Variable:
    """Logic variable; names start uppercase."""

    name: str


@dataclass(frozen=True)
class Symbol:
    """Constant; names start lowercase."""

    name: str


@dataclass(frozen=True)
class Number:
    """Exact rational literal (`20`, `0.5` and `1/10` all parse exactly)."""

    value: Fraction


Term = Union[Variable, Symbol, Number]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return not any(isinstance(a, Variable) for a in self.args)


@dataclass(frozen=True)
class Pos:
    atom: Atom


@dataclass(frozen=True)
class Neg:
    atom: Atom


COMPARE_OPS = ("<", ">", "=<", ">=")


@dataclass(frozen=True)
class Compare:
    """Comparison on a distributionally defined value, e.g. distance(X,Y,c) < 500.

    One side is an Atom naming the continuous value, the other a Number; which
    side is which is free at parse time and checked by validation.
    """

    left: Union[Term, Atom]
    op: str
    right: Union[Term, Atom]


Literal = Union[Pos, Neg, Compare]

# A body is a disjunction of conjunctions of literals (clause-level DNF).
Body = tuple[tuple[Literal, ...], ...]


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: Body  # a plain fact has body ((),) — one empty conjunction

    @property
    def is_fact(self) -> bool:
        return self.body == ((),)


@dataclass(frozen=True)
class BernoulliFact:
    """`p::atom.`"""

    p: Fraction
    head: Atom


@dataclass(frozen=True)
class AnnotatedDisjunction:
    """`p1::a1; ...; pk::ak.` with sum(p) <= 1; the remainder means "none"."""

    alternatives: tuple[tuple[Fraction, Atom], ...]

    @property
    def weight_sum(self) -> Fraction:
        return sum((p for p, _ in self.alternatives), Fraction(0))


@dataclass(frozen=True)
class NormalDistribution:
    mean: Fraction
    sigma: Fraction
    name: str = "normal"


@dataclass(frozen=True)
class DistributionalFact:
    """`atom ~ normal(mu, sigma).`  An optional body parses but fails validation."""

    head: Atom
    dist: NormalDistribution
    body: Body = ()


Clause = Union[Rule, BernoulliFact, AnnotatedDisjunction, DistributionalFact]


@dataclass(frozen=True)
class Parameter:
    """A mission parameter: a one-hot annotated disjunction over 0-ary symbols."""

    name: str  # predicate of the first alternative
    domain: tuple[str, ...]
    current: str
    clause_index: int


@dataclass(frozen=True)
class ParameterSpace:
    parameters: tuple[Parameter, ...] = ()

    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.parameters)

    def __iter__(self):
        return iter(self.parameters)

    def __len__(self) -> int:
        return len(self.parameters)

    def get(self, name: str) -> Parameter | None:
        for p in self.parameters:
            if p.name == name:
                return p
        return None

    def current_assignment(self) -> dict[str, str]:
        return {p.name: p.current for p in self.parameters}


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...] = ()
    source_lines: tuple[int, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.clauses)

    @property
    def parameters(self) -> ParameterSpace:
        from .validation import identify_parameters

        return identify_parameters(self)


def format_number(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_term(term: Union[Term, Atom]) -> str:
    if isinstance(term, Variable):
        return term.name
    if isinstance(term, Symbol):
        return term.name
    if isinstance(term, Number):
        return format_number(term.value)
    return format_atom(term)


def format_atom(atom: Atom) -> str:
    if not atom.args:
        return atom.predicate
    return f"{atom.predicate}({', '.join(format_term(a) for a in atom.args)})"


def format_literal(lit: Literal) -> str:
    if isinstance(lit, Pos):
        return format_atom(lit.atom)
    if isinstance(lit, Neg):
        return f"\\+ {format_atom(lit.atom)}"
    return f"{format_term(lit.left)} {lit.op} {format_term(lit.right)}"


def format_body(body: Body) -> str:
    return "; ".join(", ".join(format_literal(l) for l in conj) for conj in body)


def format_clause(clause: Clause) -> str:
    if isinstance(clause, Rule):
        if clause.is_fact:
            return f"{format_atom(clause.head)}."
        return f"{format_atom(clause.head)} :- {format_body(clause.body)}."
    if isinstance(clause, BernoulliFact):
        return f"{format_number(clause.p)}::{format_atom(clause.head)}."
    if isinstance(clause, AnnotatedDisjunction):
        alts = "; ".join(f"{format_number(p)}::{format_atom(a)}" for p, a in clause.alternatives)
        return f"{alts}."
    dist = f"{clause.dist.name}({format_number(clause.dist.mean)}, {format_number(clause.dist.sigma)})"
    text = f"{format_atom(clause.head)} ~ {dist}"
    if clause.body:
        text += f" :- {format_body(clause.body)}"
    return text + "."


def pretty_print(program: Program) -> str:
    """Canonical source text; parsing it back yields a structurally equal program."""
    return "\n".join(format_clause(c) for c in program.clauses) + ("\n" if program.clauses else "")
