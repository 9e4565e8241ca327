"""Probabilistic mission-rule language: parsing, validation, parameters."""

from .ast import (
    AnnotatedDisjunction,
    Atom,
    BernoulliFact,
    Body,
    Clause,
    Compare,
    DistributionalFact,
    Literal,
    Neg,
    NormalDistribution,
    Number,
    Parameter,
    ParameterSpace,
    Pos,
    Program,
    Rule,
    Symbol,
    Term,
    Variable,
    format_atom,
    format_clause,
    format_number,
    pretty_print,
)
from .parser import ParseError, parse
from .validation import (
    Diagnostic,
    UnknownParameter,
    ValueNotInDomain,
    identify_parameters,
    reassign,
    validate,
)

__all__ = [
    "AnnotatedDisjunction",
    "Atom",
    "BernoulliFact",
    "Body",
    "Clause",
    "Compare",
    "Diagnostic",
    "DistributionalFact",
    "Literal",
    "Neg",
    "NormalDistribution",
    "Number",
    "Parameter",
    "ParameterSpace",
    "ParseError",
    "Pos",
    "Program",
    "Rule",
    "Symbol",
    "Term",
    "UnknownParameter",
    "ValueNotInDomain",
    "Variable",
    "format_atom",
    "format_clause",
    "format_number",
    "identify_parameters",
    "parse",
    "pretty_print",
    "reassign",
    "validate",
]
