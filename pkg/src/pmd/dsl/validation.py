"""Program validation diagnostics, mission-parameter identification, reassignment."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .ast import (
    AnnotatedDisjunction,
    Atom,
    BernoulliFact,
    Compare,
    DistributionalFact,
    Neg,
    Number,
    Parameter,
    ParameterSpace,
    Pos,
    Program,
    Rule,
    format_atom,
    format_number,
)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    clause_index: int
    line: int | None = None

    def __str__(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        return f"{self.code}: {self.message}{where}"


class UnknownParameter(KeyError):
    pass


class ValueNotInDomain(ValueError):
    pass


def _clause_line(program: Program, index: int) -> int | None:
    if index < len(program.source_lines):
        return program.source_lines[index]
    return None


def _body_literals(clause) -> list:
    body = clause.body if isinstance(clause, (Rule, DistributionalFact)) else ()
    return [lit for conj in body for lit in conj]


def validate(program: Program) -> list[Diagnostic]:
    """Collect diagnostics; an empty list means the program is well-formed."""
    diags: list[Diagnostic] = []
    arities: dict[str, int] = {}
    arity_seen: dict[str, int] = {}

    def check_arity(atom: Atom, index: int):
        known = arities.get(atom.predicate)
        if known is None:
            arities[atom.predicate] = atom.arity
            arity_seen[atom.predicate] = index
        elif known != atom.arity:
            diags.append(
                Diagnostic(
                    "InconsistentArity",
                    f"predicate {atom.predicate} used with arity {atom.arity} "
                    f"but first seen with arity {known}",
                    index,
                    _clause_line(program, index),
                )
            )

    # Predicates with a non-distributional definition must not appear in comparisons.
    discrete_defined: set[str] = set()
    distributional_defined: set[str] = set()

    for i, clause in enumerate(program.clauses):
        line = _clause_line(program, i)
        if isinstance(clause, Rule):
            check_arity(clause.head, i)
            discrete_defined.add(clause.head.predicate)
        elif isinstance(clause, BernoulliFact):
            check_arity(clause.head, i)
            discrete_defined.add(clause.head.predicate)
            if not 0 <= clause.p <= 1:
                diags.append(
                    Diagnostic(
                        "ProbabilityRange",
                        f"probability {format_number(clause.p)} outside [0, 1]",
                        i,
                        line,
                    )
                )
        elif isinstance(clause, AnnotatedDisjunction):
            for p, head in clause.alternatives:
                check_arity(head, i)
                discrete_defined.add(head.predicate)
                if not 0 <= p <= 1:
                    diags.append(
                        Diagnostic(
                            "ProbabilityRange",
                            f"probability {format_number(p)} outside [0, 1]",
                            i,
                            line,
                        )
                    )
            total = clause.weight_sum
            if total > 1:
                diags.append(
                    Diagnostic(
                        "ADWeightSum",
                        f"annotated disjunction weights sum to {float(total):g} > 1",
                        i,
                        line,
                    )
                )
        elif isinstance(clause, DistributionalFact):
            check_arity(clause.head, i)
            distributional_defined.add(clause.head.predicate)
            if clause.dist.name != "normal":
                diags.append(
                    Diagnostic(
                        "UnsupportedDistribution",
                        f"distribution {clause.dist.name} is not supported (only normal)",
                        i,
                        line,
                    )
                )
            elif clause.dist.sigma <= 0:
                diags.append(Diagnostic("SigmaNotPositive", "sigma must be positive", i, line))
            if clause.body:
                diags.append(
                    Diagnostic(
                        "DistributionalBody",
                        "bodies on distributional facts are not supported",
                        i,
                        line,
                    )
                )

        for lit in _body_literals(clause):
            if isinstance(lit, (Pos, Neg)):
                check_arity(lit.atom, i)
            elif isinstance(lit, Compare):
                sides = (lit.left, lit.right)
                atoms = [s for s in sides if isinstance(s, Atom)]
                numbers = [s for s in sides if isinstance(s, Number)]
                if len(atoms) != 1 or len(numbers) != 1:
                    diags.append(
                        Diagnostic(
                            "MalformedComparison",
                            "comparison needs one distributional atom and one number, "
                            f"got {format_atom(lit.left) if isinstance(lit.left, Atom) else lit.left} "
                            f"{lit.op} {format_atom(lit.right) if isinstance(lit.right, Atom) else lit.right}",
                            i,
                            line,
                        )
                    )
                else:
                    check_arity(atoms[0], i)

    # Second pass: comparisons against predicates that have discrete definitions.
    for i, clause in enumerate(program.clauses):
        for lit in _body_literals(clause):
            if isinstance(lit, Compare):
                for side in (lit.left, lit.right):
                    if isinstance(side, Atom) and side.predicate in discrete_defined:
                        diags.append(
                            Diagnostic(
                                "CompareNonDistributional",
                                f"comparison against {side.predicate}, which is not "
                                "defined by distributional facts",
                                i,
                                _clause_line(program, i),
                            )
                        )
    return diags


def _is_one_hot(clause: AnnotatedDisjunction) -> bool:
    weights = [p for p, _ in clause.alternatives]
    return (
        len(weights) >= 2
        and all(p in (Fraction(0), Fraction(1)) for p in weights)
        and sum(weights) == 1
        and all(head.arity == 0 for _, head in clause.alternatives)
    )


def identify_parameters(program: Program) -> ParameterSpace:
    """Recognize one-hot annotated disjunctions as reassignable mission parameters.

    Stochastic ADs (weights strictly between 0 and 1) are left alone and get
    marginalized by inference.
    """
    parameters: list[Parameter] = []
    seen: set[str] = set()
    for i, clause in enumerate(program.clauses):
        if isinstance(clause, AnnotatedDisjunction) and _is_one_hot(clause):
            name = clause.alternatives[0][1].predicate
            if name in seen:
                raise ValueError(f"duplicate mission parameter {name}")
            seen.add(name)
            domain = tuple(head.predicate for _, head in clause.alternatives)
            current = next(head.predicate for p, head in clause.alternatives if p == 1)
            parameters.append(Parameter(name, domain, current, i))
    return ParameterSpace(tuple(parameters))


def reassign(program: Program, assignment: dict[str, str]) -> Program:
    """Move each named parameter's unit weight onto the assigned alternative."""
    space = identify_parameters(program)
    by_name = {p.name: p for p in space}
    for name, value in assignment.items():
        param = by_name.get(name)
        if param is None:
            raise UnknownParameter(name)
        if value not in param.domain:
            raise ValueNotInDomain(f"{value} not in domain of {name}: {param.domain}")

    clauses = list(program.clauses)
    for name, value in assignment.items():
        param = by_name[name]
        clause = clauses[param.clause_index]
        new_alts = tuple(
            (Fraction(1) if head.predicate == value else Fraction(0), head)
            for _, head in clause.alternatives
        )
        clauses[param.clause_index] = replace(clause, alternatives=new_alts)
    return Program(tuple(clauses), program.source_lines)
