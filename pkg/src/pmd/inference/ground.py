"""Grounding: bind a program to one grid cell and collect its probabilistic sources.

Grounding chains backward from the query, so only atoms that can influence it
become sources; illustrative facts for other locations stay inert. Relation
atoms `distance(X, Y, class)` and `over(X, Y, class)` at the cell's own
location constants are backed by the estimated relation field; explicit facts
in the program text take precedence over the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..dsl import (
    AnnotatedDisjunction,
    Atom,
    BernoulliFact,
    Compare,
    DistributionalFact,
    Neg,
    Number,
    Pos,
    Program,
    Rule,
    Symbol,
    Variable,
)
from ..uncertainty import RelationField

GroundAtom = tuple  # (predicate, arg, ...) with args as canonical strings

RELATION_PREDICATES = ("distance", "over")


class GroundingError(ValueError):
    pass


class UnknownClass(GroundingError):
    pass


class UnstratifiedProgram(GroundingError):
    pass


@dataclass(frozen=True)
class ContinuousSource:
    atom: GroundAtom
    mean: float
    sigma: float
    thresholds: tuple[float, ...]  # sorted, distinct

    @property
    def outcome_count(self) -> int:
        return len(self.thresholds) + 1


@dataclass(frozen=True)
class BernoulliSource:
    atom: GroundAtom
    p: float

    outcome_count = 2  # index 0: true, index 1: false


@dataclass(frozen=True)
class ChoiceSource:
    atoms: tuple[GroundAtom, ...]
    probs: tuple[float, ...]
    residual: float  # probability that none of the alternatives holds

    @property
    def outcome_count(self) -> int:
        return len(self.atoms) + (1 if self.residual > 0.0 else 0)


Source = ContinuousSource | BernoulliSource | ChoiceSource

# Ground literals: ("pos"|"neg", atom) or ("cmp", atom, op, threshold)
_CMP_FLIP = {"<": ">", ">": "<", "=<": ">=", ">=": "=<"}


def atom_key(atom: Atom, bindings: dict[str, str] | None = None) -> GroundAtom:
    args = []
    for term in atom.args:
        if isinstance(term, Symbol):
            args.append(term.name)
        elif isinstance(term, Number):
            args.append(str(term.value))
        elif isinstance(term, Variable):
            if bindings is None or term.name not in bindings:
                raise GroundingError(f"unbound variable {term.name} in {atom.predicate}")
            args.append(bindings[term.name])
        else:
            raise GroundingError(f"cannot ground term {term!r}")
    return (atom.predicate, *args)


def format_ground_atom(g: GroundAtom) -> str:
    if len(g) == 1:
        return g[0]
    return f"{g[0]}({', '.join(g[1:])})"


def match_head(pattern: Atom, ground: GroundAtom) -> dict[str, str] | None:
    """One-way pattern match binding the pattern's variables to ground constants."""
    if pattern.predicate != ground[0] or pattern.arity != len(ground) - 1:
        return None
    bindings: dict[str, str] = {}
    for term, value in zip(pattern.args, ground[1:]):
        if isinstance(term, Variable):
            if bindings.get(term.name, value) != value:
                return None
            bindings[term.name] = value
        elif isinstance(term, Symbol):
            if term.name != value:
                return None
        elif isinstance(term, Number):
            if str(term.value) != value:
                return None
    return bindings


class GroundProgram:
    """A program grounded at one location: ground rules plus probabilistic sources."""

    def __init__(
        self,
        location: tuple[int, int] | None,
        query: GroundAtom,
        rules: list[tuple[GroundAtom, tuple]],
        sources: list[Source],
    ):
        self.location = location
        self.query = query
        self.rules = rules
        self.sources = sources
        self._compiled = None

    @property
    def world_count(self) -> int:
        count = 1
        for source in self.sources:
            count *= source.outcome_count
        return count

    def source_index(self) -> dict[GroundAtom, tuple[int, Source]]:
        index: dict[GroundAtom, tuple[int, Source]] = {}
        for i, source in enumerate(self.sources):
            if isinstance(source, ChoiceSource):
                for atom in source.atoms:
                    index[atom] = (i, source)
            else:
                index[source.atom] = (i, source)
        return index


def _cell_constants(cell: tuple[int, int]) -> tuple[str, str]:
    row, col = cell
    return f"x_{col}", f"y_{row}"


def bind_query(query: Atom, cell: tuple[int, int] | None) -> GroundAtom:
    """Bind the query's variables, in order of appearance, to the cell constants."""
    if cell is None:
        return atom_key(query, {})
    x_const, y_const = _cell_constants(cell)
    bindings: dict[str, str] = {}
    order = [x_const, y_const]
    for term in query.args:
        if isinstance(term, Variable) and term.name not in bindings:
            if not order:
                raise GroundingError("query has more than two location variables")
            bindings[term.name] = order.pop(0)
    return atom_key(query, bindings)


def ground(
    program: Program,
    cell: tuple[int, int] | None,
    field: RelationField | None,
    query: Atom,
) -> GroundProgram:
    """Ground `program` for one cell; raises GroundingError subclasses on misuse."""
    x_const, y_const = _cell_constants(cell) if cell is not None else (None, None)

    rule_clauses = [c for c in program.clauses if isinstance(c, Rule)]
    bern_clauses = [c for c in program.clauses if isinstance(c, BernoulliFact)]
    dist_clauses = [c for c in program.clauses if isinstance(c, DistributionalFact)]
    ad_clauses = [c for c in program.clauses if isinstance(c, AnnotatedDisjunction)]

    ground_rules: list[tuple[GroundAtom, tuple]] = []
    bern_sources: dict[GroundAtom, float] = {}
    cont_sources: dict[GroundAtom, dict] = {}
    choice_sources: list[tuple[AnnotatedDisjunction, tuple[GroundAtom, ...]]] = []
    registered_ads: set[int] = set()
    visited: set[GroundAtom] = set()

    def is_cell_relation(g: GroundAtom) -> bool:
        return (
            len(g) == 4
            and g[0] in RELATION_PREDICATES
            and g[1] == x_const
            and g[2] == y_const
        )

    def field_params(g: GroundAtom) -> tuple[float, float, float]:
        cls = g[3]
        if field is None or cls not in field.classes:
            raise UnknownClass(
                f"program references class {cls!r} absent from the relation field"
            )
        return field.parameters_at(cell[0], cell[1], cls)

    def require_continuous(g: GroundAtom) -> dict:
        entry = cont_sources.get(g)
        if entry is not None:
            return entry
        for clause in dist_clauses:
            if match_head(clause.head, g) is not None:
                entry = {
                    "mean": float(clause.dist.mean),
                    "sigma": float(clause.dist.sigma),
                    "thresholds": set(),
                }
                cont_sources[g] = entry
                return entry
        if g[0] == "distance" and is_cell_relation(g):
            mean, sigma, _ = field_params(g)
            entry = {"mean": mean, "sigma": sigma, "thresholds": set()}
            cont_sources[g] = entry
            return entry
        raise GroundingError(
            f"no distribution for {format_ground_atom(g)} used in a comparison"
        )

    def need_atom(g: GroundAtom):
        if g in visited:
            return
        visited.add(g)
        if g in cont_sources:
            raise GroundingError(
                f"continuous value {format_ground_atom(g)} used as a plain literal"
            )

        defined = False
        for clause in rule_clauses:
            bindings = match_head(clause.head, g)
            if bindings is None:
                continue
            defined = True
            disjuncts = []
            for conj in clause.body:
                literals = []
                for lit in conj:
                    literals.append(ground_literal(lit, bindings))
                disjuncts.append(tuple(literals))
            ground_rules.append((g, tuple(disjuncts)))

        for clause in bern_clauses:
            if match_head(clause.head, g) is not None:
                defined = True
                if g not in bern_sources:
                    bern_sources[g] = float(clause.p)
                break

        for ad_index, clause in enumerate(ad_clauses):
            for _, head in clause.alternatives:
                if not head.is_ground():
                    raise GroundingError(
                        "annotated disjunction alternatives must be ground"
                    )
                if atom_key(head) == g:
                    defined = True
                    if ad_index not in registered_ads:
                        registered_ads.add(ad_index)
                        alt_keys = tuple(atom_key(h) for _, h in clause.alternatives)
                        choice_sources.append((clause, alt_keys))
                    break

        for clause in dist_clauses:
            if match_head(clause.head, g) is not None:
                raise GroundingError(
                    f"continuous value {format_ground_atom(g)} used as a plain literal"
                )

        if not defined and is_cell_relation(g):
            if g[0] == "over":
                _, _, p = field_params(g)
                bern_sources[g] = p
                defined = True
            else:
                raise GroundingError(
                    f"continuous value {format_ground_atom(g)} used as a plain literal"
                )
        # Anything still undefined is false under the closed-world reading.

    def ground_literal(lit, bindings: dict[str, str]):
        if isinstance(lit, Pos):
            g = atom_key(lit.atom, bindings)
            need_atom(g)
            return ("pos", g)
        if isinstance(lit, Neg):
            g = atom_key(lit.atom, bindings)
            need_atom(g)
            return ("neg", g)
        if isinstance(lit, Compare):
            left, op, right = lit.left, lit.op, lit.right
            if isinstance(left, Number) and isinstance(right, Atom):
                left, op, right = right, _CMP_FLIP[op], left
            if not (isinstance(left, Atom) and isinstance(right, Number)):
                raise GroundingError(
                    "comparison needs one distributional atom and one number"
                )
            g = atom_key(left, bindings)
            entry = require_continuous(g)
            threshold = float(right.value)
            entry["thresholds"].add(threshold)
            return ("cmp", g, op, threshold)
        raise GroundingError(f"unsupported literal {lit!r}")

    query_key = bind_query(query, cell)
    need_atom(query_key)

    sources: list[Source] = []
    for g, entry in cont_sources.items():
        sources.append(
            ContinuousSource(
                g, entry["mean"], entry["sigma"], tuple(sorted(entry["thresholds"]))
            )
        )
    for g, p in bern_sources.items():
        sources.append(BernoulliSource(g, p))
    for clause, alt_keys in choice_sources:
        probs = tuple(float(p) for p, _ in clause.alternatives)
        residual = float(Fraction(1) - clause.weight_sum)
        sources.append(ChoiceSource(alt_keys, probs, residual))

    gp = GroundProgram(cell, query_key, ground_rules, sources)
    _check_stratified(gp)
    return gp


def _check_stratified(gp: GroundProgram):
    """Reject recursion through negation on the ground dependency graph."""
    pos_edges: dict[GroundAtom, set[GroundAtom]] = {}
    neg_edges: dict[GroundAtom, set[GroundAtom]] = {}
    for head, disjuncts in gp.rules:
        for conj in disjuncts:
            for lit in conj:
                if lit[0] == "pos":
                    pos_edges.setdefault(head, set()).add(lit[1])
                elif lit[0] == "neg":
                    neg_edges.setdefault(head, set()).add(lit[1])

    sccs = strongly_connected_components(gp)
    component: dict[GroundAtom, int] = {}
    for i, scc in enumerate(sccs):
        for atom in scc:
            component[atom] = i
    for head, targets in neg_edges.items():
        for target in targets:
            if component.get(head) == component.get(target) and head in component:
                raise UnstratifiedProgram(
                    f"negation cycle through {format_ground_atom(head)}"
                )


def strongly_connected_components(gp: GroundProgram) -> list[list[GroundAtom]]:
    """Tarjan SCCs of the ground dependency graph, in reverse topological order
    (every component comes after the components it depends on)."""
    edges: dict[GroundAtom, list[GroundAtom]] = {}
    nodes: list[GroundAtom] = []
    seen: set[GroundAtom] = set()

    def add_node(a: GroundAtom):
        if a not in seen:
            seen.add(a)
            nodes.append(a)
            edges.setdefault(a, [])

    for head, disjuncts in gp.rules:
        add_node(head)
        for conj in disjuncts:
            for lit in conj:
                if lit[0] in ("pos", "neg"):
                    add_node(lit[1])
                    edges[head].append(lit[1])
    add_node(gp.query)

    index_counter = 0
    index: dict[GroundAtom, int] = {}
    lowlink: dict[GroundAtom, int] = {}
    on_stack: set[GroundAtom] = set()
    stack: list[GroundAtom] = []
    result: list[list[GroundAtom]] = []

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges[root]))]
        index[root] = lowlink[root] = index_counter
        index_counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = lowlink[child] = index_counter
                    index_counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(edges[child])))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                scc = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    scc.append(member)
                    if member == node:
                        break
                result.append(scc)
    return result
