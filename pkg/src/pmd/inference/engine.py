"""Exact query probabilities by enumeration over interval-abstracted worlds.

Comparison thresholds split each continuous source into intervals; a world
assigns every source one outcome (interval index, boolean, or chosen
alternative) and has the product of the outcome probabilities. The query
probability is the exact sum over worlds where the query holds. Within a
world every comparison on a source is decided by the same interval index, so
nested events like {X<50} inside {X<500} are correlated structurally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .ground import (
    BernoulliSource,
    ChoiceSource,
    ContinuousSource,
    GroundAtom,
    GroundProgram,
    Source,
    format_ground_atom,
    strongly_connected_components,
)
from .normal import normal_cdf

DEFAULT_WORLD_LIMIT = 1_000_000


class WorldCountExceeded(RuntimeError):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"{count} worlds exceed the configured limit of {limit}")


def interval_abstraction(source: ContinuousSource) -> list[tuple[float, float, float]]:
    """Intervals (lo, hi] induced by the thresholds, each with its probability."""
    if not source.thresholds:
        return [(-math.inf, math.inf, 1.0)]
    cdf = [normal_cdf(t, source.mean, source.sigma) for t in source.thresholds]
    bounds = (-math.inf, *source.thresholds, math.inf)
    probs = [cdf[0]]
    for i in range(1, len(cdf)):
        probs.append(cdf[i] - cdf[i - 1])
    probs.append(1.0 - cdf[-1])
    return [(bounds[i], bounds[i + 1], probs[i]) for i in range(len(probs))]


def outcome_probabilities(source: Source) -> list[float]:
    if isinstance(source, ContinuousSource):
        return [p for _, _, p in interval_abstraction(source)]
    if isinstance(source, BernoulliSource):
        return [source.p, 1.0 - source.p]
    probs = list(source.probs)
    if source.residual > 0.0:
        probs.append(source.residual)
    return probs


@dataclass(frozen=True)
class World:
    """One outcome index per source, in the ground program's source order."""

    outcomes: tuple[int, ...]

    def probability(self, gp: GroundProgram) -> float:
        p = 1.0
        for source, outcome in zip(gp.sources, self.outcomes):
            p *= outcome_probabilities(source)[outcome]
        return p


def make_world(gp: GroundProgram, assignment: dict[str, object]) -> World:
    """Build a World from human-readable source assignments (for tests and tools).

    Keys are formatted ground atoms. Continuous sources take an interval index,
    Bernoulli sources a boolean, choice sources the name of the selected
    alternative (or None for the residual outcome).
    """
    outcomes = []
    for source in gp.sources:
        if isinstance(source, ChoiceSource):
            keys = [format_ground_atom(a) for a in source.atoms]
            selected = next((assignment[k] for k in keys if k in assignment), None)
            if selected is None:
                if source.residual <= 0.0:
                    raise KeyError(f"no assignment for choice over {keys}")
                outcomes.append(len(source.atoms))
            else:
                names = [a[0] for a in source.atoms]
                outcomes.append(names.index(selected))
        else:
            key = format_ground_atom(source.atom)
            if key not in assignment:
                raise KeyError(f"no assignment for source {key}")
            value = assignment[key]
            if isinstance(source, BernoulliSource):
                outcomes.append(0 if value else 1)
            else:
                outcomes.append(int(value))
    return World(tuple(outcomes))


class _Compiled:
    """Integer-indexed rules grouped by evaluation stratum."""

    def __init__(self, gp: GroundProgram):
        self.atom_ids: dict[GroundAtom, int] = {}

        def intern(atom: GroundAtom) -> int:
            if atom not in self.atom_ids:
                self.atom_ids[atom] = len(self.atom_ids)
            return self.atom_ids[atom]

        # Base truths supplied by the world.
        self.bernoulli: list[tuple[int, int]] = []  # (source index, atom id)
        self.choices: list[tuple[int, tuple[int, ...]]] = []
        for i, source in enumerate(gp.sources):
            if isinstance(source, BernoulliSource):
                self.bernoulli.append((i, intern(source.atom)))
            elif isinstance(source, ChoiceSource):
                self.choices.append((i, tuple(intern(a) for a in source.atoms)))

        source_pos = {}
        for i, source in enumerate(gp.sources):
            if isinstance(source, ContinuousSource):
                source_pos[source.atom] = (
                    i,
                    {t: k for k, t in enumerate(source.thresholds)},
                )

        def compile_literal(lit):
            if lit[0] == "pos":
                return (0, intern(lit[1]), 0)
            if lit[0] == "neg":
                return (1, intern(lit[1]), 0)
            _, atom, op, threshold = lit
            idx, positions = source_pos[atom]
            pos = positions[threshold]
            if op in ("<", "=<"):
                return (2, idx, pos)  # true iff interval index <= pos
            return (3, idx, pos)  # complement

        compiled_rules = []
        for head, disjuncts in gp.rules:
            compiled_rules.append(
                (
                    intern(head),
                    tuple(tuple(compile_literal(l) for l in conj) for conj in disjuncts),
                )
            )

        self.query_id = intern(gp.query)
        self.atom_count = len(self.atom_ids)

        # Group rules by stratum so each fixpoint only loops over its own SCC.
        sccs = strongly_connected_components(gp)
        component = {}
        for comp_index, scc in enumerate(sccs):
            for atom in scc:
                component[atom] = comp_index
        order = sorted(
            range(len(compiled_rules)),
            key=lambda r: component.get(gp.rules[r][0], 0),
        )
        self.strata: list[list[tuple[int, tuple]]] = []
        last = None
        for r in order:
            stratum = component.get(gp.rules[r][0], 0)
            if stratum != last:
                self.strata.append([])
                last = stratum
            self.strata[-1].append(compiled_rules[r])

        # Structural signature: identical across cells of the same landscape,
        # letting callers share the outcome->truth memo between cells.
        self.signature = repr(
            (
                [
                    (type(s).__name__, s.outcome_count)
                    for s in gp.sources
                ],
                self.bernoulli,
                self.choices,
                [(h, d) for h, d in compiled_rules],
                self.query_id,
            )
        )

    def evaluate(self, outcomes: tuple[int, ...], target_id: int | None = None) -> bool:
        truth = bytearray(self.atom_count)
        for source_idx, atom_id in self.bernoulli:
            truth[atom_id] = 1 if outcomes[source_idx] == 0 else 0
        for source_idx, atom_ids in self.choices:
            chosen = outcomes[source_idx]
            if chosen < len(atom_ids):
                truth[atom_ids[chosen]] = 1

        for stratum in self.strata:
            changed = True
            while changed:
                changed = False
                for head_id, disjuncts in stratum:
                    if truth[head_id]:
                        continue
                    satisfied = False
                    for conj in disjuncts:
                        ok = True
                        for kind, a, b in conj:
                            if kind == 0:
                                if not truth[a]:
                                    ok = False
                                    break
                            elif kind == 1:
                                if truth[a]:
                                    ok = False
                                    break
                            elif kind == 2:
                                if outcomes[a] > b:
                                    ok = False
                                    break
                            else:
                                if outcomes[a] <= b:
                                    ok = False
                                    break
                        if ok:
                            satisfied = True
                            break
                    if satisfied:
                        truth[head_id] = 1
                        changed = True
        return bool(truth[self.query_id if target_id is None else target_id])


def _compiled(gp: GroundProgram) -> _Compiled:
    if gp._compiled is None:
        gp._compiled = _Compiled(gp)
    return gp._compiled


def evaluate_world(gp: GroundProgram, world: World, query_atom=None) -> bool:
    """Truth of the query (or of another atom in the ground program) in one world."""
    compiled = _compiled(gp)
    target_id = None
    if query_atom is not None:
        from .ground import atom_key

        target = atom_key(query_atom)
        if target not in compiled.atom_ids:
            raise KeyError(f"query atom {format_ground_atom(target)} not in ground program")
        target_id = compiled.atom_ids[target]
    return compiled.evaluate(world.outcomes, target_id)


def query_probability(
    gp: GroundProgram,
    limit: int = DEFAULT_WORLD_LIMIT,
    memo: dict | None = None,
) -> float:
    """Exact probability of the ground program's query.

    `memo` may carry an outcome->truth cache shared between structurally
    identical ground programs (e.g. the cells of one landscape); it only
    short-circuits boolean evaluation and never changes the result.
    """
    count = gp.world_count
    if count > limit:
        raise WorldCountExceeded(count, limit)
    compiled = _compiled(gp)

    outcome_lists = []
    for source in gp.sources:
        probs = outcome_probabilities(source)
        outcome_lists.append([(k, p) for k, p in enumerate(probs) if p != 0.0])

    total = 0.0
    evaluate = compiled.evaluate
    if memo is None:
        for combo in product(*outcome_lists):
            p = 1.0
            for _, w in combo:
                p *= w
            outcomes = tuple(k for k, _ in combo)
            if evaluate(outcomes):
                total += p
    else:
        for combo in product(*outcome_lists):
            p = 1.0
            for _, w in combo:
                p *= w
            outcomes = tuple(k for k, _ in combo)
            hit = memo.get(outcomes)
            if hit is None:
                hit = evaluate(outcomes)
                memo[outcomes] = hit
            if hit:
                total += p
    # Accumulated rounding can leave the sum a few ulp outside [0, 1].
    return min(1.0, max(0.0, total))


def world_probabilities(gp: GroundProgram) -> list[tuple[World, float]]:
    """All worlds with their probabilities (zero-probability worlds included)."""
    outcome_lists = [
        list(enumerate(outcome_probabilities(s))) for s in gp.sources
    ]
    worlds = []
    for combo in product(*outcome_lists):
        p = 1.0
        for _, w in combo:
            p *= w
        worlds.append((World(tuple(k for k, _ in combo)), p))
    return worlds


def structural_signature(gp: GroundProgram) -> str:
    return _compiled(gp).signature
