"""Grounding and exact inference by world enumeration."""

from .engine import (
    DEFAULT_WORLD_LIMIT,
    World,
    WorldCountExceeded,
    evaluate_world,
    interval_abstraction,
    make_world,
    outcome_probabilities,
    query_probability,
    structural_signature,
    world_probabilities,
)
from .ground import (
    RELATION_PREDICATES,
    BernoulliSource,
    ChoiceSource,
    ContinuousSource,
    GroundAtom,
    GroundProgram,
    GroundingError,
    Source,
    UnknownClass,
    UnstratifiedProgram,
    atom_key,
    bind_query,
    format_ground_atom,
    ground,
)
from .normal import normal_cdf

__all__ = [
    "RELATION_PREDICATES",
    "BernoulliSource",
    "ChoiceSource",
    "ContinuousSource",
    "DEFAULT_WORLD_LIMIT",
    "GroundAtom",
    "GroundProgram",
    "GroundingError",
    "Source",
    "UnknownClass",
    "UnstratifiedProgram",
    "World",
    "WorldCountExceeded",
    "atom_key",
    "bind_query",
    "evaluate_world",
    "format_ground_atom",
    "ground",
    "interval_abstraction",
    "make_world",
    "normal_cdf",
    "outcome_probabilities",
    "query_probability",
    "structural_signature",
    "world_probabilities",
]
