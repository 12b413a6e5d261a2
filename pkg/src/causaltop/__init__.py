"""Causal relations, Zeeman-type spacetime topologies and a limit-curve experiment harness."""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    DEFAULT_TOL,
    CausalClass,
    Event,
    GTransform,
    TolerancePolicy,
    apply_transform,
    classify,
    quadratic_form,
    random_event,
    random_g,
)
from .relations import ConeKind, ConeRegion, Partition, Relation, RelationKind, minimal_interval_nbhd, related  # noqa: E402
from .bases import BasicNbhd, Schedule, TopologyKind, alexandrov_nbhd, local_schedule, member  # noqa: E402

__all__ = [
    "DEFAULT_TOL",
    "CausalClass",
    "Event",
    "GTransform",
    "TolerancePolicy",
    "apply_transform",
    "classify",
    "quadratic_form",
    "random_event",
    "random_g",
    "ConeKind",
    "ConeRegion",
    "Partition",
    "Relation",
    "RelationKind",
    "minimal_interval_nbhd",
    "related",
    "BasicNbhd",
    "Schedule",
    "TopologyKind",
    "alexandrov_nbhd",
    "local_schedule",
    "member",
]
