"""Causal and spacelike order relations, cone regions and interval-topology subbases.

Every relation here is irreflexive, so the upper set ``{q : x R q}`` and the
lower set ``{q : q R x}`` never contain ``x``.  The interval topology of a
relation is generated by the complements of these sets; at a fixed centre the
intersection of the two complements is the *minimal interval neighbourhood*,
which has a closed form as a union of causal classes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import (
    CLASS_CODES,
    DEFAULT_TOL,
    CausalClass,
    Event,
    EventLike,
    TolerancePolicy,
    _coords,
    classify,
    displacement,
    first_nonzero_sign,
)

__all__ = [
    "Partition",
    "RelationKind",
    "Relation",
    "ConeKind",
    "ConeRegion",
    "in_region",
    "space_side",
    "related",
    "upper_contains",
    "lower_contains",
    "subbasic_complement_contains",
    "minimal_interval_nbhd",
]

C = CausalClass
TIME_CONE = frozenset({C.CHRONO_FUTURE, C.CHRONO_PAST})
LIGHT_CONE = frozenset({C.HORISMOS_FUTURE, C.HORISMOS_PAST})
SPACE_CONE = frozenset({C.SPACELIKE})


@dataclass(frozen=True)
class Partition:
    """Splits the space cone by the hyperplane orthogonal to a spatial axis ``e``."""

    axis: tuple

    def __post_init__(self):
        axis = tuple(float(a) for a in self.axis)
        norm = math.sqrt(sum(a * a for a in axis))
        if not axis or abs(norm - 1.0) > 1e-9:
            raise ValueError(f"partition axis must be a unit vector, got norm {norm:g}")
        object.__setattr__(self, "axis", axis)

    @classmethod
    def along(cls, direction: Sequence[float]) -> "Partition":
        d = np.asarray(direction, dtype=float)
        return cls(tuple(d / np.linalg.norm(d)))

    @classmethod
    def default(cls, n: int = 3) -> "Partition":
        return cls((1.0,) + (0.0,) * (n - 1))

    @classmethod
    def random(cls, rng: np.random.Generator, n: int = 3) -> "Partition":
        return cls.along(rng.standard_normal(n))

    @property
    def n(self) -> int:
        return len(self.axis)


def space_side(
    partition: Partition, x: EventLike, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL
) -> int:
    """+1 if ``q`` lies on the ``+e`` side of the hyperplane through ``x``, else -1 (0 at ``x``).

    Ties within the band are broken by the sign of the first nonzero spatial
    displacement coordinate, so the side flips when ``x`` and ``q`` are swapped.
    """
    v = displacement(x, q)
    spatial = v[1:]
    if len(spatial) != partition.n:
        raise ValueError("partition dimension does not match events")
    proj = sum(a * b for a, b in zip(spatial, partition.axis))
    band = tol.band(v)
    if proj > band:
        return 1
    if proj < -band:
        return -1
    return first_nonzero_sign(spatial)


class ConeKind(enum.Enum):
    TIME_CONE_BOTH = "TimeConeBoth"
    SPACE_CONE = "SpaceCone"
    SPACE_CONE_PLUS = "SpaceConePlus"
    SPACE_CONE_MINUS = "SpaceConeMinus"
    LIGHT_CONE_BOTH = "LightConeBoth"
    CAUSAL_CONE_BOTH = "CausalConeBoth"
    CLOSED_SPACE_CONE = "ClosedSpaceCone"
    # complement of the light cone; the minimal neighbourhood for irreflexive horismos
    OFF_LIGHT_CONE = "OffLightCone"


CONE_CLASSES = {
    ConeKind.TIME_CONE_BOTH: TIME_CONE,
    ConeKind.SPACE_CONE: SPACE_CONE,
    ConeKind.SPACE_CONE_PLUS: SPACE_CONE,
    ConeKind.SPACE_CONE_MINUS: SPACE_CONE,
    ConeKind.LIGHT_CONE_BOTH: LIGHT_CONE,
    ConeKind.CAUSAL_CONE_BOTH: TIME_CONE | LIGHT_CONE,
    ConeKind.CLOSED_SPACE_CONE: SPACE_CONE | LIGHT_CONE,
    ConeKind.OFF_LIGHT_CONE: TIME_CONE | SPACE_CONE,
}
_SIDED = {ConeKind.SPACE_CONE_PLUS: 1, ConeKind.SPACE_CONE_MINUS: -1}


@dataclass(frozen=True)
class ConeRegion:
    """A cone at ``apex``.  The apex is a member only if ``include_apex``."""

    kind: ConeKind
    apex: Event
    partition: Optional[Partition] = None
    include_apex: bool = False

    def __post_init__(self):
        if not isinstance(self.apex, Event):
            object.__setattr__(self, "apex", Event(self.apex))
        if self.kind in _SIDED and self.partition is None:
            raise ValueError(f"{self.kind.value} needs a partition")

    @property
    def classes(self) -> frozenset:
        return CONE_CLASSES[self.kind]

    def contains(self, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return in_region(self, q, tol)

    def contains_array(self, qs: np.ndarray, codes: np.ndarray | None = None) -> np.ndarray:
        """Vectorised membership for the unsided kinds, given precomputed class codes."""
        if self.kind in _SIDED:
            raise ValueError("vectorised membership is only defined for unsided cones")
        allowed = [CLASS_CODES[c] for c in self.classes]
        if self.include_apex:
            allowed.append(CLASS_CODES[C.EQUAL])
        return np.isin(codes, allowed)


def in_region(r: ConeRegion, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    cls = classify(r.apex, q, tol)
    if cls is C.EQUAL:
        return r.include_apex
    if cls not in r.classes:
        return False
    side = _SIDED.get(r.kind)
    if side is None:
        return True
    return space_side(r.partition, r.apex, q, tol) == side


class RelationKind(enum.Enum):
    CHRONO = "Chrono"
    CAUSAL_IRR = "CausalIrr"
    HORISMOS_IRR = "HorismosIrr"
    SPACELIKE_LEQ = "SpacelikeLeq"
    # strict space-cone order (no horismos part); its interval topology is
    # the dashed interval topology built on causal cones
    SPACELIKE_LT = "SpacelikeLt"


_PARTITIONED = {RelationKind.SPACELIKE_LEQ, RelationKind.SPACELIKE_LT}
NULL_CONVENTIONS = ("split", "full")


@dataclass(frozen=True)
class Relation:
    """An irreflexive relation on events.

    ``null_convention`` only affects ``SPACELIKE_LEQ``: ``"split"`` puts the
    future light cone in the upper set (and so the past light cone in the
    lower set); ``"full"`` puts the whole punctured light cone in both.
    """

    kind: RelationKind
    partition: Optional[Partition] = None
    null_convention: str = "split"

    def __post_init__(self):
        if self.kind in _PARTITIONED and self.partition is None:
            raise ValueError(f"{self.kind.value} requires a partition")
        if self.kind not in _PARTITIONED and self.partition is not None:
            raise ValueError(f"{self.kind.value} does not take a partition")
        if self.null_convention not in NULL_CONVENTIONS:
            raise ValueError(f"unknown null convention {self.null_convention!r}")

    @classmethod
    def chrono(cls) -> "Relation":
        return cls(RelationKind.CHRONO)

    @classmethod
    def causal_irr(cls) -> "Relation":
        return cls(RelationKind.CAUSAL_IRR)

    @classmethod
    def horismos_irr(cls) -> "Relation":
        return cls(RelationKind.HORISMOS_IRR)

    @classmethod
    def spacelike_leq(cls, partition: Partition, null_convention: str = "split") -> "Relation":
        return cls(RelationKind.SPACELIKE_LEQ, partition, null_convention)

    @classmethod
    def spacelike_lt(cls, partition: Partition) -> "Relation":
        return cls(RelationKind.SPACELIKE_LT, partition)

    def __call__(self, x: EventLike, y: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return related(self, x, y, tol)


def related(k: Relation, x: EventLike, y: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Whether ``x k y`` holds."""
    cls = classify(x, y, tol)
    kind = k.kind
    if kind is RelationKind.CHRONO:
        return cls is C.CHRONO_FUTURE
    if kind is RelationKind.CAUSAL_IRR:
        return cls is C.CHRONO_FUTURE or cls is C.HORISMOS_FUTURE
    if kind is RelationKind.HORISMOS_IRR:
        return cls is C.HORISMOS_FUTURE
    if cls is C.SPACELIKE:
        return space_side(k.partition, x, y, tol) > 0
    if kind is RelationKind.SPACELIKE_LEQ:
        if k.null_convention == "full":
            return cls.is_horismos
        return cls is C.HORISMOS_FUTURE
    return False


def upper_contains(k: Relation, z: EventLike, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """``q`` in the strict upper set of ``z``."""
    return related(k, z, q, tol)


def lower_contains(k: Relation, z: EventLike, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """``q`` in the strict lower set of ``z``."""
    return related(k, q, z, tol)


def subbasic_complement_contains(
    k: Relation, z: EventLike, side: str, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL
) -> bool:
    """Membership of ``q`` in ``M - upper(z)`` (``side="upper"``) or ``M - lower(z)``."""
    if side == "upper":
        return not upper_contains(k, z, q, tol)
    if side == "lower":
        return not lower_contains(k, z, q, tol)
    raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")


# Closed forms of (M - upper(x)) & (M - lower(x)); apex always kept.
_MINIMAL = {
    RelationKind.CHRONO: ConeKind.CLOSED_SPACE_CONE,
    RelationKind.CAUSAL_IRR: ConeKind.SPACE_CONE,
    RelationKind.HORISMOS_IRR: ConeKind.OFF_LIGHT_CONE,
    RelationKind.SPACELIKE_LEQ: ConeKind.TIME_CONE_BOTH,
    RelationKind.SPACELIKE_LT: ConeKind.CAUSAL_CONE_BOTH,
}
_ADD_LIGHT_CONE = {
    ConeKind.SPACE_CONE: ConeKind.CLOSED_SPACE_CONE,
    ConeKind.TIME_CONE_BOTH: ConeKind.CAUSAL_CONE_BOTH,
    ConeKind.CLOSED_SPACE_CONE: ConeKind.CLOSED_SPACE_CONE,
    ConeKind.CAUSAL_CONE_BOTH: ConeKind.CAUSAL_CONE_BOTH,
}


def minimal_interval_nbhd(k: Relation, x: EventLike, dashed: bool = False) -> ConeRegion:
    """Smallest basic set of the interval topology of ``k`` centred at ``x``.

    ``dashed=True`` adds the light cone back.  For irreflexive horismos that
    yields the whole space, which is not a cone region, so it is rejected.
    """
    kind = _MINIMAL[k.kind]
    if dashed:
        if kind not in _ADD_LIGHT_CONE:
            raise ValueError("adding the light cone back to the horismos neighbourhood gives the whole space")
        kind = _ADD_LIGHT_CONE[kind]
    if not isinstance(x, Event):
        x = Event(_coords(x))
    return ConeRegion(kind, x, include_apex=True)
