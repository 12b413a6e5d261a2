"""Basic open sets of the twelve topology kinds, their local schedules and traces.

Bounded kinds intersect a cone with a Euclidean ball of the coordinate frame.
Interval kinds are evaluated through the subbasic complements of their
generating relation, so their membership does not share code with the
closed-form recipes of the intersection kinds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

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
    classify_array,
    displacement,
)
from .relations import (
    LIGHT_CONE,
    SPACE_CONE,
    TIME_CONE,
    Partition,
    Relation,
    RelationKind,
    minimal_interval_nbhd,
    subbasic_complement_contains,
)

__all__ = [
    "TopologyKind",
    "BasicNbhd",
    "Schedule",
    "Interval",
    "member",
    "member_array",
    "local_schedule",
    "intersection_member",
    "trace_on_line",
    "alexandrov_nbhd",
    "ALL_KINDS",
    "DASHED_PAIRS",
]

C = CausalClass


class TopologyKind(enum.Enum):
    MANIFOLD = "Manifold"
    ALEXANDROV = "Alexandrov"
    Z = "Z"
    ZT = "ZT"
    ZS = "ZS"
    INT_HORISMOS = "IntHorismos"
    INT_SPACELIKE = "IntSpacelike"
    INT_CAUSAL = "IntCausal"
    ZT_DASH = "ZTDash"
    ZS_DASH = "ZSDash"
    INT_SPACELIKE_DASH = "IntSpacelikeDash"
    INT_CAUSAL_DASH = "IntCausalDash"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: str) -> "TopologyKind":
        for k in cls:
            if k.value.lower() == name.lower() or k.name.lower() == name.lower():
                return k
        raise ValueError(f"unknown topology kind {name!r}")

    @property
    def bounded(self) -> bool:
        return self in _BALL_KINDS

    @property
    def interval(self) -> bool:
        return self in INTERVAL_RELATION

    @property
    def needs_partition(self) -> bool:
        return self in (TopologyKind.INT_SPACELIKE, TopologyKind.INT_SPACELIKE_DASH)


T = TopologyKind
ALL_KINDS = tuple(TopologyKind)

# Cone classes kept (besides the apex) by the ball-bounded kinds.
BALL_CLASSES = {
    T.MANIFOLD: TIME_CONE | LIGHT_CONE | SPACE_CONE,
    T.Z: TIME_CONE | SPACE_CONE,
    T.ZT: TIME_CONE,
    T.ZS: SPACE_CONE,
    T.ZT_DASH: TIME_CONE | LIGHT_CONE,
    T.ZS_DASH: SPACE_CONE | LIGHT_CONE,
}
_BALL_KINDS = frozenset(BALL_CLASSES)

INTERVAL_RELATION = {
    T.INT_HORISMOS: RelationKind.HORISMOS_IRR,
    T.INT_SPACELIKE: RelationKind.SPACELIKE_LEQ,
    T.INT_CAUSAL: RelationKind.CAUSAL_IRR,
    T.INT_SPACELIKE_DASH: RelationKind.SPACELIKE_LT,
    T.INT_CAUSAL_DASH: RelationKind.CHRONO,
}

# undashed -> dashed
DASHED_PAIRS = {
    T.ZT: T.ZT_DASH,
    T.ZS: T.ZS_DASH,
    T.INT_SPACELIKE: T.INT_SPACELIKE_DASH,
    T.INT_CAUSAL: T.INT_CAUSAL_DASH,
}

# intersection kind -> interval kind whose minimal set, cut by a ball, gives it
INTERSECTION_OF = {
    T.ZT: T.INT_SPACELIKE,
    T.ZS: T.INT_CAUSAL,
    T.Z: T.INT_HORISMOS,
    T.ZT_DASH: T.INT_SPACELIKE_DASH,
    T.ZS_DASH: T.INT_CAUSAL_DASH,
}


@dataclass(frozen=True)
class BasicNbhd:
    """A basic open set: a membership predicate around ``center``.

    ``witnesses`` are extra subbasic sets ``(relation, centre, side)`` that an
    interval-kind neighbourhood is intersected with.
    """

    kind: TopologyKind
    center: Event
    radius: Optional[float] = None
    partition: Optional[Partition] = None
    tips: Optional[tuple] = None
    witnesses: tuple = field(default=())

    def __post_init__(self):
        if not isinstance(self.center, Event):
            object.__setattr__(self, "center", Event(self.center))
        if self.kind.bounded:
            if self.radius is None or not self.radius > 0:
                raise ValueError(f"{self.kind} needs a positive radius")
        if self.kind.needs_partition and self.partition is None:
            raise ValueError(f"{self.kind} needs a partition")
        if self.kind is T.ALEXANDROV and self.tips is None:
            raise ValueError("Alexandrov neighbourhoods need tips (a, b)")

    @property
    def relation(self) -> Relation:
        rk = INTERVAL_RELATION[self.kind]
        partition = self.partition if rk in (RelationKind.SPACELIKE_LEQ, RelationKind.SPACELIKE_LT) else None
        return Relation(rk, partition)

    def __contains__(self, q) -> bool:
        return member(self, q)

    def describe(self) -> str:
        c = ",".join(f"{v:g}" for v in self.center)
        if self.kind is T.ALEXANDROV:
            a, b = self.tips
            return f"{self.kind}(a=({','.join(f'{v:g}' for v in a)}),b=({','.join(f'{v:g}' for v in b)}))"
        if self.radius is not None:
            return f"{self.kind}(x=({c}),eps={self.radius:g})"
        return f"{self.kind}(x=({c}))"


def _in_ball(v: Sequence[float], radius: float) -> bool:
    return sum(c * c for c in v) < radius * radius


def member(b: BasicNbhd, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    kind = b.kind
    if kind in BALL_CLASSES:
        v = displacement(b.center, q)
        if not _in_ball(v, b.radius):
            return False
        cls = classify(b.center, q, tol)
        return cls is C.EQUAL or cls in BALL_CLASSES[kind]
    if kind is T.ALEXANDROV:
        a, tip = b.tips
        return classify(a, q, tol) is C.CHRONO_FUTURE and classify(q, tip, tol) is C.CHRONO_FUTURE
    rel = b.relation
    for r, z, side in ((rel, b.center, "upper"), (rel, b.center, "lower")) + tuple(b.witnesses):
        if not subbasic_complement_contains(r, z, side, q, tol):
            return False
    return True


def member_array(b: BasicNbhd, qs: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Vectorised membership via the closed-form cone of each kind.

    Witness sets of interval kinds are not supported here.
    """
    qs = np.asarray(qs, dtype=float)
    kind = b.kind
    if kind is T.ALEXANDROV:
        a, tip = b.tips
        fut = CLASS_CODES[C.CHRONO_FUTURE]
        past = CLASS_CODES[C.CHRONO_PAST]
        return (classify_array(a, qs, tol) == fut) & (classify_array(tip, qs, tol) == past)
    codes = classify_array(b.center, qs, tol)
    if kind in BALL_CLASSES:
        allowed = [CLASS_CODES[c] for c in BALL_CLASSES[kind]] + [CLASS_CODES[C.EQUAL]]
        d = qs - np.asarray(b.center.coords)
        inside = (d * d).sum(axis=1) < b.radius * b.radius
        return inside & np.isin(codes, allowed)
    if b.witnesses:
        raise ValueError("member_array does not evaluate witness subbasic sets")
    region = minimal_interval_nbhd(Relation(INTERVAL_RELATION[kind], _any_partition(b)), b.center)
    return region.contains_array(qs, codes)


def _any_partition(b: BasicNbhd) -> Optional[Partition]:
    if INTERVAL_RELATION[b.kind] in (RelationKind.SPACELIKE_LEQ, RelationKind.SPACELIKE_LT):
        return b.partition or Partition.default(b.center.n)
    return None


def intersection_member(b1: BasicNbhd, b2: BasicNbhd, q: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    if b1.center.n != b2.center.n:
        raise ValueError("dimension mismatch")
    return member(b1, q, tol) and member(b2, q, tol)


def alexandrov_nbhd(a: EventLike, b: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> BasicNbhd:
    """The chronological diamond ``I+(a) & I-(b)``."""
    a = a if isinstance(a, Event) else Event(_coords(a))
    b = b if isinstance(b, Event) else Event(_coords(b))
    if classify(a, b, tol) is not C.CHRONO_FUTURE:
        raise ValueError("diamond tips must satisfy a << b")
    mid = Event(tuple((u + v) / 2 for u, v in zip(a, b)))
    return BasicNbhd(T.ALEXANDROV, mid, tips=(a, b))


@dataclass(frozen=True)
class Schedule:
    """Countable shrinking schedule ``eps_k = eps0 * 2**-k`` for ``k < steps``."""

    eps0: float = 0.5
    steps: int = 3

    def __post_init__(self):
        if not self.eps0 > 0:
            raise ValueError("eps0 must be positive")
        if self.steps < 1:
            raise ValueError("a schedule needs at least one step")

    @property
    def radii(self) -> list:
        return [self.eps0 * 2.0**-k for k in range(self.steps)]


def local_schedule(
    kind: TopologyKind,
    x: EventLike,
    eps0: float = 0.5,
    steps: int = 3,
    partition: Optional[Partition] = None,
    witnesses: tuple = (),
) -> list:
    """Nested basic neighbourhoods of ``x``, largest first.

    Unbounded interval kinds have a single minimal set at ``x``.  Alexandrov
    diamonds use tips ``x -/+ (eps_k, 0, ...)``.
    """
    x = x if isinstance(x, Event) else Event(_coords(x))
    radii = Schedule(eps0, steps).radii
    if kind.interval:
        if kind.needs_partition and partition is None:
            partition = Partition.default(x.n)
        return [BasicNbhd(kind, x, partition=partition if kind.needs_partition else None, witnesses=tuple(witnesses))]
    if kind is T.ALEXANDROV:
        out = []
        for r in radii:
            dt = (r,) + (0.0,) * x.n
            a = Event(tuple(c - d for c, d in zip(x, dt)))
            b = Event(tuple(c + d for c, d in zip(x, dt)))
            out.append(BasicNbhd(T.ALEXANDROV, x, tips=(a, b)))
        return out
    return [BasicNbhd(kind, x, radius=r) for r in radii]


class Interval(NamedTuple):
    """Run of member samples ``lo..hi``; ``lo_out``/``hi_out`` are the adjacent non-members."""

    lo: float
    hi: float
    lo_out: Optional[float]
    hi_out: Optional[float]

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi


def trace_on_line(
    b: BasicNbhd,
    line: tuple,
    samples: int = 10_000,
    span: float = 2.0,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> list:
    """Parameter runs ``{s : point + s*direction in b}`` on a symmetric grid.

    The grid ``s = k*h`` for ``|k| <= samples // 2`` always contains ``s = 0``.
    """
    point, direction = line
    point = np.asarray(_coords(point), dtype=float)
    direction = np.asarray(_coords(direction), dtype=float)
    if not np.any(direction):
        raise ValueError("degenerate line direction")
    m = samples // 2
    h = span / m
    s = np.arange(-m, m + 1) * h
    pts = point[None, :] + s[:, None] * direction[None, :]
    if b.witnesses:
        inside = np.array([member(b, p, tol) for p in pts])
    else:
        inside = member_array(b, pts, tol)
    runs = []
    i = 0
    while i < len(s):
        if not inside[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(s) and inside[j + 1]:
            j += 1
        runs.append(Interval(
            float(s[i]), float(s[j]),
            float(s[i - 1]) if i > 0 else None,
            float(s[j + 1]) if j + 1 < len(s) else None,
        ))
        i = j + 1
    return runs
