"""Exact topology computations on finite ground sets.

Subsets of ``{0, ..., n-1}`` are ``int`` bitmasks.  Everything is exhaustive
and exact; ``n`` is capped at 12.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional

MAX_N = 12

__all__ = [
    "FiniteSpace",
    "SetFamily",
    "NotABase",
    "Lemma1Report",
    "generate_from_subbase",
    "intersection_closure",
    "union_closure",
    "pairwise_intersections",
    "base_violation",
    "is_base",
    "intersection_topology",
    "verify_lemma1",
    "random_base",
    "mask",
    "members",
]


def mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def members(m: int) -> list:
    return [i for i in range(m.bit_length()) if m >> i & 1]


@dataclass(frozen=True)
class FiniteSpace:
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"ground set size must be in 1..{MAX_N}, got {self.n}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def family(self, sets: Iterable) -> "SetFamily":
        """Build a family from masks or iterables of elements."""
        return SetFamily(self, frozenset(s if isinstance(s, int) else mask(s) for s in sets))

    def discrete(self) -> "SetFamily":
        return SetFamily(self, frozenset(range(1 << self.n)))

    def indiscrete(self) -> "SetFamily":
        return SetFamily(self, frozenset({0, self.full}))


@dataclass(frozen=True)
class SetFamily:
    space: FiniteSpace
    masks: frozenset

    def __post_init__(self):
        full = self.space.full
        for m in self.masks:
            if m & ~full or m < 0:
                raise ValueError(f"mask {m:#b} is not a subset of the ground set")

    @property
    def n(self) -> int:
        return self.space.n

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        return iter(sorted(self.masks))

    def __contains__(self, m) -> bool:
        return m in self.masks

    @property
    def is_cover(self) -> bool:
        u = 0
        for m in self.masks:
            u |= m
        return u == self.space.full

    @property
    def closed_under_intersection(self) -> bool:
        ms = self.masks
        return all(a & b in ms for a in ms for b in ms)

    @property
    def closed_under_union(self) -> bool:
        ms = self.masks
        return all(a | b in ms for a in ms for b in ms)

    @property
    def is_topology(self) -> bool:
        return (
            0 in self.masks
            and self.space.full in self.masks
            and self.closed_under_union
            and self.closed_under_intersection
        )

    def sets(self) -> list:
        """Members as sorted element lists, in mask order."""
        return [members(m) for m in sorted(self.masks)]


def intersection_closure(space: FiniteSpace, masks: Iterable[int]) -> frozenset:
    """All finite intersections, including the empty one (the whole space)."""
    out = {space.full}
    for b in masks:
        out |= {s & b for s in out}
    return frozenset(out)


def union_closure(masks: Iterable[int]) -> frozenset:
    """All unions, including the empty one."""
    out = {0}
    for b in masks:
        out |= {s | b for s in out}
    return frozenset(out)


def generate_from_subbase(s: SetFamily) -> SetFamily:
    if not s.masks:
        raise ValueError("subbase must be nonempty")
    return SetFamily(s.space, union_closure(intersection_closure(s.space, s.masks)))


def pairwise_intersections(f1: SetFamily, f2: SetFamily) -> SetFamily:
    if f1.space != f2.space:
        raise ValueError("families live on different ground sets")
    return SetFamily(f1.space, frozenset(a & b for a in f1.masks for b in f2.masks))


def base_violation(f: SetFamily) -> Optional[tuple]:
    """First failure of the base axioms, or ``None``.

    Returns ``("cover", missing_points_mask)`` or ``("refine", b1, b2, point)``
    where no member contains ``point`` inside ``b1 & b2``.
    """
    u = 0
    for m in f.masks:
        u |= m
    if u != f.space.full:
        return ("cover", f.space.full & ~u)
    ms = sorted(f.masks)
    for i, b1 in enumerate(ms):
        for b2 in ms[i:]:
            inter = b1 & b2
            if not inter:
                continue
            covered = 0
            for b3 in ms:
                if b3 & ~inter == 0:
                    covered |= b3
            if covered != inter:
                missing = inter & ~covered
                return ("refine", b1, b2, (missing & -missing).bit_length() - 1)
    return None


def is_base(f: SetFamily) -> bool:
    return base_violation(f) is None


@dataclass(frozen=True)
class NotABase:
    """Returned when the pairwise intersections fail the base axioms."""

    family: SetFamily
    violation: tuple


def intersection_topology(t1: SetFamily, t2: SetFamily):
    """Topology based on ``{U1 & U2}``, or :class:`NotABase`."""
    fam = pairwise_intersections(t1, t2)
    bad = base_violation(fam)
    if bad is not None:
        return NotABase(fam, bad)
    return SetFamily(fam.space, union_closure(fam.masks))


@dataclass(frozen=True)
class Lemma1Report:
    passed: bool
    part1: bool
    part2: bool
    counterexample: Optional[int] = None
    detail: str = ""


def verify_lemma1(b1: SetFamily, b2: SetFamily) -> Lemma1Report:
    """Check that pairwise intersections of two bases form a base for their intersection topology."""
    for name, b in (("b1", b1), ("b2", b2)):
        bad = base_violation(b)
        if bad is not None:
            raise ValueError(f"{name} is not a base: {bad}")
    t1 = SetFamily(b1.space, union_closure(b1.masks))
    t2 = SetFamily(b2.space, union_closure(b2.masks))
    t_int = intersection_topology(t1, t2)
    b_int = pairwise_intersections(b1, b2)
    b_int_is_base = is_base(b_int)
    if isinstance(t_int, NotABase):
        # cannot happen for genuine topologies; reported rather than raised
        return Lemma1Report(False, False, False, detail=f"T_int does not exist: {t_int.violation}")
    generated = union_closure(b_int.masks) if b_int_is_base else frozenset()
    diff = sorted(generated ^ t_int.masks)
    part1 = b_int_is_base and not diff
    part2 = (not b_int_is_base) or not diff
    cex = diff[0] if diff else None
    detail = "" if part1 else ("pairwise family is not a base" if not b_int_is_base else f"mismatch at {members(cex)}")
    return Lemma1Report(part1 and part2, part1, part2, cex, detail)


def random_base(rng: random.Random, space: FiniteSpace, max_sets: int = 4) -> SetFamily:
    """A random base: intersection closure of a few random subsets."""
    k = rng.randint(1, max_sets)
    sub = [rng.randrange(1 << space.n) for _ in range(k)]
    return SetFamily(space, intersection_closure(space, sub))
