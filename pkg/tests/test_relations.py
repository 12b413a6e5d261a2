import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from causaltop.geometry import CausalClass, Event, classify
from causaltop.relations import (
    ConeKind,
    ConeRegion,
    Partition,
    Relation,
    RelationKind,
    minimal_interval_nbhd,
    related,
    space_side,
    subbasic_complement_contains,
)
from causaltop.sampling import mixed_points

C = CausalClass
O = Event((0, 0, 0, 0))
E1 = Partition.default(3)
finite = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
events = st.tuples(finite, finite, finite, finite).map(Event)

ALL_RELATIONS = [
    Relation.chrono(),
    Relation.causal_irr(),
    Relation.horismos_irr(),
    Relation.spacelike_leq(E1),
    Relation.spacelike_leq(E1, "full"),
    Relation.spacelike_lt(E1),
]


def test_relation_validation():
    with pytest.raises(ValueError):
        Relation(RelationKind.SPACELIKE_LEQ)
    with pytest.raises(ValueError):
        Relation(RelationKind.CHRONO, E1)
    with pytest.raises(ValueError):
        Relation.spacelike_leq(E1, "weird")
    with pytest.raises(ValueError):
        Partition((1.0, 1.0, 0.0))


@pytest.mark.parametrize(
    "rel, y, expected",
    [
        (Relation.chrono(), (1, 0, 0, 0), True),
        (Relation.chrono(), (1, 1, 0, 0), False),
        (Relation.causal_irr(), (1, 1, 0, 0), True),
        (Relation.causal_irr(), (0, 0, 0, 0), False),
        (Relation.horismos_irr(), (1, 1, 0, 0), True),
        (Relation.horismos_irr(), (1, 0, 0, 0), False),
        (Relation.spacelike_leq(E1), (0, 1, 0, 0), True),
        (Relation.spacelike_leq(E1), (0, -1, 0, 0), False),
        (Relation.spacelike_leq(E1), (1, 1, 0, 0), True),
        (Relation.spacelike_leq(E1), (-1, 1, 0, 0), False),
        (Relation.spacelike_leq(E1, "full"), (-1, 1, 0, 0), True),
        (Relation.spacelike_leq(E1), (1, 0, 0, 0), False),
        (Relation.spacelike_lt(E1), (0, 1, 0, 0), True),
        (Relation.spacelike_lt(E1), (1, 1, 0, 0), False),
    ],
)
def test_related_examples(rel, y, expected):
    assert related(rel, O, Event(y)) is expected


@settings(max_examples=300, deadline=None)
@given(events)
def test_irreflexive(x):
    for rel in ALL_RELATIONS:
        assert not rel(x, x)


@settings(max_examples=300, deadline=None)
@given(events, events)
def test_strict_orders_are_asymmetric(x, y):
    for rel in ALL_RELATIONS[:3] + [Relation.spacelike_lt(E1)]:
        assert not (rel(x, y) and rel(y, x))


@settings(max_examples=300, deadline=None)
@given(events, events)
def test_space_side_antisymmetric(x, y):
    if x != y:
        assert space_side(E1, x, y) == -space_side(E1, y, x)
    else:
        assert space_side(E1, x, y) == 0


def test_chrono_transitive_on_constructed_triples():
    rng = np.random.default_rng(1)
    for _ in range(500):
        x = Event(tuple(rng.uniform(-2, 2, 4)))
        d1 = np.array([1.0, *(rng.uniform(-0.5, 0.5, 3))])
        d2 = np.array([1.0, *(rng.uniform(-0.5, 0.5, 3))])
        y = x.shifted(d1)
        z = y.shifted(d2)
        assert Relation.chrono()(x, y) and Relation.chrono()(y, z)
        assert Relation.chrono()(x, z)


def test_cone_region_membership():
    r = ConeRegion(ConeKind.TIME_CONE_BOTH, O)
    assert r.contains((1, 0, 0, 0)) and r.contains((-1, 0, 0, 0))
    assert not r.contains(O)
    assert ConeRegion(ConeKind.TIME_CONE_BOTH, O, include_apex=True).contains(O)
    plus = ConeRegion(ConeKind.SPACE_CONE_PLUS, O, E1)
    assert plus.contains((0, 1, 0, 0)) and not plus.contains((0, -1, 0, 0))
    with pytest.raises(ValueError):
        ConeRegion(ConeKind.SPACE_CONE_MINUS, O)


EXPECTED_MINIMAL = {
    RelationKind.CHRONO: ConeKind.CLOSED_SPACE_CONE,
    RelationKind.CAUSAL_IRR: ConeKind.SPACE_CONE,
    RelationKind.HORISMOS_IRR: ConeKind.OFF_LIGHT_CONE,
    RelationKind.SPACELIKE_LEQ: ConeKind.TIME_CONE_BOTH,
    RelationKind.SPACELIKE_LT: ConeKind.CAUSAL_CONE_BOTH,
}


@pytest.mark.parametrize("rel", ALL_RELATIONS, ids=lambda r: f"{r.kind.value}-{r.null_convention}")
def test_minimal_nbhd_equals_subbasic_complements(rel):
    rng = np.random.default_rng(7)
    x = Event((0.3, -1.0, 2.0, 0.5))
    region = minimal_interval_nbhd(rel, x)
    assert region.kind is EXPECTED_MINIMAL[rel.kind]
    assert region.include_apex
    for q in mixed_points(rng, x, 2000):
        direct = subbasic_complement_contains(rel, x, "upper", q) and subbasic_complement_contains(
            rel, x, "lower", q
        )
        assert region.contains(q) == direct, (q, classify(x, q))


def test_dashed_adds_light_cone():
    region = minimal_interval_nbhd(Relation.causal_irr(), O, dashed=True)
    assert region.kind is ConeKind.CLOSED_SPACE_CONE
    assert minimal_interval_nbhd(Relation.spacelike_leq(E1), O, dashed=True).kind is ConeKind.CAUSAL_CONE_BOTH
    with pytest.raises(ValueError):
        minimal_interval_nbhd(Relation.horismos_irr(), O, dashed=True)


def test_minimal_nbhd_does_not_depend_on_partition():
    rng = np.random.default_rng(3)
    x = Event((0.0, 0.0, 0.0, 0.0))
    pts = mixed_points(rng, x, 3000)
    base = [minimal_interval_nbhd(Relation.spacelike_leq(E1), x).contains(q) for q in pts]
    for _ in range(5):
        part = Partition.random(rng)
        got = [minimal_interval_nbhd(Relation.spacelike_leq(part), x).contains(q) for q in pts]
        assert got == base
        direct = [
            subbasic_complement_contains(Relation.spacelike_leq(part), x, "upper", q)
            and subbasic_complement_contains(Relation.spacelike_leq(part), x, "lower", q)
            for q in pts
        ]
        assert direct == base


def test_subbasic_side_validation():
    with pytest.raises(ValueError):
        subbasic_complement_contains(Relation.chrono(), O, "middle", O)
