import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from causaltop.kernel import (
    FiniteSpace,
    NotABase,
    SetFamily,
    base_violation,
    generate_from_subbase,
    intersection_topology,
    is_base,
    mask,
    members,
    random_base,
    verify_lemma1,
)


def all_topologies(n):
    """Every topology on an n-point set, by brute force over families of subsets."""
    full = (1 << n) - 1
    proper = [m for m in range(1, full)]
    out = []
    for k in range(len(proper) + 1):
        for combo in itertools.combinations(proper, k):
            fam = {0, full, *combo}
            if all((a & b) in fam and (a | b) in fam for a in fam for b in fam):
                out.append(frozenset(fam))
    return out


def coarsest_containing(n, sets):
    """Oracle: intersection of every topology that contains ``sets``."""
    full = (1 << n) - 1
    result = None
    for t in all_topologies(n):
        if set(sets) <= t:
            result = t if result is None else result & t
    return result if result is not None else frozenset({0, full})


def test_topology_counts():
    # number of topologies on 1, 2, 3 labelled points
    assert [len(all_topologies(n)) for n in (1, 2, 3)] == [1, 4, 29]


def test_mask_roundtrip():
    assert mask([0, 2]) == 5
    assert members(5) == [0, 2]


def test_subbase_example():
    space = FiniteSpace(3)
    t = generate_from_subbase(space.family([{0, 1}, {1, 2}]))
    expected = {mask(s) for s in [(), (1,), (0, 1), (1, 2), (0, 1, 2)]}
    assert set(t.masks) == expected
    assert t.is_topology


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generate_matches_oracle(n):
    space = FiniteSpace(n)
    subsets = range(1 << n)
    for k in (1, 2, 3):
        for combo in itertools.combinations(subsets, k):
            t = generate_from_subbase(SetFamily(space, frozenset(combo)))
            assert t.masks == coarsest_containing(n, combo)


@pytest.mark.parametrize("n", [2, 3])
def test_intersection_topology_matches_oracle(n):
    tops = all_topologies(n)
    space = FiniteSpace(n)
    for t1, t2 in itertools.product(tops, repeat=2):
        got = intersection_topology(SetFamily(space, t1), SetFamily(space, t2))
        assert not isinstance(got, NotABase)
        oracle = coarsest_containing(n, {a & b for a in t1 for b in t2})
        assert got.masks == oracle
        assert t1 <= got.masks and t2 <= got.masks


def test_discrete_from_time_and_space_like_pieces():
    # two coarse topologies whose pairwise intersections isolate every point
    space = FiniteSpace(3)
    t1 = generate_from_subbase(space.family([{0}, {1, 2}]))
    t2 = generate_from_subbase(space.family([{0, 1}, {2}]))
    assert intersection_topology(t1, t2) == space.discrete()


def test_empty_subbase_rejected():
    with pytest.raises(ValueError):
        generate_from_subbase(SetFamily(FiniteSpace(2), frozenset()))


def test_base_violation_detects_missing_refinement():
    space = FiniteSpace(3)
    fam = space.family([{0, 1}, {1, 2}])
    assert not is_base(fam)
    assert base_violation(fam) is not None
    assert is_base(space.family([{0, 1}, {1, 2}, {1}]))


def test_not_a_base_is_returned_for_non_topologies():
    space = FiniteSpace(3)
    f1 = space.family([{0, 1}, {1, 2}, {0, 1, 2}])
    f2 = space.family([{0, 1, 2}])
    assert isinstance(intersection_topology(f1, f2), NotABase)


def test_lemma1_rejects_non_base():
    space = FiniteSpace(3)
    with pytest.raises(ValueError):
        verify_lemma1(space.family([{0, 1}, {1, 2}]), space.discrete())


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_lemma1_random(n, seed):
    rng = random.Random(seed)
    space = FiniteSpace(n)
    rep = verify_lemma1(random_base(rng, space), random_base(rng, space))
    assert rep.passed, rep.detail


def test_space_size_limit():
    with pytest.raises(ValueError):
        FiniteSpace(13)
