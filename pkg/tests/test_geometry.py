import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from causaltop.geometry import (
    CLASS_CODES,
    CausalClass,
    Event,
    GTransform,
    TolerancePolicy,
    apply_transform,
    boost,
    classify,
    classify_array,
    displacement,
    minkowski_metric,
    quadratic_form,
    random_event,
    random_g,
    rotation,
)

C = CausalClass
finite = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False)
events = st.tuples(finite, finite, finite, finite).map(Event)


def test_event_validation():
    assert Event((1, 2)).n == 1
    with pytest.raises(ValueError):
        Event((1.0,))
    with pytest.raises(ValueError):
        Event((0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        Event((0, math.nan, 0))


def test_quadratic_form_examples():
    assert quadratic_form((1, 0, 0, 0)) == 1
    assert quadratic_form((1, 1, 0, 0)) == 0
    assert quadratic_form((0, 1, 0, 0)) == -1
    assert abs(quadratic_form((0.5, 0.3, 0.4, 0.0))) <= 1e-15


@pytest.mark.parametrize(
    "y, expected",
    [
        ((0, 0, 0, 0), C.EQUAL),
        ((1, 0, 0, 0), C.CHRONO_FUTURE),
        ((-1, 0, 0, 0), C.CHRONO_PAST),
        ((1, 1, 0, 0), C.HORISMOS_FUTURE),
        ((-1, 0, 1, 0), C.HORISMOS_PAST),
        ((0, 1, 0, 0), C.SPACELIKE),
        ((0.5, 0.3, 0.4, 0), C.HORISMOS_FUTURE),
    ],
)
def test_classify_examples(y, expected):
    assert classify((0, 0, 0, 0), y) is expected


def test_band_is_relative():
    tol = TolerancePolicy(1e-9)
    big = (1e4, 1e4 + 1e-6, 0, 0)  # |Q| ~ 2e-2, scale ~ 2e8
    assert classify((0, 0, 0, 0), big, tol) is C.HORISMOS_FUTURE
    assert classify((0, 0, 0, 0), (1, 1 + 1e-6, 0, 0), tol) is C.SPACELIKE


def test_in_band_zero_time_uses_first_nonzero_coordinate():
    # time component zero but inside the band: orientation from the first nonzero coordinate
    assert classify((0, 0, 0, 0), (0, 1e-6, 0, 0)) is C.HORISMOS_FUTURE
    assert classify((0, 1e-6, 0, 0), (0, 0, 0, 0)) is C.HORISMOS_PAST


@settings(max_examples=300, deadline=None)
@given(events, events)
def test_classify_antisymmetric(x, y):
    assert classify(y, x) is classify(x, y).reversed()


@settings(max_examples=200, deadline=None)
@given(events, st.lists(events, min_size=1, max_size=20))
def test_classify_array_matches_scalar(x, ys):
    codes = classify_array(x, np.array([y.coords for y in ys]))
    assert [CLASS_CODES[classify(x, y)] for y in ys] == codes.tolist()


def test_boost_known_value():
    lam = boost((0.6, 0, 0))
    out = lam @ np.array([1.0, 0, 0, 0])
    assert np.allclose(out, [1.25, -0.75, 0, 0])
    eta = minkowski_metric(3)
    assert np.allclose(lam.T @ eta @ lam, eta)


def test_gtransform_rejects_non_lorentz():
    with pytest.raises(ValueError):
        GTransform(np.diag([1.0, 2.0, 1.0, 1.0]), np.zeros(4))
    with pytest.raises(ValueError):
        GTransform(np.eye(4), np.zeros(4), dilatation=0.0)


def test_gtransform_action():
    g = GTransform(rotation(np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])), np.ones(4), 2.0)
    assert np.allclose(apply_transform(g, (1, 1, 0, 0)).coords, (3, 1, 3, 1))
    assert g.spatial_rotation() is not None
    assert random_g(0, boosts=True).n == 3


@pytest.mark.parametrize("seed", range(20))
def test_classification_invariant_under_g(seed):
    rng = np.random.default_rng(seed)
    g = random_g(rng)
    for _ in range(50):
        x, y = random_event(rng), random_event(rng)
        assert classify(g(x), g(y)) is classify(x, y)
    # null directions stay null
    x = random_event(rng)
    y = x.shifted((1.0, 0.6, 0.8, 0.0))
    assert classify(g(x), g(y)) is C.HORISMOS_FUTURE


def test_displacement():
    assert displacement((1, 2, 3, 4), (2, 2, 2, 2)) == (1, 0, -1, -2)
