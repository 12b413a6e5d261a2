import math

import pytest

from causaltop.bases import ALL_KINDS, Schedule, TopologyKind, local_schedule
from causaltop.convergence import (
    LCT_CLAIM,
    CurveFamily,
    EventSequence,
    FamilyKind,
    Horizon,
    Outcome,
    WitnessBudget,
    converges,
    dashed_partner,
    discriminator_sequences,
    lct_analysis,
    lct_matrix,
    lct_summary,
    limit_curve_check,
    sample_params,
    witness_search,
)
from causaltop.geometry import Event
from causaltop.suites import EXPECTED_CONVERGENCE

T = TopologyKind
F = FamilyKind


def test_horizon_window():
    w = Horizon(256, 0.9).window
    assert len(w) == math.ceil(0.9 * 256) == 231
    assert w[0] == 26 and w[-1] == 256
    with pytest.raises(ValueError):
        Horizon(8)
    with pytest.raises(ValueError):
        Horizon(256, 0.0)


@pytest.mark.parametrize("seq", discriminator_sequences(3, 256), ids=lambda s: s.name)
def test_discriminator_rows(seq):
    for kind in ALL_KINDS:
        v = converges(seq, kind)
        assert v.accepted == (kind in EXPECTED_CONVERGENCE[seq.name]), kind
        if not v.accepted:
            assert v.witness is not None and v.witness.center == seq.limit


def test_converges_requires_centred_schedule():
    seq = discriminator_sequences(3, 64)[0]
    with pytest.raises(ValueError):
        converges(seq, T.Z, [local_schedule(T.Z, Event((1, 0, 0, 0)))[0]])


def test_eventually_inside_counts_as_convergence():
    # starts far away, then settles at the origin
    origin = Event((0, 0, 0, 0))
    seq = EventSequence("late", lambda k: Event((5.0, 0, 0, 0)) if k < 100 else origin, origin, 256)
    assert converges(seq, T.ZT).accepted


def test_sample_params_middle_out():
    gamma = CurveFamily(F.ROTATING_NULL_GEODESICS).limit()
    params = sample_params(gamma, 16)
    assert params[0] == 1.0
    assert 0.0 not in params
    assert len(params) == 16


def test_family_curves():
    fam = CurveFamily(F.ROTATING_NULL_GEODESICS)
    assert fam.curve(1).point(1.0).coords == pytest.approx((1.0, math.cos(1.0), math.sin(1.0)))
    hyp = CurveFamily(F.TIMELIKE_HYPERBOLAE)
    assert hyp.curve(4).point(0.0).coords == pytest.approx((0.0, 0.25, 0.0))
    assert hyp.limit().special == (1.0,)
    with pytest.raises(ValueError):
        CurveFamily(F.ROTATING_NULL_GEODESICS, 1)
    with pytest.raises(ValueError):
        CurveFamily(F.POLYLINE)


def test_rotating_null_verdicts():
    fam = CurveFamily(F.ROTATING_NULL_GEODESICS)
    assert limit_curve_check(fam, kind=T.MANIFOLD).accepted
    for kind in (T.ZT, T.INT_SPACELIKE):
        v = limit_curve_check(fam, kind=kind)
        assert v.outcome is Outcome.REFUTED
        assert v.detail["all_n"] and v.detail["missing"] == 231
        assert v.witness.center == Event((1, 1, 0))
        assert v.detail["certificate"].startswith("EMPTY")
    with pytest.raises(ValueError):
        limit_curve_check(fam, defn="D3")


def test_hyperbolae_manifold_accepted():
    fam = CurveFamily(F.TIMELIKE_HYPERBOLAE)
    res = lct_analysis(fam, T.MANIFOLD)
    assert res["D1"].accepted and res["D2"].accepted


def test_d2_is_weaker_than_d1():
    # a family that misses the limit on odd n only: D1 refutes, D2 accepts with stride 2
    def verts(k):
        off = 0.0 if k % 2 == 0 else 1.0
        return [(0.0, off, 0.0), (1.0, off + 1.0, 0.0)]

    fam = CurveFamily(F.POLYLINE, vertices=verts, limit_vertices=[(0.0, 0.0, 0.0), (1.0, 1.0, 0.0)])
    res = lct_analysis(fam, T.MANIFOLD, horizon=Horizon(64))
    assert not res["D1"].accepted
    assert res["D2"].accepted and res["D2"].detail["stride"] == 2


def test_witness_search_examples():
    hit = witness_search(CurveFamily(F.ROTATING_NULL_GEODESICS), T.ZT)
    assert hit is not None
    p, b = hit
    assert p == Event((1, 1, 0)) and b.radius == 0.5
    assert witness_search(CurveFamily(F.ROTATING_NULL_GEODESICS), T.Z) is None
    assert witness_search(CurveFamily(F.PARALLEL_NULL_LINES), T.ZT) is None
    assert witness_search(CurveFamily(F.PARALLEL_NULL_LINES), T.ZT, WitnessBudget(4, (0.5,))) is None


def test_lct_matrix_and_summary():
    fams = [CurveFamily(F.ROTATING_NULL_GEODESICS)]
    kinds = [T.MANIFOLD, T.ZT, T.ZT_DASH]
    rows = lct_matrix(fams, kinds, defns=("D1",))
    assert [r["kind"] for r in rows] == ["Manifold", "ZT", "ZTDash"]
    summary = lct_summary(rows)
    by_kind = {s["kind"]: s for s in summary}
    assert by_kind["Manifold"]["agrees"]
    assert by_kind["ZT"]["observed"] == "fails" and by_kind["ZT"]["agrees"]
    # the ball in ZTDash never reaches the common origin, so it refutes too
    assert by_kind["ZTDash"]["observed"] == "fails" and not by_kind["ZTDash"]["agrees"]


def test_short_horizon_can_hide_convergence():
    # at n = 7 the rotating geodesics are still ~0.2 away near s = 2
    v = limit_curve_check(CurveFamily(F.ROTATING_NULL_GEODESICS), kind=T.MANIFOLD, horizon=Horizon(64))
    assert not v.accepted


def test_claims_and_partners():
    assert LCT_CLAIM[T.ZT] == "fails" and LCT_CLAIM[T.ZT_DASH] == "holds"
    assert dashed_partner(T.ZT) is T.ZT_DASH
    assert dashed_partner(T.MANIFOLD) is None


def test_refutation_persists_under_finer_schedule():
    seq = next(s for s in discriminator_sequences(3, 256) if s.name == "null")
    for kind in (T.ZT, T.ZS, T.Z):
        assert not converges(seq, kind, Schedule(0.25, 4)).accepted
