"""Sequence convergence and limit-curve checks relative to neighbourhood schedules.

All verdicts are finite-horizon.  A refutation always names a concrete basic
set together with the indices that miss it, so refutations are conclusive
for that set; acceptance only says the schedule found no counterexample.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .bases import ALL_KINDS, DASHED_PAIRS, BasicNbhd, Schedule, TopologyKind, local_schedule, member
from .curves import Hyperbola, Line, Polyline, curve_meets, curve_meets_nbhd
from .geometry import DEFAULT_TOL, Event, TolerancePolicy
from .relations import Partition

__all__ = [
    "EventSequence",
    "Horizon",
    "Outcome",
    "Verdict",
    "FamilyKind",
    "CurveFamily",
    "converges",
    "discriminator_sequences",
    "limit_curve_check",
    "lct_analysis",
    "lct_matrix",
    "witness_search",
    "LCT_CLAIM",
    "STRIDES",
]

T = TopologyKind
STRIDES = tuple(range(1, 9))


@dataclass(frozen=True)
class Horizon:
    n_max: int = 256
    tail_fraction: float = 0.9

    def __post_init__(self):
        if self.n_max < 16:
            raise ValueError("n_max must be at least 16")
        if not 0 < self.tail_fraction <= 1:
            raise ValueError("tail_fraction must be in (0, 1]")

    @property
    def window(self) -> range:
        """The tail ``[N0, n_max]`` holding ``ceil(tail_fraction * n_max)`` indices."""
        size = math.ceil(self.tail_fraction * self.n_max)
        return range(self.n_max - size + 1, self.n_max + 1)


@dataclass(frozen=True)
class EventSequence:
    name: str
    generator: Callable[[int], Event]
    limit: Event
    n_max: int = 256

    def __post_init__(self):
        if self.n_max < 16:
            raise ValueError("n_max must be at least 16")

    def __call__(self, n: int) -> Event:
        return self.generator(n)


def discriminator_sequences(n: int = 3, n_max: int = 256) -> list:
    """Null, timelike and spacelike sequences ``x_n -> origin`` along a fixed direction."""
    pad = (0.0,) * (n - 1)
    origin = Event.origin(n)
    return [
        EventSequence("null", lambda k: Event((1.0 / k, 1.0 / k) + pad), origin, n_max),
        EventSequence("timelike", lambda k: Event((1.0 / k, 0.0) + pad), origin, n_max),
        EventSequence("spacelike", lambda k: Event((0.0, 1.0 / k) + pad), origin, n_max),
    ]


class Outcome(enum.Enum):
    CONVERGES = "ConvergesRelativeToSchedule"
    REFUTED = "Refuted"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: Optional[BasicNbhd] = None
    detail: dict = field(default_factory=dict)
    horizon: tuple = (256, 0.9)
    schedule: Optional[Schedule] = None

    @property
    def accepted(self) -> bool:
        return self.outcome is Outcome.CONVERGES


def converges(
    seq: EventSequence,
    kind: TopologyKind,
    schedule=Schedule(),
    tol: TolerancePolicy = DEFAULT_TOL,
    partition: Optional[Partition] = None,
    tail_fraction: float = 0.9,
) -> Verdict:
    """Eventual membership of ``seq`` in every set of a schedule at ``seq.limit``.

    ``schedule`` is a :class:`Schedule` (built at the limit) or an explicit
    list of neighbourhoods, which must all be centred at the limit.
    """
    if isinstance(schedule, Schedule):
        nbhds = local_schedule(kind, seq.limit, schedule.eps0, schedule.steps, partition)
        sched = schedule
    else:
        nbhds = list(schedule)
        for b in nbhds:
            if b.center != seq.limit:
                raise ValueError(f"schedule set {b.describe()} is not centred at the limit")
        sched = None
    horizon = (seq.n_max, tail_fraction)
    thresholds = []
    for b in nbhds:
        inside = [member(b, seq(k), tol) for k in range(1, seq.n_max + 1)]
        if not inside[-1]:
            misses = inside.count(False)
            detail = {
                "misses": misses,
                "all_miss": misses == seq.n_max,
                "last_index": seq.n_max,
            }
            return Verdict(Outcome.REFUTED, b, detail, horizon, sched)
        first = seq.n_max
        while first > 1 and inside[first - 2]:
            first -= 1
        thresholds.append(first)
    return Verdict(Outcome.CONVERGES, None, {"thresholds": thresholds}, horizon, sched)


# ---------------------------------------------------------------- curve families


class FamilyKind(enum.Enum):
    ROTATING_NULL_GEODESICS = "RotatingNullGeodesics"
    PARALLEL_NULL_LINES = "ParallelNullLines"
    TIMELIKE_HYPERBOLAE = "TimelikeHyperbolae"
    ROTATING_TIMELIKE_LINES = "RotatingTimelikeLines"
    POLYLINE = "Polyline"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: str) -> "FamilyKind":
        for k in cls:
            if k.value.lower() == name.lower() or k.name.lower() == name.lower():
                return k
        raise ValueError(f"unknown curve family {name!r}")


@dataclass(frozen=True)
class CurveFamily:
    """A sequence of causal curves ``n -> gamma_n`` together with its limit curve.

    ``RotatingNullGeodesics``: ``s * (1, cos(theta0/n), sin(theta0/n), 0...)``, ``s`` in ``[0, 2]``.
    ``ParallelNullLines``: ``(s, s + 1/n, 0...)``, ``s`` in ``[-2, 2]``.
    ``TimelikeHyperbolae``: ``(s, sqrt(s^2 + 1/n^2), 0...)``, limit the broken null line ``x = |t|``.
    ``RotatingTimelikeLines``: ``s * (1, v0/n, 0...)``, limit the time axis.
    ``Polyline``: ``vertices(n)`` and ``limit_vertices`` supplied by the caller.
    """

    kind: FamilyKind
    n: int = 2
    theta0: float = 1.0
    v0: float = 0.5
    s_max: float = 2.0
    vertices: Optional[Callable[[int], Sequence]] = None
    limit_vertices: Optional[Sequence] = None

    def __post_init__(self):
        if not 1 <= self.n <= 3:
            raise ValueError("spatial dimension must be 1, 2 or 3")
        if self.kind is FamilyKind.ROTATING_NULL_GEODESICS and self.n < 2:
            raise ValueError("rotating null geodesics need at least 2 spatial dimensions")
        if self.kind is FamilyKind.POLYLINE and (self.vertices is None or self.limit_vertices is None):
            raise ValueError("polyline families need vertices and limit_vertices")

    @property
    def name(self) -> str:
        return self.kind.value

    def theta(self, k: int) -> float:
        return self.theta0 / k

    def curve(self, k: int):
        pad = (0.0,) * (self.n - 1)
        zero = (0.0,) * (self.n + 1)
        kind = self.kind
        if kind is FamilyKind.ROTATING_NULL_GEODESICS:
            th = self.theta(k)
            d = (1.0, math.cos(th), math.sin(th)) + (0.0,) * (self.n - 2)
            return Line(zero, d, 0.0, self.s_max)
        if kind is FamilyKind.PARALLEL_NULL_LINES:
            return Line((0.0, 1.0 / k) + pad, (1.0, 1.0) + pad, -self.s_max, self.s_max)
        if kind is FamilyKind.TIMELIKE_HYPERBOLAE:
            return Hyperbola(1.0 / k, self.n, -self.s_max, self.s_max)
        if kind is FamilyKind.ROTATING_TIMELIKE_LINES:
            return Line(zero, (1.0, self.v0 / k) + pad, 0.0, self.s_max)
        return Polyline(tuple(self.vertices(k)))

    def limit(self):
        pad = (0.0,) * (self.n - 1)
        zero = (0.0,) * (self.n + 1)
        kind = self.kind
        if kind is FamilyKind.ROTATING_NULL_GEODESICS:
            return Line(zero, (1.0, 1.0) + pad, 0.0, self.s_max, special=(0.0,))
        if kind is FamilyKind.PARALLEL_NULL_LINES:
            return Line(zero, (1.0, 1.0) + pad, -self.s_max, self.s_max)
        if kind is FamilyKind.TIMELIKE_HYPERBOLAE:
            m = self.s_max
            return Polyline(((-m, m) + pad, zero, (m, m) + pad))
        if kind is FamilyKind.ROTATING_TIMELIKE_LINES:
            return Line(zero, (1.0, 0.0) + pad, 0.0, self.s_max, special=(0.0,))
        return Polyline(tuple(self.limit_vertices))


def sample_params(gamma, n_points: int = 16) -> list:
    """``n_points`` evenly spaced parameters, special points skipped, ordered from the middle out."""
    lo, hi = gamma.s_range
    params = [lo + (hi - lo) * j / n_points for j in range(1, n_points + 1)]
    special = tuple(gamma.special or ())
    params = [s for s in params if all(abs(s - sp) > 1e-12 for sp in special)]
    mid = 0.5 * (lo + hi)
    return sorted(params, key=lambda s: (abs(s - mid), s))


# ---------------------------------------------------------------- limit curves

LCT_CLAIM = {
    T.MANIFOLD: "holds",
    T.ALEXANDROV: "holds",
    T.Z: "fails",
    T.ZT: "fails",
    T.ZS: "fails",
    T.INT_HORISMOS: "fails",
    T.INT_SPACELIKE: "fails",
    T.INT_CAUSAL: "fails",
    T.ZT_DASH: "holds",
    T.ZS_DASH: "holds",
    T.INT_SPACELIKE_DASH: "holds",
    T.INT_CAUSAL_DASH: "holds",
}


def _meet_map(curves: dict, b: BasicNbhd, tol: TolerancePolicy) -> dict:
    return {k: curve_meets(c, b, tol) for k, c in curves.items()}


def _stride_ok(meets: dict, stride: int) -> bool:
    return all(v for k, v in meets.items() if k % stride == 0)


def lct_analysis(
    fam: CurveFamily,
    kind: TopologyKind,
    gamma=None,
    horizon: Horizon = Horizon(),
    schedule: Schedule = Schedule(),
    n_points: int = 16,
    tol: TolerancePolicy = DEFAULT_TOL,
    partition: Optional[Partition] = None,
    defns: tuple = ("D1", "D2"),
) -> dict:
    """Verdicts under both limit-curve definitions, sharing the intersection work.

    D1: every sampled point ``p`` of ``gamma`` and every schedule set at ``p``
    is met by every ``gamma_n`` in the tail window.  D2: the same for the
    subsequence of multiples of some stride in 1..8.  Schedules are nested,
    so the smallest set at ``p`` decides both; the largest failing set is
    reported as the witness.
    """
    gamma = gamma if gamma is not None else fam.limit()
    window = horizon.window
    curves = {k: fam.curve(k) for k in window}
    strides = set(STRIDES)
    d1_witness = None
    hz = (horizon.n_max, horizon.tail_fraction)
    for s in sample_params(gamma, n_points):
        p = gamma.point(s)
        nbhds = local_schedule(kind, p, schedule.eps0, schedule.steps, partition)
        smallest = _meet_map(curves, nbhds[-1], tol)
        if all(smallest.values()):
            continue
        strides = {k for k in strides if _stride_ok(smallest, k)}
        if d1_witness is None:
            for b in nbhds:
                meets = smallest if b is nbhds[-1] else _meet_map(curves, b, tol)
                missing = [k for k, v in meets.items() if not v]
                if missing:
                    cert = curve_meets_nbhd(curves[missing[0]], b, tol)
                    d1_witness = (s, b, missing, cert)
                    break
        if not strides or "D2" not in defns:
            break

    out = {}
    if d1_witness is None:
        out["D1"] = Verdict(Outcome.CONVERGES, None, {"points": n_points}, hz, schedule)
    else:
        s, b, missing, cert = d1_witness
        detail = {
            "p_param": s,
            "missing": len(missing),
            "all_n": len(missing) == len(window),
            "first_missing": missing[0],
            "certificate": cert.text,
        }
        out["D1"] = Verdict(Outcome.REFUTED, b, detail, hz, schedule)
    if strides:
        out["D2"] = Verdict(Outcome.CONVERGES, None, {"stride": min(strides)}, hz, schedule)
    else:
        detail = dict(out["D1"].detail)
        detail["strides_tried"] = len(STRIDES)
        out["D2"] = Verdict(Outcome.REFUTED, out["D1"].witness, detail, hz, schedule)
    return out


def limit_curve_check(
    fam: CurveFamily,
    gamma=None,
    kind: TopologyKind = T.MANIFOLD,
    defn: str = "D1",
    horizon: Horizon = Horizon(),
    schedule: Schedule = Schedule(),
    n_points: int = 16,
    tol: TolerancePolicy = DEFAULT_TOL,
    partition: Optional[Partition] = None,
) -> Verdict:
    if defn not in ("D1", "D2"):
        raise ValueError(f"unknown limit-curve definition {defn!r}")
    defns = ("D1",) if defn == "D1" else ("D1", "D2")
    return lct_analysis(fam, kind, gamma, horizon, schedule, n_points, tol, partition, defns)[defn]


def lct_matrix(
    families: Sequence[CurveFamily],
    kinds: Sequence[TopologyKind] = ALL_KINDS,
    defns: Sequence[str] = ("D1", "D2"),
    horizon: Horizon = Horizon(),
    schedule: Schedule = Schedule(),
    n_points: int = 16,
    tol: TolerancePolicy = DEFAULT_TOL,
    executor=None,
) -> list:
    """One row per (family, kind, defn), ordered as given."""
    cells = [(fam, kind) for fam in families for kind in kinds]

    def run(cell):
        fam, kind = cell
        return lct_analysis(fam, kind, None, horizon, schedule, n_points, tol, None, tuple(defns))

    results = list(executor.map(run, cells)) if executor is not None else [run(c) for c in cells]
    rows = []
    for (fam, kind), res in zip(cells, results):
        for defn in defns:
            v = res[defn]
            w = v.witness
            rows.append({
                "family": fam.name,
                "kind": kind.value,
                "defn": defn,
                "outcome": v.outcome.value,
                "witness": w.describe() if w is not None else "",
                "p_param": v.detail.get("p_param", ""),
                "missing": v.detail.get("missing", 0),
                "all_n": v.detail.get("all_n", ""),
                "certificate": v.detail.get("certificate", ""),
                "lct_claim": LCT_CLAIM[kind],
            })
    return rows


def lct_summary(rows: list) -> list:
    """Per (kind, defn): is any family refuted, and does that agree with the stated claim?"""
    out = []
    seen = []
    for r in rows:
        key = (r["kind"], r["defn"])
        if key not in seen:
            seen.append(key)
    for kind, defn in seen:
        cells = [r for r in rows if r["kind"] == kind and r["defn"] == defn]
        refuted = [r["family"] for r in cells if r["outcome"] == Outcome.REFUTED.value]
        claim = cells[0]["lct_claim"]
        observed = "fails" if refuted else "holds"
        out.append({
            "kind": kind,
            "defn": defn,
            "lct_claim": claim,
            "observed": observed,
            "agrees": claim == observed,
            "refuted_by": ";".join(refuted),
        })
    return out


@dataclass(frozen=True)
class WitnessBudget:
    points: int = 16
    radii: tuple = (0.5, 0.25, 0.125)


def witness_search(
    fam: CurveFamily,
    kind: TopologyKind,
    budget: WitnessBudget = WitnessBudget(),
    horizon: Horizon = Horizon(),
    tol: TolerancePolicy = DEFAULT_TOL,
    partition: Optional[Partition] = None,
):
    """First ``(p, B)`` that no ``gamma_n`` in the tail window meets, or ``None``."""
    gamma = fam.limit()
    window = horizon.window
    curves = [fam.curve(k) for k in window]
    for s in sample_params(gamma, budget.points):
        p = gamma.point(s)
        if kind.bounded or kind is T.ALEXANDROV:
            cands = [local_schedule(kind, p, r, 1, partition)[0] for r in budget.radii]
        else:
            cands = local_schedule(kind, p, partition=partition)
        for b in cands:
            if not any(curve_meets(c, b, tol) for c in curves):
                return p, b
    return None


def dashed_partner(kind: TopologyKind) -> Optional[TopologyKind]:
    return DASHED_PAIRS.get(kind)
