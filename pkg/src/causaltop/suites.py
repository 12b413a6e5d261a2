"""Property and acceptance suites run by ``props-run`` and the test-suite.

Each suite takes a seeded generator and an :class:`~causaltop.report.ExperimentConfig`
and returns a :class:`SuiteResult` counting checked cases and failures.
Suites never read the clock, so their results are reproducible.
"""

from __future__ import annotations

import math
import random
import zlib
from dataclasses import dataclass, field

import numpy as np

from .bases import (
    ALL_KINDS,
    BALL_CLASSES,
    DASHED_PAIRS,
    INTERSECTION_OF,
    BasicNbhd,
    TopologyKind,
    alexandrov_nbhd,
    intersection_member,
    local_schedule,
    member,
    member_array,
    trace_on_line,
)
from .convergence import (
    CurveFamily,
    FamilyKind,
    Horizon,
    converges,
    discriminator_sequences,
    lct_analysis,
)
from .curves import curve_meets_nbhd, verify_certificate
from .geometry import (
    CausalClass,
    Event,
    TolerancePolicy,
    apply_transform,
    classify,
    random_g,
)
from .kernel import FiniteSpace, generate_from_subbase, intersection_topology, random_base, verify_lemma1
from .relations import (
    ConeKind,
    ConeRegion,
    Partition,
    Relation,
    RelationKind,
    in_region,
    minimal_interval_nbhd,
    related,
    space_side,
    subbasic_complement_contains,
)
from .sampling import displacement_of, future_displacement, mixed_points

T = TopologyKind
C = CausalClass


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: int = 0
    examples: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def check(self, ok: bool, what: str = "") -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < 5:
                self.examples.append(what)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "checked": self.checked,
            "failures": self.failures,
            "passed": self.passed,
            "examples": list(self.examples),
            "notes": list(self.notes),
        }


def suite_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def _tol(cfg) -> TolerancePolicy:
    return TolerancePolicy(cfg.tau_rel)


def _center(rng, n) -> Event:
    return Event(tuple(rng.uniform(-3.0, 3.0, n + 1)))


# ------------------------------------------------------------ relations


def relations_suite(rng, cfg) -> SuiteResult:
    """Irreflexivity, time reversal, transitivity and G-invariance of the classification."""
    res = SuiteResult("relations")
    tol = _tol(cfg)
    n = cfg.dimension
    chrono, horismos = Relation.chrono(), Relation.horismos_irr()
    causal_classes = (C.EQUAL, C.CHRONO_FUTURE, C.HORISMOS_FUTURE)
    gs = [random_g(rng, n) for _ in range(cfg.transforms)]
    kinds = ("null", "timelike", "spacelike")
    for i in range(cfg.samples):
        x = _center(rng, n)
        res.check(not related(chrono, x, x, tol), f"x<<x at {x}")
        res.check(not related(horismos, x, x, tol), f"x->irr x at {x}")
        res.check(classify(x, x, tol) in causal_classes, f"causal order not reflexive at {x}")

        v = displacement_of(rng, n, kinds[i % 3])
        y = x.shifted(v)
        cxy = classify(x, y, tol)
        res.check(classify(y, x, tol) is cxy.reversed(), f"time reversal {x} {y}")

        y = x.shifted(future_displacement(rng, n, "timelike"))
        z = y.shifted(future_displacement(rng, n, "timelike"))
        res.check(
            not (related(chrono, x, y, tol) and related(chrono, y, z, tol)) or related(chrono, x, z, tol),
            f"<< transitivity {x} {y} {z}",
        )
        y = x.shifted(future_displacement(rng, n, kinds[i % 2]))
        z = y.shifted(future_displacement(rng, n, kinds[(i // 2) % 2]))
        res.check(
            not (classify(x, y, tol) in causal_classes and classify(y, z, tol) in causal_classes)
            or classify(x, z, tol) in causal_classes,
            f"causal transitivity {x} {y} {z}",
        )

        g = gs[i % len(gs)]
        y = x.shifted(displacement_of(rng, n, kinds[i % 3]))
        res.check(classify(apply_transform(g, x), apply_transform(g, y), tol) is classify(x, y, tol),
                  f"G-invariance {x} {y}")
    return res


def minimal_nbhd_suite(rng, cfg) -> SuiteResult:
    """Closed-form minimal sets agree with the conjunction of the two subbasic complements."""
    res = SuiteResult("minimal_nbhd_closed_form")
    tol = _tol(cfg)
    n = cfg.dimension
    part = Partition.random(rng, n)
    rels = [
        Relation.chrono(),
        Relation.causal_irr(),
        Relation.horismos_irr(),
        Relation.spacelike_leq(part),
        Relation.spacelike_lt(part),
    ]
    per = max(1, cfg.samples // len(rels))
    for k in rels:
        x = _center(rng, n)
        region = minimal_interval_nbhd(k, x)
        for q in mixed_points(rng, x, per):
            via_subbase = subbasic_complement_contains(k, x, "upper", q, tol) and subbasic_complement_contains(
                k, x, "lower", q, tol
            )
            res.check(region.contains(q, tol) == via_subbase, f"{k.kind.value} at {x}, q={q}")
    return res


def partition_suite(rng, cfg) -> SuiteResult:
    """S+/S- split the space cone; the spacelike-order minimal set ignores the partition
    and the null convention."""
    res = SuiteResult("partition_invariance")
    tol = _tol(cfg)
    n = cfg.dimension
    x = _center(rng, n)
    pts = mixed_points(rng, x, cfg.samples)
    parts = [Partition.random(rng, n) for _ in range(cfg.partitions)]
    reference = [minimal_interval_nbhd(Relation.spacelike_leq(parts[0]), x).contains(q, tol) for q in pts]
    for part in parts:
        plus = ConeRegion(ConeKind.SPACE_CONE_PLUS, x, part)
        minus = ConeRegion(ConeKind.SPACE_CONE_MINUS, x, part)
        for convention in ("split", "full"):
            rel = Relation.spacelike_leq(part, convention)
            for q, ref in zip(pts, reference):
                got = subbasic_complement_contains(rel, x, "upper", q, tol) and subbasic_complement_contains(
                    rel, x, "lower", q, tol
                )
                res.check(got == ref, f"partition {part.axis} ({convention}) q={q}")
        for q in pts:
            if classify(x, q, tol) is C.SPACELIKE:
                res.check(in_region(plus, q, tol) != in_region(minus, q, tol), f"S+/S- overlap q={q}")
                res.check(space_side(part, x, q, tol) == -space_side(part, q, x, tol), f"side antisymmetry q={q}")
    return res


def equivariance_suite(rng, cfg) -> SuiteResult:
    """Cone regions and minimal interval sets commute with G."""
    res = SuiteResult("g_equivariance")
    tol = _tol(cfg)
    n = cfg.dimension
    unsided = [ConeKind.TIME_CONE_BOTH, ConeKind.SPACE_CONE, ConeKind.LIGHT_CONE_BOTH,
               ConeKind.CAUSAL_CONE_BOTH, ConeKind.CLOSED_SPACE_CONE, ConeKind.OFF_LIGHT_CONE]
    per = max(1, cfg.samples // 4)
    kinds = ("null", "timelike", "spacelike")
    for i in range(per):
        g = random_g(rng, n)
        x = _center(rng, n)
        q = x.shifted(displacement_of(rng, n, kinds[i % 3]))
        gx, gq = apply_transform(g, x), apply_transform(g, q)
        for kind in unsided:
            res.check(in_region(ConeRegion(kind, x), q, tol) == in_region(ConeRegion(kind, gx), gq, tol),
                      f"{kind.value} g-equivariance")
        for rk in (RelationKind.CHRONO, RelationKind.CAUSAL_IRR, RelationKind.HORISMOS_IRR):
            k = Relation(rk)
            res.check(minimal_interval_nbhd(k, x).contains(q, tol) == minimal_interval_nbhd(k, gx).contains(gq, tol),
                      f"minimal {rk.value} g-equivariance")
        # sided cones: rotations (no boost) carry the partition axis along
        h = random_g(rng, n, boosts=False)
        part = Partition.random(rng, n)
        rot = h.spatial_rotation()
        hpart = Partition.along(rot @ np.asarray(part.axis))
        hx, hq = apply_transform(h, x), apply_transform(h, q)
        for kind in (ConeKind.SPACE_CONE_PLUS, ConeKind.SPACE_CONE_MINUS):
            res.check(in_region(ConeRegion(kind, x, part), q, tol) == in_region(ConeRegion(kind, hx, hpart), hq, tol),
                      f"{kind.value} rotation equivariance")
    return res


# ------------------------------------------------------------ topology bases


def _random_ball(rng, n):
    return _center(rng, n), float(rng.uniform(0.1, 2.0))


def intersection_zt_suite(rng, cfg) -> SuiteResult:
    """ZT(x, eps) equals the spacelike-order interval set cut by a ball, for several partitions."""
    res = SuiteResult("intersection_zt")
    tol = _tol(cfg)
    n = cfg.dimension
    parts = [Partition.random(rng, n) for _ in range(cfg.partitions)]
    for part in parts:
        x, eps = _random_ball(rng, n)
        zt = BasicNbhd(T.ZT, x, eps)
        ball = BasicNbhd(T.MANIFOLD, x, eps)
        interval = BasicNbhd(T.INT_SPACELIKE, x, partition=part)
        for q in mixed_points(rng, x, cfg.samples, scale=1.5 * eps):
            res.check(member(zt, q, tol) == intersection_member(interval, ball, q, tol), f"ZT mismatch q={q}")
    return res


def pairings_suite(rng, cfg) -> SuiteResult:
    """Z and ZS (and the dashed ZT, ZS) as interval sets cut by a ball."""
    res = SuiteResult("intersection_pairings")
    tol = _tol(cfg)
    n = cfg.dimension
    for kind in (T.Z, T.ZS, T.ZT_DASH, T.ZS_DASH):
        x, eps = _random_ball(rng, n)
        b = BasicNbhd(kind, x, eps)
        ball = BasicNbhd(T.MANIFOLD, x, eps)
        ikind = INTERSECTION_OF[kind]
        interval = BasicNbhd(ikind, x, partition=Partition.random(rng, n) if ikind.needs_partition else None)
        count = cfg.samples if kind in (T.Z, T.ZS) else max(1, cfg.samples // 10)
        for q in mixed_points(rng, x, count, scale=1.5 * eps):
            res.check(member(b, q, tol) == intersection_member(interval, ball, q, tol), f"{kind.value} q={q}")
    return res


def dashed_suite(rng, cfg) -> SuiteResult:
    """Undashed = dashed minus the punctured light cone; Z = ZT u ZS."""
    res = SuiteResult("dashed_constructions")
    tol = _tol(cfg)
    n = cfg.dimension
    x, eps = _random_ball(rng, n)
    part = Partition.random(rng, n)

    def nb(kind):
        if kind in BALL_CLASSES:
            return BasicNbhd(kind, x, eps)
        return BasicNbhd(kind, x, partition=part if kind.needs_partition else None)

    pairs = [(nb(u), nb(d)) for u, d in DASHED_PAIRS.items()]
    z, zt, zs = nb(T.Z), nb(T.ZT), nb(T.ZS)
    for q in mixed_points(rng, x, cfg.samples, scale=1.5 * eps):
        off_light = not classify(x, q, tol).is_horismos
        for und, dash in pairs:
            res.check(member(und, q, tol) == (member(dash, q, tol) and off_light), f"{und.kind.value} q={q}")
        res.check(member(z, q, tol) == (member(zt, q, tol) or member(zs, q, tol)), f"Z decomposition q={q}")
    return res


def nesting_suite(rng, cfg) -> SuiteResult:
    """Each schedule set is contained in its predecessor."""
    res = SuiteResult("schedule_nesting")
    tol = _tol(cfg)
    n = cfg.dimension
    per = max(1, cfg.samples // (10 * len(ALL_KINDS)))
    for kind in ALL_KINDS:
        for _ in range(10):
            x = _center(rng, n)
            sched = local_schedule(kind, x, cfg.eps0, max(cfg.steps, 2))
            for q in mixed_points(rng, x, per, scale=cfg.eps0):
                inside = [member(b, q, tol) for b in sched]
                res.check(all(a or not b for a, b in zip(inside, inside[1:])), f"{kind.value} nesting q={q}")
    return res


def vectorised_suite(rng, cfg) -> SuiteResult:
    """The numpy membership path agrees with the scalar predicates."""
    res = SuiteResult("vectorised_membership")
    tol = _tol(cfg)
    n = cfg.dimension
    per = max(1, cfg.samples // len(ALL_KINDS))
    for kind in ALL_KINDS:
        x, eps = _random_ball(rng, n)
        b = local_schedule(kind, x, eps, 1, Partition.random(rng, n) if kind.needs_partition else None)[0]
        pts = mixed_points(rng, x, per, scale=1.5 * eps)
        arr = member_array(b, np.array([p.coords for p in pts]), tol)
        for p, a in zip(pts, arr):
            res.check(bool(a) == member(b, p, tol), f"{kind.value} q={p}")
    return res


def traces_suite(rng, cfg) -> SuiteResult:
    """Traces on axes through the centre: time axis for ZT, space axis for ZS, spacelike line for ZT."""
    res = SuiteResult("zeeman_traces")
    tol = _tol(cfg)
    n = cfg.dimension
    for _ in range(5):
        x = _center(rng, n)
        # the null band is absolute below unit scale; keep grid steps well above it
        eps = float(rng.uniform(0.5, 2.0))
        # a span that is not an exact multiple of eps keeps the boundary off the grid
        span = 2.1 * eps
        m = 10_000 // 2
        h = span / m
        t_axis = (1.0,) + (0.0,) * n
        u = np.asarray(displacement_of(rng, n, "spacelike"))
        space_axis = (0.0,) + tuple(u[1:] / np.linalg.norm(u[1:]))
        spacelike_dir = tuple(u / np.linalg.norm(u))
        for kind, direction, expect in (
            (T.ZT, t_axis, "interval"),
            (T.ZS, space_axis, "interval"),
            (T.ZT, spacelike_dir, "apex"),
            (T.ZS, t_axis, "apex"),
        ):
            b = BasicNbhd(kind, x, eps)
            runs = trace_on_line(b, (x, direction), samples=10_000, span=span, tol=tol)
            if expect == "apex":
                ok = len(runs) == 1 and runs[0].lo == 0.0 and runs[0].hi == 0.0
            else:
                r = runs[0] if runs else None
                radius = eps / float(np.linalg.norm(direction))
                ok = (
                    len(runs) == 1
                    and abs(r.lo + radius) <= h
                    and abs(r.hi - radius) <= h
                    and r.lo_out is not None
                    and r.hi_out is not None
                    # open at both ends, up to rounding of x + s*d
                    and all(
                        member(b, x.shifted(tuple(sign * radius * (1 - 1e-9) * d for d in direction)), tol)
                        and not member(b, x.shifted(tuple(sign * radius * (1 + 1e-9) * d for d in direction)), tol)
                        for sign in (1.0, -1.0)
                    )
                )
            res.check(ok, f"{kind.value} trace along {direction}: {runs[:3]}")
    return res


def alexandrov_suite(rng, cfg) -> SuiteResult:
    """Diamonds sit inside balls (tips at distance eps/2) and contain balls of radius delta/sqrt(2)."""
    res = SuiteResult("alexandrov_manifold")
    tol = _tol(cfg)
    n = cfg.dimension
    centers = max(1, cfg.samples // 10)
    for _ in range(centers):
        x, eps = _random_ball(rng, n)
        delta = eps / 2.0
        dt = (delta,) + (0.0,) * n
        a = x.shifted(tuple(-c for c in dt))
        b = x.shifted(dt)
        diamond = alexandrov_nbhd(a, b, tol)
        ball = BasicNbhd(T.MANIFOLD, x, eps)
        res.check(delta <= eps / 2.0, "closed-form bound")
        c = np.asarray(x.coords)
        for _ in range(8):
            # rejection sample a point of the diamond
            while True:
                v = rng.uniform(-delta, delta, n + 1)
                if abs(v[0]) + np.linalg.norm(v[1:]) < delta:
                    break
            q = Event(tuple(c + v))
            if member(diamond, q, tol):
                res.check(member(ball, q, tol), f"diamond point outside ball q={q}")
            inner = 0.999 * delta / math.sqrt(2.0)
            w = rng.standard_normal(n + 1)
            w *= inner * rng.uniform(0.0, 1.0) / np.linalg.norm(w)
            res.check(member(diamond, Event(tuple(c + w)), tol), f"ball point outside diamond w={w}")
    return res


# ------------------------------------------------------------ finite kernel


def lemma1_suite(rng, cfg) -> SuiteResult:
    res = SuiteResult("lemma1")
    prng = random.Random(int(rng.integers(2**31)))
    for _ in range(cfg.kernel_trials):
        space = FiniteSpace(prng.randint(1, cfg.kernel_max_n))
        b1, b2 = random_base(prng, space), random_base(prng, space)
        rep = verify_lemma1(b1, b2)
        res.check(rep.passed, f"n={space.n} b1={sorted(b1.masks)} b2={sorted(b2.masks)}: {rep.detail}")
    return res


def kernel_props_suite(rng, cfg) -> SuiteResult:
    res = SuiteResult("kernel_properties")
    prng = random.Random(int(rng.integers(2**31)))
    for _ in range(max(1, cfg.kernel_trials // 4)):
        space = FiniteSpace(prng.randint(1, cfg.kernel_max_n))
        t1 = generate_from_subbase(random_base(prng, space))
        t2 = generate_from_subbase(random_base(prng, space))
        res.check(t1.is_topology, "generated family is not a topology")
        res.check(generate_from_subbase(t1) == t1, "generation not idempotent")
        res.check(intersection_topology(t1, t2) == intersection_topology(t2, t1), "not commutative")
        res.check(intersection_topology(space.indiscrete(), t1) == t1, "indiscrete is not the identity")
    return res


# ------------------------------------------------------------ convergence

EXPECTED_CONVERGENCE = {
    # sequence -> kinds under which it converges; every other kind refutes it
    "null": {T.MANIFOLD, T.ALEXANDROV, T.ZT_DASH, T.ZS_DASH, T.INT_SPACELIKE_DASH, T.INT_CAUSAL_DASH},
    "timelike": {T.MANIFOLD, T.ALEXANDROV, T.Z, T.ZT, T.INT_HORISMOS, T.INT_SPACELIKE, T.ZT_DASH,
                 T.INT_SPACELIKE_DASH},
    "spacelike": {T.MANIFOLD, T.ALEXANDROV, T.Z, T.ZS, T.INT_HORISMOS, T.INT_CAUSAL, T.ZS_DASH,
                  T.INT_CAUSAL_DASH},
}


def convergence_rows(cfg) -> list:
    rows = []
    tol = _tol(cfg)
    from .bases import Schedule

    sched = Schedule(cfg.eps0, cfg.steps)
    for seq in discriminator_sequences(cfg.dimension, cfg.n_max):
        for kind in ALL_KINDS:
            v = converges(seq, kind, sched, tol)
            expected = kind in EXPECTED_CONVERGENCE[seq.name]
            rows.append({
                "sequence": seq.name,
                "kind": kind.value,
                "outcome": v.outcome.value,
                "expected": "ConvergesRelativeToSchedule" if expected else "Refuted",
                "match": v.accepted == expected,
                "witness": v.witness.describe() if v.witness is not None else "",
                "misses": v.detail.get("misses", 0),
            })
    return rows


def discriminators_suite(rng, cfg) -> SuiteResult:
    res = SuiteResult("convergence_discriminators")
    for row in convergence_rows(cfg):
        res.check(row["match"], f"{row['sequence']}/{row['kind']}: got {row['outcome']}")
    return res


def monotonicity_suite(rng, cfg) -> SuiteResult:
    """Refutations survive longer horizons and smaller schedules; dashed refutes imply undashed refutes."""
    res = SuiteResult("refutation_monotonicity")
    tol = _tol(cfg)
    from .bases import Schedule

    for base in (64, 128):
        for seq in discriminator_sequences(cfg.dimension, base):
            longer = discriminator_sequences(cfg.dimension, 2 * base)
            seq2 = next(s for s in longer if s.name == seq.name)
            for kind in ALL_KINDS:
                v = converges(seq, kind, Schedule(cfg.eps0, cfg.steps), tol)
                if v.accepted:
                    continue
                res.check(not converges(seq2, kind, [v.witness], tol).accepted, f"horizon {seq.name}/{kind}")
                smaller = Schedule(cfg.eps0 / 2, cfg.steps + 1)
                res.check(not converges(seq, kind, smaller, tol).accepted, f"schedule {seq.name}/{kind}")
    for seq in discriminator_sequences(cfg.dimension, cfg.n_max):
        for und, dash in DASHED_PAIRS.items():
            vd = converges(seq, dash, Schedule(cfg.eps0, cfg.steps), tol)
            if not vd.accepted:
                vu = converges(seq, und, Schedule(cfg.eps0, cfg.steps), tol)
                res.check(not vu.accepted, f"dashed dominance {seq.name}/{und}")
    return res


def lct_rotating_suite(rng, cfg) -> SuiteResult:
    """Rotating null geodesics: accepted under Manifold; refuted under ZT and IntSpacelike
    by the closed-form certificate Q = -2 s (1 - cos theta_n)."""
    res = SuiteResult("lct_rotating_null")
    tol = _tol(cfg)
    from .bases import Schedule

    fam = CurveFamily(FamilyKind.ROTATING_NULL_GEODESICS, max(2, cfg.dimension))
    horizon = Horizon(cfg.n_max, cfg.tail_fraction)
    sched = Schedule(cfg.eps0, cfg.steps)
    man = lct_analysis(fam, T.MANIFOLD, horizon=horizon, schedule=sched, tol=tol, defns=("D1",))["D1"]
    res.check(man.accepted, "Manifold should accept")
    p = Event((1.0, 1.0) + (0.0,) * (fam.n - 1))
    for kind in (T.ZT, T.INT_SPACELIKE):
        v = lct_analysis(fam, kind, horizon=horizon, schedule=sched, tol=tol, defns=("D1",))["D1"]
        res.check(not v.accepted, f"{kind.value} should refute")
        res.check(v.detail.get("all_n") is True, f"{kind.value} witness should miss every n")
        b = local_schedule(kind, p, 0.5, 1)[0]
        for k in horizon.window:
            curve = fam.curve(k)
            cert = curve_meets_nbhd(curve, b, tol)
            res.check(cert.empty, f"{kind.value} n={k} meets")
            _, _, qf = cert.q_forms[0]
            slope = -2.0 * (1.0 - math.cos(fam.theta(k)))
            coeffs = qf.p + (0.0,) * (3 - len(qf.p))
            res.check(
                abs(coeffs[0]) <= 1e-12 and abs(coeffs[1] - slope) <= 1e-9 * abs(slope) + 1e-15 and abs(coeffs[2]) <= 1e-12,
                f"{kind.value} n={k} Q coefficients {coeffs} vs slope {slope}",
            )
            res.check(verify_certificate(curve, b, cert, density=10, tol=tol), f"{kind.value} n={k} dense re-check")
    for kind in (T.ZT_DASH, T.ZS_DASH, T.INT_SPACELIKE_DASH, T.INT_CAUSAL_DASH):
        v = lct_analysis(fam, kind, horizon=horizon, schedule=sched, tol=tol, defns=("D1",))["D1"]
        res.notes.append(f"{kind.value} under D1: {v.outcome.value}")
    res.notes.append("dashed kinds are expected to satisfy the limit curve theorem;"
                     " see README, 'Dashed topologies under D1'")
    return res


SUITES = {
    "relations": relations_suite,
    "minimal_nbhd_closed_form": minimal_nbhd_suite,
    "partition_invariance": partition_suite,
    "g_equivariance": equivariance_suite,
    "intersection_zt": intersection_zt_suite,
    "intersection_pairings": pairings_suite,
    "dashed_constructions": dashed_suite,
    "schedule_nesting": nesting_suite,
    "vectorised_membership": vectorised_suite,
    "zeeman_traces": traces_suite,
    "alexandrov_manifold": alexandrov_suite,
    "lemma1": lemma1_suite,
    "kernel_properties": kernel_props_suite,
    "convergence_discriminators": discriminators_suite,
    "refutation_monotonicity": monotonicity_suite,
    "lct_rotating_null": lct_rotating_suite,
}


def run_suite(name: str, cfg) -> SuiteResult:
    return SUITES[name](suite_rng(cfg.seed, name), cfg)
