"""Acceptance criteria 1-10.  Each test records one PASS/FAIL line, printed at the end of the run."""

import filecmp
import math
import time

import pytest

from causaltop.bases import Schedule, TopologyKind
from causaltop.cli import main
from causaltop.convergence import CurveFamily, FamilyKind, Horizon, lct_analysis
from causaltop.geometry import TolerancePolicy
from causaltop.report import ExperimentConfig
from causaltop.suites import EXPECTED_CONVERGENCE, convergence_rows, run_suite

T = TopologyKind
RESULTS = {}
CFG = ExperimentConfig(seed=42)


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def timed(name):
    t0 = time.perf_counter()
    res = run_suite(name, CFG)
    return res, time.perf_counter() - t0


def test_criterion_01_relation_algebra():
    res, dt = timed("relations")
    ok = res.passed and res.checked >= 5 * CFG.samples and dt < 5.0
    record(1, ok, f"relations {res.checked - res.failures}/{res.checked}, {CFG.transforms} G-transforms, {dt:.2f}s (<5s)")


def test_criterion_02_zt_as_interval_intersection():
    zt, _ = timed("intersection_zt")
    part, _ = timed("partition_invariance")
    ok = zt.passed and zt.checked == CFG.samples * CFG.partitions and part.passed
    record(2, ok, f"ZT membership {zt.checked - zt.failures}/{zt.checked} over {CFG.partitions} partitions;"
                  f" partition invariance {part.checked - part.failures}/{part.checked}")


def test_criterion_03_pairings():
    res, _ = timed("intersection_pairings")
    # Z and ZS get the full sample count; dashed pairings ride along at a tenth
    ok = res.passed and res.checked >= 2 * CFG.samples
    record(3, ok, f"Z, ZS pairings {res.checked - res.failures}/{res.checked} mismatches={res.failures}")


def test_criterion_04_dashed_constructions():
    res, _ = timed("dashed_constructions")
    ok = res.passed and res.checked == 5 * CFG.samples
    record(4, ok, f"dashed/undashed and Z = ZT u ZS {res.checked - res.failures}/{res.checked}")


def test_criterion_05_lemma1():
    res, dt = timed("lemma1")
    ok = res.passed and res.checked == 1000 and CFG.kernel_max_n == 6 and dt < 10.0
    record(5, ok, f"lemma1 {res.checked - res.failures}/{res.checked} (n<=6), {dt:.2f}s (<10s)")


def test_criterion_06_convergence_discriminators():
    rows = convergence_rows(CFG)
    bad = [r for r in rows if not r["match"]]
    null = {r["kind"]: r["outcome"] for r in rows if r["sequence"] == "null"}
    converging = {k.value for k in (T.ZT_DASH, T.ZS_DASH, T.MANIFOLD)}
    refuted = {k.value for k in (T.ZT, T.ZS, T.Z, T.INT_HORISMOS, T.INT_SPACELIKE, T.INT_CAUSAL)}
    ok = (
        CFG.n_max == 256
        and len(rows) == 36
        and not bad
        and all(null[k] == "ConvergesRelativeToSchedule" for k in converging)
        and all(null[k] == "Refuted" for k in refuted)
        and set(EXPECTED_CONVERGENCE) == {"null", "timelike", "spacelike"}
    )
    record(6, ok, f"{len(rows) - len(bad)}/{len(rows)} cells match at N_max=256")


def test_criterion_07_rotating_null_lct():
    fam = CurveFamily(FamilyKind.ROTATING_NULL_GEODESICS, 2)
    horizon, sched, tol = Horizon(256, 0.9), Schedule(0.5, 3), TolerancePolicy(1e-9)
    t0 = time.perf_counter()
    verdicts = {k: lct_analysis(fam, k, horizon=horizon, schedule=sched, tol=tol, defns=("D1",))["D1"]
                for k in (T.MANIFOLD, T.ZT, T.INT_SPACELIKE)}
    dt = time.perf_counter() - t0
    # coefficient checks against -2 s (1 - cos theta_n) and the 10x dense re-check
    res, _ = timed("lct_rotating_null")
    ok = (
        verdicts[T.MANIFOLD].accepted
        and not verdicts[T.ZT].accepted
        and not verdicts[T.INT_SPACELIKE].accepted
        and res.passed
        and dt < 1.0
    )
    dashed = "; ".join(res.notes)
    record(7, ok, f"Manifold accepted, ZT/IntSpacelike refuted, certificates {res.checked - res.failures}/"
                  f"{res.checked}, {dt:.2f}s (<1s). Reported: {dashed}")


def test_criterion_08_trace_conditions():
    res, _ = timed("zeeman_traces")
    record(8, res.passed, f"traces {res.checked - res.failures}/{res.checked} at 10^4 samples per line")


def test_criterion_09_alexandrov_manifold():
    res, _ = timed("alexandrov_manifold")
    centers = max(1, CFG.samples // 10)
    ok = res.passed and centers == 1000
    record(9, ok, f"mutual refinement {res.checked - res.failures}/{res.checked} on {centers} centres")


def _tree_equal(a, b):
    cmp = filecmp.dircmp(a, b)
    stack = [cmp]
    while stack:
        c = stack.pop()
        if c.left_only or c.right_only or c.diff_files or c.funny_files:
            return False
        _, mismatch, errors = filecmp.cmpfiles(c.left, c.right, c.common_files, shallow=False)
        if mismatch or errors:
            return False
        stack.extend(c.subdirs.values())
    return True


@pytest.mark.slow
def test_criterion_10_determinism(tmp_path):
    codes = {}
    for cmd in ("props-run", "lct-run"):
        for tag, jobs in (("a", 1), ("b", 1), ("c", 4)):
            out = tmp_path / f"{cmd}-{tag}"
            codes[cmd, tag] = main([cmd, "--seed", "42", "--out-dir", str(out), "--jobs", str(jobs)])
    same = all(
        _tree_equal(tmp_path / f"{cmd}-a", tmp_path / f"{cmd}-{tag}")
        for cmd in ("props-run", "lct-run")
        for tag in ("b", "c")
    )
    files = sum(1 for p in (tmp_path / "props-run-a").rglob("*") if p.is_file())
    ok = same and all(c == 0 for c in codes.values()) and files > 0
    record(10, ok, f"props-run and lct-run byte-identical across runs and --jobs 1/4 ({files} props files); "
                   f"exit codes {sorted(set(codes.values()))}")
