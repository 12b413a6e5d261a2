import dataclasses
import json

import pytest

from causaltop.cli import main
from causaltop.report import RUNTIME_FIELDS, ConfigError, ExperimentConfig, header, write_csv


def test_config_roundtrip(tmp_path):
    cfg = ExperimentConfig(seed=7, tau_rel=1.0 / 3.0, eps0=0.1 + 0.2, families=["ParallelNullLines"])
    path = tmp_path / "cfg.json"
    cfg.save(path)
    back = ExperimentConfig.load(path)
    assert back == cfg
    back.save(tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == path.read_bytes()


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(dimension=4).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(defns=["D9"]).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"seeed": 1})


def test_header_echoes_every_experiment_field():
    cfg = ExperimentConfig()
    h = header(cfg, "props-run")
    names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    assert set(h["config"]) == names - set(RUNTIME_FIELDS)
    assert h["seed"] == 42 and h["config"]["n_max"] == 256
    assert {"causaltop", "numpy", "python"} <= set(h["versions"])


def test_csv_is_stable(tmp_path):
    rows = [{"a": 1, "b": "x,y"}, {"a": 2, "b": ""}]
    write_csv(tmp_path / "r.csv", rows)
    assert (tmp_path / "r.csv").read_text() == 'a,b\n1,"x,y"\n2,\n'


def _snapshot(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_props_reports_identical_across_jobs(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 300, "kernel_trials": 50,
                               "suites": ["relations", "lemma1", "zeeman_traces", "schedule_nesting"]}))
    snaps = []
    for i, jobs in enumerate((1, 3, 1)):
        out = tmp_path / f"run{i}"
        assert main(["props-run", "--config", str(cfg), "--out-dir", str(out), "--jobs", str(jobs)]) == 0
        snaps.append(_snapshot(out))
    assert snaps[0] == snaps[1] == snaps[2]
    assert "props.svg" in snaps[0]


def test_seed_changes_report(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 200, "suites": ["relations"]}))
    for seed in (1, 2):
        assert main(["props-run", "--config", str(cfg), "--seed", str(seed), "--out-dir", str(tmp_path / str(seed))]) == 0
    a = json.loads((tmp_path / "1" / "props.json").read_text())
    b = json.loads((tmp_path / "2" / "props.json").read_text())
    assert a["header"]["seed"] == 1 and b["header"]["seed"] == 2


def test_svg_render_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["nbhd-render", "ZSDash", "--resolution", "32", "--out-dir", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "nbhd_ZSDash_01.svg").read_bytes() == (tmp_path / "b" / "nbhd_ZSDash_01.svg").read_bytes()
