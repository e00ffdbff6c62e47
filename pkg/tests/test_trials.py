import json

import numpy as np
import pytest

from kgg import trials
from kgg.io import load_points
from kgg.trials import THEOREMS, TrialConfig, instance_seed, run, sample_points


def test_config_defaults_and_validation():
    cfg = TrialConfig("perfect2").resolved()
    assert (cfg.n_min, cfg.n_max) == THEOREMS["perfect2"].n_range
    for bad in (
        TrialConfig("nope"),
        TrialConfig("perfect2", 3, 9),
        TrialConfig("bottleneck10", 4, 16),
        TrialConfig("match0", trials=0),
        TrialConfig("match0", 10, 5),
        TrialConfig("match0", dist="cauchy"),
        TrialConfig("match0", tau=-1.0),
        TrialConfig("counterexample8", eps=0.6),
    ):
        with pytest.raises(ValueError):
            bad.resolved()


def test_instance_seed_stable():
    # frozen: changing the seeding scheme breaks every recorded replay command
    assert instance_seed(7, 0) == instance_seed(7, 0)
    assert instance_seed(7, 0) != instance_seed(7, 1) != instance_seed(8, 1)
    a = np.random.default_rng(instance_seed(1, 2)).random(3)
    b = np.random.default_rng(instance_seed(1, 2)).random(3)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("dist", ["uniform", "gaussian", "clustered"])
def test_sample_points(dist):
    pts = sample_points(np.random.default_rng(0), 25, dist)
    assert pts.shape == (25, 2)


@pytest.mark.parametrize("theorem", sorted(THEOREMS))
def test_every_theorem_smoke(theorem):
    rep = run(TrialConfig(theorem, trials=6 if theorem != "counterexample8" else 1, seed=11))
    assert rep.ok, rep.counterexample


def test_report_byte_identical_and_worker_independent():
    cfg = TrialConfig("fourdisk", trials=24, seed=5)
    one = run(cfg).to_json()
    assert one == run(cfg).to_json()
    assert one == run(TrialConfig("fourdisk", trials=24, seed=5, jobs=2)).to_json()


def test_replay_single_trial():
    full = run(TrialConfig("match1", trials=10, seed=9))
    single = run(TrialConfig("match1", trials=1, seed=9, first_trial=6))
    assert single.records[0] == full.records[6]


def test_counterexample_is_reloadable(monkeypatch, tmp_path):
    original = THEOREMS["match0"]

    def failing(cfg, trial, rng, pol):
        rec, ok, inst = original.run(cfg, trial, rng, pol)
        return rec, trial != 3 and ok, inst

    monkeypatch.setitem(THEOREMS, "match0", trials.TheoremSpec(failing, original.n_range))
    rep = run(TrialConfig("match0", trials=5, seed=1))
    assert rep.failed == 1 and rep.counterexample["trial"] == 3
    assert "--first-trial 3 --trials 1" in rep.counterexample["replay"]
    path = tmp_path / "ce.json"
    path.write_text(json.dumps(rep.counterexample["instance"]))
    pts, _ = load_points(path)
    assert len(pts) == rep.records[3]["n"]


def test_report_field_order():
    doc = json.loads(run(TrialConfig("independence", trials=2)).to_json())
    assert list(doc) == ["theorem", "config", "summary", "records", "counterexample"]
    assert list(doc["records"][0])[:2] == ["trial", "instance_seed"]
    assert list(doc["records"][0])[-1] == "pass"
