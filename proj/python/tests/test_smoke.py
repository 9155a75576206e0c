import json
import math
import os
from pathlib import Path

import pytest

import coevgan

CONFIGS = Path(os.environ.get("COEVGAN_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def small_config(extra=""):
    return coevgan.ExperimentConfig.parse("[run]\ngrid_dim = 2\nepochs = 2\n[train]\nbatches_per_epoch = 2\n" + extra)


def test_neighborhood_wraps():
    assert coevgan.neighborhood(0, 0, 3) == [(0, 0), (0, 2), (2, 0), (0, 1), (1, 0)]


def test_toy_model():
    # Generator on the target: the loss is exactly one for any discriminator.
    assert coevgan.toy_loss([-2, 2], [-2, 2], [-1, 0.5, 3, 4]) == pytest.approx(1.0, abs=1e-12)
    assert coevgan.expected_mass([0, 10], [5, 15, 15, 15]) == pytest.approx(0.499999856674214, abs=1e-12)
    assert coevgan.generator_distance([2, -2], [-2, 2]) == 0.0


def test_metrics():
    assert coevgan.tvd([5] * 10) == 0.0
    assert coevgan.tvd([1] + [0] * 9) == 0.9
    assert coevgan.tvd([3, 1], [0.5, 0.5]) == pytest.approx(0.25)
    stats = coevgan.l2_diversity([[0, 0], [3, 4]])
    assert stats["mean"] == 5.0 and stats["count"] == 1
    assert coevgan.summarize([1, 2, 3, 4])["median"] == 2.5


def test_mixture_evolution_is_elitist():
    r = coevgan.evolve_mixture([1.0, 5.0], generations=500, seed=3)
    assert r["score"] <= 1.05
    trace = [r["initial_score"]] + r["champion_trace"]
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert math.isclose(sum(r["weights"]), 1.0)


def test_config_round_trip_and_errors():
    cfg = small_config()
    assert coevgan.ExperimentConfig.parse(cfg.serialize()) == cfg
    assert "train.tournament_size" in coevgan.config_keys()
    with pytest.raises(coevgan.ConfigError, match="run.method"):
        coevgan.ExperimentConfig.parse("[run]\nmethod = wgan\n")
    with pytest.raises(ValueError):
        coevgan.ExperimentConfig.parse("[run]\nnope = 1\n")


def test_run_grid_and_audit():
    cfg = small_config()
    a = coevgan.run_grid(cfg)
    b = coevgan.run_grid(cfg)
    assert a["center_generators"] == b["center_generators"]
    assert a["audit_passed"]
    report = coevgan.audit_interactions(a["counters"], "lipizzaner", 2, 2, 2)
    assert report["passed"]
    bad = dict(a["counters"], migrations=a["counters"]["migrations"] + 1)
    assert not coevgan.audit_interactions(bad, "lipizzaner", 2, 2, 2)["passed"]


def test_neural_run():
    cfg = coevgan.ExperimentConfig.parse(
        "[run]\nbackend = neural\ngrid_dim = 2\nepochs = 2\n[train]\nbatches_per_epoch = 1\n"
        "[neural]\nhidden = 4\nscore_samples = 100\n"
    )
    r = coevgan.run_grid(cfg, seed=5)
    assert 0.0 <= r["tvd"] <= 1.0
    assert 0.0 <= r["low_quality"] <= 1.0


def test_heatmaps():
    cfg = coevgan.ExperimentConfig.parse(
        "[heatmap_mode]\nstep = 10\nrepetitions = 1\ngenerations = 5\n[heatmap_disc]\nrepetitions = 1\ngenerations = 5\n"
    )
    h = coevgan.mode_collapse_heatmap(cfg)
    assert len(h["matrix"]) == 3 and len(h["matrix"][0]) == 3
    d = coevgan.discriminator_collapse_heatmap(cfg)
    assert set(d["quadrants"]) == {"neg_neg", "neg_pos", "pos_neg", "pos_pos"}
    assert all(0.0 <= v <= 1.0 for row in d["matrix"] for v in row)


def test_commands_write_artifacts(tmp_path):
    cfg = coevgan.ExperimentConfig.load(CONFIGS / "minimal.ini")
    coevgan.cmd_run(cfg, tmp_path / "run")
    run = json.loads((tmp_path / "run" / "run.json").read_text())
    assert run["provenance"]["config"]["run"]["grid_dim"] == "1"
    assert (tmp_path / "run" / "metrics.csv").read_text().startswith("# master_seed = 1")

    mode = coevgan.ExperimentConfig.parse("[heatmap_mode]\nstep = 10\nrepetitions = 1\ngenerations = 2\n")
    coevgan.cmd_heatmap_mode(mode, tmp_path / "hm")
    out = coevgan.cmd_render([tmp_path / "hm" / "heatmap_mode.csv"], 2, tmp_path / "img")
    assert "6x6" in out
    assert (tmp_path / "img" / "heatmap_mode.pgm").read_text().startswith("P2\n")

    with pytest.raises(coevgan.ConfigError):
        coevgan.cmd_render([tmp_path / "missing.csv"], 2, tmp_path / "img")


def test_module_doctests():
    import doctest

    assert doctest.testmod(coevgan).failed == 0
