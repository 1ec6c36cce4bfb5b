import csv
import json
from pathlib import Path

import numpy as np
import pytest

from hignn.cli import _parse_grid, main


def run_cli(args):
    return main([str(a) for a in args])


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def single_run_dir(out: Path) -> Path:
    dirs = [p for p in out.iterdir() if p.is_dir()]
    assert len(dirs) == 1
    return dirs[0]


@pytest.fixture
def path3_files(tmp_path):
    d = tmp_path / "data"
    d.mkdir()
    (d / "edges.txt").write_text("0,1\n1,2\n")
    (d / "features.csv").write_text("1.0,0.0\n0.0,1.0\n1.0,1.0\n")
    (d / "labels.csv").write_text("0,0\n1,0\n2,1\n")
    (d / "splits.json").write_text(
        json.dumps({"splits": [{"train": [0], "val": [1], "test": [2]}]})
    )
    return d


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synthout")
    rc = run_cli([
        "synth", "--out", out, "--n-nodes", 300, "--classes", 3, "--h", 0.15,
        "--avg-degree", 10, "--feature-dim", 8, "--feature-separation", 4.0,
        "--seed", 7,
    ])
    assert rc == 0
    return single_run_dir(out)


def test_parse_grid():
    assert _parse_grid("0:1:0.5") == [0.0, 0.5, 1.0]
    assert len(_parse_grid("0:1:0.05")) == 21
    assert _parse_grid("0.3,0.7") == [0.3, 0.7]


def test_analyze_path_fixture(path3_files, tmp_path, capsys):
    out = tmp_path / "out"
    rc = run_cli(["analyze", "--dataset-dir", path3_files, "--out", out])
    assert rc == 0
    rows = read_csv(single_run_dir(out) / "homophily.csv")
    assert float(rows[0]["h_edge"]) == pytest.approx(0.5)
    assert float(rows[0]["h_node"]) == pytest.approx(0.5)
    assert rows[0]["n_nodes"] == "3"


def test_analyze_without_splits_file(path3_files, tmp_path):
    (path3_files / "splits.json").unlink()
    rc = run_cli(["analyze", "--dataset-dir", path3_files, "--out", tmp_path / "o"])
    assert rc == 0


def test_theory_sweep_shape(tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "theory-sweep", "--h-grid", "0:1:0.05", "--sigma-grid", "0.1",
        "--delta-grid", "0.9", "--c-grid", "5", "--out", out,
    ])
    assert rc == 0
    rows = read_csv(single_run_dir(out) / "theory_sweep.csv")
    assert len(rows) == 21
    hhats = [float(r["h_hat"]) for r in rows]
    hs = [float(r["h"]) for r in rows]
    assert hs[int(np.argmin(hhats))] == pytest.approx(0.2)


def test_simulate_agreement(tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "simulate", "--h", 0.3, "--sigma", 0.2, "--delta", 0.8, "--c", 5,
        "--pairs", 100000, "--seed", 7, "--out", out,
    ])
    assert rc == 0
    row = read_csv(single_run_dir(out) / "simulate.csv")[0]
    assert abs(float(row["h_hat_mc"]) - float(row["h_hat"])) <= 0.02
    assert row["seed"] == "7"


def test_synth_outputs_reload(synth_dir):
    import hignn

    ds = hignn.load_dataset(
        synth_dir / "edges.txt", synth_dir / "features.csv",
        synth_dir / "labels.csv", synth_dir / "splits.json",
    )
    assert ds.n_nodes == 300
    summary = json.loads((synth_dir / "summary.json").read_text())
    assert summary["h_edge_measured"] == pytest.approx(0.15, abs=0.05)
    manifest = json.loads((synth_dir / "manifest.json").read_text())
    assert all(Path(p).exists() for p in manifest["outputs"])


def test_build_adj_true_labels(synth_dir, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "build-adj", "--dataset-dir", synth_dir, "--deltas", "0.6,0.9",
        "--labels-source", "true", "--out", out,
    ])
    assert rc == 0
    run_dir = single_run_dir(out)
    with open(run_dir / "improvement.csv", encoding="utf-8") as fh:
        header = fh.readline().strip()
    assert header == "delta,h_hat,h_hat_minus_h,sigma_bar"
    rows = read_csv(run_dir / "improvement.csv")
    assert len(rows) == 2
    assert (run_dir / "rewired_delta0.9.edges").exists()
    # the emitted edge list parses back as a graph over the same nodes
    import hignn

    edges = hignn.io.read_edges(run_dir / "rewired_delta0.9.edges")
    g = hignn.build_graph(edges, 300)
    assert np.isclose(
        float(rows[1]["h_hat"]),
        hignn.edge_homophily(g, hignn.load_dataset(
            synth_dir / "edges.txt", synth_dir / "features.csv",
            synth_dir / "labels.csv", synth_dir / "splits.json").labels),
    )


def test_build_adj_predicted_labels(synth_dir, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "build-adj", "--dataset-dir", synth_dir, "--deltas", "0.9",
        "--labels-source", "predicted", "--estimator", "gcn_hp",
        "--max-epochs", 60, "--patience", 10, "--out", out, "--seed", 0,
    ])
    assert rc == 0
    run_dir = single_run_dir(out)
    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert manifest["config"]["labels_source"] == "predicted"
    assert manifest["config"]["estimator"] == "gcn_hp"
    rows = read_csv(run_dir / "improvement.csv")
    # heterophilous input with a strong estimator: rewiring raises homophily
    assert float(rows[0]["h_hat_minus_h"]) > 0.1


def test_estimate_labels_command(synth_dir, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "estimate-labels", "--dataset-dir", synth_dir, "--estimator", "mlp",
        "--max-epochs", 120, "--patience", 20, "--out", out, "--seed", 1,
    ])
    assert rc == 0
    run_dir = single_run_dir(out)
    rows = read_csv(run_dir / "pseudo_labels.csv")
    assert len(rows) == 300
    report = json.loads((run_dir / "estimator_report.json").read_text())
    assert report["estimator"] == "mlp"
    assert report["all_node_accuracy"] >= 0.8


def test_train_command_outputs(synth_dir, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "train", "--dataset-dir", synth_dir, "--delta", 0.9, "--lam", 0.1,
        "--hidden-dim", 8, "--max-epochs", 40, "--patience", 10,
        "--out", out, "--seed", 2,
    ])
    assert rc == 0
    run_dir = single_run_dir(out)
    with open(run_dir / "trace.csv", encoding="utf-8") as fh:
        assert fh.readline().strip() == "epoch,train_loss,val_acc"
    result = json.loads((run_dir / "result.json").read_text())
    assert {"test_acc", "best_epoch", "seed"} <= set(result)


def test_sweep_command_cardinality(synth_dir, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "sweep", "--dataset-dir", synth_dir, "--deltas", "0.8,0.9",
        "--lambdas", "0,1", "--hidden-dim", 8, "--max-epochs", 30,
        "--patience", 5, "--out", out, "--seed", 3,
    ])
    assert rc == 0
    rows = read_csv(single_run_dir(out) / "sweep.csv")
    assert len(rows) == 4
    lam0 = {r["delta"]: r for r in rows if float(r["lambda"]) == 0.0}
    assert len(set((r["val_acc"], r["test_acc"]) for r in lam0.values())) == 1


def test_ablate_command(synth_dir, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "ablate", "--dataset-dir", synth_dir, "--deltas", "0.9",
        "--lambdas", "1,0.1", "--hidden-dim", 8, "--max-epochs", 30,
        "--patience", 5, "--out", out, "--seed", 4,
    ])
    assert rc == 0
    rows = read_csv(single_run_dir(out) / "ablation.csv")
    assert [r["variant"] for r in rows] == [
        "full", "without_a_new", "without_a", "early_fusion"
    ]


def test_run_command(synth_dir, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "run", "--dataset-dir", synth_dir, "--deltas", "0.9", "--lambdas", "1,0",
        "--hidden-dim", 8, "--max-epochs", 30, "--patience", 5,
        "--out", out, "--seed", 5,
    ])
    assert rc == 0
    run_dir = single_run_dir(out)
    result = json.loads((run_dir / "result.json").read_text())
    assert "mean_test_acc" in result
    assert result["splits"][0]["best_lambda"] in (0.0, 1.0)
    assert "0.9" in map(str, result["splits"][0]["h_hat_true"])
    rows = read_csv(run_dir / "splits.csv")
    assert len(rows) == 1


def test_thread_cap_env_does_not_change_results(synth_dir, tmp_path, monkeypatch):
    import hignn

    ds = hignn.load_dataset(
        synth_dir / "edges.txt", synth_dir / "features.csv",
        synth_dir / "labels.csv", synth_dir / "splits.json",
    )
    H = hignn.hetero_info(ds.graph, ds.labels, ds.n_classes)
    monkeypatch.setenv("HIGNN_THREADS", "1")
    a = hignn.build_hi_adjacency(H, 0.8, block_size=64)
    monkeypatch.setenv("HIGNN_THREADS", "4")
    b = hignn.build_hi_adjacency(H, 0.8, block_size=64)
    assert np.array_equal(a.edges, b.edges)


def test_unknown_flag_usage_error(capsys):
    assert run_cli(["analyze", "--bogus"]) == 1
    assert capsys.readouterr().err.startswith("error: usage:")


def test_missing_file_io_error(tmp_path, capsys):
    rc = run_cli([
        "analyze", "--edges", tmp_path / "nope.txt", "--features",
        tmp_path / "nope.csv", "--labels", tmp_path / "nope2.csv",
        "--out", tmp_path / "o",
    ])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error: io:")


def test_malformed_file_reports_line(path3_files, tmp_path, capsys):
    (path3_files / "edges.txt").write_text("0,1\nbroken\n")
    rc = run_cli(["analyze", "--dataset-dir", path3_files, "--out", tmp_path / "o"])
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("error: io:") and "edges.txt:2" in err


def test_invalid_config_error(tmp_path, capsys):
    rc = run_cli([
        "simulate", "--h", 0.5, "--sigma", -1, "--delta", 0.5, "--c", 5,
        "--out", tmp_path / "o",
    ])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error: config:")


def test_infeasible_synth_is_config_error(tmp_path, capsys):
    rc = run_cli([
        "synth", "--n-nodes", 100, "--classes", 5, "--h", 1.0,
        "--avg-degree", 90, "--out", tmp_path / "o",
    ])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error: config:")


@pytest.mark.parametrize("sub", [
    "analyze", "theory-sweep", "simulate", "synth", "build-adj",
    "estimate-labels", "train", "run", "ablate", "sweep",
])
def test_help_available(sub, capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli([sub, "--help"])
    assert exc.value.code == 0
    assert "--out" in capsys.readouterr().out


def test_config_file_with_flag_override(synth_dir, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "delta_grid": [0.9], "lambda_grid": [0.0],
        "model": {"hidden_dim": 8}, "train": {"max_epochs": 25, "patience": 5},
        "seed": 11,
    }))
    out = tmp_path / "out"
    rc = run_cli([
        "sweep", "--dataset-dir", synth_dir, "--config", cfg_path,
        "--lambdas", "0,0.5", "--out", out,
    ])
    assert rc == 0
    rows = read_csv(single_run_dir(out) / "sweep.csv")
    assert len(rows) == 2  # config delta grid, flag-provided lambda grid


def test_config_synth_spec_drives_experiment(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "synth": {"n_nodes": 120, "c": 3, "h": 0.2, "avg_degree": 8,
                  "feature_dim": 6, "feature_separation": 4.0, "seed": 4},
        "delta_grid": [0.9], "lambda_grid": [0.0],
        "model": {"hidden_dim": 8}, "train": {"max_epochs": 25, "patience": 5},
    }))
    out = tmp_path / "out"
    rc = run_cli(["train", "--config", cfg_path, "--lam", 0, "--out", out])
    assert rc == 0
    assert (single_run_dir(out) / "result.json").exists()


def test_repeat_run_outputs_identical_bytes(synth_dir, tmp_path):
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        rc = run_cli([
            "train", "--dataset-dir", synth_dir, "--lam", 0, "--hidden-dim", 8,
            "--max-epochs", 25, "--patience", 5, "--out", out, "--seed", 6,
        ])
        assert rc == 0
        outs.append(single_run_dir(out))
    for name in ("trace.csv", "result.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    m0 = json.loads((outs[0] / "manifest.json").read_text())
    m1 = json.loads((outs[1] / "manifest.json").read_text())
    for m in (m0, m1):
        m.pop("duration_s")
        m["command_line"] = [a for a in m["command_line"] if "/a" not in a and "/b" not in a]
        m["outputs"] = [Path(p).name for p in m["outputs"]]
    assert m0 == m1
