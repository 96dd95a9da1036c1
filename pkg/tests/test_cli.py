"""End-to-end tests for the command-line interface."""

import numpy as np
import pytest

from neuromark.cli import (
    ConfigError,
    build_parser,
    load_run_config,
    main,
    parse_config_text,
)
from neuromark.features import read_feature_csv
from neuromark.fixtures import generate_fixture_store
from neuromark.ingest import load_store


@pytest.fixture(scope="module")
def store_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("store")
    generate_fixture_store("separable", root / "sep", n_segments=16, seed=3)
    return root / "sep"


def write_config(tmp_path, store_dir, extra=""):
    path = tmp_path / "run.cfg"
    path.write_text(
        f"[data]\nstore = {store_dir}\nout = {tmp_path / 'out'}\n"
        "[experiment]\nseed = 2\nn_folds = 3\n"
        "[train]\nmax_epochs = 2\nbatch_size = 8\n" + extra)
    return str(path)


# ------------------------------------------------------------ config parse

def test_parse_config_sections_and_arrays():
    values = parse_config_text(
        "# comment\n[data]\nstore = /tmp/x\n\n[models]\n"
        "classical = logreg, knn\n")
    assert values == {"data.store": "/tmp/x",
                      "models.classical": "logreg, knn"}


def test_parse_config_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("[data]\nnonsense\n")
    with pytest.raises(ConfigError, match="line 3.*duplicate"):
        parse_config_text("[data]\nout = a\nout = b\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("[]\n")


def test_unknown_config_key_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("[data]\nstore = x\ntypo_key = 1\n")
    with pytest.raises(ConfigError, match="data.typo_key"):
        load_run_config(str(path))


def test_flag_overrides_beat_config_values(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("[experiment]\nseed = 7\n[data]\nout = cfg_out\n")
    config = load_run_config(str(path), seed=9, out="flag_out")
    assert config.seed == 9
    assert config.train.seed == 9
    assert config.out == "flag_out"


def test_help_lists_config_keys(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["train-gnn", "--help"])
    text = capsys.readouterr().out
    for key in ("data.store", "models.architectures", "train.lr",
                "train.early_stop_patience"):
        assert key in text


# ------------------------------------------------------------- subcommands

def test_fixtures_generate_store_loads_cleanly(tmp_path):
    rc = main(["fixtures", "generate", "--kind", "imbalanced", "--n", "20",
               "--seed", "4", "--out", str(tmp_path)])
    assert rc == 0
    store = load_store(tmp_path / "imbalanced")
    assert len(store.rows) == 20
    assert set(store.label_counts()) == {0, 1}


def test_extract_writes_one_row_per_segment(tmp_path, store_dir):
    rc = main(["extract", "--config", write_config(tmp_path, store_dir)])
    assert rc == 0
    X, y, ids, columns = read_feature_csv(tmp_path / "out" / "features.csv")
    assert X.shape == (16, 760)
    assert len(columns) == 760
    node_files = sorted((tmp_path / "out" / "node_features").glob("*.csv"))
    assert len(node_files) == 16


def test_graphs_writes_one_graph_per_segment(tmp_path, store_dir):
    rc = main(["graphs", "--config", write_config(tmp_path, store_dir)])
    assert rc == 0
    graphs = sorted((tmp_path / "out" / "graphs").glob("*.csv"))
    assert len(graphs) == 16


def test_train_gnn_single_architecture_one_report_row(tmp_path, store_dir):
    cfg = write_config(tmp_path, store_dir,
                       "[models]\narchitectures = BaselineGCN\n")
    rc = main(["train-gnn", "--config", cfg])
    assert rc == 0
    reports = tmp_path / "out" / "reports"
    assert (reports / "graph_baselinegcn.csv").exists()
    summary = (reports / "summary.md").read_text()
    assert "BaselineGCN" in summary


def test_train_classical_then_report_roundtrip(tmp_path, store_dir):
    cfg = write_config(tmp_path, store_dir,
                       "[models]\nclassical = logreg\n"
                       "[pipelines]\nkinds = A\n")
    assert main(["train-classical", "--config", cfg]) == 0
    summary = tmp_path / "out" / "reports" / "summary.md"
    before = summary.read_text()
    assert main(["report", "--config", cfg]) == 0
    assert summary.read_text() == before


def test_unknown_architecture_exits_2_and_names_offender(tmp_path, store_dir,
                                                         capsys):
    cfg = write_config(tmp_path, store_dir,
                       "[models]\narchitectures = GraphZilla\n")
    assert main(["train-gnn", "--config", cfg]) == 2
    assert "GraphZilla" in capsys.readouterr().err


def test_missing_store_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[data]\nstore = /nonexistent/store\n")
    assert main(["extract", "--config", str(cfg)]) == 2
    assert "store" in capsys.readouterr().err


def test_config_parse_failure_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("garbage line\n")
    assert main(["extract", "--config", str(cfg)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_report_without_csvs_exits_2(tmp_path, capsys):
    assert main(["report", "--out", str(tmp_path / "empty")]) == 2
    assert "no report CSVs" in capsys.readouterr().err


def test_extract_is_idempotent(tmp_path, store_dir):
    cfg = write_config(tmp_path, store_dir)
    assert main(["extract", "--config", cfg]) == 0
    first = (tmp_path / "out" / "features.csv").read_bytes()
    assert main(["extract", "--config", cfg]) == 0
    assert (tmp_path / "out" / "features.csv").read_bytes() == first
