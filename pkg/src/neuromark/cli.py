"""Command-line entry point.

Configuration is a flat ``key = value`` text file with ``[section]``
headers; array values are comma-separated. Every subcommand's ``--help``
lists the config keys it reads.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import features as feat
from .dimred import build_pipeline
from .eval import (CLASSICAL_MODELS, ExperimentPlan, render_tables,
                   run_experiment)
from .fixtures import FIXTURE_KINDS, generate_fixture_store
from .gnn import ARCHITECTURE_NAMES, TrainConfig
from .graph import graph_from_node_features, save_graph
from .ingest import StoreError, filter_min_duration, iter_segments, load_store


class ConfigError(ValueError):
    pass


def parse_config_text(text: str) -> dict[str, str]:
    """Flat key=value parser; keys are returned as ``section.key``."""
    values: dict[str, str] = {}
    section = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if not section:
                raise ConfigError(f"line {lineno}: empty section name")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', "
                              f"got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        full = f"{section}.{key}" if section else key
        if full in values:
            raise ConfigError(f"line {lineno}: duplicate key {full!r}")
        values[full] = value.strip()
    return values


def _as_list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


@dataclass(frozen=True)
class RunConfig:
    store: str = ""
    out: str = "out"
    pipelines: tuple[str, ...] = ("A", "B", "C")
    classical_models: tuple[str, ...] = CLASSICAL_MODELS
    architectures: tuple[str, ...] = ARCHITECTURE_NAMES
    seed: int = 0
    jobs: int = 1
    test_fraction: float = 0.2
    n_folds: int = 5
    hidden_dim: int = 64
    dropout: float = 0.3
    edge_transform: str = "abs"
    min_duration_s: float = 0.5
    train: TrainConfig = field(default_factory=TrainConfig)


_TRAIN_KEYS = ("lr", "weight_decay", "batch_size", "max_epochs",
               "plateau_factor", "plateau_patience", "early_stop_patience",
               "class_weighting")

CONFIG_KEYS = (
    "data.store", "data.out", "data.min_duration_s",
    "pipelines.kinds", "models.classical", "models.architectures",
    "experiment.seed", "experiment.test_fraction", "experiment.n_folds",
    "experiment.edge_transform",
    "graph.hidden_dim", "graph.dropout",
    *(f"train.{k}" for k in _TRAIN_KEYS),
)


def load_run_config(path: str | None, seed: int | None = None,
                    out: str | None = None, jobs: int | None = None
                    ) -> RunConfig:
    values: dict[str, str] = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {path}")
        values = parse_config_text(p.read_text())
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    def get(key, cast, default):
        return cast(values[key]) if key in values else default

    train = TrainConfig(
        lr=get("train.lr", float, 0.001),
        weight_decay=get("train.weight_decay", float, 0.01),
        batch_size=get("train.batch_size", int, 32),
        max_epochs=get("train.max_epochs", int, 100),
        plateau_factor=get("train.plateau_factor", float, 0.5),
        plateau_patience=get("train.plateau_patience", int, 5),
        early_stop_patience=get("train.early_stop_patience", int, 15),
        class_weighting=get("train.class_weighting", str, "balanced"),
        seed=seed if seed is not None else get("experiment.seed", int, 0),
    )
    return RunConfig(
        store=get("data.store", str, ""),
        out=out if out is not None else get("data.out", str, "out"),
        pipelines=get("pipelines.kinds", _as_list, ("A", "B", "C")),
        classical_models=get("models.classical", _as_list, CLASSICAL_MODELS),
        architectures=get("models.architectures", _as_list,
                          ARCHITECTURE_NAMES),
        seed=seed if seed is not None else get("experiment.seed", int, 0),
        jobs=jobs if jobs is not None else 1,
        test_fraction=get("experiment.test_fraction", float, 0.2),
        n_folds=get("experiment.n_folds", int, 5),
        hidden_dim=get("graph.hidden_dim", int, 64),
        dropout=get("graph.dropout", float, 0.3),
        edge_transform=get("experiment.edge_transform", str, "abs"),
        min_duration_s=get("data.min_duration_s", float, 0.5),
        train=train,
    )


def _validate(config: RunConfig, need_store=True, check_classical=False,
              check_gnn=False) -> None:
    if need_store:
        if not config.store:
            raise ConfigError("data.store is required")
        if not Path(config.store).exists():
            raise ConfigError(f"store not found: {config.store}")
    for kind in config.pipelines:
        if kind not in ("A", "B", "C"):
            raise ConfigError(f"unknown pipeline kind: {kind!r}")
    if check_classical:
        for name in config.classical_models:
            if name not in CLASSICAL_MODELS:
                raise ConfigError(f"unknown model: {name!r}")
    if check_gnn:
        for name in config.architectures:
            if name not in ARCHITECTURE_NAMES:
                raise ConfigError(f"unknown architecture: {name!r}")


def _feature_config(config: RunConfig) -> feat.FeatureConfig:
    return feat.FeatureConfig(min_duration_s=config.min_duration_s)


def _extract_all(config: RunConfig):
    store = load_store(config.store)
    fconfig = _feature_config(config)
    X, y, ids, columns = feat.build_feature_matrix(store, fconfig)
    bank = feat._FilterBank(fconfig.filter_order)
    segments = filter_min_duration(list(iter_segments(store)),
                                   fconfig.min_duration_s)
    nodes = [feat.extract_node_features(s, fconfig, bank) for s in segments]
    return X, y, ids, columns, nodes


def cmd_extract(config: RunConfig) -> int:
    _validate(config)
    store = load_store(config.store)
    out = Path(config.out)
    fconfig = _feature_config(config)
    X, y, ids, _ = feat.build_feature_matrix(store, fconfig,
                                             out_path=out / "features.csv")
    feat.write_node_features(out / "node_features", store, fconfig)
    print(f"wrote {len(ids)} feature rows to {out / 'features.csv'}")
    return 0


def cmd_graphs(config: RunConfig) -> int:
    _validate(config)
    out = Path(config.out) / "graphs"
    _, _, ids, _, nodes = _extract_all(config)
    for node in nodes:
        save_graph(graph_from_node_features(node, config.edge_transform),
                   out)
    print(f"wrote {len(nodes)} graphs to {out}")
    return 0


def _plan(config: RunConfig, classical, architectures) -> ExperimentPlan:
    return ExperimentPlan(
        pipelines=config.pipelines, classical_models=classical,
        architectures=architectures, seed=config.seed,
        test_fraction=config.test_fraction, n_folds=config.n_folds,
        hidden_dim=config.hidden_dim, dropout=config.dropout,
        edge_transform=config.edge_transform, train=config.train,
    )


def cmd_train_classical(config: RunConfig) -> int:
    _validate(config, check_classical=True)
    X, y, _, _, nodes = _extract_all(config)
    plan = _plan(config, config.classical_models, ())
    reports = run_experiment(X, y, nodes, plan)
    paths = render_tables(reports, Path(config.out) / "reports")
    print(f"wrote {len(paths)} report files")
    return 0


def cmd_train_gnn(config: RunConfig) -> int:
    _validate(config, check_gnn=True)
    X, y, _, _, nodes = _extract_all(config)
    plan = _plan(config, (), config.architectures)
    reports = run_experiment(X, y, nodes, plan)
    paths = render_tables(reports, Path(config.out) / "reports")
    print(f"wrote {len(paths)} report files")
    return 0


def cmd_report(config: RunConfig) -> int:
    """Regenerate summary.md from the per-model CSVs already on disk."""
    reports_dir = Path(config.out) / "reports"
    csvs = sorted(p for p in reports_dir.glob("*.csv"))
    if not csvs:
        raise ConfigError(f"no report CSVs found under {reports_dir}")
    header = ("Model", "Pipeline", "Accuracy",
              "Class 0 Precision", "Class 0 Recall", "Class 0 F1",
              "Class 1 Precision", "Class 1 Recall", "Class 1 F1")
    md = ["| " + " | ".join(header) + " |",
          "|" + "|".join(["---"] * len(header)) + "|"]
    for path in csvs:
        lines = path.read_text().strip().splitlines()
        row = dict(zip(lines[0].split(","), lines[1].split(",")))
        md.append("| " + " | ".join([
            row["model"], row["pipeline"],
            f"{float(row['accuracy']):.3f}",
            f"{float(row['c0_precision']):.2f}",
            f"{float(row['c0_recall']):.2f}", f"{float(row['c0_f1']):.2f}",
            f"{float(row['c1_precision']):.2f}",
            f"{float(row['c1_recall']):.2f}", f"{float(row['c1_f1']):.2f}",
        ]) + " |")
    for name in ("svm_rbf", "gaussian_process"):
        md.append("| " + " | ".join([name, "-"]
                                    + ["n/a (reference: paper)"] * 7) + " |")
    summary = reports_dir / "summary.md"
    summary.write_text("\n".join(md) + "\n")
    print(f"wrote {summary}")
    return 0


def cmd_fixtures(config: RunConfig, action: str, kind: str,
                 n_segments: int | None) -> int:
    if action != "generate":
        raise ConfigError(f"unknown fixtures action: {action!r}")
    if kind not in FIXTURE_KINDS:
        raise ConfigError(f"unknown fixture kind: {kind!r}")
    out = Path(config.out) / kind
    store = generate_fixture_store(kind, out, n_segments, config.seed)
    print(f"wrote {len(store.rows)}-segment {kind} store to {out}")
    return 0


def _add_common(parser, keys):
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--seed", type=int, help="override experiment.seed")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallelism bound (reserved; runs are serial)")
    parser.add_argument("--out", help="override data.out output directory")
    parser.epilog = "config keys read: " + ", ".join(keys)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neuromark",
        description="EEG purchase-decision classification pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    data_keys = ("data.store", "data.out", "data.min_duration_s")
    exp_keys = ("experiment.seed", "experiment.test_fraction",
                "experiment.n_folds", "experiment.edge_transform")
    train_keys = tuple(f"train.{k}" for k in _TRAIN_KEYS)

    _add_common(sub.add_parser(
        "extract", help="write features.csv and node feature matrices"),
        data_keys)
    _add_common(sub.add_parser(
        "graphs", help="write correlation graphs for every segment"),
        data_keys + ("experiment.edge_transform",))
    _add_common(sub.add_parser(
        "train-classical", help="grid-searched classical models + stacking"),
        data_keys + ("pipelines.kinds", "models.classical") + exp_keys)
    _add_common(sub.add_parser(
        "train-gnn", help="fold-voted graph networks"),
        data_keys + ("models.architectures", "graph.hidden_dim",
                     "graph.dropout") + exp_keys + train_keys)
    _add_common(sub.add_parser(
        "report", help="regenerate summary.md from report CSVs"),
        ("data.out",))
    fx = sub.add_parser("fixtures", help="emit seeded synthetic stores")
    fx.add_argument("action", choices=["generate"])
    fx.add_argument("--kind", default="separable", help="separable|imbalanced")
    fx.add_argument("--n", type=int, default=None, dest="n_segments",
                    help="number of segments (default per kind)")
    _add_common(fx, ("data.out", "experiment.seed"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(args.config, seed=args.seed, out=args.out,
                                 jobs=args.jobs)
        if args.command == "extract":
            return cmd_extract(config)
        if args.command == "graphs":
            return cmd_graphs(config)
        if args.command == "train-classical":
            return cmd_train_classical(config)
        if args.command == "train-gnn":
            return cmd_train_gnn(config)
        if args.command == "report":
            return cmd_report(config)
        if args.command == "fixtures":
            return cmd_fixtures(config, args.action, args.kind,
                                args.n_segments)
        raise ConfigError(f"unknown command: {args.command!r}")
    except (ConfigError, StoreError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
