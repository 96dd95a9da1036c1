"""Experiment orchestration: splits, fold-voted predictions, report tables."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .classical import DEFAULT_GRIDS, StackingClassifier, grid_search, \
    make_classifier
from .dimred import build_pipeline
from .folds import fold_indices, stratified_kfold, stratified_split
from .gnn import TrainConfig, build_architecture, build_model, train_gnn
from .gnn.train import predict_batch
from .graph import BrainGraph, graph_from_node_features
from .metrics import BinaryMetrics, metrics

CLASSICAL_MODELS = ("logreg", "knn", "gaussian_nb", "random_forest", "gbt",
                    "stacking")

# Families the reference tables include but this artifact does not train.
REFERENCE_ONLY_MODELS = ("svm_rbf", "gaussian_process")

_DISPLAY = {"gbt": "gbt (stand-in)"}


@dataclass(frozen=True)
class ExperimentPlan:
    pipelines: tuple[str, ...] = ("A", "B", "C")
    classical_models: tuple[str, ...] = ()
    architectures: tuple[str, ...] = ()
    seed: int = 0
    test_fraction: float = 0.2
    n_folds: int = 5
    hidden_dim: int = 64
    dropout: float = 0.3
    edge_transform: str = "abs"
    train: TrainConfig = field(default_factory=TrainConfig)

    def digest(self) -> str:
        text = repr(self).encode()
        return hashlib.sha256(text).hexdigest()[:12]


@dataclass(frozen=True)
class EvalReport:
    model: str
    pipeline: str
    result: BinaryMetrics
    seed: int
    config_digest: str

    @property
    def accuracy(self) -> float:
        return self.result.accuracy


def majority_vote(predictions) -> np.ndarray:
    """Element-wise modal label across K prediction vectors.

    With an even K, exact ties resolve to class 0.
    """
    votes = np.asarray(predictions, dtype=int)
    if votes.ndim != 2:
        raise ValueError("predictions must be a (K, n) array")
    k = votes.shape[0]
    return (votes.sum(axis=0) * 2 > k).astype(int)


def _classical_report(X, y, train_idx, test_idx, pipeline_kind, family,
                      plan) -> EvalReport:
    X_train, y_train = X[train_idx], y[train_idx]
    X_test, y_test = X[test_idx], y[test_idx]
    pipe = build_pipeline(pipeline_kind)
    if family == "stacking":
        Z_train = pipe.fit_apply(X_train, y_train)
        model = StackingClassifier(n_folds=plan.n_folds, seed=plan.seed)
        model.fit(Z_train, y_train)
    else:
        spec, _ = grid_search(family, DEFAULT_GRIDS[family], X_train,
                              y_train, n_folds=plan.n_folds, seed=plan.seed,
                              pipeline_kind=pipeline_kind)
        Z_train = pipe.fit_apply(X_train, y_train)
        model = make_classifier(spec)
        model.fit(Z_train, y_train)
    pred = model.predict(pipe.apply(X_test))
    return EvalReport(model=_DISPLAY.get(family, family),
                      pipeline=pipe.display_name, result=metrics(y_test,
                                                                 pred),
                      seed=plan.seed, config_digest=plan.digest())


def _graphs_from_nodes(node_matrices, plan) -> list[BrainGraph]:
    return [graph_from_node_features(nm, plan.edge_transform)
            for nm in node_matrices]


def _gnn_report(graphs, y, train_idx, test_idx, name, plan) -> EvalReport:
    spec = build_architecture(name,
                              node_dim=graphs[0].node_features.shape[1],
                              hidden_dim=plan.hidden_dim,
                              dropout=plan.dropout)
    y_train = y[train_idx]
    assignment = stratified_kfold(y_train, plan.n_folds, plan.seed)
    test_graphs = [graphs[i] for i in test_idx]
    fold_votes = []
    for f in range(plan.n_folds):
        tr, va = fold_indices(assignment, f)
        fold_train = [graphs[train_idx[i]] for i in tr]
        fold_val = [graphs[train_idx[i]] for i in va]
        model = build_model(spec, seed=plan.seed * plan.n_folds + f)
        cfg = replace(plan.train, seed=plan.seed * plan.n_folds + f)
        train_gnn(model, fold_train, fold_val, cfg)
        fold_votes.append(predict_batch(model, test_graphs))
    pred = majority_vote(np.stack(fold_votes))
    return EvalReport(model=name, pipeline="graph",
                      result=metrics(y[test_idx], pred), seed=plan.seed,
                      config_digest=plan.digest())


def run_experiment(X, y, node_matrices, plan: ExperimentPlan
                   ) -> list[EvalReport]:
    """Evaluate the planned models on one stratified 80/20 holdout.

    Classical models grid-search inside the training split (preprocessing
    refitted per fold) and refit once for the test prediction. Graph models
    train one copy per training fold and majority-vote on the holdout.
    """
    y = np.asarray(y, dtype=int)
    train_idx, test_idx = stratified_split(y, plan.test_fraction, plan.seed)
    reports: list[EvalReport] = []
    if plan.classical_models:
        X = np.asarray(X, dtype=float)
        for kind in plan.pipelines:
            for family in plan.classical_models:
                if family not in CLASSICAL_MODELS:
                    raise ValueError(f"unknown classical model: {family!r}")
                reports.append(_classical_report(X, y, train_idx, test_idx,
                                                 kind, family, plan))
    if plan.architectures:
        graphs = _graphs_from_nodes(node_matrices, plan)
        for name in plan.architectures:
            reports.append(_gnn_report(graphs, y, train_idx, test_idx,
                                       name, plan))
    return reports


def _slug(text: str) -> str:
    out = []
    for ch in text.lower():
        if ch.isalnum():
            out.append(ch)
        elif out and out[-1] != "-":
            out.append("-")
    return "".join(out).strip("-")


_HEADER = ("Model", "Pipeline", "Accuracy",
           "Class 0 Precision", "Class 0 Recall", "Class 0 F1",
           "Class 1 Precision", "Class 1 Recall", "Class 1 F1")


def _row_values(report: EvalReport) -> list[str]:
    c0, c1 = report.result.per_class
    return [report.model, report.pipeline, f"{report.result.accuracy:.3f}",
            f"{c0.precision:.2f}", f"{c0.recall:.2f}", f"{c0.f1:.2f}",
            f"{c1.precision:.2f}", f"{c1.recall:.2f}", f"{c1.f1:.2f}"]


def render_tables(reports: list[EvalReport], out_dir) -> list[Path]:
    """Write per-report CSVs plus a combined markdown summary.

    Returns the written paths; output bytes are a pure function of the
    report list, so reruns under the same seed reproduce identical files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for report in reports:
        path = out_dir / f"{_slug(report.pipeline)}_{_slug(report.model)}.csv"
        c0, c1 = report.result.per_class
        conf = report.result.confusion
        lines = [
            ",".join(["model", "pipeline", "accuracy", "weighted_f1",
                      "c0_precision", "c0_recall", "c0_f1",
                      "c1_precision", "c1_recall", "c1_f1",
                      "tn", "fp", "fn", "tp", "seed", "config_digest"]),
            ",".join([report.model.replace(",", ";"),
                      report.pipeline.replace(",", ";"),
                      f"{report.result.accuracy:.6f}",
                      f"{report.result.weighted_f1:.6f}",
                      f"{c0.precision:.6f}", f"{c0.recall:.6f}",
                      f"{c0.f1:.6f}",
                      f"{c1.precision:.6f}", f"{c1.recall:.6f}",
                      f"{c1.f1:.6f}",
                      str(int(conf[0, 0])), str(int(conf[0, 1])),
                      str(int(conf[1, 0])), str(int(conf[1, 1])),
                      str(report.seed), report.config_digest]),
        ]
        path.write_text("\n".join(lines) + "\n")
        written.append(path)

    md = ["| " + " | ".join(_HEADER) + " |",
          "|" + "|".join(["---"] * len(_HEADER)) + "|"]
    for report in reports:
        md.append("| " + " | ".join(_row_values(report)) + " |")
    for name in REFERENCE_ONLY_MODELS:
        cells = [name, "-"] + ["n/a (reference: paper)"] * 7
        md.append("| " + " | ".join(cells) + " |")
    summary = out_dir / "summary.md"
    summary.write_text("\n".join(md) + "\n")
    written.append(summary)
    return written
