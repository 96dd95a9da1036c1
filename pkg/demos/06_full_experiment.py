"""Run the full evaluation protocol and render the report tables.

The protocol is one stratified 80/20 holdout: classical models grid-search
inside the training split and refit once; graph models train five
stratified-fold copies and majority-vote on the holdout. Reports land in
``demo_out/reports``.
"""

import numpy as np

from neuromark.eval import ExperimentPlan, render_tables, run_experiment
from neuromark.features import extract_feature_row, extract_node_features
from neuromark.fixtures import make_separable_records
from neuromark.gnn import TrainConfig


def main():
    records = make_separable_records(100, seed=6)
    X = np.vstack([extract_feature_row(r).values for r in records])
    nodes = [extract_node_features(r) for r in records]
    y = np.array([r.label for r in records])

    plan = ExperimentPlan(
        pipelines=("A", "C"),
        classical_models=("logreg", "gaussian_nb"),
        architectures=("LightweightGCN",),
        seed=0,
        train=TrainConfig(max_epochs=15, batch_size=16),
    )
    reports = run_experiment(X, y, nodes, plan)
    paths = render_tables(reports, "demo_out/reports")

    print("report rows:")
    for r in reports:
        c1 = r.result.per_class[1]
        print(f"  {r.model:12s} pipeline {r.pipeline:22s} "
              f"accuracy {r.accuracy:.3f}  class-1 recall {c1.recall:.2f}")
    print("\nwritten files:")
    for p in paths:
        print(f"  {p}")
    print("\nsummary.md:")
    print(paths[-1].read_text())


if __name__ == "__main__":
    main()
