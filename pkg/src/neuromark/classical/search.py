"""Classifier specs, factory, and grid search with a weighted-F1 objective.

Grid search uses stratified K-fold CV; when a pipeline kind is given, the
dimensionality-reduction pipeline is refitted inside each training fold so
no fold-validation rows leak into any fitted state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..dimred import build_pipeline
from ..folds import fold_indices, stratified_kfold
from ..metrics import weighted_f1_score
from .bayes import GaussianNB
from .linear import LogisticRegression
from .neighbors import KNearestNeighbors
from .trees import GradientBoostedTrees, RandomForest

FAMILIES = ("logreg", "knn", "gaussian_nb", "random_forest", "gbt", "stacking")

# Hyperparameter grids are this package's own defaults.
DEFAULT_GRIDS = {
    "logreg": {"l2_lambda": [0.001, 0.01, 0.1, 1.0]},
    "knn": {"k": [3, 5, 7, 9]},
    "gaussian_nb": {},
    "random_forest": {"n_trees": [100, 300], "max_depth": [6, 12]},
    "gbt": {"n_rounds": [100, 300], "depth": [3, 5],
            "learning_rate": [0.05, 0.1]},
    "stacking": {},
}


@dataclass(frozen=True)
class ClassifierSpec:
    family: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown classifier family: {self.family!r}")
        k = self.hyperparameters.get("k")
        if self.family == "knn" and k is not None and k < 1:
            raise ValueError("knn k must be >= 1")


def make_classifier(spec: ClassifierSpec):
    hp = dict(spec.hyperparameters)
    if spec.family == "logreg":
        return LogisticRegression(seed=spec.seed, **hp)
    if spec.family == "knn":
        return KNearestNeighbors(seed=spec.seed, **hp)
    if spec.family == "gaussian_nb":
        return GaussianNB(seed=spec.seed, **hp)
    if spec.family == "random_forest":
        return RandomForest(seed=spec.seed, **hp)
    if spec.family == "gbt":
        return GradientBoostedTrees(seed=spec.seed, **hp)
    if spec.family == "stacking":
        from .stacking import StackingClassifier

        return StackingClassifier(seed=spec.seed, **hp)
    raise ValueError(spec.family)


def expand_grid(grid: dict) -> list[dict]:
    """Deterministic cartesian expansion in key-insertion order."""
    if not grid:
        return [{}]
    keys = list(grid)
    return [dict(zip(keys, combo))
            for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(family: str, grid: dict, X, y, n_folds: int = 5,
                seed: int = 0, pipeline_kind: str | None = None):
    """Returns (best ClassifierSpec, CV table).

    The CV table is a list of dicts with the grid point, per-fold weighted
    F1 scores, and their mean. Ties break toward the earlier grid point.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    points = expand_grid(grid)
    assignment = stratified_kfold(y, n_folds, seed)
    table = []
    best_idx, best_score = 0, -np.inf
    for gi, params in enumerate(points):
        fold_scores = []
        for f in range(n_folds):
            tr, va = fold_indices(assignment, f)
            X_tr, X_va = X[tr], X[va]
            if pipeline_kind is not None:
                pipe = build_pipeline(pipeline_kind)
                X_tr = pipe.fit_apply(X_tr, y[tr])
                X_va = pipe.apply(X_va)
            model = make_classifier(ClassifierSpec(family, params, seed))
            model.fit(X_tr, y[tr])
            fold_scores.append(weighted_f1_score(y[va], model.predict(X_va)))
        mean_score = float(np.mean(fold_scores))
        table.append({"params": params, "fold_scores": fold_scores,
                      "mean_weighted_f1": mean_score})
        if mean_score > best_score:
            best_idx, best_score = gi, mean_score
    return ClassifierSpec(family, points[best_idx], seed), table
