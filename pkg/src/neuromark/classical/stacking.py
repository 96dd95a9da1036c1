"""Stacking ensemble: naive Bayes, logistic regression, KNN, and boosted
trees as base learners; a boosted-trees meta-learner consumes their
out-of-fold class-1 probabilities."""

from __future__ import annotations

import numpy as np

from ..folds import fold_indices, stratified_kfold
from .bayes import GaussianNB
from .linear import LogisticRegression
from .neighbors import KNearestNeighbors
from .trees import GradientBoostedTrees

BASE_FAMILIES = ("gaussian_nb", "logreg", "knn", "gbt")


class StackingClassifier:
    def __init__(self, n_folds: int = 5, seed: int = 0,
                 knn_k: int = 5, logreg_lambda: float = 0.01,
                 gbt_rounds: int = 100, gbt_depth: int = 3,
                 gbt_lr: float = 0.1):
        self.n_folds = n_folds
        self.seed = seed
        self.knn_k = knn_k
        self.logreg_lambda = logreg_lambda
        self.gbt_rounds = gbt_rounds
        self.gbt_depth = gbt_depth
        self.gbt_lr = gbt_lr
        self.base_models = None
        self.meta_model = None
        self.oof_matrix_ = None  # (n, 4) out-of-fold class-1 probabilities
        self.oof_fold_ = None  # fold id that produced each row's prediction

    def _new_bases(self):
        return [
            GaussianNB(seed=self.seed),
            LogisticRegression(l2_lambda=self.logreg_lambda, seed=self.seed),
            KNearestNeighbors(k=self.knn_k, seed=self.seed),
            GradientBoostedTrees(n_rounds=self.gbt_rounds, depth=self.gbt_depth,
                                 learning_rate=self.gbt_lr, seed=self.seed),
        ]

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        assignment = stratified_kfold(y, self.n_folds, self.seed)
        oof = np.zeros((len(y), len(BASE_FAMILIES)))
        for f in range(self.n_folds):
            tr, va = fold_indices(assignment, f)
            for j, model in enumerate(self._new_bases()):
                model.fit(X[tr], y[tr])
                oof[va, j] = model.predict_proba(X[va])[:, 1]
        self.oof_matrix_ = oof
        self.oof_fold_ = assignment
        self.meta_model = GradientBoostedTrees(
            n_rounds=self.gbt_rounds, depth=self.gbt_depth,
            learning_rate=self.gbt_lr, seed=self.seed,
        ).fit(oof, y)
        # refit base learners on the full training set for inference
        self.base_models = self._new_bases()
        for model in self.base_models:
            model.fit(X, y)
        return self

    def _meta_features(self, X):
        return np.column_stack(
            [m.predict_proba(X)[:, 1] for m in self.base_models]
        )

    def predict_proba(self, X):
        return self.meta_model.predict_proba(self._meta_features(X))

    def predict(self, X):
        return self.meta_model.predict(self._meta_features(X))
