"""K-nearest neighbors with Euclidean metric.

Distance ties break toward the lower training index (stable sort); vote
ties break toward class 0, the majority class."""

from __future__ import annotations

import numpy as np


class KNearestNeighbors:
    def __init__(self, k: int = 5, seed: int = 0):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.seed = seed
        self.X = None
        self.y = None

    def fit(self, X, y):
        self.X = np.asarray(X, dtype=float)
        self.y = np.asarray(y, dtype=int)
        if self.k > len(self.y):
            raise ValueError(f"k={self.k} exceeds training size {len(self.y)}")
        return self

    def _neighbor_labels(self, Q):
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        d2 = ((Q[:, None, :] - self.X[None, :, :]) ** 2).sum(axis=2)
        order = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
        return self.y[order]

    def predict_proba(self, X):
        votes = self._neighbor_labels(X)
        p1 = votes.mean(axis=1)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        votes = self._neighbor_labels(X)
        ones = votes.sum(axis=1)
        return (ones * 2 > self.k).astype(int)  # exact tie -> class 0
