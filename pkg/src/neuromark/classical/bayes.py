"""Gaussian naive Bayes with variance flooring."""

from __future__ import annotations

import numpy as np


class GaussianNB:
    def __init__(self, seed: int = 0):
        self.seed = seed
        self.means = None  # (2, d)
        self.vars = None  # (2, d)
        self.log_priors = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        if len(np.unique(y)) < 2:
            raise ValueError("degenerate labels: both classes required")
        means, variances, priors = [], [], []
        for c in (0, 1):
            Xc = X[y == c]
            means.append(Xc.mean(axis=0))
            variances.append(Xc.var(axis=0))
            priors.append(len(Xc) / len(X))
        self.means = np.vstack(means)
        self.vars = np.vstack(variances)
        floor = 1e-9 * max(float(self.vars.max()), 1e-300)
        self.vars = np.maximum(self.vars, floor)
        self.log_priors = np.log(priors)
        return self

    def _log_posterior(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty((len(X), 2))
        for c in (0, 1):
            ll = -0.5 * (
                np.log(2 * np.pi * self.vars[c])
                + (X - self.means[c]) ** 2 / self.vars[c]
            ).sum(axis=1)
            out[:, c] = self.log_priors[c] + ll
        return out

    def predict_proba(self, X):
        lp = self._log_posterior(X)
        lp -= lp.max(axis=1, keepdims=True)
        p = np.exp(lp)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X):
        return np.argmax(self._log_posterior(X), axis=1)
