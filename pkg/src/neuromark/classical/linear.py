"""L2-regularized logistic regression via full-batch gradient descent with
backtracking step halving."""

from __future__ import annotations

import numpy as np


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _log1p_exp(z):
    """log(1 + exp(z)) without overflow."""
    return np.where(z > 0, z + np.log1p(np.exp(-np.abs(z))),
                    np.log1p(np.exp(np.minimum(z, 0))))


class LogisticRegression:
    """Minimizes mean logistic loss + l2_lambda * ||w||^2 / 2 (bias
    unpenalized). Converged when the gradient infinity-norm drops below
    ``tol`` or ``max_iters`` is reached."""

    def __init__(self, l2_lambda: float = 0.01, max_iters: int = 500,
                 lr: float = 1.0, tol: float = 1e-6, seed: int = 0):
        self.l2_lambda = l2_lambda
        self.max_iters = max_iters
        self.lr = lr
        self.tol = tol
        self.seed = seed
        self.w = None
        self.b = 0.0
        self.n_iters_ = 0

    def _loss_grad(self, X, s, w, b):
        z = X @ w + b
        loss = np.mean(_log1p_exp(-s * z)) + 0.5 * self.l2_lambda * w @ w
        if not np.isfinite(loss):
            raise ValueError("non-finite loss; check feature scaling")
        # d/dz mean log(1+exp(-s z)) = -s * sigmoid(-s z) / n
        coef = -s * _sigmoid(-s * z) / len(s)
        gw = X.T @ coef + self.l2_lambda * w
        gb = coef.sum()
        return loss, gw, gb

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        if len(np.unique(y)) < 2:
            raise ValueError("degenerate labels: both classes required")
        s = np.where(y == 1, 1.0, -1.0)
        w = np.zeros(X.shape[1])
        b = 0.0
        loss, gw, gb = self._loss_grad(X, s, w, b)
        for it in range(self.max_iters):
            gnorm = max(np.max(np.abs(gw)), abs(gb))
            if gnorm < self.tol:
                break
            step = self.lr
            for _ in range(50):
                w_new = w - step * gw
                b_new = b - step * gb
                loss_new, gw_new, gb_new = self._loss_grad(X, s, w_new, b_new)
                if loss_new < loss:
                    break
                step *= 0.5
            else:
                break  # no descent step found; gradient is numerically flat
            w, b, loss, gw, gb = w_new, b_new, loss_new, gw_new, gb_new
        self.n_iters_ = it + 1
        self.w, self.b = w, b
        return self

    def decision_function(self, X):
        return np.asarray(X, dtype=float) @ self.w + self.b

    def predict_proba(self, X):
        p1 = _sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(int)
