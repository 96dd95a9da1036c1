"""CART trees, bootstrap random forest, and gradient-boosted trees.

Classification trees split on Gini impurity; boosting fits depth-limited
regression trees to the negative gradient of the logistic loss, with leaf
values given by a Newton step damped by an L2 term of 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    value: float = 0.0  # leaf: class-1 fraction (clf) or leaf weight (reg)

    @property
    def is_leaf(self):
        return self.left is None


def _best_split_gini(Xf, y, min_leaf):
    """Best (threshold, impurity_drop) for one feature column, or None."""
    order = np.argsort(Xf, kind="stable")
    xs, ys = Xf[order], y[order]
    n = len(ys)
    c1 = np.cumsum(ys)
    n_left = np.arange(1, n)
    n_right = n - n_left
    left1 = c1[:-1]
    right1 = c1[-1] - left1
    p1l = left1 / n_left
    p1r = right1 / n_right
    gini_l = 2 * p1l * (1 - p1l)
    gini_r = 2 * p1r * (1 - p1r)
    weighted = (n_left * gini_l + n_right * gini_r) / n
    valid = (xs[1:] != xs[:-1]) & (n_left >= min_leaf) & (n_right >= min_leaf)
    if not np.any(valid):
        return None
    p1 = c1[-1] / n
    parent = 2 * p1 * (1 - p1)
    gains = np.where(valid, parent - weighted, -np.inf)
    i = int(np.argmax(gains))
    if gains[i] <= 1e-15:
        return None
    return 0.5 * (xs[i] + xs[i + 1]), float(gains[i])


def _best_split_sse(Xf, g, min_leaf):
    """Best split minimizing sum of squared error of g."""
    order = np.argsort(Xf, kind="stable")
    xs, gs = Xf[order], g[order]
    n = len(gs)
    csum = np.cumsum(gs)
    n_left = np.arange(1, n)
    n_right = n - n_left
    sum_l = csum[:-1]
    sum_r = csum[-1] - sum_l
    gains = sum_l**2 / n_left + sum_r**2 / n_right - csum[-1] ** 2 / n
    valid = (xs[1:] != xs[:-1]) & (n_left >= min_leaf) & (n_right >= min_leaf)
    if not np.any(valid):
        return None
    gains = np.where(valid, gains, -np.inf)
    i = int(np.argmax(gains))
    if gains[i] <= 1e-15:
        return None
    return 0.5 * (xs[i] + xs[i + 1]), float(gains[i])


def _grow(X, target, hess, idx, depth, max_depth, min_leaf, feature_rng,
          n_candidates, task):
    node = _Node()
    if task == "gini":
        node.value = float(target[idx].mean())
        pure = node.value in (0.0, 1.0)
    else:
        node.value = float(target[idx].sum() / (hess[idx].sum() + 1.0))
        pure = False
    if pure or (max_depth is not None and depth >= max_depth) or \
            len(idx) < 2 * min_leaf:
        return node

    d = X.shape[1]
    if feature_rng is not None and n_candidates < d:
        feats = np.sort(feature_rng.choice(d, size=n_candidates, replace=False))
    else:
        feats = np.arange(d)

    best = None
    for f in feats:
        split = (_best_split_gini if task == "gini" else _best_split_sse)(
            X[idx, f], target[idx], min_leaf
        )
        if split is not None and (best is None or split[1] > best[2]):
            best = (f, split[0], split[1])
    if best is None:
        return node
    f, thr, _ = best
    mask = X[idx, f] <= thr
    node.feature, node.threshold = int(f), float(thr)
    node.left = _grow(X, target, hess, idx[mask], depth + 1, max_depth,
                      min_leaf, feature_rng, n_candidates, task)
    node.right = _grow(X, target, hess, idx[~mask], depth + 1, max_depth,
                       min_leaf, feature_rng, n_candidates, task)
    return node


def _tree_apply(node, X):
    out = np.empty(len(X))
    stack = [(node, np.arange(len(X)))]
    while stack:
        nd, idx = stack.pop()
        if nd.is_leaf:
            out[idx] = nd.value
        else:
            mask = X[idx, nd.feature] <= nd.threshold
            stack.append((nd.left, idx[mask]))
            stack.append((nd.right, idx[~mask]))
    return out


class RandomForest:
    """Bootstrap forest of Gini CART trees; each node considers a random
    feature subset of size ceil(sqrt(d)); prediction is the majority vote."""

    def __init__(self, n_trees: int = 100, max_depth: int | None = None,
                 min_leaf: int = 1, seed: int = 0, bootstrap: bool = True):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.seed = seed
        self.bootstrap = bootstrap
        self.trees: list[_Node] = []

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n, d = X.shape
        n_candidates = int(np.ceil(np.sqrt(d)))
        self.trees = []
        for t in range(self.n_trees):
            rng = np.random.default_rng([self.seed, t])
            idx = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            self.trees.append(
                _grow(X, y, None, np.asarray(idx), 0, self.max_depth,
                      self.min_leaf, rng, n_candidates, "gini")
            )
        return self

    def predict_proba(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        votes = np.mean(
            [(_tree_apply(t, X) > 0.5).astype(float) for t in self.trees],
            axis=0,
        )
        return np.column_stack([1.0 - votes, votes])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] * 2 > 1).astype(int)


class GradientBoostedTrees:
    """Boosting on logistic loss: each round fits a regression tree to the
    negative gradient; leaf values are Newton steps with L2 damping 1.0.
    Score = prior log-odds + learning_rate * sum of tree outputs."""

    def __init__(self, n_rounds: int = 100, depth: int = 3,
                 learning_rate: float = 0.1, min_leaf: int = 1, seed: int = 0):
        self.n_rounds = n_rounds
        self.depth = depth
        self.learning_rate = learning_rate
        self.min_leaf = min_leaf
        self.seed = seed
        self.trees: list[_Node] = []
        self.base_score = 0.0
        self.train_losses_: list[float] = []

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        p = np.clip(y.mean(), 1e-12, 1 - 1e-12)
        self.base_score = float(np.log(p / (1 - p)))
        F = np.full(len(y), self.base_score)
        self.trees = []
        self.train_losses_ = []
        for _ in range(self.n_rounds):
            prob = 1.0 / (1.0 + np.exp(-np.clip(F, -60, 60)))
            loss = -np.mean(y * np.log(np.clip(prob, 1e-15, 1))
                            + (1 - y) * np.log(np.clip(1 - prob, 1e-15, 1)))
            self.train_losses_.append(float(loss))
            g = y - prob  # negative gradient of the logistic loss
            h = prob * (1 - prob)
            tree = _grow(X, g, h, np.arange(len(y)), 0, self.depth,
                         self.min_leaf, None, X.shape[1], "sse")
            self.trees.append(tree)
            F = F + self.learning_rate * _tree_apply(tree, X)
        prob = 1.0 / (1.0 + np.exp(-np.clip(F, -60, 60)))
        self.train_losses_.append(
            float(-np.mean(y * np.log(np.clip(prob, 1e-15, 1))
                           + (1 - y) * np.log(np.clip(1 - prob, 1e-15, 1))))
        )
        return self

    def decision_function(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        F = np.full(len(X), self.base_score)
        for tree in self.trees:
            F = F + self.learning_rate * _tree_apply(tree, X)
        return F

    def predict_proba(self, X):
        p1 = 1.0 / (1.0 + np.exp(-np.clip(self.decision_function(X), -60, 60)))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(int)
