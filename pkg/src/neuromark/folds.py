"""Stratified fold assignment and train/test splitting."""

from __future__ import annotations

import numpy as np


def stratified_kfold(labels, k: int, seed: int = 0) -> np.ndarray:
    """Fold assignment: per class, shuffle indices (seeded) and deal them
    round-robin into k folds. Each fold's class proportions end up within
    one sample of the global proportions."""
    labels = np.asarray(labels, dtype=int)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    assignment = np.full(len(labels), -1, dtype=int)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            assignment[i] = pos % k
    return assignment


def fold_indices(assignment: np.ndarray, fold: int):
    """(train_idx, val_idx) for one fold of an assignment vector."""
    val = np.flatnonzero(assignment == fold)
    train = np.flatnonzero(assignment != fold)
    return train, val


def stratified_split(labels, test_fraction: float, seed: int = 0):
    """Single stratified train/test split; returns (train_idx, test_idx)."""
    labels = np.asarray(labels, dtype=int)
    if not (0 < test_fraction < 1):
        raise ValueError("test_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        n_test = int(round(len(idx) * test_fraction))
        n_test = min(max(n_test, 1), len(idx) - 1)
        test.append(idx[:n_test])
        train.append(idx[n_test:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))
