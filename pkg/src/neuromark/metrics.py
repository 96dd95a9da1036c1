"""Binary classification metrics: confusion matrix, per-class
precision/recall/F1, weighted F1. All 0/0 cases are defined as 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class BinaryMetrics:
    accuracy: float
    per_class: tuple[ClassMetrics, ClassMetrics]
    weighted_f1: float
    confusion: np.ndarray  # rows true, cols predicted


def confusion_matrix(y_true, y_pred) -> np.ndarray:
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have equal length")
    cm = np.zeros((2, 2), dtype=int)
    for t, p in zip(y_true, y_pred):
        cm[t, p] += 1
    return cm


def _safe_div(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def metrics(y_true, y_pred) -> BinaryMetrics:
    cm = confusion_matrix(y_true, y_pred)
    n = cm.sum()
    accuracy = _safe_div(cm[0, 0] + cm[1, 1], n)
    per_class = []
    for c in (0, 1):
        tp = cm[c, c]
        fp = cm[1 - c, c]
        fn = cm[c, 1 - c]
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class.append(
            ClassMetrics(precision=precision, recall=recall, f1=f1,
                         support=int(cm[c].sum()))
        )
    weighted_f1 = sum(m.support * m.f1 for m in per_class) / n if n else 0.0
    return BinaryMetrics(
        accuracy=accuracy,
        per_class=(per_class[0], per_class[1]),
        weighted_f1=weighted_f1,
        confusion=cm,
    )


def weighted_f1_score(y_true, y_pred) -> float:
    return metrics(y_true, y_pred).weighted_f1
