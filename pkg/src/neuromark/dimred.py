"""Dimensionality reduction: correlation pruning, standardization, PCA,
t-test feature selection, and the three pipeline compositions.

Pipeline A: prune(0.9) -> scale -> pca(var >= 0.90)
Pipeline B: prune(0.9) -> scale -> reducer slot, target dim 50 (shipped
            stand-in: PCA to exactly 50 components)
Pipeline C: ttest_select(top 100, p < 0.05) -> scale -> pca(var >= 0.95)

All fits must see training rows only; apply() is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats as _stats


@dataclass
class PruneTransform:
    kind = "prune"
    threshold: float = 0.9
    kept: np.ndarray | None = None
    in_dim: int | None = None

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.shape[0] < 2:
            raise ValueError("need at least 2 rows to estimate correlations")
        if not (0 < self.threshold <= 1):
            raise ValueError("threshold must be in (0, 1]")
        self.in_dim = X.shape[1]
        centered = X - X.mean(axis=0)
        norms = np.sqrt((centered**2).sum(axis=0))
        safe = np.where(norms > 0, norms, 1.0)
        unit = centered / safe
        corr = unit.T @ unit
        # zero-variance columns correlate as 0 with everything
        zero = norms == 0
        corr[zero, :] = 0.0
        corr[:, zero] = 0.0
        keep = np.ones(self.in_dim, dtype=bool)
        for j in range(self.in_dim):
            for i in range(j):
                if keep[i] and abs(corr[i, j]) > self.threshold:
                    keep[j] = False
                    break
        self.kept = np.flatnonzero(keep)
        return self

    @property
    def out_dim(self):
        return len(self.kept)

    def apply(self, X):
        return np.asarray(X, dtype=float)[:, self.kept]


@dataclass
class ScaleTransform:
    kind = "scale"
    mean: np.ndarray | None = None
    std: np.ndarray | None = None

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.std = np.where(std < 1e-12, 1.0, std)
        return self

    @property
    def out_dim(self):
        return len(self.mean)

    def apply(self, X):
        return (np.asarray(X, dtype=float) - self.mean) / self.std


@dataclass
class PcaTransform:
    """PCA by eigendecomposition of the sample covariance.

    Keeps the smallest k with cumulative explained-variance ratio >=
    ``variance_threshold``, or exactly ``n_components`` when given.
    Components are sign-fixed so each one's largest-magnitude entry is
    positive.
    """

    kind = "pca"
    variance_threshold: float | None = 0.90
    n_components: int | None = None
    components: np.ndarray | None = None  # (k, d)
    explained_variance_ratio: np.ndarray | None = None
    mean: np.ndarray | None = None

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.shape[0] < 2:
            raise ValueError("need at least 2 rows for PCA")
        self.mean = X.mean(axis=0)
        cov = np.cov(X, rowvar=False, ddof=1)
        cov = np.atleast_2d(cov)
        if not np.all(np.isfinite(cov)):
            raise ValueError("non-finite covariance")
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1]
        eigvals = np.clip(eigvals[order], 0.0, None)
        eigvecs = eigvecs[:, order]
        total = eigvals.sum()
        ratios = eigvals / total if total > 0 else np.zeros_like(eigvals)
        if self.n_components is not None:
            rank = int(np.sum(eigvals > 1e-12 * max(eigvals[0], 1.0)))
            k = min(self.n_components, rank)
        else:
            cum = np.cumsum(ratios)
            k = int(np.searchsorted(cum, self.variance_threshold - 1e-12) + 1)
            k = min(k, len(eigvals))
        comps = eigvecs[:, :k].T
        # deterministic sign: largest-magnitude entry of each component positive
        for i in range(k):
            j = np.argmax(np.abs(comps[i]))
            if comps[i, j] < 0:
                comps[i] = -comps[i]
        self.components = comps
        self.explained_variance_ratio = ratios[:k]
        return self

    @property
    def out_dim(self):
        return self.components.shape[0]

    def apply(self, X):
        return (np.asarray(X, dtype=float) - self.mean) @ self.components.T


@dataclass
class TTestSelectTransform:
    """Welch two-sample t-test filter: keep columns with two-sided p < alpha,
    ranked by |t| descending (ties to the lower index), truncated to top_k."""

    kind = "ttest_select"
    top_k: int = 100
    alpha: float = 0.05
    selected: np.ndarray | None = None
    t_values: np.ndarray | None = None
    p_values: np.ndarray | None = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        X0, X1 = X[y == 0], X[y == 1]
        if len(X0) < 2 or len(X1) < 2:
            raise ValueError("each class needs at least 2 rows")
        t, p = welch_ttest(X0, X1)
        self.t_values, self.p_values = t, p
        passing = np.flatnonzero(p < self.alpha)
        order = np.lexsort((passing, -np.abs(t[passing])))
        self.selected = passing[order][: self.top_k]
        return self

    @property
    def out_dim(self):
        return len(self.selected)

    def apply(self, X):
        return np.asarray(X, dtype=float)[:, self.selected]


def welch_ttest(X0, X1):
    """Per-column Welch unequal-variance t statistic and two-sided p-value
    (regularized incomplete beta via the Student-t survival function, with
    Welch-Satterthwaite degrees of freedom)."""
    n0, n1 = len(X0), len(X1)
    m0, m1 = X0.mean(axis=0), X1.mean(axis=0)
    v0 = X0.var(axis=0, ddof=1)
    v1 = X1.var(axis=0, ddof=1)
    se2 = v0 / n0 + v1 / n1
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (m0 - m1) / np.sqrt(se2)
        df = se2**2 / ((v0 / n0) ** 2 / (n0 - 1) + (v1 / n1) ** 2 / (n1 - 1))
    t = np.where(se2 > 0, t, 0.0)
    df = np.where(se2 > 0, df, 1.0)
    p = 2.0 * _stats.t.sf(np.abs(t), df)
    return t, p


PIPELINE_KINDS = ("A", "B", "C")


@dataclass
class Pipeline:
    kind: str
    steps: list = field(default_factory=list)
    fitted: bool = False

    def fit(self, X, y=None):
        Z = np.asarray(X, dtype=float)
        for step in self.steps:
            step.fit(Z, y)
            Z = step.apply(Z)
        self.fitted = True
        return self

    def apply(self, X):
        if not self.fitted:
            raise RuntimeError("pipeline not fitted")
        Z = np.asarray(X, dtype=float)
        for step in self.steps:
            Z = step.apply(Z)
        return Z

    def fit_apply(self, X, y=None):
        self.fit(X, y)
        return self.apply(X)

    @property
    def out_dim(self):
        return self.steps[-1].out_dim

    @property
    def display_name(self) -> str:
        if self.kind == "B":
            return "B (stand-in reducer)"
        return self.kind


def build_pipeline(kind: str) -> Pipeline:
    """The three pipeline compositions. Pipeline B's reducer slot ships with
    PCA to 50 components standing in for the out-of-scope manifold reducer."""
    if kind == "A":
        steps = [
            PruneTransform(threshold=0.9),
            ScaleTransform(),
            PcaTransform(variance_threshold=0.90),
        ]
    elif kind == "B":
        steps = [
            PruneTransform(threshold=0.9),
            ScaleTransform(),
            PcaTransform(variance_threshold=None, n_components=50),
        ]
    elif kind == "C":
        steps = [
            TTestSelectTransform(top_k=100, alpha=0.05),
            ScaleTransform(),
            PcaTransform(variance_threshold=0.95),
        ]
    else:
        raise ValueError(f"unknown pipeline kind: {kind!r}")
    return Pipeline(kind=kind, steps=steps)


def _write_array(fh, name, arr):
    arr = np.asarray(arr)
    flat = arr.ravel()
    fh.write(f"{name} {' '.join(str(d) for d in arr.shape)}\n")
    fh.write(" ".join("%.17g" % v for v in flat) + "\n")


def _read_array(lines, i):
    parts = lines[i].split()
    name, shape = parts[0], tuple(int(d) for d in parts[1:])
    values = np.fromstring(lines[i + 1], sep=" ")
    return name, values.reshape(shape), i + 2


def save_pipeline(pipeline: Pipeline, path) -> None:
    """Serialize a fitted pipeline to a textual file."""
    if not pipeline.fitted:
        raise RuntimeError("pipeline not fitted")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"pipeline {pipeline.kind} {len(pipeline.steps)}\n")
        for step in pipeline.steps:
            if step.kind == "prune":
                fh.write(f"step prune {step.threshold} {step.in_dim}\n")
                _write_array(fh, "kept", step.kept)
            elif step.kind == "scale":
                fh.write("step scale\n")
                _write_array(fh, "mean", step.mean)
                _write_array(fh, "std", step.std)
            elif step.kind == "pca":
                fh.write(
                    f"step pca {step.variance_threshold} {step.n_components}\n"
                )
                _write_array(fh, "mean", step.mean)
                _write_array(fh, "components", step.components)
                _write_array(fh, "evr", step.explained_variance_ratio)
            elif step.kind == "ttest_select":
                fh.write(f"step ttest_select {step.top_k} {step.alpha}\n")
                _write_array(fh, "selected", step.selected)
            else:
                raise ValueError(f"unknown step kind {step.kind}")


def load_pipeline(path) -> Pipeline:
    lines = Path(path).read_text().splitlines()
    _, kind, n_steps = lines[0].split()
    steps = []
    i = 1
    for _ in range(int(n_steps)):
        parts = lines[i].split()
        i += 1
        if parts[1] == "prune":
            step = PruneTransform(threshold=float(parts[2]))
            step.in_dim = int(parts[3])
            _, kept, i = _read_array(lines, i)
            step.kept = kept.astype(int)
        elif parts[1] == "scale":
            step = ScaleTransform()
            _, step.mean, i = _read_array(lines, i)
            _, step.std, i = _read_array(lines, i)
        elif parts[1] == "pca":
            vt = None if parts[2] == "None" else float(parts[2])
            nc = None if parts[3] == "None" else int(parts[3])
            step = PcaTransform(variance_threshold=vt, n_components=nc)
            _, step.mean, i = _read_array(lines, i)
            _, step.components, i = _read_array(lines, i)
            _, step.explained_variance_ratio, i = _read_array(lines, i)
        elif parts[1] == "ttest_select":
            step = TTestSelectTransform(top_k=int(parts[2]), alpha=float(parts[3]))
            _, sel, i = _read_array(lines, i)
            step.selected = sel.astype(int)
        else:
            raise ValueError(f"unknown step kind {parts[1]}")
        steps.append(step)
    pipe = Pipeline(kind=kind, steps=steps)
    pipe.fitted = True
    return pipe
