"""Batched graphs with block-diagonal semantics.

All graphs in a batch must have the same node count; node features are
stacked into one (B*n, D) matrix and structural operators act through
block-diagonal constant matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import BrainGraph


def normalized_adjacency(adj: np.ndarray) -> np.ndarray:
    """Symmetric normalization with self-loops:
    D^{-1/2} (A + I) D^{-1/2}."""
    adj = np.asarray(adj, dtype=float)
    a_tilde = adj + np.eye(adj.shape[0])
    deg = a_tilde.sum(axis=1)
    if np.any(deg <= 0):
        raise ValueError("non-positive degree after adding self-loops")
    d_inv_sqrt = 1.0 / np.sqrt(deg)
    return a_tilde * d_inv_sqrt[:, None] * d_inv_sqrt[None, :]


@dataclass
class GraphBatch:
    H0: np.ndarray  # (B*n, D) stacked node features
    A_hat: np.ndarray  # (B*n, B*n) block-diagonal normalized adjacency
    mask: np.ndarray  # (B*n, B*n) boolean block-diagonal (incl. self)
    neigh_mean: np.ndarray  # (B*n, B*n) row-normalized neighbors-without-self
    mean_pool: np.ndarray  # (B, B*n) per-graph averaging operator
    select: np.ndarray  # (B, B*n) per-graph block indicator (sum operator)
    labels: np.ndarray  # (B,)
    n_graphs: int
    n_nodes: int

    @property
    def node_dim(self) -> int:
        return self.H0.shape[1]


def make_batch(graphs: list[BrainGraph]) -> GraphBatch:
    if not graphs:
        raise ValueError("empty batch")
    n = graphs[0].n_nodes
    if any(g.n_nodes != n for g in graphs):
        raise ValueError("all graphs in a batch must have equal node counts")
    B = len(graphs)
    N = B * n
    H0 = np.vstack([g.node_features for g in graphs])
    A_hat = np.zeros((N, N))
    mask = np.zeros((N, N), dtype=bool)
    for i, g in enumerate(graphs):
        sl = slice(i * n, (i + 1) * n)
        A_hat[sl, sl] = normalized_adjacency(g.adjacency)
        mask[sl, sl] = True
    neigh = mask.astype(float) - np.eye(N)
    row_sums = neigh.sum(axis=1, keepdims=True)
    neigh_mean = neigh / np.maximum(row_sums, 1.0)
    select = np.zeros((B, N))
    for i in range(B):
        select[i, i * n:(i + 1) * n] = 1.0
    mean_pool = select / n
    labels = np.array([g.label for g in graphs], dtype=int)
    return GraphBatch(H0=H0, A_hat=A_hat, mask=mask, neigh_mean=neigh_mean,
                      mean_pool=mean_pool, select=select, labels=labels,
                      n_graphs=B, n_nodes=n)
