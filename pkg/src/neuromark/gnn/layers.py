"""Graph and dense layers, normalization, pooling, and the loss."""

from __future__ import annotations

import numpy as np

from .batch import GraphBatch, normalized_adjacency  # re-export
from .tensor import Parameter, Tensor, concat, masked_row_softmax

__all__ = [
    "AttentionPool",
    "BatchNorm",
    "Dropout",
    "GATLayer",
    "GCNLayer",
    "LayerNorm",
    "Linear",
    "SAGELayer",
    "class_weights_from_labels",
    "graph_max_pool",
    "graph_mean_pool",
    "normalized_adjacency",
    "weighted_cross_entropy",
]


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int, shape=None):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    if shape is None:
        shape = (fan_in, fan_out)
    return rng.uniform(-limit, limit, size=shape)


class Module:
    def parameters(self) -> list[Parameter]:
        out = []
        for v in vars(self).values():
            if isinstance(v, Parameter):
                out.append(v)
            elif isinstance(v, Module):
                out.extend(v.parameters())
            elif isinstance(v, (list, tuple)):
                for item in v:
                    if isinstance(item, Parameter):
                        out.append(item)
                    elif isinstance(item, Module):
                        out.extend(item.parameters())
        return out


class Linear(Module):
    def __init__(self, in_dim: int, out_dim: int, rng: np.random.Generator,
                 name: str = "linear"):
        self.W = Parameter(glorot(rng, in_dim, out_dim), f"{name}.W")
        self.b = Parameter(np.zeros((1, out_dim)), f"{name}.b")

    def __call__(self, x: Tensor) -> Tensor:
        return x @ self.W + self.b


class GCNLayer(Module):
    """H' = A_hat H W + b with A_hat the normalized weighted adjacency."""

    def __init__(self, in_dim: int, out_dim: int, rng, name: str = "gcn"):
        self.W = Parameter(glorot(rng, in_dim, out_dim), f"{name}.W")
        self.b = Parameter(np.zeros((1, out_dim)), f"{name}.b")

    def __call__(self, H: Tensor, A_hat: Tensor) -> Tensor:
        return A_hat @ (H @ self.W) + self.b


class SAGELayer(Module):
    """H'_i = W_self h_i + W_neigh mean_{j != i} h_j + b."""

    def __init__(self, in_dim: int, out_dim: int, rng, name: str = "sage"):
        self.W_self = Parameter(glorot(rng, in_dim, out_dim),
                                f"{name}.W_self")
        self.W_neigh = Parameter(glorot(rng, in_dim, out_dim),
                                 f"{name}.W_neigh")
        self.b = Parameter(np.zeros((1, out_dim)), f"{name}.b")

    def __call__(self, H: Tensor, neigh_mean: Tensor) -> Tensor:
        return H @ self.W_self + (neigh_mean @ H) @ self.W_neigh + self.b


class GATLayer(Module):
    """Multi-head attention over the binary fully-connected-with-self mask.

    Per head: e_ij = LeakyReLU_0.2(a_src . W h_i + a_dst . W h_j),
    alpha = row softmax within the mask, h'_i = sum_j alpha_ij W h_j.
    Heads are concatenated when ``concat_heads`` else averaged.
    """

    def __init__(self, in_dim: int, out_dim: int, rng, heads: int = 1,
                 concat_heads: bool = True, name: str = "gat"):
        if heads < 1:
            raise ValueError("heads must be >= 1")
        if concat_heads:
            if out_dim % heads:
                raise ValueError("out_dim must be divisible by heads")
            head_dim = out_dim // heads
        else:
            head_dim = out_dim
        self.heads = heads
        self.concat_heads = concat_heads
        self.W = [Parameter(glorot(rng, in_dim, head_dim),
                            f"{name}.W{h}") for h in range(heads)]
        self.a_src = [Parameter(glorot(rng, head_dim, 1, (head_dim, 1)),
                                f"{name}.a_src{h}") for h in range(heads)]
        self.a_dst = [Parameter(glorot(rng, head_dim, 1, (head_dim, 1)),
                                f"{name}.a_dst{h}") for h in range(heads)]
        self.b = Parameter(np.zeros((1, out_dim)), f"{name}.b")

    def __call__(self, H: Tensor, mask: np.ndarray) -> Tensor:
        outs = []
        for h in range(self.heads):
            Wh = H @ self.W[h]
            f = Wh @ self.a_src[h]  # (N, 1)
            g = Wh @ self.a_dst[h]  # (N, 1)
            e = (f + g.transpose()).leaky_relu(0.2)
            alpha = masked_row_softmax(e, mask)
            outs.append(alpha @ Wh)
        if self.concat_heads:
            out = outs[0] if len(outs) == 1 else concat(outs, axis=1)
        else:
            out = outs[0]
            for o in outs[1:]:
                out = out + o
            out = out * (1.0 / self.heads)
        return out + self.b


class Dropout(Module):
    def __init__(self, p: float):
        if not (0 <= p < 1):
            raise ValueError("dropout p must be in [0, 1)")
        self.p = p

    def __call__(self, x: Tensor, training: bool,
                 rng: np.random.Generator | None) -> Tensor:
        if not training or self.p == 0.0:
            return x
        keep = (rng.uniform(size=x.shape) >= self.p) / (1.0 - self.p)
        return x * Tensor(keep)


class BatchNorm(Module):
    """Normalization over the node axis; batch statistics while training,
    running statistics (momentum 0.1) in eval mode."""

    def __init__(self, dim: int, momentum: float = 0.1, eps: float = 1e-5,
                 name: str = "bn"):
        self.gamma = Parameter(np.ones((1, dim)), f"{name}.gamma")
        self.beta = Parameter(np.zeros((1, dim)), f"{name}.beta")
        self.momentum = momentum
        self.eps = eps
        self.running_mean = np.zeros((1, dim))
        self.running_var = np.ones((1, dim))

    def __call__(self, x: Tensor, training: bool) -> Tensor:
        if training:
            mu = x.mean(axis=0, keepdims=True)
            var = ((x - mu).pow_const(2.0)).mean(axis=0, keepdims=True)
            self.running_mean = ((1 - self.momentum) * self.running_mean
                                 + self.momentum * mu.data)
            self.running_var = ((1 - self.momentum) * self.running_var
                                + self.momentum * var.data)
            norm = (x - mu) / (var + self.eps).sqrt()
        else:
            norm = (x - Tensor(self.running_mean)) / Tensor(
                np.sqrt(self.running_var + self.eps)
            )
        return norm * self.gamma + self.beta


class LayerNorm(Module):
    def __init__(self, dim: int, eps: float = 1e-5, name: str = "ln"):
        self.gamma = Parameter(np.ones((1, dim)), f"{name}.gamma")
        self.beta = Parameter(np.zeros((1, dim)), f"{name}.beta")
        self.eps = eps

    def __call__(self, x: Tensor) -> Tensor:
        mu = x.mean(axis=1, keepdims=True)
        var = ((x - mu).pow_const(2.0)).mean(axis=1, keepdims=True)
        return ((x - mu) / (var + self.eps).sqrt()) * self.gamma + self.beta


def graph_mean_pool(H: Tensor, batch: GraphBatch) -> Tensor:
    return Tensor(batch.mean_pool) @ H


def graph_max_pool(H: Tensor, batch: GraphBatch) -> Tensor:
    B, n = batch.n_graphs, batch.n_nodes
    return H.reshape(B, n, H.shape[1]).max(axis=1)


class AttentionPool(Module):
    """score_i = u . tanh(V h_i); weights = per-graph softmax(score);
    pooled_g = sum_i w_i h_i."""

    def __init__(self, dim: int, rng, name: str = "attnpool"):
        self.V = Parameter(glorot(rng, dim, dim), f"{name}.V")
        self.u = Parameter(glorot(rng, dim, 1, (dim, 1)), f"{name}.u")

    def __call__(self, H: Tensor, batch: GraphBatch) -> Tensor:
        B, n = batch.n_graphs, batch.n_nodes
        scores = ((H @ self.V).tanh() @ self.u).reshape(B, n)
        shift = Tensor(scores.data.max(axis=1, keepdims=True))
        ex = (scores - shift).exp()
        weights = (ex / ex.sum(axis=1, keepdims=True)).reshape(B * n, 1)
        return Tensor(batch.select) @ (weights * H)


def class_weights_from_labels(labels) -> np.ndarray:
    """Inverse class frequency, normalized to mean 1."""
    labels = np.asarray(labels, dtype=int)
    counts = np.array([(labels == 0).sum(), (labels == 1).sum()], dtype=float)
    if np.any(counts == 0):
        raise ValueError("class weights need both classes present")
    inv = 1.0 / counts
    return inv / inv.mean()


def weighted_cross_entropy(logits: Tensor, labels, class_weights=None):
    """Class-weighted cross-entropy:
    loss = -(1 / sum w_{y_b}) * sum_b w_{y_b} log softmax(logits_b)[y_b].
    """
    labels = np.asarray(labels, dtype=int)
    B = logits.shape[0]
    if class_weights is None:
        class_weights = np.ones(2)
    w = np.asarray(class_weights, dtype=float)[labels]  # (B,)
    shift = Tensor(logits.data.max(axis=1, keepdims=True))
    lse = (logits - shift).exp().sum(axis=1, keepdims=True).log() + shift
    logp = logits - lse
    onehot = np.zeros((B, 2))
    onehot[np.arange(B), labels] = 1.0
    picked = (logp * Tensor(onehot)).sum(axis=1)  # (B,)
    loss = -(picked * Tensor(w)).sum() * (1.0 / w.sum())
    return loss
