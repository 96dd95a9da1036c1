"""The eleven named graph-network architectures.

Every model maps a GraphBatch to (B, 2) logits. Hidden width and dropout
default to 64 / 0.3 and are configurable through the ArchitectureSpec.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .batch import GraphBatch
from .layers import (
    AttentionPool,
    BatchNorm,
    Dropout,
    GATLayer,
    GCNLayer,
    LayerNorm,
    Linear,
    Module,
    SAGELayer,
    graph_max_pool,
    graph_mean_pool,
)
from .tensor import Tensor, concat


@dataclass(frozen=True)
class ArchitectureSpec:
    name: str
    node_dim: int = 40
    hidden_dim: int = 64
    dropout: float = 0.3
    layers: tuple[str, ...] = field(default_factory=tuple)


class GraphModel(Module):
    spec: ArchitectureSpec

    def forward(self, batch: GraphBatch, training: bool = False,
                rng: np.random.Generator | None = None) -> Tensor:
        raise NotImplementedError

    def parameter_count(self) -> int:
        return sum(p.data.size for p in self.parameters())


class BaselineGCN(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.gcn1 = GCNLayer(d, h, rng, "gcn1")
        self.gcn2 = GCNLayer(h, h, rng, "gcn2")
        self.drop = Dropout(spec.dropout)
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        A = Tensor(batch.A_hat)
        x = self.drop(self.gcn1(Tensor(batch.H0), A).relu(), training, rng)
        x = self.drop(self.gcn2(x, A).relu(), training, rng)
        return self.out(graph_mean_pool(x, batch))


class BaselineGAT(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.gat1 = GATLayer(d, h, rng, heads=4, concat_heads=True,
                             name="gat1")
        self.gat2 = GATLayer(h, h, rng, heads=1, concat_heads=False,
                             name="gat2")
        self.drop = Dropout(spec.dropout)
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        x = self.drop(self.gat1(Tensor(batch.H0), batch.mask).elu(),
                      training, rng)
        x = self.drop(self.gat2(x, batch.mask).elu(), training, rng)
        return self.out(graph_mean_pool(x, batch))


class BaselineSAGE(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.sage1 = SAGELayer(d, h, rng, "sage1")
        self.sage2 = SAGELayer(h, h, rng, "sage2")
        self.drop = Dropout(spec.dropout)
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        M = Tensor(batch.neigh_mean)
        x = self.drop(self.sage1(Tensor(batch.H0), M).relu(), training, rng)
        x = self.drop(self.sage2(x, M).relu(), training, rng)
        return self.out(graph_mean_pool(x, batch))


class ResidualGCN(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.gcn1 = GCNLayer(d, h, rng, "gcn1")
        self.gcn2 = GCNLayer(h, h, rng, "gcn2")
        self.drop = Dropout(spec.dropout)
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        A = Tensor(batch.A_hat)
        x = self.gcn1(Tensor(batch.H0), A).relu()
        x = self.gcn2(x, A).relu() + x  # skip connection
        x = self.drop(x, training, rng)
        return self.out(graph_mean_pool(x, batch))


class HybridModel(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.mlp = Linear(d, h, rng, "mlp")
        self.bn = BatchNorm(h, name="bn")
        self.gcn1 = GCNLayer(h, h, rng, "gcn1")
        self.gat = GATLayer(h, h, rng, heads=1, name="gat")
        self.gcn2 = GCNLayer(h, h, rng, "gcn2")
        self.drop = Dropout(spec.dropout)
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        A = Tensor(batch.A_hat)
        x = self.bn(self.mlp(Tensor(batch.H0)), training).relu()
        x = self.drop(x, training, rng)
        x = self.gcn1(x, A).relu()
        x = self.gat(x, batch.mask).elu()
        x = self.gcn2(x, A).relu()
        return self.out(graph_mean_pool(x, batch))


class RegularizedGNN(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.gcn = GCNLayer(d, h, rng, "gcn")
        self.gat = GATLayer(h, h, rng, heads=1, name="gat")
        self.ln = LayerNorm(h, name="ln")
        self.drop = Dropout(spec.dropout)
        self.fc1 = Linear(h, h // 2, rng, "fc1")
        self.out = Linear(h // 2, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        x = self.gcn(Tensor(batch.H0), Tensor(batch.A_hat)).relu()
        x = self.ln(self.gat(x, batch.mask).elu())
        x = self.drop(graph_mean_pool(x, batch), training, rng)
        return self.out(self.fc1(x).relu())


class LightweightGCN(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        self.gcn = GCNLayer(spec.node_dim, spec.hidden_dim, rng, "gcn")
        self.out = Linear(spec.hidden_dim, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        x = self.gcn(Tensor(batch.H0), Tensor(batch.A_hat)).relu()
        return self.out(graph_mean_pool(x, batch))


class BalancedGAT(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.mlp = Linear(d, h, rng, "mlp")
        self.gat = GATLayer(h, h, rng, heads=1, name="gat")
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        x = self.mlp(Tensor(batch.H0)).relu()
        x = self.gat(x, batch.mask).elu()
        return self.out(graph_mean_pool(x, batch))


class MultiGNN(GraphModel):
    """Shared encoder, parallel GCN/GAT/SAGE branches pooled with
    mean/max/attention respectively, concatenated into a classifier."""

    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.encoder = Linear(d, h, rng, "encoder")
        self.gcn = GCNLayer(h, h, rng, "gcn")
        self.gat = GATLayer(h, h, rng, heads=1, name="gat")
        self.sage = SAGELayer(h, h, rng, "sage")
        self.attn_pool = AttentionPool(h, rng, "attnpool")
        self.drop = Dropout(spec.dropout)
        self.fc = Linear(3 * h, h, rng, "fc")
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        x = self.encoder(Tensor(batch.H0)).relu()
        g1 = graph_mean_pool(self.gcn(x, Tensor(batch.A_hat)).relu(), batch)
        g2 = graph_max_pool(self.gat(x, batch.mask).elu(), batch)
        g3 = self.attn_pool(self.sage(x, Tensor(batch.neigh_mean)).relu(),
                            batch)
        z = self.drop(self.fc(concat([g1, g2, g3], axis=1)).relu(),
                      training, rng)
        return self.out(z)


class ResidualAttentionGNN(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.mlp = Linear(d, h, rng, "mlp")
        self.gat1 = GATLayer(h, h, rng, heads=1, name="gat1")
        self.gat2 = GATLayer(h, h, rng, heads=1, name="gat2")
        self.attn_pool = AttentionPool(h, rng, "attnpool")
        self.drop = Dropout(spec.dropout)
        self.out = Linear(h, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        x = self.mlp(Tensor(batch.H0)).relu()
        x = self.gat1(x, batch.mask).elu() + x
        x = self.gat2(x, batch.mask).elu() + x
        x = self.drop(x, training, rng)
        return self.out(self.attn_pool(x, batch))


class _DeepBlock(Module):
    def __init__(self, h, rng, name):
        self.gcn = GCNLayer(h, h, rng, f"{name}.gcn")
        self.gat = GATLayer(h, h, rng, heads=1, name=f"{name}.gat")
        self.sage = SAGELayer(h, h, rng, f"{name}.sage")
        self.fuse = Linear(3 * h, h, rng, f"{name}.fuse")

    def __call__(self, x, batch):
        z = concat(
            [
                self.gcn(x, Tensor(batch.A_hat)).relu(),
                self.gat(x, batch.mask).elu(),
                self.sage(x, Tensor(batch.neigh_mean)).relu(),
            ],
            axis=1,
        )
        return self.fuse(z).relu() + x  # skip connection


class DeepGNN(GraphModel):
    def __init__(self, spec, rng):
        self.spec = spec
        d, h = spec.node_dim, spec.hidden_dim
        self.encoder = Linear(d, h, rng, "encoder")
        self.blocks = [_DeepBlock(h, rng, f"block{i}") for i in range(3)]
        self.drop = Dropout(spec.dropout)
        self.fc1 = Linear(h, h // 2, rng, "fc1")
        self.out = Linear(h // 2, 2, rng, "out")

    def forward(self, batch, training=False, rng=None):
        x = self.encoder(Tensor(batch.H0)).relu()
        for block in self.blocks:
            x = self.drop(block(x, batch), training, rng)
        z = self.drop(self.fc1(graph_mean_pool(x, batch)).relu(),
                      training, rng)
        return self.out(z)


_REGISTRY = {
    "BaselineGCN": (BaselineGCN, ("GCN", "GCN", "Linear")),
    "BaselineGAT": (BaselineGAT, ("GAT x4 heads", "GAT x1 head", "Linear")),
    "BaselineSAGE": (BaselineSAGE, ("SAGE", "SAGE", "Linear")),
    "ResidualGCN": (ResidualGCN, ("GCN", "GCN + skip", "Linear")),
    "HybridModel": (HybridModel,
                    ("Linear", "BatchNorm", "GCN", "GAT", "GCN", "Linear")),
    "RegularizedGNN": (RegularizedGNN,
                       ("GCN", "GAT", "LayerNorm", "Linear", "Linear")),
    "LightweightGCN": (LightweightGCN, ("GCN", "Linear")),
    "BalancedGAT": (BalancedGAT, ("Linear", "GAT x1 head", "Linear")),
    "MultiGNN": (MultiGNN,
                 ("Linear", "GCN|GAT|SAGE", "mean|max|attn pool",
                  "Linear", "Linear")),
    "ResidualAttentionGNN": (ResidualAttentionGNN,
                             ("Linear", "GAT + skip", "GAT + skip",
                              "attn pool", "Linear")),
    "DeepGNN": (DeepGNN,
                ("Linear", "3 x (GCN|GAT|SAGE + skip)", "Linear", "Linear")),
}

ARCHITECTURE_NAMES = tuple(_REGISTRY)


def build_architecture(name: str, node_dim: int = 40, hidden_dim: int = 64,
                       dropout: float = 0.3) -> ArchitectureSpec:
    if name not in _REGISTRY:
        raise ValueError(f"unknown architecture: {name!r}")
    return ArchitectureSpec(name=name, node_dim=node_dim,
                            hidden_dim=hidden_dim, dropout=dropout,
                            layers=_REGISTRY[name][1])


def build_model(spec: ArchitectureSpec, seed: int = 0) -> GraphModel:
    name_tag = zlib.crc32(spec.name.encode("ascii"))
    rng = np.random.default_rng([seed, name_tag])
    return _REGISTRY[spec.name][0](spec, rng)
