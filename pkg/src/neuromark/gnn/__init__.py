"""Dense-tensor graph neural network engine.

Reverse-mode autodiff over numpy arrays, graph layers (GCN, GAT, SAGE),
normalization, pooling, class-weighted cross-entropy, decoupled-decay Adam,
plateau scheduling, early stopping, and the eleven named architectures.
"""

from .tensor import Tensor, Parameter
from .layers import (
    GATLayer,
    GCNLayer,
    Linear,
    SAGELayer,
    normalized_adjacency,
    weighted_cross_entropy,
)
from .batch import GraphBatch, make_batch
from .models import ARCHITECTURE_NAMES, ArchitectureSpec, build_architecture, build_model
from .optim import AdamW, EarlyStopping, PlateauScheduler
from .train import TrainConfig, train_gnn

__all__ = [
    "ARCHITECTURE_NAMES",
    "AdamW",
    "ArchitectureSpec",
    "EarlyStopping",
    "GATLayer",
    "GCNLayer",
    "GraphBatch",
    "Linear",
    "Parameter",
    "PlateauScheduler",
    "SAGELayer",
    "Tensor",
    "TrainConfig",
    "build_architecture",
    "build_model",
    "make_batch",
    "normalized_adjacency",
    "train_gnn",
    "weighted_cross_entropy",
]
