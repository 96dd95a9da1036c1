"""Brain-connectivity graphs: one fully connected 19-node graph per
segment, with per-electrode spectral node features and a symmetric Pearson
correlation adjacency."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .features import FeatureConfig, NodeFeatureMatrix, extract_node_features
from .ingest import SegmentRecord

EDGE_TRANSFORMS = ("raw", "abs", "clamp0")


@dataclass(frozen=True)
class BrainGraph:
    segment_id: str
    label: int
    node_features: np.ndarray  # (19, D)
    adjacency: np.ndarray  # (19, 19) symmetric, unit diagonal
    edge_transform: str

    @property
    def n_nodes(self) -> int:
        return self.node_features.shape[0]


def pearson_adjacency(node_features) -> np.ndarray:
    """Pairwise Pearson correlation of electrode feature vectors.

    r_ii = 1 exactly; if either row has zero variance, off-diagonal entries
    involving it are 0.
    """
    F = np.asarray(node_features, dtype=float)
    if F.ndim != 2 or F.shape[1] < 2:
        raise ValueError("node features must be (n, D) with D >= 2")
    centered = F - F.mean(axis=1, keepdims=True)
    norms = np.sqrt((centered**2).sum(axis=1))
    safe = np.where(norms > 0, norms, 1.0)
    unit = centered / safe[:, None]
    adj = unit @ unit.T
    zero = norms == 0
    adj[zero, :] = 0.0
    adj[:, zero] = 0.0
    np.fill_diagonal(adj, 1.0)
    adj = 0.5 * (adj + adj.T)
    return np.clip(adj, -1.0, 1.0)


def apply_edge_transform(adj: np.ndarray, transform: str) -> np.ndarray:
    if transform == "raw":
        return adj
    if transform == "abs":
        return np.abs(adj)
    if transform == "clamp0":
        return np.clip(adj, 0.0, None)
    raise ValueError(f"unknown edge transform: {transform!r}")


def build_graph(
    segment: SegmentRecord,
    config: FeatureConfig = FeatureConfig(),
    edge_transform: str = "abs",
) -> BrainGraph:
    node = extract_node_features(segment, config)
    return graph_from_node_features(node, edge_transform)


def graph_from_node_features(
    node: NodeFeatureMatrix, edge_transform: str = "abs"
) -> BrainGraph:
    adj = apply_edge_transform(pearson_adjacency(node.matrix), edge_transform)
    return BrainGraph(
        segment_id=node.segment_id,
        label=node.label,
        node_features=node.matrix.copy(),
        adjacency=adj,
        edge_transform=edge_transform,
    )


def save_graph(graph: BrainGraph, out_dir) -> Path:
    """graphs/<segment_id>.csv: two-line header (dims + transform), the
    adjacency block, then the node-feature block."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{graph.segment_id}.csv"
    n, d = graph.node_features.shape
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_nodes", n, "n_features", d, "label", graph.label])
        writer.writerow(["edge_transform", graph.edge_transform])
        for row in graph.adjacency:
            writer.writerow(["%.12g" % v for v in row])
        for row in graph.node_features:
            writer.writerow(["%.12g" % v for v in row])
    return path


def load_graph(path) -> BrainGraph:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        head = next(reader)
        n, d, label = int(head[1]), int(head[3]), int(head[5])
        transform = next(reader)[1]
        rows = [[float(v) for v in rec] for rec in reader]
    adj = np.asarray(rows[:n])
    feats = np.asarray(rows[n:n + n])
    if adj.shape != (n, n) or feats.shape != (n, d):
        raise ValueError(f"malformed graph file: {path}")
    return BrainGraph(
        segment_id=path.stem,
        label=label,
        node_features=feats,
        adjacency=adj,
        edge_transform=transform,
    )
