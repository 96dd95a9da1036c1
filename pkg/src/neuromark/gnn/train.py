"""Mini-batch training loop for the graph models."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..graph import BrainGraph
from .batch import GraphBatch, make_batch
from .layers import class_weights_from_labels, weighted_cross_entropy
from .models import GraphModel
from .optim import AdamW, EarlyStopping, PlateauScheduler
from .tensor import Tensor


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.001
    weight_decay: float = 0.01
    batch_size: int = 32
    max_epochs: int = 100
    plateau_factor: float = 0.5
    plateau_patience: int = 5
    early_stop_patience: int = 15
    class_weighting: str = "balanced"  # "balanced" or "none"
    seed: int = 0

    def __post_init__(self):
        if self.class_weighting not in ("balanced", "none"):
            raise ValueError(
                f"unknown class_weighting: {self.class_weighting!r}")


@dataclass(frozen=True)
class EpochLog:
    epoch: int
    train_loss: float
    val_loss: float
    val_accuracy: float
    lr: float


@dataclass(frozen=True)
class TrainResult:
    history: tuple[EpochLog, ...]
    best_epoch: int
    best_val_loss: float
    stopped_early: bool
    class_weights: tuple[float, float] = field(default=(1.0, 1.0))


def _class_weights(labels: np.ndarray, mode: str) -> np.ndarray:
    if mode == "none":
        return np.ones(2)
    return class_weights_from_labels(labels)


def _evaluate(model: GraphModel, batch: GraphBatch,
              weights: np.ndarray) -> tuple[float, float]:
    logits = model.forward(batch, training=False)
    loss = weighted_cross_entropy(logits, batch.labels, weights)
    pred = np.argmax(logits.data, axis=1)
    acc = float(np.mean(pred == batch.labels))
    return float(loss.data), acc


def predict_batch(model: GraphModel, graphs: list[BrainGraph]) -> np.ndarray:
    """Deterministic (eval-mode) class predictions for a list of graphs."""
    batch = make_batch(graphs)
    logits = model.forward(batch, training=False)
    return np.argmax(logits.data, axis=1)


def train_gnn(model: GraphModel, train_graphs: list[BrainGraph],
              val_graphs: list[BrainGraph],
              config: TrainConfig = TrainConfig()) -> TrainResult:
    """Train ``model`` in place, returning the per-epoch history.

    Mini-batches are drawn from a fresh seeded shuffle each epoch. The
    learning-rate scheduler watches validation accuracy; early stopping
    watches validation loss and restores the best-scoring parameters
    before returning.
    """
    if not train_graphs or not val_graphs:
        raise ValueError("empty training or validation set")
    train_labels = np.array([g.label for g in train_graphs])
    weights = _class_weights(train_labels, config.class_weighting)

    params = model.parameters()
    optimizer = AdamW(params, lr=config.lr,
                      weight_decay=config.weight_decay)
    scheduler = PlateauScheduler(optimizer, factor=config.plateau_factor,
                                 patience=config.plateau_patience)
    stopper = EarlyStopping(params, patience=config.early_stop_patience)
    rng = np.random.default_rng([config.seed, 0x7EA1])
    val_batch = make_batch(val_graphs)

    n = len(train_graphs)
    history: list[EpochLog] = []
    stopped_early = False
    for epoch in range(config.max_epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            batch = make_batch([train_graphs[i] for i in idx])
            optimizer.zero_grad()
            logits = model.forward(batch, training=True, rng=rng)
            loss = weighted_cross_entropy(logits, batch.labels, weights)
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.data) * len(idx)
        train_loss = epoch_loss / n

        val_loss, val_acc = _evaluate(model, val_batch, weights)
        history.append(EpochLog(epoch=epoch, train_loss=train_loss,
                                val_loss=val_loss, val_accuracy=val_acc,
                                lr=optimizer.lr))
        scheduler.step(val_acc)
        if stopper.step(val_loss, epoch):
            stopped_early = True
            break

    stopper.restore()
    return TrainResult(history=tuple(history),
                       best_epoch=stopper.best_epoch,
                       best_val_loss=stopper.best,
                       stopped_early=stopped_early,
                       class_weights=(float(weights[0]), float(weights[1])))


def write_training_log(result: TrainResult, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "val_loss", "val_accuracy",
                         "lr"])
        for row in result.history:
            writer.writerow([row.epoch, f"{row.train_loss:.8g}",
                             f"{row.val_loss:.8g}",
                             f"{row.val_accuracy:.8g}", f"{row.lr:.8g}"])


def save_parameters(model: GraphModel, path: str | Path) -> None:
    """Textual parameter snapshot: one block per parameter."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for p in model.parameters():
        shape = ",".join(str(s) for s in p.data.shape)
        flat = " ".join(f"{v:.17g}" for v in p.data.ravel())
        lines.append(f"{p.name} {shape}\n{flat}\n")
    path.write_text("".join(lines))


def load_parameters(model: GraphModel, path: str | Path) -> None:
    text = Path(path).read_text().splitlines()
    params = {p.name: p for p in model.parameters()}
    for i in range(0, len(text), 2):
        name, shape_s = text[i].rsplit(" ", 1)
        if name not in params:
            raise ValueError(f"unknown parameter in snapshot: {name!r}")
        shape = tuple(int(s) for s in shape_s.split(","))
        values = np.array([float(v) for v in text[i + 1].split()])
        if values.size != int(np.prod(shape)):
            raise ValueError(f"size mismatch for parameter {name!r}")
        params[name].data = values.reshape(shape)
