"""Optimizer and training-control utilities for the graph models."""

from __future__ import annotations

import numpy as np

from .tensor import Parameter


class AdamW:
    """Adam with decoupled weight decay.

    The decay step ``w <- w - lr * wd * w`` is applied separately from the
    bias-corrected adaptive gradient step, so decay strength does not pass
    through the second-moment normalization.
    """

    def __init__(self, params: list[Parameter], lr: float = 0.001,
                 weight_decay: float = 0.01, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.params = list(params)
        self.lr = float(lr)
        self.weight_decay = float(weight_decay)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)
        self.t = 0
        self._m = [np.zeros_like(p.data) for p in self.params]
        self._v = [np.zeros_like(p.data) for p in self.params]

    def zero_grad(self) -> None:
        for p in self.params:
            p.zero_grad()

    def step(self) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for i, p in enumerate(self.params):
            g = p.grad
            if g is None:
                continue
            self._m[i] = b1 * self._m[i] + (1.0 - b1) * g
            self._v[i] = b2 * self._v[i] + (1.0 - b2) * g * g
            m_hat = self._m[i] / (1.0 - b1 ** self.t)
            v_hat = self._v[i] / (1.0 - b2 ** self.t)
            p.data -= self.lr * self.weight_decay * p.data
            p.data -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class PlateauScheduler:
    """Halve the learning rate when validation accuracy stops improving.

    An epoch counts as a stall unless the monitored value strictly exceeds
    the best seen so far. After ``patience`` consecutive stalls the learning
    rate is multiplied by ``factor`` (never below ``min_lr``) and the stall
    counter resets.
    """

    def __init__(self, optimizer: AdamW, factor: float = 0.5,
                 patience: int = 5, min_lr: float = 1e-6):
        self.optimizer = optimizer
        self.factor = float(factor)
        self.patience = int(patience)
        self.min_lr = float(min_lr)
        self.best = -np.inf
        self.stall = 0
        self.n_reductions = 0

    @property
    def lr(self) -> float:
        return self.optimizer.lr

    def step(self, val_accuracy: float) -> bool:
        """Record one epoch; return True if the learning rate was reduced."""
        if val_accuracy > self.best:
            self.best = float(val_accuracy)
            self.stall = 0
            return False
        self.stall += 1
        if self.stall >= self.patience:
            self.optimizer.lr = max(self.optimizer.lr * self.factor,
                                    self.min_lr)
            self.n_reductions += 1
            self.stall = 0
            return True
        return False


class EarlyStopping:
    """Stop training when validation loss stops improving.

    Tracks the best (lowest) validation loss, snapshotting parameter values
    whenever it improves. After ``patience`` epochs without strict
    improvement, ``step`` returns True and ``restore`` rolls the parameters
    back to the best snapshot.
    """

    def __init__(self, params: list[Parameter], patience: int = 15):
        self.params = list(params)
        self.patience = int(patience)
        self.best = np.inf
        self.best_epoch = -1
        self.stall = 0
        self._snapshot = [p.data.copy() for p in self.params]

    def step(self, val_loss: float, epoch: int) -> bool:
        if val_loss < self.best:
            self.best = float(val_loss)
            self.best_epoch = int(epoch)
            self.stall = 0
            self._snapshot = [p.data.copy() for p in self.params]
            return False
        self.stall += 1
        return self.stall >= self.patience

    def restore(self) -> None:
        for p, saved in zip(self.params, self._snapshot):
            p.data = saved.copy()
