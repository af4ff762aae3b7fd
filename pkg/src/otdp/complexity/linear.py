"""Deterministic linear classifier for the linearity measures.

L2-regularised hinge loss minimised by full-batch subgradient descent: fixed
epoch count, step 'step/sqrt(t)', weights initialised at zero.  No internal
randomness, so training is reproducible to the bit for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateClassifierError


@dataclass(frozen=True)
class LinearClassifierConfig:
    epochs: int = 500
    step: float = 0.01
    regularization: float = 1e-3


@dataclass
class Hyperplane:
    weights: np.ndarray
    bias: float
    training_error: float
    margin_loss: float

    def scores(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        """1 (malicious) where the score is positive, else 0."""
        return (self.scores(X) > 0).astype(np.int8)


def train_linear_classifier(
    X: np.ndarray,
    y: np.ndarray,
    config: LinearClassifierConfig = LinearClassifierConfig(),
) -> Hyperplane:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if (y == y[0]).all():
        raise DegenerateClassifierError("cannot train a classifier on a single class")
    sign = np.where(y == 1, 1.0, -1.0)
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    for t in range(1, config.epochs + 1):
        margins = sign * (X @ w + b)
        violating = margins < 1.0
        coeff = np.where(violating, -sign, 0.0)
        grad_w = (coeff @ X) / n + config.regularization * w
        grad_b = coeff.sum() / n
        lr = config.step / np.sqrt(t)
        w -= lr * grad_w
        b -= lr * grad_b
    scores = X @ w + b
    predictions = (scores > 0).astype(np.int8)
    training_error = float(np.mean(predictions != y))
    margin_loss = float(np.mean(np.maximum(0.0, 1.0 - sign * scores)))
    return Hyperplane(w, float(b), training_error, margin_loss)
