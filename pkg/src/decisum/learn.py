"""From-scratch linear classifiers over named sparse features: MaxEnt
(logistic regression, full-batch gradient descent with backtracking) and a
linear SVM (Pegasos-style stochastic subgradient on the primal hinge loss)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

FeatureVector = Mapping[str, float]
Example = tuple[FeatureVector, int]

GRAD_TOL = 1e-6


@dataclass
class LinearModel:
    kind: str  # "maxent" | "svm"
    feature_names: list[str]
    weights: np.ndarray
    bias: float
    standardization: dict[str, tuple[float, float]]  # name -> (mean, std), continuous only
    config: dict
    training_trace: list[float] = field(default_factory=list, repr=False)

    def _densify(self, x: FeatureVector) -> np.ndarray:
        vec = np.zeros(len(self.feature_names))
        index = self._index()
        for name, value in x.items():
            pos = index.get(name)
            if pos is not None:
                vec[pos] = value
        for name, (mean, std) in self.standardization.items():
            pos = index[name]
            vec[pos] = (vec[pos] - mean) / std
        return vec

    def _index(self) -> dict[str, int]:
        idx = getattr(self, "_name_index", None)
        if idx is None:
            idx = {n: i for i, n in enumerate(self.feature_names)}
            self._name_index = idx
        return idx


def predict_prob(model: LinearModel, x: FeatureVector) -> float:
    """P(positive | x) under a MaxEnt model."""
    if model.kind != "maxent":
        raise ValueError(f"predict_prob requires a maxent model, got {model.kind!r}")
    z = float(model.weights @ model._densify(x)) + model.bias
    return _sigmoid(z)


def decision_value(model: LinearModel, x: FeatureVector) -> float:
    """Raw margin w.x + b of an SVM model."""
    if model.kind != "svm":
        raise ValueError(f"decision_value requires an svm model, got {model.kind!r}")
    return float(model.weights @ model._densify(x)) + model.bias


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + np.exp(-z))
    e = np.exp(z)
    return e / (1.0 + e)


# ---------------------------------------------------------------------------
# Shared training plumbing
# ---------------------------------------------------------------------------


def _prepare(examples: Sequence[Example]):
    """Feature space, standardization stats, dense design matrix, labels."""
    if not examples:
        raise ValueError("no training examples")
    labels = {y for _, y in examples}
    if labels != {0, 1}:
        raise ValueError(f"training needs both labels 0 and 1, got {sorted(labels)}")
    names = sorted({n for x, _ in examples for n in x})
    index = {n: i for i, n in enumerate(names)}
    x_mat = np.zeros((len(examples), len(names)))
    y = np.zeros(len(examples))
    for row, (x, label) in enumerate(examples):
        for n, v in x.items():
            x_mat[row, index[n]] = v
        y[row] = label
    # Columns whose observed values are all 0/1 are passed through unscaled.
    standardization: dict[str, tuple[float, float]] = {}
    for n, col in zip(names, x_mat.T):
        if np.all((col == 0.0) | (col == 1.0)):
            continue
        mean = float(col.mean())
        std = float(col.std())
        if std < 1e-12:
            std = 1.0
        standardization[n] = (mean, std)
        col -= mean
        col /= std
    return names, standardization, x_mat, y


def _sample_weights(y: np.ndarray, pos_weight: float) -> np.ndarray:
    sw = np.ones(len(y))
    sw[y == 1] = pos_weight
    return sw


def balanced_pos_weight(examples: Sequence[Example]) -> float:
    """negatives / positives, for reweighting imbalanced pairwise data."""
    pos = sum(1 for _, y in examples if y == 1)
    neg = len(examples) - pos
    if pos == 0:
        raise ValueError("training needs both labels 0 and 1")
    return neg / pos


# ---------------------------------------------------------------------------
# MaxEnt
# ---------------------------------------------------------------------------


def maxent_loss_and_grad(
    x_mat: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    b: float,
    l2: float,
    sample_weights: np.ndarray | None = None,
) -> tuple[float, np.ndarray, float]:
    """Weighted-mean negative log-likelihood plus (l2/2)||w||^2; bias unregularized."""
    sw = np.ones(len(y)) if sample_weights is None else sample_weights
    z = x_mat @ w + b
    # -log sigma(z) = softplus(-z); -log(1 - sigma(z)) = softplus(z)
    nll = y * np.logaddexp(0.0, -z) + (1.0 - y) * np.logaddexp(0.0, z)
    total = sw.sum()
    loss = float((sw * nll).sum() / total) + 0.5 * l2 * float(w @ w)
    sig = np.empty_like(z)
    pos = z >= 0
    sig[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    sig[~pos] = ez / (1.0 + ez)
    residual = sw * (sig - y)
    grad_w = (x_mat.T @ residual) / total + l2 * w
    grad_b = float(residual.sum() / total)
    return loss, grad_w, grad_b


def train_maxent(
    examples: Sequence[Example],
    l2: float = 1e-3,
    epochs: int = 500,
    seed: int = 0,
    pos_weight: float = 1.0,
) -> LinearModel:
    """Deterministic full-batch gradient descent with Armijo backtracking.

    Stops when the gradient infinity-norm drops below 1e-6 or the epoch
    budget is exhausted. The seed is part of the model config only; the
    optimization itself is deterministic.
    """
    names, standardization, x_mat, y = _prepare(examples)
    sw = _sample_weights(y, pos_weight)
    w = np.zeros(len(names))
    b = 0.0
    trace: list[float] = []
    loss, grad_w, grad_b = maxent_loss_and_grad(x_mat, y, w, b, l2, sw)
    trace.append(loss)
    for _ in range(epochs):
        if max(float(np.max(np.abs(grad_w), initial=0.0)), abs(grad_b)) < GRAD_TOL:
            break
        grad_sq = float(grad_w @ grad_w) + grad_b * grad_b
        step = 1.0
        while step > 1e-12:
            w_new = w - step * grad_w
            b_new = b - step * grad_b
            loss_new, gw_new, gb_new = maxent_loss_and_grad(x_mat, y, w_new, b_new, l2, sw)
            if loss_new <= loss - 1e-4 * step * grad_sq:
                break
            step *= 0.5
        else:
            break
        w, b, loss, grad_w, grad_b = w_new, b_new, loss_new, gw_new, gb_new
        trace.append(loss)
    return LinearModel(
        kind="maxent",
        feature_names=names,
        weights=w,
        bias=b,
        standardization=standardization,
        config={"l2": l2, "epochs": epochs, "seed": seed, "pos_weight": pos_weight},
        training_trace=trace,
    )


# ---------------------------------------------------------------------------
# SVM
# ---------------------------------------------------------------------------


def svm_objective(
    x_mat: np.ndarray,
    y_pm: np.ndarray,
    w: np.ndarray,
    b: float,
    lam: float,
    sample_weights: np.ndarray | None = None,
) -> float:
    """(lam/2)(||w||^2 + b^2) + weighted mean hinge loss."""
    sw = np.ones(len(y_pm)) if sample_weights is None else sample_weights
    margins = y_pm * (x_mat @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * lam * (float(w @ w) + b * b) + float((sw * hinge).sum() / sw.sum())


def train_svm(
    examples: Sequence[Example],
    lam: float = 0.01,
    epochs: int = 200,
    seed: int = 0,
    pos_weight: float = 1.0,
) -> LinearModel:
    """Pegasos-style epoch-shuffled stochastic subgradient descent.

    The bias is learned as an augmented constant feature, so it shares the
    lam/2 regularization. The returned weights are the average over all
    iterates; training_trace records the primal objective of the running
    average at each epoch end.
    """
    names, standardization, x_mat, y = _prepare(examples)
    sw = _sample_weights(y, pos_weight)
    y_pm = np.where(y == 1, 1.0, -1.0)
    n, dims = x_mat.shape
    rng = np.random.default_rng(seed)
    w = np.zeros(dims)
    b = 0.0
    w_sum = np.zeros(dims)
    b_sum = 0.0
    steps = 0
    trace: list[float] = []
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margin = y_pm[i] * (float(x_mat[i] @ w) + b)
            w *= 1.0 - eta * lam
            b *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * sw[i] * y_pm[i] * x_mat[i]
                b += eta * sw[i] * y_pm[i]
            w_sum += w
            b_sum += b
            steps += 1
        trace.append(svm_objective(x_mat, y_pm, w_sum / steps, b_sum / steps, lam, sw))
    w_avg = w_sum / steps if steps else w
    b_avg = b_sum / steps if steps else b
    return LinearModel(
        kind="svm",
        feature_names=names,
        weights=w_avg,
        bias=float(b_avg),
        standardization=standardization,
        config={"lambda": lam, "epochs": epochs, "seed": seed, "pos_weight": pos_weight},
        training_trace=trace,
    )


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def save_model(model: LinearModel, path: str | Path) -> None:
    obj = {
        "kind": model.kind,
        "feature_names": model.feature_names,
        "weights": model.weights.tolist(),
        "bias": model.bias,
        "standardization": {
            name: {"mean": mean, "std": std}
            for name, (mean, std) in model.standardization.items()
        },
        "config": model.config,
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return LinearModel(
        kind=obj["kind"],
        feature_names=list(obj["feature_names"]),
        weights=np.array(obj["weights"], dtype=float),
        bias=float(obj["bias"]),
        standardization={
            name: (entry["mean"], entry["std"])
            for name, entry in obj["standardization"].items()
        },
        config=obj.get("config", {}),
    )
