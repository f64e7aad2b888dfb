"""Loss, optimizer and the minibatch training loop.

Training minimizes mean binary cross-entropy with Adam. Per epoch the loop
records the training loss and validation accuracy, keeps the parameters of
the best validation epoch, and stops early after a patience window without
improvement. Everything is deterministic given the config seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from ..core import Instance, Solution
from ..errors import DimensionError, DivergenceError, ValidationError
from .lstm import BiLstmModel, backward_batch, forward_batch
from .standardize import Standardizer, instance_features

PROB_CLIP = 1e-12


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    batch_size: int = 64
    max_epochs: int = 100
    early_stop_patience: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning rate must be positive")
        if self.batch_size < 1:
            raise ValidationError("batch size must be at least 1")


def bce_loss(y_star: np.ndarray, y_hat: np.ndarray) -> float:
    """Mean binary cross-entropy over the horizon, probabilities clipped."""
    y_star = np.asarray(y_star, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y_star.shape != y_hat.shape:
        raise DimensionError(f"label shape {y_star.shape} != prediction shape {y_hat.shape}")
    q = np.clip(y_hat, PROB_CLIP, 1.0 - PROB_CLIP)
    per_period = -(y_star * np.log(q) + (1.0 - y_star) * np.log(1.0 - q))
    return float(per_period.mean())


def batch_loss_and_grads(
    model: BiLstmModel,
    X: np.ndarray,
    Y: np.ndarray,
    rng: np.random.Generator | None = None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean loss over a (B, T, F) batch and exact gradients for it.

    Dropout masks, when active, are sampled here and held fixed for the
    backward pass, so the gradients are exact for the masked loss.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    B, T = Y.shape
    cache = forward_batch(model, X, rng)
    q = np.clip(cache.probs, PROB_CLIP, 1.0 - PROB_CLIP)
    loss = float(-(Y * np.log(q) + (1.0 - Y) * np.log(1.0 - q)).mean())
    dlogits = (q - Y) / (B * T)
    grads = backward_batch(model, cache, dlogits)
    return loss, grads


@dataclass
class AdamState:
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0

    @classmethod
    def for_params(cls, params: dict[str, np.ndarray]) -> "AdamState":
        return cls(
            m={k: np.zeros_like(p) for k, p in params.items()},
            v={k: np.zeros_like(p) for k, p in params.items()},
            step=0,
        )


def adam_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: AdamState,
    config: TrainConfig,
) -> tuple[dict[str, np.ndarray], AdamState]:
    """One bias-corrected Adam update; purely functional."""
    b1, b2, eps = config.adam_beta1, config.adam_beta2, config.adam_eps
    t = state.step + 1
    new_params: dict[str, np.ndarray] = {}
    new_m: dict[str, np.ndarray] = {}
    new_v: dict[str, np.ndarray] = {}
    for k, p in params.items():
        g = grads[k]
        m = b1 * state.m[k] + (1 - b1) * g
        v = b2 * state.v[k] + (1 - b2) * g * g
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        new_params[k] = p - config.learning_rate * m_hat / (np.sqrt(v_hat) + eps)
        new_m[k] = m
        new_v[k] = v
    return new_params, AdamState(m=new_m, v=new_v, step=t)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    val_accuracy: float
    seconds: float


@dataclass
class TrainResult:
    model: BiLstmModel
    history: list[EpochStats]
    best_epoch: int
    total_seconds: float


def predictions_to_labels(probs: np.ndarray) -> np.ndarray:
    """Threshold at 0.5; ties label 1."""
    return (np.asarray(probs) >= 0.5).astype(np.int64)


def accuracy_on_arrays(model: BiLstmModel, X: np.ndarray, Y: np.ndarray, chunk: int = 256) -> float:
    """Fraction of correctly predicted (instance, period) pairs."""
    if len(X) == 0:
        raise ValidationError("accuracy requires a non-empty split")
    was_training = model.training_mode
    model.training_mode = False
    hits = 0
    try:
        for start in range(0, len(X), chunk):
            cache = forward_batch(model, X[start : start + chunk])
            hits += int((predictions_to_labels(cache.probs) == Y[start : start + chunk]).sum())
    finally:
        model.training_mode = was_training
    return hits / Y.size


def validation_accuracy(model: BiLstmModel, split) -> float:
    """Accuracy over a split given either arrays or (Instance, Solution) pairs."""
    if isinstance(split, tuple) and len(split) == 2 and isinstance(split[0], np.ndarray):
        return accuracy_on_arrays(model, split[0], split[1])
    X, Y = pairs_to_arrays(split, model.standardizer)
    return accuracy_on_arrays(model, X, Y)


def pairs_to_arrays(
    pairs: list[tuple[Instance, Solution]], standardizer: Standardizer | None
) -> tuple[np.ndarray, np.ndarray]:
    """Stack (Instance, Solution) pairs into (N, T, 4) features and (N, T) labels."""
    if not pairs:
        raise ValidationError("empty split")
    horizons = {inst.T for inst, _ in pairs}
    if len(horizons) != 1:
        raise ValidationError("all instances in a split must share one horizon")
    feats = np.stack([instance_features(inst) for inst, _ in pairs])
    if standardizer is not None:
        feats = (feats - standardizer.mean) / standardizer.std
    labels = np.stack([sol.y for _, sol in pairs]).astype(np.int64)
    return feats, labels


def train(
    model: BiLstmModel,
    train_data: tuple[np.ndarray, np.ndarray],
    val_data: tuple[np.ndarray, np.ndarray],
    config: TrainConfig,
) -> TrainResult:
    """Minibatch Adam on standardized arrays; retains the best-validation epoch."""
    X_train, Y_train = train_data
    n = len(X_train)
    if n == 0:
        raise ValidationError("training split is empty")
    rng = np.random.default_rng(config.seed)
    state = AdamState.for_params(model.parameters())
    history: list[EpochStats] = []
    best_acc = -1.0
    best_epoch = -1
    best_params = model.copy_parameters()
    t_start = time.perf_counter()
    model.training_mode = True
    try:
        for epoch in range(config.max_epochs):
            t_epoch = time.perf_counter()
            order = rng.permutation(n)
            total_loss = 0.0
            for start in range(0, n, config.batch_size):
                idx = order[start : start + config.batch_size]
                loss, grads = batch_loss_and_grads(model, X_train[idx], Y_train[idx], rng)
                if not np.isfinite(loss):
                    raise DivergenceError(f"non-finite training loss at epoch {epoch}")
                params, state = adam_step(model.parameters(), grads, state, config)
                model.set_parameters(params)
                total_loss += loss * len(idx)
            train_loss = total_loss / n
            val_acc = accuracy_on_arrays(model, *val_data)
            history.append(
                EpochStats(
                    epoch=epoch,
                    train_loss=train_loss,
                    val_accuracy=val_acc,
                    seconds=time.perf_counter() - t_epoch,
                )
            )
            if val_acc > best_acc:
                best_acc = val_acc
                best_epoch = epoch
                best_params = model.copy_parameters()
            elif epoch - best_epoch >= config.early_stop_patience:
                break
    finally:
        model.training_mode = False
    model.set_parameters(best_params)
    return TrainResult(
        model=model,
        history=history,
        best_epoch=best_epoch,
        total_seconds=time.perf_counter() - t_start,
    )


@dataclass(frozen=True)
class HyperPoint:
    layers: int
    units: int
    dropout: float
    learning_rate: float


TUNE_RANGES = {
    "layers": (2, 6),
    "units": (10, 150),
    "dropout": (0.1, 0.5),
    "learning_rate": (0.001, 0.1),
}


@dataclass(frozen=True)
class TrialResult:
    point: HyperPoint
    val_accuracy: float
    best_epoch: int


def tune_hyperparameters(
    grid: list[HyperPoint],
    train_data: tuple[np.ndarray, np.ndarray],
    val_data: tuple[np.ndarray, np.ndarray],
    config: TrainConfig,
    standardizer: Standardizer | None = None,
    input_size: int = 4,
) -> tuple[BiLstmModel, list[TrialResult]]:
    """Train one model per grid point, return the best by validation accuracy.

    Ties resolve to the earliest grid point. Grid points outside the
    documented search ranges are rejected.
    """
    if not grid:
        raise ValidationError("hyperparameter grid is empty")
    for pt in grid:
        for name, value in (
            ("layers", pt.layers),
            ("units", pt.units),
            ("dropout", pt.dropout),
            ("learning_rate", pt.learning_rate),
        ):
            lo, hi = TUNE_RANGES[name]
            if not lo <= value <= hi:
                raise ValidationError(f"{name}={value} outside search range [{lo}, {hi}]")
    best_model: BiLstmModel | None = None
    best_acc = -1.0
    trials: list[TrialResult] = []
    for pt in grid:
        model = BiLstmModel.initialize(
            layer_count=pt.layers,
            width=pt.units,
            dropout_rate=pt.dropout,
            input_size=input_size,
            seed=config.seed,
            standardizer=standardizer,
        )
        result = train(model, train_data, val_data, replace(config, learning_rate=pt.learning_rate))
        acc = max(e.val_accuracy for e in result.history)
        trials.append(TrialResult(point=pt, val_accuracy=acc, best_epoch=result.best_epoch))
        if acc > best_acc:
            best_acc = acc
            best_model = result.model
    assert best_model is not None
    return best_model, trials
