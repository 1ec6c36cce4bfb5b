"""Two-channel graph convolutional models and full-batch training.

The forward pass runs graph convolutions over the original adjacency and,
when provided, over a rewired adjacency. Per layer, both channels share
one weight matrix by default and their outputs are fused late:

    z = lam * z_new + z_old

With lam == 0 (or no rewired adjacency) the new channel is skipped
entirely, so a fused model at lam == 0 is bit-identical to the plain
single-channel one under the same seed. An optional high-pass branch adds
sigma((I - A_hat) z w_hp) to each channel's sigma(A_hat z w), with its own
weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .autodiff import (
    GradTape,
    Tensor,
    add,
    backward,
    dropout,
    masked_cross_entropy,
    matmul,
    propagate,
    relu,
    row_softmax,
    scale,
)
from .graph import NormalizedAdjacency
from .io import Split
from .optim import AdamState, adam_step

__all__ = [
    "ModelConfig",
    "TrainConfig",
    "TrainResult",
    "EpochRecord",
    "init_params",
    "gcn_layer",
    "high_pass_layer",
    "hignn_forward",
    "predict_logits",
    "predict_proba",
    "evaluate",
    "train",
]

# Weight-role ids used to key initialization streams, so the same matrix
# gets the same values whether or not the other roles exist.
_ROLES = {"w": 0, "w_new": 1, "w_hp": 2, "w_hp_new": 3}
_DROPOUT_STREAM = 1


@dataclass(frozen=True)
class ModelConfig:
    hidden_dim: int = 16
    n_layers: int = 2
    lam: float = 1.0
    use_high_pass: bool = False
    dropout: float = 0.5
    activation: str = "relu"
    shared_fusion_weights: bool = True

    def __post_init__(self):
        if self.n_layers < 1:
            raise ValueError(f"n_layers must be at least 1, got {self.n_layers}")
        if self.hidden_dim < 1:
            raise ValueError(f"hidden_dim must be at least 1, got {self.hidden_dim}")
        if self.lam < 0.0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must lie in [0, 1), got {self.dropout}")
        if self.activation != "relu":
            raise ValueError(f"unsupported activation {self.activation!r}")


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.01
    weight_decay: float = 5e-4
    max_epochs: int = 2000
    patience: int = 40
    seed: int = 0

    def __post_init__(self):
        if self.lr <= 0.0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if self.weight_decay < 0.0:
            raise ValueError(f"weight_decay must be nonnegative, got {self.weight_decay}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be at least 1, got {self.max_epochs}")
        if not 1 <= self.patience <= self.max_epochs:
            raise ValueError(
                f"patience must lie in [1, max_epochs], got patience={self.patience}, "
                f"max_epochs={self.max_epochs}"
            )


def _layer_dims(feature_dim: int, n_classes: int, config: ModelConfig) -> list[int]:
    return [feature_dim] + [config.hidden_dim] * (config.n_layers - 1) + [n_classes]


def _glorot(seed: int, layer: int, role: str, fan_in: int, fan_out: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0, layer, _ROLES[role]]))
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_params(
    feature_dim: int,
    n_classes: int,
    config: ModelConfig,
    seed: int,
    two_channel: bool,
) -> dict[str, np.ndarray]:
    """Glorot-uniform weights, one stream per (seed, layer, role).

    Per-role streams keep the shared weights identical across model
    variants with the same seed, e.g. a fused model at lam == 0 and the
    plain single-channel model.
    """
    dims = _layer_dims(feature_dim, n_classes, config)
    params = {}
    separate = two_channel and not config.shared_fusion_weights
    for i in range(config.n_layers):
        fi, fo = dims[i], dims[i + 1]
        params[f"layer{i}.w"] = _glorot(seed, i, "w", fi, fo)
        if separate:
            params[f"layer{i}.w_new"] = _glorot(seed, i, "w_new", fi, fo)
        if config.use_high_pass:
            params[f"layer{i}.w_hp"] = _glorot(seed, i, "w_hp", fi, fo)
            if separate:
                params[f"layer{i}.w_hp_new"] = _glorot(seed, i, "w_hp_new", fi, fo)
    return params


def gcn_layer(
    a_hat: NormalizedAdjacency, z: np.ndarray, w: np.ndarray, activate: bool = True
) -> np.ndarray:
    """Single low-pass convolution: relu(a_hat @ z @ w), logits when not activated."""
    out = a_hat.matmul(np.asarray(z, dtype=np.float64) @ np.asarray(w, dtype=np.float64))
    return np.maximum(out, 0.0) if activate else out


def high_pass_layer(
    a_hat: NormalizedAdjacency, z: np.ndarray, w_hp: np.ndarray, activate: bool = True
) -> np.ndarray:
    """High-pass branch: relu((I - a_hat) @ z @ w_hp)."""
    out = a_hat.high_pass_matmul(
        np.asarray(z, dtype=np.float64) @ np.asarray(w_hp, dtype=np.float64)
    )
    return np.maximum(out, 0.0) if activate else out


def _channel(
    adj: NormalizedAdjacency,
    zin: Tensor,
    params: dict[str, Tensor],
    layer: int,
    w_key: str,
    hp_key: str,
    config: ModelConfig,
    tape: GradTape | None,
    activate: bool,
) -> Tensor:
    out = propagate(adj, matmul(zin, params[f"layer{layer}.{w_key}"], tape), tape)
    if activate:
        out = relu(out, tape)
    if config.use_high_pass:
        hp = propagate(
            adj, matmul(zin, params[f"layer{layer}.{hp_key}"], tape), tape, high_pass=True
        )
        if activate:
            hp = relu(hp, tape)
        out = add(out, hp, tape)
    return out


def hignn_forward(
    a_hat: NormalizedAdjacency,
    a_hat_new: NormalizedAdjacency | None,
    x: Tensor,
    params: dict[str, Tensor],
    config: ModelConfig,
    training: bool = False,
    rng: np.random.Generator | None = None,
    tape: GradTape | None = None,
) -> Tensor:
    """Logits of the fused model.

    One dropout mask per layer input, drawn before the channel split so
    both channels see the same dropped activations.
    """
    if a_hat_new is not None and a_hat_new.n != a_hat.n:
        raise ValueError(
            f"adjacencies cover different node sets: {a_hat.n} vs {a_hat_new.n}"
        )
    fuse = a_hat_new is not None and config.lam != 0.0
    shared = config.shared_fusion_weights
    z = x
    for layer in range(config.n_layers):
        last = layer == config.n_layers - 1
        zin = dropout(z, config.dropout, rng, tape, training) if training else z
        z_old = _channel(a_hat, zin, params, layer, "w", "w_hp", config, tape, not last)
        if fuse:
            z_new = _channel(
                a_hat_new,
                zin,
                params,
                layer,
                "w" if shared else "w_new",
                "w_hp" if shared else "w_hp_new",
                config,
                tape,
                not last,
            )
            z = add(scale(z_new, config.lam, tape), z_old, tape)
        else:
            z = z_old
    return z


def _as_tensors(params: dict[str, np.ndarray], requires_grad: bool) -> dict[str, Tensor]:
    return {k: Tensor(v, requires_grad=requires_grad) for k, v in params.items()}


def predict_logits(
    params: dict[str, np.ndarray],
    a_hat: NormalizedAdjacency,
    a_hat_new: NormalizedAdjacency | None,
    features: np.ndarray,
    config: ModelConfig,
) -> np.ndarray:
    x = Tensor(features)
    out = hignn_forward(a_hat, a_hat_new, x, _as_tensors(params, False), config)
    return out.data


def predict_proba(
    params: dict[str, np.ndarray],
    a_hat: NormalizedAdjacency,
    a_hat_new: NormalizedAdjacency | None,
    features: np.ndarray,
    config: ModelConfig,
) -> np.ndarray:
    logits = predict_logits(params, a_hat, a_hat_new, features, config)
    return row_softmax(Tensor(logits)).data


def _accuracy(logits: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    # argmax takes the lowest class index on ties, which is the tie-break
    # contract.
    pred = np.argmax(logits[mask], axis=1)
    return float(np.mean(pred == labels[mask]))


def evaluate(
    params: dict[str, np.ndarray],
    a_hat: NormalizedAdjacency,
    a_hat_new: NormalizedAdjacency | None,
    features: np.ndarray,
    labels: np.ndarray,
    mask: np.ndarray,
    config: ModelConfig,
) -> float:
    """Argmax accuracy over ``mask`` in evaluation mode."""
    mask = np.asarray(mask, dtype=np.int64)
    if mask.size == 0:
        raise ValueError("mask must be nonempty")
    logits = predict_logits(params, a_hat, a_hat_new, features, config)
    return _accuracy(logits, np.asarray(labels, dtype=np.int64), mask)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_acc: float


@dataclass
class TrainResult:
    params: dict[str, np.ndarray]
    trace: list[EpochRecord] = field(repr=False)
    best_epoch: int = 0
    best_val_acc: float = 0.0
    test_acc: float = float("nan")
    seed: int = 0


def train(
    features: np.ndarray,
    labels: np.ndarray,
    a_hat: NormalizedAdjacency,
    a_hat_new: NormalizedAdjacency | None,
    split: Split,
    model_config: ModelConfig,
    train_config: TrainConfig,
) -> TrainResult:
    """Full-batch training with early stopping on validation accuracy.

    Keeps the parameters of the first epoch achieving the best validation
    accuracy; stops after ``patience`` epochs without strict improvement.
    Deterministic per seed: weight init and the dropout stream derive from
    it, nothing else draws randomness.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if split.train.size == 0:
        raise ValueError("train mask must be nonempty")
    if split.val.size == 0:
        raise ValueError("validation mask must be nonempty (needed for early stopping)")
    n_classes = int(labels.max()) + 1
    two_channel = a_hat_new is not None
    arrays = init_params(
        features.shape[1], n_classes, model_config, train_config.seed, two_channel
    )
    params = _as_tensors(arrays, requires_grad=True)
    x = Tensor(features)
    drop_rng = np.random.default_rng(
        np.random.SeedSequence([train_config.seed, _DROPOUT_STREAM])
    )
    state = AdamState()
    trace: list[EpochRecord] = []
    best_val = -1.0
    best_epoch = 0
    best_params = {k: v.data.copy() for k, v in params.items()}
    stall = 0

    for epoch in range(1, train_config.max_epochs + 1):
        tape = GradTape()
        for t in params.values():
            t.zero_grad()
        logits = hignn_forward(
            a_hat, a_hat_new, x, params, model_config, training=True, rng=drop_rng, tape=tape
        )
        loss = masked_cross_entropy(logits, labels, split.train, tape)
        backward(tape, loss)
        if not np.isfinite(loss.data[0, 0]):
            raise FloatingPointError(
                f"non-finite training loss at epoch {epoch}; "
                "lower the learning rate"
            )
        grads = {k: t.grad for k, t in params.items() if t.grad is not None}
        updated = adam_step(
            {k: t.data for k, t in params.items()},
            grads,
            state,
            lr=train_config.lr,
            weight_decay=train_config.weight_decay,
        )
        for k, t in params.items():
            t.data = updated[k]

        eval_logits = hignn_forward(a_hat, a_hat_new, x, params, model_config)
        val_acc = _accuracy(eval_logits.data, labels, split.val)
        trace.append(EpochRecord(epoch=epoch, train_loss=float(loss.data[0, 0]), val_acc=val_acc))
        if val_acc > best_val:
            best_val = val_acc
            best_epoch = epoch
            best_params = {k: t.data.copy() for k, t in params.items()}
            stall = 0
        else:
            stall += 1
            if stall >= train_config.patience:
                break

    test_acc = float("nan")
    if split.test.size:
        test_acc = evaluate(
            best_params, a_hat, a_hat_new, features, labels, split.test, model_config
        )
    return TrainResult(
        params=best_params,
        trace=trace,
        best_epoch=best_epoch,
        best_val_acc=best_val,
        test_acc=test_acc,
        seed=train_config.seed,
    )
