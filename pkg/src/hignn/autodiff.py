"""Minimal reverse-mode gradient engine over dense float64 matrices.

A ``Tensor`` wraps a 2-D float64 array. Operations run eagerly in numpy;
when a ``GradTape`` is passed and some input requires gradients, the op
appends a record with a closure that maps the output gradient to input
gradients. ``backward`` replays the records in reverse. A fresh tape is
used for every training step.

Only what the models need is provided: matmul, sparse/dense adjacency
propagation, add, scale, relu, dropout, row softmax, and masked
cross-entropy.
"""

from __future__ import annotations

import numpy as np

from .graph import NormalizedAdjacency

__all__ = [
    "Tensor",
    "GradTape",
    "matmul",
    "propagate",
    "add",
    "scale",
    "relu",
    "dropout",
    "row_softmax",
    "masked_cross_entropy",
    "backward",
]


class Tensor:
    """2-D float64 matrix with an optional gradient slot."""

    __slots__ = ("data", "grad", "requires_grad")

    def __init__(self, data, requires_grad: bool = False):
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
        self.data = arr
        self.grad: np.ndarray | None = None
        self.requires_grad = bool(requires_grad)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self) -> str:
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"


class GradTape:
    """Ordered record of executed primitives; cleared between steps."""

    def __init__(self):
        self.records: list[tuple[Tensor, tuple[Tensor, ...], object]] = []

    def record(self, out: Tensor, inputs: tuple[Tensor, ...], backward_fn) -> None:
        self.records.append((out, inputs, backward_fn))

    def clear(self) -> None:
        self.records.clear()

    def __len__(self) -> int:
        return len(self.records)


def _result(data, inputs: tuple[Tensor, ...], tape: GradTape | None, backward_fn) -> Tensor:
    needs = any(t.requires_grad for t in inputs)
    out = Tensor(data, requires_grad=needs)
    if tape is not None and needs:
        tape.record(out, inputs, backward_fn)
    return out


def matmul(a: Tensor, b: Tensor, tape: GradTape | None = None) -> Tensor:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    data = a.data @ b.data

    def bw(g):
        return g @ b.data.T, a.data.T @ g

    return _result(data, (a, b), tape, bw)


def propagate(
    adj: NormalizedAdjacency,
    z: Tensor,
    tape: GradTape | None = None,
    high_pass: bool = False,
) -> Tensor:
    """adj @ z, or (I - adj) @ z for the high-pass variant.

    The adjacency is symmetric, so the backward map is the same operator
    applied to the output gradient.
    """
    if adj.n != z.shape[0]:
        raise ValueError(f"adjacency is {adj.n}x{adj.n}, input has {z.shape[0]} rows")
    op = adj.high_pass_matmul if high_pass else adj.matmul
    data = op(z.data)

    def bw(g):
        return (op(g),)

    return _result(data, (z,), tape, bw)


def add(a: Tensor, b: Tensor, tape: GradTape | None = None) -> Tensor:
    if a.shape != b.shape:
        raise ValueError(f"add shape mismatch: {a.shape} vs {b.shape}")

    def bw(g):
        return g, g

    return _result(a.data + b.data, (a, b), tape, bw)


def scale(a: Tensor, s: float, tape: GradTape | None = None) -> Tensor:
    s = float(s)

    def bw(g):
        return (g * s,)

    return _result(a.data * s, (a,), tape, bw)


def relu(a: Tensor, tape: GradTape | None = None) -> Tensor:
    mask = a.data > 0.0

    def bw(g):
        return (g * mask,)

    return _result(np.where(mask, a.data, 0.0), (a,), tape, bw)


def dropout(
    a: Tensor,
    rate: float,
    rng: np.random.Generator,
    tape: GradTape | None = None,
    training: bool = True,
) -> Tensor:
    """Inverted dropout: surviving entries are scaled by 1/(1-rate).

    Identity when not training or rate == 0 (no mask is drawn, so the
    random stream is untouched).
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must lie in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return a
    keep = rng.random(a.shape) >= rate
    factor = keep / (1.0 - rate)

    def bw(g):
        return (g * factor,)

    return _result(a.data * factor, (a,), tape, bw)


def row_softmax(a: Tensor, tape: GradTape | None = None) -> Tensor:
    shifted = a.data - a.data.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=1, keepdims=True)

    def bw(g):
        dot = (g * y).sum(axis=1, keepdims=True)
        return (y * (g - dot),)

    return _result(y, (a,), tape, bw)


def masked_cross_entropy(
    logits: Tensor,
    labels: np.ndarray,
    mask: np.ndarray,
    tape: GradTape | None = None,
) -> Tensor:
    """Mean negative log-softmax probability of the true class over ``mask``.

    ``mask`` is an index array of rows to score. Log-sum-exp stabilized.
    """
    mask = np.asarray(mask, dtype=np.int64)
    if mask.size == 0:
        raise ValueError("mask must be nonempty")
    labels = np.asarray(labels, dtype=np.int64)
    sub = logits.data[mask]
    y = labels[mask]
    shifted = sub - sub.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(lse - shifted[np.arange(mask.size), y]))

    def bw(g):
        soft = np.exp(shifted)
        soft /= soft.sum(axis=1, keepdims=True)
        soft[np.arange(mask.size), y] -= 1.0
        full = np.zeros_like(logits.data)
        full[mask] = soft * (float(g[0, 0]) / mask.size)
        return (full,)

    return _result(np.array([[loss]]), (logits,), tape, bw)


def backward(tape: GradTape, loss: Tensor) -> None:
    """Accumulate gradients of ``loss`` into every tensor on the tape."""
    if loss.data.size != 1:
        raise ValueError(f"backward needs a scalar loss, got shape {loss.shape}")
    loss.grad = np.ones_like(loss.data)
    for out, inputs, bw in reversed(tape.records):
        if out.grad is None:
            continue
        grads = bw(out.grad)
        for tensor, g in zip(inputs, grads):
            if g is None or not tensor.requires_grad:
                continue
            if tensor.grad is None:
                tensor.grad = g.copy() if g is out.grad else g
            else:
                tensor.grad = tensor.grad + g
