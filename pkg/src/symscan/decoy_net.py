"""The per-image decoy network: coordinates in, contour-vs-background out.

A deep fully-connected net (default 20 hidden layers of 200 rectified
units) trained with SGD + momentum under a one-cycle learning-rate
schedule.  The interesting output is not the classification itself but
the last hidden layer's activations, which downstream modules fingerprint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from symscan.errors import TrainingDivergedError


@dataclass
class MLPParams:
    """Weight matrices (out, in) and bias vectors, input to output order."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @property
    def layer_sizes(self) -> list[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    def copy(self) -> "MLPParams":
        return MLPParams([w.copy() for w in self.weights],
                         [b.copy() for b in self.biases])


@dataclass
class TrainConfig:
    epochs: int = 300
    batch_size: int = 512
    lr_max: float = 0.05
    momentum: tuple[float, float] = (0.85, 0.95)  # (low at peak lr, high)
    stop_accuracy: float = 0.999
    seed: int = 0


@dataclass
class TrainHistory:
    losses: list[float] = field(default_factory=list)
    accuracies: list[float] = field(default_factory=list)
    lrs: list[float] = field(default_factory=list)
    stopped_epoch: int = 0
    final_accuracy: float = 0.0


def init_mlp(seed: int, n_hidden: int = 20, width: int = 200,
             n_in: int = 2, n_out: int = 2) -> MLPParams:
    """He-style uniform initialization (variance 2/fan_in), zero biases."""
    rng = np.random.default_rng([5, seed])
    sizes = [n_in] + [width] * n_hidden + [n_out]
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = math.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, (fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MLPParams(weights, biases)


def _forward_cached(params: MLPParams, x: np.ndarray) -> list[np.ndarray]:
    """Activations per layer; [0] is the input, [-1] the logits."""
    acts = [x]
    h = x
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        h = np.maximum(h @ w.T + b, 0.0)
        acts.append(h)
    acts.append(h @ params.weights[-1].T + params.biases[-1])
    return acts


def forward(params: MLPParams, coords) -> tuple[np.ndarray, np.ndarray]:
    """Logits and last-hidden-layer activations for one point or a batch."""
    x = np.asarray(coords, dtype=np.float64)
    if not np.isfinite(x).all():
        raise ValueError("coordinates must be finite")
    single = x.ndim == 1
    acts = _forward_cached(params, np.atleast_2d(x))
    logits, penultimate = acts[-1], acts[-2]
    if single:
        return logits[0], penultimate[0]
    return logits, penultimate


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _loss_grad_correct(params: MLPParams, x: np.ndarray,
                       y: np.ndarray) -> tuple[float, MLPParams, int]:
    acts = _forward_cached(params, x)
    probs = _softmax(acts[-1])
    n = y.size
    n_correct = int((probs.argmax(axis=1) == y).sum())
    loss = float(-np.log(probs[np.arange(n), y] + 1e-300).mean())

    delta = probs
    delta[np.arange(n), y] -= 1.0
    delta /= n
    gw = [np.empty(0)] * len(params.weights)
    gb = [np.empty(0)] * len(params.biases)
    for layer in range(len(params.weights) - 1, -1, -1):
        gw[layer] = delta.T @ acts[layer]
        gb[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ params.weights[layer]) * (acts[layer] > 0)
    return loss, MLPParams(gw, gb), n_correct


def loss_and_grad(params: MLPParams, coords, labels) -> tuple[float, MLPParams]:
    """Mean softmax cross-entropy and its gradient (same shape as params)."""
    x = np.atleast_2d(np.asarray(coords, dtype=np.float64))
    y = np.asarray(labels, dtype=np.intp)
    if y.size == 0:
        raise ValueError("batch must be non-empty")
    loss, grads, _ = _loss_grad_correct(params, x, y)
    return loss, grads


def accuracy(params: MLPParams, data) -> float:
    """Fraction of points whose argmax logit matches; ties go to class 0."""
    logits, _ = forward(params, data.coords)
    return float((logits.argmax(axis=1) == data.labels).mean())


def one_cycle_lr(step: int, total_steps: int, lr_max: float,
                 warm_frac: float = 0.3, div_start: float = 25.0,
                 div_end: float = 1e4) -> float:
    """Linear ramp to lr_max over the first 30% of steps, cosine anneal after."""
    last = max(total_steps - 1, 1)
    warm = max(int(round(warm_frac * last)), 1)
    lr_start = lr_max / div_start
    if step <= warm:
        return lr_start + (lr_max - lr_start) * step / warm
    lr_end = lr_max / div_end
    t = (step - warm) / max(last - warm, 1)
    return lr_end + (lr_max - lr_end) * 0.5 * (1.0 + math.cos(math.pi * t))


def one_cycle_momentum(step: int, total_steps: int,
                       m_low: float = 0.85, m_high: float = 0.95,
                       warm_frac: float = 0.3) -> float:
    """Momentum cycled inversely to the learning rate."""
    last = max(total_steps - 1, 1)
    warm = max(int(round(warm_frac * last)), 1)
    if step <= warm:
        return m_high + (m_low - m_high) * step / warm
    t = (step - warm) / max(last - warm, 1)
    return m_high + (m_low - m_high) * 0.5 * (1.0 + math.cos(math.pi * t))


def train_one_cycle(params: MLPParams, data,
                    cfg: TrainConfig) -> tuple[MLPParams, TrainHistory]:
    """SGD-with-momentum under the one-cycle policy.

    Stops at the end of the first epoch whose (training) accuracy reaches
    cfg.stop_accuracy.  Raises TrainingDivergedError on non-finite loss.
    """
    coords = np.asarray(data.coords, dtype=np.float64)
    labels = np.asarray(data.labels, dtype=np.intp)
    n = labels.size
    if n == 0:
        raise ValueError("dataset must be non-empty")
    params = params.copy()
    vel = MLPParams([np.zeros_like(w) for w in params.weights],
                    [np.zeros_like(b) for b in params.biases])
    rng = np.random.default_rng([13, cfg.seed])
    steps_per_epoch = math.ceil(n / cfg.batch_size)
    total_steps = cfg.epochs * steps_per_epoch
    m_low, m_high = cfg.momentum

    hist = TrainHistory()
    step = 0
    for epoch in range(cfg.epochs):
        perm = rng.permutation(n)
        loss_sum = 0.0
        correct = 0
        lr = 0.0
        for start in range(0, n, cfg.batch_size):
            take = perm[start:start + cfg.batch_size]
            bx, by = coords[take], labels[take]
            lr = one_cycle_lr(step, total_steps, cfg.lr_max)
            mom = one_cycle_momentum(step, total_steps, m_low, m_high)
            loss, grads, n_correct = _loss_grad_correct(params, bx, by)
            if not math.isfinite(loss):
                raise TrainingDivergedError(
                    f"loss became non-finite at epoch {epoch}", epoch)
            loss_sum += loss * take.size
            correct += n_correct
            for w, b, gw, gb, vw, vb in zip(params.weights, params.biases,
                                            grads.weights, grads.biases,
                                            vel.weights, vel.biases):
                vw *= mom
                vw -= lr * gw
                w += vw
                vb *= mom
                vb -= lr * gb
                b += vb
            step += 1
        acc = correct / n
        hist.losses.append(loss_sum / n)
        hist.accuracies.append(acc)
        hist.lrs.append(lr)
        hist.stopped_epoch = epoch + 1
        if acc >= cfg.stop_accuracy:
            break
    hist.final_accuracy = hist.accuracies[-1] if hist.accuracies else 0.0
    return params, hist


def save_history_csv(path, hist: TrainHistory) -> None:
    with open(path, "w") as fh:
        fh.write("epoch,loss,accuracy,lr\n")
        for i, (lo, ac, lr) in enumerate(zip(hist.losses, hist.accuracies,
                                             hist.lrs), start=1):
            fh.write(f"{i},{lo!r},{ac!r},{lr!r}\n")


def save_mlp(path, params: MLPParams, meta: dict | None = None) -> None:
    """Flat little-endian float64 blob plus a JSON sidecar."""
    path = Path(path)
    blob = b"".join(np.ascontiguousarray(a, dtype="<f8").tobytes()
                    for w, b in zip(params.weights, params.biases)
                    for a in (w, b))
    path.write_bytes(blob)
    sidecar = {"layer_sizes": params.layer_sizes}
    if meta:
        sidecar.update(meta)
    path.with_suffix(".json").write_text(json.dumps(sidecar, indent=1,
                                                    sort_keys=True))


def load_mlp(path) -> tuple[MLPParams, dict]:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(".json").read_text())
    sizes = sidecar["layer_sizes"]
    raw = np.frombuffer(path.read_bytes(), dtype="<f8")
    weights = []
    biases = []
    pos = 0
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        weights.append(raw[pos:pos + fan_out * fan_in]
                       .reshape(fan_out, fan_in).copy())
        pos += fan_out * fan_in
        biases.append(raw[pos:pos + fan_out].copy())
        pos += fan_out
    if pos != raw.size:
        raise ValueError("parameter blob does not match the layer sizes")
    return MLPParams(weights, biases), sidecar
