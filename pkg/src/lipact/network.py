"""Minimal feed-forward classifier with hand-written backprop and Adam.

Hidden layers share one activation kind, but trainable kinds (PReLU,
PSwish) keep an independent scalar per layer.  The output layer is
linear; softmax cross-entropy is applied by the loss.  Training is a pure
function of (architecture, dataset, config): ``train`` re-initializes the
weights from the config seed before the first step, so two calls with
equal inputs produce bit-identical histories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import activations
from .activations import ActivationSpec
from .errors import DataError, ParameterError, ShapeError

__all__ = [
    "LayerSpec",
    "Network",
    "Gradients",
    "TrainConfig",
    "TrainResult",
    "AdamState",
    "adam_step",
    "softmax_cross_entropy",
    "train",
    "gradient_check",
    "save_checkpoint",
    "load_checkpoint",
]


@dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    activation: ActivationSpec
    trainable_af: bool


@dataclass
class Gradients:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    af_params: list[float] | None  # per hidden layer, trainable kinds only


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    batch_size: int
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    l2: float = 0.0

    def __post_init__(self):
        if self.epochs < 0:
            raise ParameterError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ParameterError("batch_size must be >= 1")
        if not self.learning_rate > 0:
            raise ParameterError("learning_rate must be > 0")
        if not 0 < self.adam_beta1 < 1 or not 0 < self.adam_beta2 < 1:
            raise ParameterError("adam betas must be in (0, 1)")
        if not self.adam_eps > 0:
            raise ParameterError("adam_eps must be > 0")
        if self.l2 < 0:
            raise ParameterError("l2 must be >= 0")


@dataclass
class TrainResult:
    loss_curve: list[float]
    final_train_accuracy: float
    final_test_accuracy: float | None
    learned_af_params: list[float] | None


class Network:
    """Fully connected net: ``sizes = [in, hidden..., out]``.

    Weight matrices have shape (out_dim, in_dim) and act as ``a @ W.T + b``.
    He initialization: std sqrt(2 / in_dim), zero biases.  The final layer
    emits logits (identity activation).
    """

    def __init__(self, sizes, af: ActivationSpec, seed: int = 0):
        sizes = [int(s) for s in sizes]
        if len(sizes) < 2:
            raise ParameterError("need at least input and output sizes")
        if any(s < 1 for s in sizes):
            raise ParameterError("layer sizes must be >= 1")
        self.sizes = sizes
        self.af_kind = af
        self.initialize(seed)

    def initialize(self, seed: int):
        rng = np.random.default_rng(seed)
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            std = np.sqrt(2.0 / fan_in)
            self.weights.append(rng.standard_normal((fan_out, fan_in)) * std)
            self.biases.append(np.zeros(fan_out))
        self.afs = [self.af_kind] * self.n_hidden

    @property
    def n_hidden(self) -> int:
        return len(self.sizes) - 2

    @property
    def trainable(self) -> bool:
        return self.n_hidden > 0 and self.af_kind.trainable

    @property
    def af_params(self) -> list[float] | None:
        if not self.trainable:
            return None
        return [af.trainable_value for af in self.afs]

    def layer_specs(self) -> list[LayerSpec]:
        specs = [
            LayerSpec(self.sizes[l], self.sizes[l + 1], self.afs[l],
                      self.afs[l].trainable)
            for l in range(self.n_hidden)
        ]
        specs.append(LayerSpec(self.sizes[-2], self.sizes[-1],
                               ActivationSpec("identity"), False))
        return specs

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.sizes[0]:
            raise ShapeError(
                f"expected input of shape (n, {self.sizes[0]}), got {x.shape}"
            )
        return x

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Logits for a batch; no softmax applied."""
        a = self._check_input(x)
        for l in range(self.n_hidden):
            a = activations.eval(self.afs[l], a @ self.weights[l].T + self.biases[l])
        return a @ self.weights[-1].T + self.biases[-1]

    def _forward_trace(self, x):
        # keeps pre-activations for backprop
        a = [self._check_input(x)]
        z = []
        for l in range(self.n_hidden):
            z.append(a[-1] @ self.weights[l].T + self.biases[l])
            a.append(activations.eval(self.afs[l], z[-1]))
        logits = a[-1] @ self.weights[-1].T + self.biases[-1]
        return z, a, logits

    def predict(self, x: np.ndarray) -> np.ndarray:
        return np.argmax(self.forward(x), axis=1)

    def accuracy(self, features: np.ndarray, labels: np.ndarray) -> float:
        return float(np.mean(self.predict(features) == np.asarray(labels)))

    def loss(self, x: np.ndarray, y: np.ndarray) -> float:
        return softmax_cross_entropy(self.forward(x), np.asarray(y))[0]

    def loss_and_grads(self, x: np.ndarray, y: np.ndarray):
        """Mean softmax cross-entropy over the batch plus gradients for
        every weight, bias, and trainable activation scalar."""
        y = np.asarray(y)
        z, a, logits = self._forward_trace(x)
        loss, delta = softmax_cross_entropy(logits, y)

        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.biases)
        grads_af = [0.0] * self.n_hidden if self.trainable else None
        grads_w[-1] = delta.T @ a[-1]
        grads_b[-1] = delta.sum(axis=0)
        for l in range(self.n_hidden - 1, -1, -1):
            upstream = delta @ self.weights[l + 1]  # d loss / d a[l+1]
            if grads_af is not None:
                grads_af[l] = float(np.sum(
                    upstream * activations.trainable_param_grad(self.afs[l], z[l])
                ))
            delta = upstream * activations.derivative(self.afs[l], z[l])
            grads_w[l] = delta.T @ a[l]
            grads_b[l] = delta.sum(axis=0)
        return loss, Gradients(grads_w, grads_b, grads_af)

    # checkpoint plumbing

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "activations": [activations.descriptor(af) for af in self.afs],
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, state: dict) -> "Network":
        hidden = [activations.parse_descriptor(d) for d in state["activations"]]
        base = hidden[0] if hidden else ActivationSpec("identity")
        net = cls(state["sizes"], base)
        if len(hidden) != net.n_hidden:
            raise ShapeError(
                f"{len(hidden)} activation descriptors for {net.n_hidden} hidden layers"
            )
        net.afs = hidden
        net.weights = [np.asarray(w, dtype=np.float64) for w in state["weights"]]
        net.biases = [np.asarray(b, dtype=np.float64) for b in state["biases"]]
        for w, b, fan_in, fan_out in zip(
            net.weights, net.biases, net.sizes[:-1], net.sizes[1:]
        ):
            if w.shape != (fan_out, fan_in) or b.shape != (fan_out,):
                raise ShapeError(f"checkpoint weight shapes do not match {net.sizes}")
        return net


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy and d loss / d logits, log-sum-exp stabilized."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels)
    n, k = logits.shape
    if labels.shape != (n,):
        raise ShapeError(f"expected {n} labels, got shape {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise DataError(f"labels outside [0, {k})")
    m = logits.max(axis=1, keepdims=True)
    shifted = logits - m
    lse = m[:, 0] + np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(lse - logits[np.arange(n), labels]))
    p = np.exp(shifted)
    p /= p.sum(axis=1, keepdims=True)
    p[np.arange(n), labels] -= 1.0
    return loss, p / n


class AdamState:
    """First/second moment buffers plus step counter for one parameter list.

    ``decay`` flags which slots receive decoupled l2 weight decay (weight
    matrices, not biases or activation scalars).
    """

    def __init__(self, shapes, decay=None):
        self.t = 0
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]
        self.decay = list(decay) if decay is not None else [False] * len(shapes)
        if len(self.decay) != len(self.m):
            raise ShapeError("decay flags do not match parameter count")


def adam_step(state: AdamState, params, grads, config: TrainConfig):
    """One bias-corrected Adam update; returns new parameter values.

    Deterministic given identical inputs.  Scalars stay scalars; the
    ``l2`` term is applied as decoupled weight decay on flagged slots.
    """
    if len(params) != len(state.m) or len(grads) != len(state.m):
        raise ShapeError("parameter/gradient count does not match state")
    state.t += 1
    bc1 = 1.0 - config.adam_beta1 ** state.t
    bc2 = 1.0 - config.adam_beta2 ** state.t
    out = []
    for i, (p, g) in enumerate(zip(params, grads)):
        g = np.asarray(g, dtype=np.float64)
        if np.shape(p) != g.shape:
            raise ShapeError(f"gradient shape {g.shape} for parameter {np.shape(p)}")
        state.m[i] = config.adam_beta1 * state.m[i] + (1.0 - config.adam_beta1) * g
        state.v[i] = config.adam_beta2 * state.v[i] + (1.0 - config.adam_beta2) * np.square(g)
        step = config.learning_rate * (state.m[i] / bc1) / (np.sqrt(state.v[i] / bc2) + config.adam_eps)
        new = p - step
        if state.decay[i] and config.l2 > 0:
            new = new - config.learning_rate * config.l2 * p
        out.append(new)
    return out


def train(net: Network, train_data, test_data, config: TrainConfig) -> TrainResult:
    """Adam training loop.  Re-initializes ``net`` from ``config.seed``.

    Each epoch records the sample-weighted mean of the per-batch losses
    (measured before the parameter update).  With epochs=0 the loss curve
    is empty and accuracies reflect the fresh initialization.
    """
    features = np.asarray(train_data.features, dtype=np.float64)
    labels = np.asarray(train_data.labels, dtype=np.int64)
    n = features.shape[0]
    if n == 0:
        raise ParameterError("cannot train on an empty dataset")
    net.initialize(config.seed)
    rng = np.random.default_rng(config.seed)

    k = len(net.weights)
    shapes = [w.shape for w in net.weights] + [b.shape for b in net.biases]
    decay = [True] * k + [False] * k
    if net.trainable:
        shapes += [()] * net.n_hidden
        decay += [False] * net.n_hidden
    opt = AdamState(shapes, decay)

    curve = []
    for _ in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            loss, grads = net.loss_and_grads(features[idx], labels[idx])
            total += loss * idx.size
            params = net.weights + net.biases
            flat_grads = grads.weights + grads.biases
            if net.trainable:
                params = params + [af.trainable_value for af in net.afs]
                flat_grads = flat_grads + grads.af_params
            updated = adam_step(opt, params, flat_grads, config)
            net.weights = updated[:k]
            net.biases = updated[k:2 * k]
            if net.trainable:
                for l, value in enumerate(updated[2 * k:]):
                    value = float(value)
                    if net.af_kind.kind == "prelu":
                        value = max(value, 0.0)  # slope must stay valid
                    net.afs[l] = net.afs[l].with_trainable_value(value)
        curve.append(total / n)

    train_acc = net.accuracy(features, labels)
    test_acc = None
    if test_data is not None:
        test_acc = net.accuracy(np.asarray(test_data.features, dtype=np.float64),
                                np.asarray(test_data.labels))
    return TrainResult(curve, train_acc, test_acc, net.af_params)


def gradient_check(net: Network, x, y, h: float = 1e-5) -> float:
    """Max relative error between backprop and central differences.

    Relative error is ``|ga - gn| / max(|ga|, |gn|, 1e-8)`` so near-zero
    gradient pairs do not blow up the ratio.
    """
    if not h > 0:
        raise ParameterError("h must be > 0")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    _, grads = net.loss_and_grads(x, y)

    worst = 0.0

    def probe(read, write, analytic):
        nonlocal worst
        base = read()
        write(base + h)
        hi = net.loss(x, y)
        write(base - h)
        lo = net.loss(x, y)
        write(base)
        numeric = (hi - lo) / (2.0 * h)
        err = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
        worst = max(worst, err)

    for l, w in enumerate(net.weights):
        for pos in np.ndindex(w.shape):
            probe(lambda w=w, pos=pos: w[pos],
                  lambda v, w=w, pos=pos: w.__setitem__(pos, v),
                  grads.weights[l][pos])
    for l, b in enumerate(net.biases):
        for pos in np.ndindex(b.shape):
            probe(lambda b=b, pos=pos: b[pos],
                  lambda v, b=b, pos=pos: b.__setitem__(pos, v),
                  grads.biases[l][pos])
    if net.trainable:
        for l in range(net.n_hidden):
            def write_af(v, l=l):
                net.afs[l] = net.afs[l].with_trainable_value(float(v))
            probe(lambda l=l: net.afs[l].trainable_value, write_af,
                  grads.af_params[l])
    return worst


def save_checkpoint(net: Network, path: str):
    with open(path, "w") as fh:
        json.dump(net.to_dict(), fh)


def load_checkpoint(path: str) -> Network:
    with open(path) as fh:
        return Network.from_dict(json.load(fh))
