"""Trainable classification head: BiLSTM + dense + softmax.

Runs over frozen precomputed embeddings (a length-1 "sequence" in pooled
mode, or the token matrix). Gradients are derived by hand via
backpropagation through time; the optimizer is bias-corrected Adam with
optional L2 weight decay. Everything is plain numpy at float64.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingStore
from .errors import ConfigError, DataError, NumericalError

GATES = "ifco"  # input, forget, candidate, output
DIRECTIONS = ("fw", "bw")

BINARY_CE = "binary"
CATEGORICAL_CE = "categorical"

PROB_FLOOR = 1e-12


class HeadParams:
    """All trainable arrays, keyed ``<dir>.<W|U|b><gate>`` plus dense.W/b."""

    def __init__(self, dim: int, hidden: int, num_classes: int, arrays: dict):
        self.dim = dim
        self.hidden = hidden
        self.num_classes = num_classes
        self.arrays = arrays

    @classmethod
    def keys_for(cls, dim: int, hidden: int, num_classes: int):
        shapes = {}
        for direction in DIRECTIONS:
            for gate in GATES:
                shapes[f"{direction}.W{gate}"] = (dim, hidden)
                shapes[f"{direction}.U{gate}"] = (hidden, hidden)
                shapes[f"{direction}.b{gate}"] = (hidden,)
        shapes["dense.W"] = (2 * hidden, num_classes)
        shapes["dense.b"] = (num_classes,)
        return shapes

    @classmethod
    def initialize(cls, dim: int, hidden: int, num_classes: int, rng) -> "HeadParams":
        """Symmetric uniform init scaled by fan-in; forget-gate bias +1."""
        arrays = {}
        for key, shape in cls.keys_for(dim, hidden, num_classes).items():
            if key.endswith(".b"):
                arrays[key] = np.zeros(shape)
            elif ".b" in key:
                bias = np.zeros(shape)
                if key.endswith("bf"):
                    bias += 1.0
                arrays[key] = bias
            else:
                bound = 1.0 / np.sqrt(shape[0])
                arrays[key] = rng.uniform(-bound, bound, size=shape)
        return cls(dim, hidden, num_classes, arrays)

    def zeros_like(self) -> dict:
        return {k: np.zeros_like(v) for k, v in self.arrays.items()}

    def copy(self) -> "HeadParams":
        return HeadParams(
            self.dim, self.hidden, self.num_classes,
            {k: v.copy() for k, v in self.arrays.items()},
        )


@dataclass(frozen=True)
class Hyperparams:
    """Training-loop settings; presets mirror the two published bundles."""

    batch_size: int = 32
    learning_rate: float = 3e-5
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.0
    max_seq_length: int = 128
    epochs: int = 10
    loss_kind: str = BINARY_CE
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ConfigError("batch size must be at least 1")
        if self.learning_rate <= 0:
            raise ConfigError("learning rate must be positive")
        if self.epochs < 0:
            raise ConfigError("epochs must be nonnegative")
        if self.loss_kind not in (BINARY_CE, CATEGORICAL_CE):
            raise ConfigError(f"unknown loss kind: {self.loss_kind!r}")


PRESETS = {
    "binary": Hyperparams(
        batch_size=32, learning_rate=3e-5, epsilon=1e-8, weight_decay=0.0,
        max_seq_length=128, epochs=10, loss_kind=BINARY_CE,
    ),
    "fine-grained": Hyperparams(
        batch_size=64, learning_rate=1e-4, epsilon=1e-8, weight_decay=1e-5,
        max_seq_length=256, epochs=15, loss_kind=CATEGORICAL_CE,
    ),
}


def preset(name: str, **overrides) -> Hyperparams:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return replace(PRESETS[name], **overrides)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _lstm_direction(params: HeadParams, prefix: str, inputs: np.ndarray):
    """Run one LSTM direction over (n, d) inputs; returns states for BPTT."""
    a = params.arrays
    n = inputs.shape[0]
    h = params.hidden
    steps = []
    h_prev = np.zeros(h)
    c_prev = np.zeros(h)
    for t in range(n):
        x = inputs[t]
        i = _sigmoid(x @ a[f"{prefix}.Wi"] + h_prev @ a[f"{prefix}.Ui"] + a[f"{prefix}.bi"])
        f = _sigmoid(x @ a[f"{prefix}.Wf"] + h_prev @ a[f"{prefix}.Uf"] + a[f"{prefix}.bf"])
        g = np.tanh(x @ a[f"{prefix}.Wc"] + h_prev @ a[f"{prefix}.Uc"] + a[f"{prefix}.bc"])
        o = _sigmoid(x @ a[f"{prefix}.Wo"] + h_prev @ a[f"{prefix}.Uo"] + a[f"{prefix}.bo"])
        c = f * c_prev + i * g
        tc = np.tanh(c)
        h_t = o * tc
        steps.append((x, h_prev, c_prev, i, f, g, o, c, tc, h_t))
        h_prev, c_prev = h_t, c
    return steps


def forward(params: HeadParams, inputs: np.ndarray):
    """Probabilities plus the cache backward() needs.

    inputs: (n, d) sequence view of one review; pooled input is n = 1.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim == 1:
        inputs = inputs.reshape(1, -1)
    if inputs.ndim != 2 or inputs.shape[1] != params.dim:
        raise DataError(
            f"input of shape {inputs.shape} does not match head dimension {params.dim}"
        )
    if inputs.shape[0] < 1:
        raise DataError("input sequence must have at least one step")
    fw_steps = _lstm_direction(params, "fw", inputs)
    bw_steps = _lstm_direction(params, "bw", inputs[::-1])
    final = np.concatenate([fw_steps[-1][-1], bw_steps[-1][-1]])
    logits = final @ params.arrays["dense.W"] + params.arrays["dense.b"]
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    probs = exp / exp.sum()
    cache = {
        "inputs": inputs, "fw": fw_steps, "bw": bw_steps,
        "final": final, "probs": probs,
    }
    return probs, cache


def loss(probs: np.ndarray, label: int, kind: str = CATEGORICAL_CE) -> float:
    """Cross-entropy of one prediction, clamped away from log(0)."""
    K = len(probs)
    if not 0 <= label < K:
        raise DataError(f"label {label} out of range for {K} classes")
    if kind == BINARY_CE:
        if K != 2:
            raise ConfigError("binary cross-entropy requires exactly 2 classes")
        p_pos = np.clip(probs[1], PROB_FLOOR, 1 - PROB_FLOOR)
        y = float(label == 1)
        return float(-(y * np.log(p_pos) + (1 - y) * np.log(1 - p_pos)))
    if kind == CATEGORICAL_CE:
        return float(-np.log(max(probs[label], PROB_FLOOR)))
    raise ConfigError(f"unknown loss kind: {kind!r}")


def _backprop_direction(params: HeadParams, prefix: str, steps, d_final, grads):
    """BPTT through one direction, accumulating into grads in place."""
    a = params.arrays
    dh = d_final.copy()
    dc = np.zeros(params.hidden)
    dx = np.zeros_like(steps[0][0]) if steps else None
    for t in range(len(steps) - 1, -1, -1):
        x, h_prev, c_prev, i, f, g, o, c, tc, h_t = steps[t]
        do = dh * tc * o * (1 - o)
        dc = dc + dh * o * (1 - tc * tc)
        di = dc * g * i * (1 - i)
        df = dc * c_prev * f * (1 - f)
        dg = dc * i * (1 - g * g)
        for gate, da in zip(GATES, (di, df, dg, do)):
            grads[f"{prefix}.W{gate}"] += np.outer(x, da)
            grads[f"{prefix}.U{gate}"] += np.outer(h_prev, da)
            grads[f"{prefix}.b{gate}"] += da
        dh = (
            di @ a[f"{prefix}.Ui"].T
            + df @ a[f"{prefix}.Uf"].T
            + dg @ a[f"{prefix}.Uc"].T
            + do @ a[f"{prefix}.Uo"].T
        )
        dc = dc * f


def backward(params: HeadParams, cache: dict, label: int) -> dict:
    """Analytic gradient of the clamped cross-entropy w.r.t. every array.

    Valid for both loss kinds: with a 2-way softmax the binary and
    categorical cross-entropies coincide, so d(loss)/d(logits) is always
    probs minus the one-hot target.
    """
    probs = cache["probs"]
    if not 0 <= label < params.num_classes:
        raise DataError(f"label {label} out of range")
    grads = params.zeros_like()
    if probs[label] <= PROB_FLOOR:
        # loss is sitting on the clamp floor: locally constant
        return grads
    dlogits = probs.copy()
    dlogits[label] -= 1.0
    final = cache["final"]
    grads["dense.W"] += np.outer(final, dlogits)
    grads["dense.b"] += dlogits
    d_final = params.arrays["dense.W"] @ dlogits
    h = params.hidden
    _backprop_direction(params, "fw", cache["fw"], d_final[:h], grads)
    _backprop_direction(params, "bw", cache["bw"], d_final[h:], grads)
    return grads


class AdamState:
    """First/second moment accumulators plus the step counter."""

    def __init__(self, params: HeadParams):
        self.m = params.zeros_like()
        self.v = params.zeros_like()
        self.t = 0


def adam_step(params: HeadParams, grads: dict, state: AdamState, hyper: Hyperparams):
    """One bias-corrected Adam update, in place.

    Weight decay enters as an additive L2 term (decay * param) on the
    gradient before the moment updates.
    """
    state.t += 1
    t = state.t
    b1, b2 = hyper.beta1, hyper.beta2
    for key, param in params.arrays.items():
        g = grads[key]
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"non-finite gradient for {key!r} at step {t}")
        if hyper.weight_decay:
            g = g + hyper.weight_decay * param
        m = state.m[key]
        v = state.v[key]
        m *= b1
        m += (1 - b1) * g
        v *= b2
        v += (1 - b2) * g * g
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        param -= hyper.learning_rate * m_hat / (np.sqrt(v_hat) + hyper.epsilon)


@dataclass
class EpochStats:
    loss: float
    accuracy: float


def train(
    store: EmbeddingStore,
    hyper: Hyperparams,
    num_classes: int,
    hidden: int = 64,
):
    """Full training loop; deterministic given (store, hyper, hidden).

    Returns the trained parameters and the per-epoch (loss, accuracy)
    history. Gradients within a batch are averaged in a fixed order.
    """
    ids = store.ids()
    if not ids:
        raise DataError("cannot train on an empty store")
    for rid in ids:
        if not 0 <= store.get(rid).label_index < num_classes:
            raise DataError(
                f"record {rid!r} has label {store.get(rid).label_index}, "
                f"outside {num_classes} classes"
            )
    rng = np.random.default_rng(hyper.seed)
    params = HeadParams.initialize(store.dim, hidden, num_classes, rng)
    state = AdamState(params)
    history: list[EpochStats] = []
    order = np.arange(len(ids))
    for _ in range(hyper.epochs):
        rng.shuffle(order)
        epoch_loss = 0.0
        correct = 0
        for start in range(0, len(ids), hyper.batch_size):
            batch = order[start : start + hyper.batch_size]
            batch_grads = params.zeros_like()
            for idx in batch:
                record = store.get(ids[idx])
                probs, cache = forward(params, store.sequence(ids[idx]))
                epoch_loss += loss(probs, record.label_index, hyper.loss_kind)
                if int(np.argmax(probs)) == record.label_index:
                    correct += 1
                sample_grads = backward(params, cache, record.label_index)
                for key in batch_grads:
                    batch_grads[key] += sample_grads[key]
            scale = 1.0 / len(batch)
            for key in batch_grads:
                batch_grads[key] *= scale
            adam_step(params, batch_grads, state, hyper)
        history.append(EpochStats(epoch_loss / len(ids), 100.0 * correct / len(ids)))
    return params, history


def predict(params: HeadParams, store: EmbeddingStore) -> list[int]:
    """Argmax class per review, ties broken toward the lower index."""
    if store.dim != params.dim:
        raise DataError(
            f"store dimension {store.dim} does not match head dimension {params.dim}"
        )
    labels = []
    for rid in store.ids():
        probs, _ = forward(params, store.sequence(rid))
        labels.append(int(np.argmax(probs)))
    return labels


def save_params(params: HeadParams, path):
    """Versioned header + shape manifest + little-endian float32 payload."""
    path = Path(path)
    keys = sorted(params.arrays)
    payload = b"".join(np.asarray(params.arrays[k], dtype="<f4").tobytes() for k in keys)
    with open(path, "wb") as f:
        f.write(f"HEAD v1 {params.dim} {params.hidden} {params.num_classes}\n".encode())
        for k in keys:
            dims = " ".join(str(s) for s in params.arrays[k].shape)
            f.write(f"{k} {dims}\n".encode())
        f.write(f"CRC {zlib.crc32(payload):08x}\n".encode())
        f.write(payload)


def load_params(path) -> HeadParams:
    path = Path(path)
    if not path.exists():
        raise DataError(f"params file not found: {path}")
    with open(path, "rb") as f:
        header = f.readline().decode().split()
        if len(header) != 5 or header[0] != "HEAD" or header[1] != "v1":
            raise DataError(f"bad params header in {path}")
        dim, hidden, num_classes = (int(x) for x in header[2:])
        expected = HeadParams.keys_for(dim, hidden, num_classes)
        shapes = {}
        for _ in range(len(expected)):
            parts = f.readline().decode().split()
            shapes[parts[0]] = tuple(int(x) for x in parts[1:])
        crc_line = f.readline().decode().split()
        payload = f.read()
    if shapes != expected:
        raise DataError(f"shape manifest mismatch in {path}")
    if len(crc_line) != 2 or crc_line[0] != "CRC" or zlib.crc32(payload) != int(crc_line[1], 16):
        raise DataError(f"params checksum mismatch in {path}")
    arrays = {}
    offset = 0
    floats = np.frombuffer(payload, dtype="<f4")
    for key in sorted(expected):
        size = int(np.prod(expected[key]))
        arrays[key] = floats[offset : offset + size].reshape(expected[key]).astype(np.float64)
        offset += size
    if offset != len(floats):
        raise DataError(f"params payload size mismatch in {path}")
    return HeadParams(dim, hidden, num_classes, arrays)
