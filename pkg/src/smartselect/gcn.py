"""Two-layer graph convolutional classifier written against numpy.

``Z = softmax(A_hat . relu(A_hat . X . W0) . W1)`` trained full-batch with
Adam on the masked negative log-likelihood plus L2 decay on ``W0``.
"""
from __future__ import annotations

import logging
import struct
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .graph import Graph, normalized_laplacian

log = logging.getLogger(__name__)

LOG_FLOOR = 1e-15
_MAGIC = b"GCN2"


class TrainingDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class Hyper:
    hidden_dim: int = 16
    learning_rate: float = 0.01
    weight_decay: float = 5e-4
    dropout_rate: float = 0.5
    epochs: int = 200
    seed: int = 0

    @classmethod
    def from_dict(cls, d: dict) -> "Hyper":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown hyperparameters: {sorted(extra)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class GcnModel:
    theta0: np.ndarray
    theta1: np.ndarray
    hyper: Hyper = field(default_factory=Hyper)

    def copy(self) -> "GcnModel":
        return GcnModel(self.theta0.copy(), self.theta1.copy(), self.hyper)

    @property
    def in_dim(self):
        return self.theta0.shape[0]

    @property
    def classes(self):
        return self.theta1.shape[1]


@dataclass
class TrainReport:
    loss_history: list
    train_accuracy: float
    test_accuracy: float | None
    epochs_run: int

    def to_json(self) -> dict:
        return asdict(self)


def glorot(rng, fan_in, fan_out):
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


def init_model(in_dim: int, hidden: int, classes: int, seed: int = 0, hyper: Hyper | None = None) -> GcnModel:
    if min(in_dim, hidden, classes) < 1:
        raise ValueError("all layer sizes must be >= 1")
    hyper = replace(hyper or Hyper(), hidden_dim=hidden, seed=seed)
    rng = np.random.default_rng(seed)
    return GcnModel(glorot(rng, in_dim, hidden), glorot(rng, hidden, classes), hyper)


def softmax(a):
    e = np.exp(a - a.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def _dropout(rng, x, rate):
    keep = 1.0 - rate
    m = (rng.random(x.shape) < keep) / keep
    return x * m, m


def _check_dims(m, a_hat, x):
    n = x.shape[0]
    if a_hat.shape != (n, n):
        raise ValueError(f"A_hat is {a_hat.shape}, expected ({n}, {n})")
    if x.shape[1] != m.in_dim:
        raise ValueError(f"features have {x.shape[1]} columns, model expects {m.in_dim}")


def _forward(m, a_hat, x, rng=None):
    """Forward pass keeping the intermediates backprop needs."""
    rate = m.hyper.dropout_rate if rng is not None else 0.0
    mask_x = mask_h = None
    if rate > 0:
        x, mask_x = _dropout(rng, x, rate)
    pre = a_hat @ (x @ m.theta0)
    h = np.maximum(pre, 0.0)
    hd = h
    if rate > 0:
        hd, mask_h = _dropout(rng, h, rate)
    z = softmax(a_hat @ (hd @ m.theta1))
    return z, h, (x, pre, hd, mask_h)


def forward(m: GcnModel, a_hat, x, train_mode: bool = False, rng=None):
    """Return ``(z, h)``: class probabilities and hidden activations.

    Dropout is only applied in ``train_mode``; pass ``rng`` to control it.
    """
    _check_dims(m, a_hat, x)
    if train_mode and rng is None:
        rng = np.random.default_rng(m.hyper.seed)
    z, h, _ = _forward(m, a_hat, x, rng if train_mode else None)
    return z, h


def nll_loss(z, labels, mask) -> float:
    idx = np.flatnonzero(mask) if np.asarray(mask).dtype == bool else np.asarray(mask)
    if len(idx) == 0:
        raise ValueError("loss mask is empty")
    p = z[idx, np.asarray(labels)[idx]]
    return float(-np.mean(np.log(np.maximum(p, LOG_FLOOR))))


def objective(m: GcnModel, a_hat, x, labels, mask, rng=None):
    """Training objective and its gradients with respect to both weights."""
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        raise ValueError("train mask is empty")
    z, h, (xd, pre, hd, mask_h) = _forward(m, a_hat, x, rng)
    y = np.asarray(labels)[idx]
    p = z[idx, y]
    loss = -np.mean(np.log(np.maximum(p, LOG_FLOOR)))
    loss += 0.5 * m.hyper.weight_decay * np.sum(m.theta0 ** 2)

    g_logits = np.zeros_like(z)
    g_logits[idx] = z[idx]
    g_logits[idx, y] -= 1.0
    # the log floor has zero slope below it
    g_logits[idx[p < LOG_FLOOR]] = 0.0
    g_logits /= len(idx)
    g_out = a_hat.T @ g_logits
    g1 = hd.T @ g_out
    g_h = g_out @ m.theta1.T
    if mask_h is not None:
        g_h = g_h * mask_h
    g_pre = g_h * (pre > 0)
    g0 = xd.T @ (a_hat.T @ g_pre) + m.hyper.weight_decay * m.theta0
    return float(loss), g0, g1


class Adam:
    def __init__(self, shapes, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        c1 = 1.0 - self.b1 ** self.t
        c2 = 1.0 - self.b2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.b1
            m += (1.0 - self.b1) * g
            v *= self.b2
            v += (1.0 - self.b2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def predict(m: GcnModel, a_hat, x) -> np.ndarray:
    z, _ = forward(m, a_hat, x)
    return np.argmax(z, axis=1)


def accuracy(pred, labels, mask) -> float:
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        raise ValueError("accuracy mask is empty")
    return float(np.mean(pred[idx] == np.asarray(labels)[idx]))


def train(m: GcnModel, a_hat, x, labels, train_mask, test_mask=None):
    """Fit ``m`` on the nodes in ``train_mask``; the input model is left as is.

    Returns the trained model and a :class:`TrainReport`. The loss history
    holds the dropout-free objective at the weights entering each epoch.
    """
    _check_dims(m, a_hat, x)
    train_mask = np.asarray(train_mask, dtype=bool)
    if not train_mask.any():
        raise ValueError("train mask is empty")
    hp = m.hyper
    out = m.copy()
    rng = np.random.default_rng(hp.seed + 1)
    opt = Adam([out.theta0.shape, out.theta1.shape], hp.learning_rate)
    history = []
    for epoch in range(hp.epochs):
        clean = objective(out, a_hat, x, labels, train_mask)[0] if hp.dropout_rate > 0 else None
        loss, g0, g1 = objective(out, a_hat, x, labels, train_mask, rng)
        if not (np.isfinite(loss) and np.isfinite(g0).all() and np.isfinite(g1).all()):
            raise TrainingDiverged(f"loss became {loss} at epoch {epoch}")
        history.append(loss if clean is None else clean)
        opt.step([out.theta0, out.theta1], [g0, g1])
    pred = predict(out, a_hat, x)
    test_acc = accuracy(pred, labels, test_mask) if test_mask is not None and np.any(test_mask) else None
    report = TrainReport(history, accuracy(pred, labels, train_mask), test_acc, hp.epochs)
    log.debug("trained %d epochs, final loss %s", hp.epochs, history[-1] if history else None)
    return out, report


def embeddings(m: GcnModel, a_hat, x) -> np.ndarray:
    """Hidden-layer activations ``relu(A_hat X W0)`` without dropout."""
    return forward(m, a_hat, x)[1]


def save_model(m: GcnModel, path) -> None:
    """Little-endian file: magic, three uint32 dims, then both weights as float64."""
    in_dim, hidden = m.theta0.shape
    classes = m.theta1.shape[1]
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", in_dim, hidden, classes))
        fh.write(np.ascontiguousarray(m.theta0, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(m.theta1, dtype="<f8").tobytes())


def load_model(path, hyper: Hyper | None = None) -> GcnModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != _MAGIC:
        raise ValueError(f"{path}: not a model file")
    in_dim, hidden, classes = struct.unpack_from("<III", blob, 4)
    body = np.frombuffer(blob, dtype="<f8", offset=16)
    if len(body) != in_dim * hidden + hidden * classes:
        raise ValueError(f"{path}: truncated or oversized weight block")
    t0 = body[:in_dim * hidden].reshape(in_dim, hidden).astype(np.float64)
    t1 = body[in_dim * hidden:].reshape(hidden, classes).astype(np.float64)
    hyper = replace(hyper or Hyper(), hidden_dim=hidden)
    return GcnModel(t0, t1, hyper)


def lambda_max(lap, steps: int = 100, tol: float = 1e-10) -> float:
    """Largest eigenvalue of a symmetric PSD matrix by power iteration.

    Falls back to 2.0, the upper bound for a normalized Laplacian, when the
    iteration does not settle.
    """
    n = lap.shape[0]
    if n == 0:
        return 2.0
    v = np.random.default_rng(0).random(n) + 0.5
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(steps):
        w = lap @ v
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 2.0
        new = float(v @ w)
        v = w / nrm
        if abs(new - lam) < tol:
            return new
        lam = new
    return 2.0


def chebyshev_filter(g: Graph, x, thetas, lmax: float | None = None) -> np.ndarray:
    """Apply ``sum_k thetas[k] T_k(L_s) x`` with ``L_s = 2 L / lmax - I``.

    ``L`` is the normalized Laplacian; ``lmax`` defaults to a power-iteration
    estimate of its top eigenvalue.
    """
    thetas = list(thetas)
    if len(thetas) < 1:
        raise ValueError("need at least one coefficient (K >= 0)")
    x = np.asarray(x, dtype=np.float64)
    lap = normalized_laplacian(g)
    if lmax is None:
        lmax = lambda_max(lap)
    scaled = (2.0 / lmax) * lap - sp.identity(g.n, format="csr")
    t_prev, t_cur = x, scaled @ x
    out = thetas[0] * t_prev
    if len(thetas) > 1:
        out = out + thetas[1] * t_cur
    for th in thetas[2:]:
        t_prev, t_cur = t_cur, 2.0 * (scaled @ t_cur) - t_prev
        out = out + th * t_cur
    return out
