"""Mini-batch training with binary cross-entropy and an adaptive-moment
optimizer, plus thresholded binary evaluation and per-epoch logging.

Datasets are anything with ``inputs`` (N x width float array) and
``targets`` (N binary vector) attributes; the rest of the package uses
``pipeline.WindowedDataset``. All runs are deterministic for a fixed seed:
row shuffling and dropout masks draw from one seeded generator, and batch
gradients come from fixed-order reductions.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from ._io import atomic_write_text
from .errors import EmptyDataset, NonFiniteLoss
from .nn.model import bce_with_grad

P_CLAMP = 1e-12  # probability clamp bound for the cross-entropy


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int = 32
    epochs: int = 100
    seed: int = 0
    patience: int | None = None  # stop after this many epochs without val-loss improvement
    min_delta: float = 1e-4      # improvement below this does not reset patience

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("beta1/beta2 must be in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def bce_loss(p, y):
    """Binary cross-entropy per element and d loss / d p.

    p is clamped to [1e-12, 1 - 1e-12] so saturated probabilities stay
    finite; batch loss is the caller's mean over elements.
    """
    return bce_with_grad(np.asarray(p, dtype=np.float64), np.asarray(y, dtype=np.float64))


class AdamState:
    """First/second moment accumulators plus the global step counter."""

    def __init__(self, m, v, step=0):
        self.m = m
        self.v = v
        self.step = step

    @classmethod
    def for_params(cls, params):
        return cls(
            m={k: np.zeros_like(a) for k, a in params.items()},
            v={k: np.zeros_like(a) for k, a in params.items()},
        )


def adam_step(params, grads, state, cfg, t):
    """One bias-corrected adaptive-moment update, in place.

    m <- b1*m + (1-b1)*g ; v <- b2*v + (1-b2)*g^2 ;
    theta <- theta - lr * m_hat / (sqrt(v_hat) + eps), with
    m_hat = m / (1 - b1^t), v_hat = v / (1 - b2^t), t >= 1.
    """
    if t < 1:
        raise ValueError("step index t starts at 1")
    c1 = 1.0 - cfg.beta1 ** t
    c2 = 1.0 - cfg.beta2 ** t
    for name, theta in params.items():
        g = grads[name]
        m = state.m[name]
        v = state.v[name]
        m *= cfg.beta1
        m += (1.0 - cfg.beta1) * g
        v *= cfg.beta2
        v += (1.0 - cfg.beta2) * (g * g)
        theta -= cfg.learning_rate * (m / c1) / (np.sqrt(v / c2) + cfg.epsilon)


@dataclass
class EpochMetrics:
    loss: float
    accuracy: float


@dataclass
class Metrics:
    """Thresholded binary-classification metrics plus confusion counts."""

    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int
    loss: float
    n: int


def train_epoch(model, dataset, cfg, rng, state=None, epoch=0):
    """One pass over the training rows: shuffle, forward in train mode,
    mean-BCE backward, one optimizer step per batch.

    Returns the mean loss and accuracy of the predictions made during the
    epoch (train-mode forward passes, so dropout is active).
    """
    X = np.asarray(dataset.inputs, dtype=np.float64)
    y = np.asarray(dataset.targets, dtype=np.float64)
    n = X.shape[0]
    if n == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    if state is None:
        state = AdamState.for_params(model.params())
    params = model.params()
    order = rng.permutation(n)
    loss_sum = 0.0
    correct = 0
    for b, start in enumerate(range(0, n, cfg.batch_size)):
        idx = order[start:start + cfg.batch_size]
        xb, yb = X[idx], y[idx]
        p = model.forward(xb, train=True, rng=rng)
        losses, dp = bce_with_grad(p, yb)
        batch_loss = float(losses.mean())
        if not np.isfinite(batch_loss):
            raise NonFiniteLoss(epoch, b)
        loss_sum += float(losses.sum())
        correct += int(((p >= 0.5) == (yb >= 0.5)).sum())
        model.zero_grads()
        model.backward(dp / len(idx))
        state.step += 1
        adam_step(params, model.grads(), state, cfg, state.step)
    return EpochMetrics(loss=loss_sum / n, accuracy=correct / n)


def evaluate(model, dataset, threshold=0.5, batch_size=512):
    """Eval-mode metrics at a decision threshold; p == threshold counts as 1."""
    X = np.asarray(dataset.inputs, dtype=np.float64)
    y = np.asarray(dataset.targets, dtype=np.float64)
    n = X.shape[0]
    if n == 0:
        raise EmptyDataset("cannot evaluate an empty dataset")
    loss_sum = 0.0
    tp = fp = tn = fn = 0
    for start in range(0, n, batch_size):
        xb = X[start:start + batch_size]
        yb = y[start:start + batch_size]
        p = model.forward(xb, train=False)
        losses, _ = bce_with_grad(p, yb)
        loss_sum += float(losses.sum())
        cls = p >= threshold
        pos = yb >= 0.5
        tp += int((cls & pos).sum())
        fp += int((cls & ~pos).sum())
        fn += int((~cls & pos).sum())
        tn += int((~cls & ~pos).sum())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(
        accuracy=(tp + tn) / n,
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        loss=loss_sum / n,
        n=n,
    )


@dataclass
class EpochRecord:
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float
    seconds: float


@dataclass
class TrainLog:
    """Per-epoch trace plus the final held-out evaluation.

    The CSV serialization carries the four curve columns only (epoch
    timings stay in memory), so a fixed seed reproduces the file
    byte for byte.
    """

    records: list[EpochRecord] = field(default_factory=list)
    final_test: Metrics | None = None

    CSV_HEADER = "epoch,train_loss,train_acc,val_loss,val_acc"

    def to_csv_text(self):
        lines = [self.CSV_HEADER]
        for i, r in enumerate(self.records, start=1):
            lines.append(
                f"{i},{r.train_loss:.6g},{r.train_acc:.6g},{r.val_loss:.6g},{r.val_acc:.6g}"
            )
        return "\n".join(lines) + "\n"

    def save(self, path):
        atomic_write_text(path, self.to_csv_text())


def fit(model, train, validation=None, test=None, cfg=None):
    """Train for cfg.epochs (optionally stopping early on stale validation
    loss) and evaluate the last-epoch parameters on the test split.

    validation metrics are logged as nan when no validation set is given;
    patience needs one. Test evaluation always uses the final parameters,
    not the best-validation ones.
    """
    cfg = cfg or TrainConfig()
    rng = np.random.default_rng(cfg.seed)
    state = AdamState.for_params(model.params())
    log = TrainLog()
    best_val = np.inf
    stale = 0
    for epoch in range(cfg.epochs):
        t0 = time.perf_counter()
        em = train_epoch(model, train, cfg, rng, state, epoch=epoch)
        if validation is not None:
            vm = evaluate(model, validation)
            val_loss, val_acc = vm.loss, vm.accuracy
        else:
            val_loss = val_acc = float("nan")
        log.records.append(
            EpochRecord(em.loss, em.accuracy, val_loss, val_acc, time.perf_counter() - t0)
        )
        if cfg.patience is not None and validation is not None:
            if val_loss < best_val - cfg.min_delta:
                best_val = val_loss
                stale = 0
            else:
                stale += 1
                if stale >= cfg.patience:
                    break
    if test is not None:
        log.final_test = evaluate(model, test)
    return log
