"""Tagger training: BILOU targets, minibatch SGD, gradient verification.

Training is deliberately boring: seeded shuffling, per-token cross-entropy,
hand-written backprop, plain SGD.  Given the same documents, annotations and
config, two runs produce bit-identical weights, which the model file format
preserves.  The per-epoch loss curve is recorded in eval mode (no dropout)
after each epoch's updates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .. import schema as schema_mod
from ..annotations import AnnotationSet
from ..textcorpus import Document, tokenize
from .model import TaggerModel, forward, _windows

log = logging.getLogger(__name__)


class EmptyDataset(ValueError):
    pass


class LabelOutsideSchema(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    learning_rate: float = 0.01
    batch_size: int = 8
    rng_seed: int = 0
    dropout: float = 0.2

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not (0.0 <= self.dropout < 1.0):
            raise ValueError("dropout must be in [0, 1)")


def bilou_targets(doc: Document, mentions, label_index, statistical, version_id):
    """Per-token target indices for one document.

    Spans that do not sit on token boundaries are snapped outward to the
    covering tokens (logged).  Labels outside the schema raise; labels in
    the schema but not statistical-category are dropped (logged) -- format
    and gazetteer types are the rule recognizers' job, not the tagger's.
    """
    tokens = tokenize(doc.text)
    targets = [label_index["O"]] * len(tokens)
    dropped = 0
    snapped = 0
    for m in sorted(mentions):
        if m.label not in schema_mod.get_version(version_id):
            raise LabelOutsideSchema(f"label {m.label!r} not in schema {version_id}")
        if m.label not in statistical:
            dropped += 1
            continue
        covered = [i for i, t in enumerate(tokens) if t.end > m.start and t.start < m.end]
        if not covered:
            log.warning("%s: span (%d,%d) covers no tokens, skipped", doc.doc_id, m.start, m.end)
            continue
        first, last = covered[0], covered[-1]
        if tokens[first].start != m.start or tokens[last].end != m.end:
            snapped += 1
        if any(targets[i] != label_index["O"] for i in range(first, last + 1)):
            log.warning("%s: span (%d,%d) collides after snapping, skipped", doc.doc_id, m.start, m.end)
            continue
        if first == last:
            targets[first] = label_index[f"U-{m.label}"]
        else:
            targets[first] = label_index[f"B-{m.label}"]
            for i in range(first + 1, last):
                targets[i] = label_index[f"I-{m.label}"]
            targets[last] = label_index[f"L-{m.label}"]
    if snapped:
        log.info("%s: %d spans snapped outward to token boundaries", doc.doc_id, snapped)
    if dropped:
        log.info("%s: %d non-statistical mentions left to the rule recognizers", doc.doc_id, dropped)
    return [t.surface for t in tokens], targets


def _loss_from_idx(model, row_idx, targets):
    probs = forward(model, row_idx)["probs"]
    t = np.asarray(targets)
    return float(-np.mean(np.log(probs[np.arange(len(t)), t] + 1e-300)))


def _grads_from_idx(model, row_idx, targets, dropout_mask=None):
    cache = forward(model, row_idx, dropout_mask=dropout_mask)
    n = row_idx.shape[0]
    probs = cache["probs"]
    t = np.asarray(targets)
    loss = float(-np.mean(np.log(probs[np.arange(n), t] + 1e-300)))

    dlogits = probs.copy()
    dlogits[np.arange(n), t] -= 1.0
    dlogits /= n

    g = {}
    g["out_w"] = cache["h2d"].T @ dlogits
    g["out_b"] = dlogits.sum(axis=0)
    dh2 = dlogits @ model.out_w.T
    if dropout_mask is not None:
        dh2 = dh2 * dropout_mask

    da2 = dh2 * (1.0 - cache["a2"] ** 2)
    g["conv2_w"] = cache["w2_in"].T @ da2
    g["conv2_b"] = da2.sum(axis=0)
    dh1 = dh2 + _unwindow(da2 @ model.conv2_w.T)

    da1 = dh1 * (1.0 - cache["a1"] ** 2)
    g["conv1_w"] = cache["w1_in"].T @ da1
    g["conv1_b"] = da1.sum(axis=0)
    dx0 = dh1 + _unwindow(da1 @ model.conv1_w.T)

    dembed = np.zeros_like(model.embed)
    for j in range(row_idx.shape[1]):
        np.add.at(dembed, row_idx[:, j], dx0)
    g["embed"] = dembed
    return loss, g


def loss_and_grads(model: TaggerModel, surfaces, targets, dropout_mask=None):
    """Mean cross-entropy over tokens and gradients for every weight group."""
    return _grads_from_idx(model, model.row_indices(surfaces), targets, dropout_mask)


def _unwindow(gwin: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`cyents.ner.model._windows`."""
    d = gwin.shape[1] // 3
    out = gwin[:, d : 2 * d].copy()
    out[:-1] += gwin[1:, :d]
    out[1:] += gwin[:-1, 2 * d :]
    return out


def evaluate_loss(model: TaggerModel, examples) -> float:
    """Token-weighted eval-mode loss over (surfaces, row_idx, targets) triples."""
    total, n_tok = 0.0, 0
    for _surfaces, row_idx, targets in examples:
        probs = forward(model, row_idx)["probs"]
        t = np.asarray(targets)
        total += float(-np.log(probs[np.arange(len(t)), t] + 1e-300).sum())
        n_tok += len(t)
    return total / max(n_tok, 1)


def train(documents, gold: AnnotationSet, config: TrainConfig = TrainConfig(),
          schema_version="round2", rows=None, dim=None) -> TaggerModel:
    """Fit a tagger on gold annotations; deterministic for a fixed config."""
    docs = sorted(documents, key=lambda d: d.doc_id)
    if not docs:
        raise EmptyDataset("no documents to train on")
    kwargs = {}
    if rows:
        kwargs["rows"] = rows
    if dim:
        kwargs["dim"] = dim
    model = TaggerModel.init(schema_version=schema_version, seed=config.rng_seed, **kwargs)
    label_index = model.label_index()
    statistical = set(schema_mod.get_version(schema_version).statistical_types())

    examples = []
    for doc in docs:
        surfaces, targets = bilou_targets(
            doc, gold.entries.get(doc.doc_id, []), label_index, statistical, model.schema_version
        )
        if surfaces:
            examples.append((surfaces, model.row_indices(surfaces), targets))
    if not examples:
        raise EmptyDataset("documents contain no tokens")

    rng = np.random.default_rng(config.rng_seed)
    loss_curve = []
    for _epoch in range(config.epochs):
        order = rng.permutation(len(examples))
        for b0 in range(0, len(order), config.batch_size):
            batch = [examples[i] for i in order[b0 : b0 + config.batch_size]]
            row_idx = np.concatenate([ex[1] for ex in batch])
            targets = [t for ex in batch for t in ex[2]]
            mask = None
            if config.dropout > 0.0:
                keep = 1.0 - config.dropout
                mask = (rng.random((len(targets), model.dim)) < keep) / keep
            _, grads = _grads_from_idx(model, row_idx, targets, dropout_mask=mask)
            for name, arr in model.arrays().items():
                arr -= config.learning_rate * grads[name]
        loss_curve.append(evaluate_loss(model, examples))

    model.training_meta = {
        "seed": config.rng_seed,
        "epochs": config.epochs,
        "lr": config.learning_rate,
        "batch_size": config.batch_size,
        "dropout": config.dropout,
        "n_documents": len(examples),
        "loss_curve": loss_curve,
    }
    model.check_finite()
    return model


def gradient_check(model: TaggerModel, surfaces, targets, epsilon=1e-4,
                   grads_fn=loss_and_grads) -> float:
    """Max relative error of analytic gradients vs central finite differences.

    Runs in eval mode (no dropout).  The embedding group is checked on the
    rows the example actually touches; untouched rows have identically zero
    gradient by construction.
    """
    if not 1e-6 <= epsilon <= 1e-3:
        raise ValueError("epsilon outside [1e-6, 1e-3]")
    _, analytic = grads_fn(model, surfaces, targets)
    row_idx = model.row_indices(surfaces)
    touched = np.unique(row_idx)
    worst = 0.0
    for name, arr in model.arrays().items():
        if name == "embed":
            coords = [(r, c) for r in touched for c in range(model.dim)]
        else:
            coords = list(np.ndindex(arr.shape))
        for coord in coords:
            orig = arr[coord]
            arr[coord] = orig + epsilon
            lp = _loss_from_idx(model, row_idx, targets)
            arr[coord] = orig - epsilon
            lm = _loss_from_idx(model, row_idx, targets)
            arr[coord] = orig
            fd = (lp - lm) / (2.0 * epsilon)
            ga = analytic[name][coord]
            err = abs(ga - fd) / max(abs(ga) + abs(fd), 1e-8)
            worst = max(worst, err)
    return worst
