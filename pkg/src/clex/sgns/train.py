"""From-scratch skip-gram negative-sampling trainer with subword composition.

For each (target, context) pair inside a dynamic window the trainer minimizes

    L = -log s(u_ctx . v) - sum_neg log s(-u_neg . v)

where ``v`` is the mean of the target's subword input rows, ``u`` are output
rows, and negatives are drawn from the unigram^0.75 distribution.  Updates
flow back into every contributing subword row (each receives 1/n_units of the
hidden-layer gradient).  Single-threaded training with a fixed seed is
bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple

import numpy as np

from ..corpus import PeriodSlice
from .space import EmbeddingSpace
from .subwords import SubwordIndexer
from .vocab import Vocab, build_vocab

__all__ = ["TrainConfig", "PairGradients", "pair_loss", "pair_gradients", "sgns_train"]


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for one training run.

    ``epochs=0`` is a diagnostic mode: the space is initialized (randomly or
    from ``init``) and returned without any updates, which makes alignment
    properties directly testable.
    """

    dim: int
    epochs: int
    seed: int
    window: int = 5
    negatives: int = 5
    min_count: int = 5
    ngram_min: int = 3
    ngram_max: int = 6
    bucket_count: int = 2_000_000
    initial_lr: float = 0.025

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.ngram_min > self.ngram_max or self.ngram_min < 1:
            raise ValueError(f"invalid n-gram range [{self.ngram_min}, {self.ngram_max}]")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")
        if self.initial_lr <= 0:
            raise ValueError("initial_lr must be positive")

    @property
    def indexer(self) -> SubwordIndexer:
        return SubwordIndexer(self.ngram_min, self.ngram_max, self.bucket_count)


def _sigmoid(x):
    # tanh form avoids exp overflow warnings at extreme scores
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x)))


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -np.asarray(x, dtype=np.float64))


class PairGradients(NamedTuple):
    """Gradients of ``pair_loss``; ``units`` applies to every unit row."""

    units: np.ndarray  # (dim,)
    context: np.ndarray  # (dim,)
    negatives: np.ndarray  # (n_negatives, dim)


def pair_loss(unit_rows: np.ndarray, context_row: np.ndarray, negative_rows: np.ndarray) -> float:
    """Negative-sampling loss of one pair given explicit parameter rows."""
    h = unit_rows.mean(axis=0)
    loss = -_log_sigmoid(context_row @ h)
    if len(negative_rows):
        loss = loss - _log_sigmoid(-(negative_rows @ h)).sum()
    return float(loss)


def pair_gradients(
    unit_rows: np.ndarray, context_row: np.ndarray, negative_rows: np.ndarray
) -> PairGradients:
    """Analytic gradients of ``pair_loss`` with respect to each row block.

    Because the hidden vector is the mean of the unit rows, every unit row
    shares the same gradient ``units`` (the hidden gradient divided by the
    number of unit rows).
    """
    h = unit_rows.mean(axis=0)
    g_pos = _sigmoid(context_row @ h) - 1.0
    g_neg = _sigmoid(negative_rows @ h)
    g_h = g_pos * context_row
    if len(negative_rows):
        g_h = g_h + g_neg @ negative_rows
    return PairGradients(
        units=g_h / unit_rows.shape[0],
        context=g_pos * h,
        negatives=g_neg[:, None] * h[None, :],
    )


def _word_units(vocab: Vocab, indexer: SubwordIndexer) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Per-word unique unit rows and mean weights (multiplicity / n_units)."""
    base = len(vocab)
    uniq_ids: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for i, word in enumerate(vocab.words):
        ids = np.asarray([i] + [base + b for b in indexer.bucket_ids(word)], dtype=np.int64)
        uniq, mult = np.unique(ids, return_counts=True)
        uniq_ids.append(uniq)
        weights.append((mult / ids.size).astype(np.float32))
    return uniq_ids, weights


def sgns_train(
    slice: PeriodSlice,
    config: TrainConfig,
    init: EmbeddingSpace | None = None,
    *,
    seed_word_vectors: Mapping[str, np.ndarray] | None = None,
    progress: Callable[[int, float], None] | None = None,
) -> EmbeddingSpace:
    """Train one embedding space on a period slice.

    When ``init`` is given, input/output rows of shared vocabulary words and
    the whole bucket block are copied in before training; rows of new words
    stay at their random initialization (uniform in [-1/dim, +1/dim] for
    inputs, zero for outputs).  ``seed_word_vectors`` overrides the *input*
    rows of the named words only (used for externally pretrained vectors).
    ``progress`` receives ``(epoch, mean_pair_loss)`` after each epoch.
    """
    if not slice.sentences or slice.token_count == 0:
        raise ValueError("cannot train on an empty slice")
    vocab = build_vocab(slice.sentences, config.min_count)
    indexer = config.indexer
    rng = np.random.default_rng(config.seed)
    n_words, dim = len(vocab), config.dim

    inputs = rng.random((n_words + config.bucket_count, dim), dtype=np.float32)
    inputs *= 2.0 / dim
    inputs -= 1.0 / dim
    outputs = np.zeros((n_words, dim), dtype=np.float32)

    if init is not None:
        if init.dim != dim:
            raise ValueError(
                f"initial space dimension {init.dim} does not match configured dimension {dim}"
            )
        if init.indexer != indexer:
            raise ValueError("initial space uses a different subword indexer")
        inputs[n_words:] = init.input_vectors[len(init.vocab) :]
        for word, i in vocab.index.items():
            j = init.vocab.index.get(word)
            if j is not None:
                inputs[i] = init.input_vectors[j]
                outputs[i] = init.output_vectors[j]
    if seed_word_vectors is not None:
        for word, i in vocab.index.items():
            vec = seed_word_vectors.get(word)
            if vec is not None:
                vec = np.asarray(vec, dtype=np.float32)
                if vec.shape != (dim,):
                    raise ValueError(
                        f"seed vector for {word!r} has dimension {vec.shape[-1]}, expected {dim}"
                    )
                inputs[i] = vec

    encoded = []
    for sentence in slice.sentences:
        ids = [vocab.index[t] for t in sentence if t in vocab.index]
        if ids:
            encoded.append(ids)
    stream_tokens = sum(len(s) for s in encoded)
    total_steps = config.epochs * stream_tokens

    unit_ids, unit_weights = _word_units(vocab, indexer)
    cumulative = np.cumsum(vocab.sampling)
    cumulative[-1] = 1.0
    k_neg = config.negatives
    lr0 = config.initial_lr
    step = 0

    for epoch in range(config.epochs):
        epoch_loss = 0.0
        epoch_pairs = 0
        for ids in encoded:
            length = len(ids)
            for t in range(length):
                lr = lr0 * (1.0 - step / total_steps)
                step += 1
                reach = int(rng.integers(1, config.window + 1))
                target = ids[t]
                units = unit_ids[target]
                weights = unit_weights[target]
                lo = 0 if t < reach else t - reach
                hi = min(length, t + reach + 1)
                for c in range(lo, hi):
                    if c == t:
                        continue
                    context = ids[c]
                    negatives = np.searchsorted(cumulative, rng.random(k_neg), side="right")
                    # fold duplicate rows so fancy-index updates accumulate exactly
                    out_ids, mult = np.unique(np.append(negatives, context), return_counts=True)
                    ctx_pos = int(np.searchsorted(out_ids, context))
                    mult[ctx_pos] -= 1  # separate the positive slot from negative draws

                    h = weights @ inputs[units]
                    rows_out = outputs[out_ids]
                    scores = rows_out @ h
                    sig = _sigmoid(scores)
                    grad_scores = (mult * sig).astype(np.float32)
                    grad_scores[ctx_pos] += sig[ctx_pos] - 1.0

                    epoch_loss -= float(
                        _log_sigmoid(scores[ctx_pos]) + mult @ _log_sigmoid(-scores)
                    )
                    epoch_pairs += 1

                    g_h = grad_scores @ rows_out
                    outputs[out_ids] = rows_out - lr * grad_scores[:, None] * h[None, :]
                    inputs[units] -= (lr * weights)[:, None] * g_h[None, :]
        if progress is not None:
            progress(epoch, epoch_loss / epoch_pairs if epoch_pairs else 0.0)

    if not (np.isfinite(inputs).all() and np.isfinite(outputs).all()):
        raise FloatingPointError("training produced non-finite vectors")
    return EmbeddingSpace(
        vocab=vocab, indexer=indexer, input_vectors=inputs, output_vectors=outputs
    )
