"""Training vocabulary with the unigram^0.75 negative-sampling distribution."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Vocab", "build_vocab"]


@dataclass
class Vocab:
    """Word/index bijection plus corpus counts and sampling weights."""

    words: list[str]
    counts: np.ndarray  # int64, aligned with ``words``
    index: dict[str, int] = field(init=False)
    sampling: np.ndarray = field(init=False)  # float64 probabilities, sums to 1

    def __post_init__(self) -> None:
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("duplicate words in vocabulary")
        weights = self.counts.astype(np.float64) ** 0.75
        self.sampling = weights / weights.sum()

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index


def build_vocab(sentences: Iterable[Sequence[str]], min_count: int) -> Vocab:
    """Index every word occurring at least ``min_count`` times.

    Words are ordered by descending count, ties broken alphabetically, so the
    index assignment is deterministic.
    """
    counter: Counter = Counter()
    for sentence in sentences:
        counter.update(sentence)
    kept = sorted(
        ((w, c) for w, c in counter.items() if c >= min_count),
        key=lambda wc: (-wc[1], wc[0]),
    )
    if not kept:
        raise ValueError(f"no words occur at least min_count={min_count} times")
    words = [w for w, _ in kept]
    counts = np.array([c for _, c in kept], dtype=np.int64)
    return Vocab(words=words, counts=counts)
