"""Cross-period alignment via weight initialization.

Three strategies make period spaces comparable without post-hoc rotation:
incremental (each period seeds the next), internal (a base model on the full
corpus seeds the first period, then incremental), and backward-external
(pretrained vectors seed the latest period, then training walks backward).
"""

from __future__ import annotations

from dataclasses import replace
from enum import Enum
from pathlib import Path
from typing import Mapping

from ..corpus import PeriodSlice, PeriodSpec
from .space import EmbeddingSpace, load_pretrained_text_vectors
from .train import TrainConfig, sgns_train

__all__ = [
    "InitStrategy",
    "BASE_EPOCHS",
    "train_incremental",
    "train_internal",
    "train_backward_external",
]

#: Epochs for the internal strategy's full-corpus base model, independent of
#: the per-period epoch count.
BASE_EPOCHS = 50


class InitStrategy(Enum):
    INCREMENTAL = "incremental"
    INTERNAL = "internal"
    BACKWARD_EXTERNAL = "backward-external"


def _check_slices(slices: Mapping[str, PeriodSlice]) -> None:
    if len(slices) < 2:
        raise ValueError("need at least two period slices in chronological order")


def train_incremental(
    slices: Mapping[str, PeriodSlice], config: TrainConfig
) -> dict[str, EmbeddingSpace]:
    """Train periods oldest-first, each initialized from its predecessor."""
    _check_slices(slices)
    spaces: dict[str, EmbeddingSpace] = {}
    previous: EmbeddingSpace | None = None
    for name, sl in slices.items():
        previous = sgns_train(sl, config, init=previous)
        spaces[name] = previous
    return spaces


def train_internal(
    slices: Mapping[str, PeriodSlice], config: TrainConfig
) -> dict[str, EmbeddingSpace]:
    """Train a base model on all periods combined, then proceed incrementally.

    The base model always runs ``BASE_EPOCHS`` epochs regardless of
    ``config.epochs``, which applies to the per-period passes only.
    """
    _check_slices(slices)
    names = list(slices)
    combined = PeriodSlice(
        period=PeriodSpec(
            "+".join(names),
            min(sl.period.start_year for sl in slices.values()),
            max(sl.period.end_year for sl in slices.values()),
        ),
        sentences=[s for sl in slices.values() for s in sl.sentences],
        charter_count=sum(sl.charter_count for sl in slices.values()),
    )
    previous = sgns_train(combined, replace(config, epochs=BASE_EPOCHS))
    spaces: dict[str, EmbeddingSpace] = {}
    for name in names:
        previous = sgns_train(slices[name], config, init=previous)
        spaces[name] = previous
    return spaces


def train_backward_external(
    slices: Mapping[str, PeriodSlice],
    pretrained_path: str | Path,
    config: TrainConfig,
) -> dict[str, EmbeddingSpace]:
    """Seed the most recent period from pretrained text vectors, then train
    backward, each earlier period initialized from its successor.

    Only whole-word input rows transfer from the pretrained file (it carries
    no subword table); pretrained words absent from the corpus vocabulary are
    ignored.
    """
    _check_slices(slices)
    vectors, ext_dim = load_pretrained_text_vectors(pretrained_path)
    if ext_dim != config.dim:
        raise ValueError(
            f"pretrained vectors have dimension {ext_dim}, configured dimension {config.dim}"
        )
    spaces: dict[str, EmbeddingSpace] = {}
    previous: EmbeddingSpace | None = None
    for name in reversed(list(slices)):
        if previous is None:
            previous = sgns_train(slices[name], config, seed_word_vectors=vectors)
        else:
            previous = sgns_train(slices[name], config, init=previous)
        spaces[name] = previous
    return {name: spaces[name] for name in slices}
