"""Skip-gram negative-sampling embeddings with hashed character n-grams."""

from .subwords import SubwordIndexer, fnv1a_32
from .vocab import Vocab, build_vocab
from .space import (
    EmbeddingSpace,
    load_pretrained_text_vectors,
    load_space,
    save_space,
    save_text_vectors,
)
from .train import TrainConfig, pair_loss, pair_gradients, sgns_train
from .strategies import (
    InitStrategy,
    train_backward_external,
    train_incremental,
    train_internal,
)
from .sweep import SweepCell, SweepReport, sweep

__all__ = [
    "SubwordIndexer",
    "fnv1a_32",
    "Vocab",
    "build_vocab",
    "EmbeddingSpace",
    "save_space",
    "load_space",
    "save_text_vectors",
    "load_pretrained_text_vectors",
    "TrainConfig",
    "pair_loss",
    "pair_gradients",
    "sgns_train",
    "InitStrategy",
    "train_incremental",
    "train_internal",
    "train_backward_external",
    "SweepCell",
    "SweepReport",
    "sweep",
]
