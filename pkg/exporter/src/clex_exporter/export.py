"""Batched hidden-state extraction from a BERT-style checkpoint.

Sentences come from a tokenized slice file (one sentence per line, tokens
space-separated).  Each sentence is word-piece tokenized with the
checkpoint's tokenizer; the model runs in inference mode and the last K
hidden layers are stored for the real word pieces only.  Delimiter pieces
(sequence start/end markers) and padding never reach the records: they are
stripped and the word spans re-indexed over the kept pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import AutoModel, AutoTokenizer

from .records import write_record

__all__ = ["ExportConfig", "ExportSummary", "export"]


@dataclass(frozen=True)
class ExportConfig:
    checkpoint: str
    slice_path: str | Path
    output_path: str | Path
    period: str
    max_length: int = 512
    layers: int = 4  # the last K hidden layers to keep
    batch_size: int = 8

    def __post_init__(self) -> None:
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.max_length < 3:  # room for the two delimiters plus one piece
            raise ValueError("max_length must be >= 3")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not self.period:
            raise ValueError("period must be non-empty")


@dataclass
class ExportSummary:
    sentences: int = 0  # records written
    skipped_sentences: int = 0  # no representable words survived
    truncated_sentences: int = 0  # at least one word lost to truncation
    pieces: int = 0
    dim: int = 0

    def to_dict(self) -> dict:
        return {
            "sentences": self.sentences,
            "skipped_sentences": self.skipped_sentences,
            "truncated_sentences": self.truncated_sentences,
            "pieces": self.pieces,
            "dim": self.dim,
        }


def _read_slice(path: str | Path) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        return [line.split() for line in fh if line.strip()]


def _spans_for_sentence(word_ids: list, keep: list[int], words: list[str]):
    """Group kept pieces into per-word spans over the stripped piece axis."""
    spans: list[tuple[str, int, int]] = []
    current: int | None = None
    start = 0
    for j, piece_index in enumerate(keep):
        word = word_ids[piece_index]
        if word != current:
            if current is not None:
                spans.append((words[current], start, j))
            current, start = word, j
    if current is not None:
        spans.append((words[current], start, len(keep)))
    return spans


def export(config: ExportConfig) -> ExportSummary:
    """Run the checkpoint over the slice and write one record per sentence.

    Inference runs with dropout disabled and no gradient state, so exporting
    the same slice with the same configuration is byte-identical.
    """
    tokenizer = AutoTokenizer.from_pretrained(config.checkpoint)
    model = AutoModel.from_pretrained(config.checkpoint)
    model.eval()

    depth = int(getattr(model.config, "num_hidden_layers", 0)) + 1  # embeddings included
    if config.layers > depth:
        raise ValueError(f"layers={config.layers} exceeds model depth {depth}")
    model_max = int(getattr(model.config, "max_position_embeddings", config.max_length))
    if config.max_length > model_max:
        raise ValueError(f"max_length={config.max_length} exceeds model maximum {model_max}")

    sentences = _read_slice(config.slice_path)
    summary = ExportSummary(dim=int(model.config.hidden_size))

    with open(config.output_path, "w", encoding="utf-8") as out:
        for batch_start in range(0, len(sentences), config.batch_size):
            batch = sentences[batch_start : batch_start + config.batch_size]
            encoded = tokenizer(
                batch,
                is_split_into_words=True,
                truncation=True,
                max_length=config.max_length,
                padding=True,
                return_tensors="pt",
            )
            with torch.no_grad():
                output = model(**encoded, output_hidden_states=True)
            hidden = torch.stack(output.hidden_states[-config.layers :], dim=0)

            for i, words in enumerate(batch):
                word_ids = encoded.word_ids(batch_index=i)
                keep = [p for p, w in enumerate(word_ids) if w is not None]
                if not keep:
                    summary.skipped_sentences += 1
                    continue
                spans = _spans_for_sentence(word_ids, keep, words)
                if len(spans) < len(words):
                    summary.truncated_sentences += 1
                layers = hidden[:, i, keep, :].numpy()
                write_record(
                    out,
                    sentence_id=f"{config.period}-{batch_start + i}",
                    period=config.period,
                    layers=layers,
                    words=spans,
                )
                summary.sentences += 1
                summary.pieces += len(keep)
    return summary
