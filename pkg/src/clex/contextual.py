"""Aggregate exported contextual token embeddings into per-period word vectors.

The interchange unit is one sentence: the last K hidden layers for its L word
pieces (a K x L x d tensor) plus the span of pieces belonging to each word.
Sentences arrive as newline-delimited JSON with the tensor base64-encoded as
little-endian float32 in layer-major order.  Aggregation averages the K
layers, pools each word's pieces, and keeps a running mean per surface form
across all its occurrences in a period.
"""

from __future__ import annotations

import base64
import binascii
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import ValidationError
from .sgns.space import save_text_vectors

__all__ = [
    "WordSpan",
    "ContextualSentenceRecord",
    "AggregatedEmbeddings",
    "read_records",
    "sentence_embedding",
    "word_occurrence_embedding",
    "aggregate",
    "merge_aggregates",
    "export_as_wordvectors",
]


@dataclass(frozen=True)
class WordSpan:
    surface: str
    start: int
    end: int  # exclusive


@dataclass
class ContextualSentenceRecord:
    """One sentence's exported hidden states and word-to-piece spans."""

    sentence_id: str
    period: str
    dim: int
    layer_count: int
    piece_count: int
    layers: np.ndarray  # float32, (layer_count, piece_count, dim), shallow to deep
    words: tuple[WordSpan, ...]


def _fail(sentence_id: str, message: str) -> ValidationError:
    return ValidationError(f"record {sentence_id!r}: {message}")


def _validate_record(rec: ContextualSentenceRecord) -> None:
    if rec.layer_count < 1 or rec.piece_count < 1 or rec.dim < 1:
        raise _fail(rec.sentence_id, "layer_count, piece_count, and dim must be positive")
    if rec.layers.shape != (rec.layer_count, rec.piece_count, rec.dim):
        raise _fail(rec.sentence_id, f"tensor shape {rec.layers.shape} does not match header")
    if not np.isfinite(rec.layers).all():
        raise _fail(rec.sentence_id, "tensor contains non-finite values")
    previous_end = 0
    for span in rec.words:
        if not span.surface:
            raise _fail(rec.sentence_id, "empty word surface")
        if span.start >= span.end:
            raise _fail(rec.sentence_id, f"empty span [{span.start}, {span.end}) for {span.surface!r}")
        if span.start < previous_end:
            raise _fail(rec.sentence_id, f"span [{span.start}, {span.end}) overlaps or reorders")
        if span.end > rec.piece_count:
            raise _fail(
                rec.sentence_id,
                f"span [{span.start}, {span.end}) exceeds piece count {rec.piece_count}",
            )
        previous_end = span.end


def read_records(path: str | Path) -> Iterator[ContextualSentenceRecord]:
    """Stream records from a newline-delimited JSON file, validating each.

    Memory use is constant in the number of sentences.  Any invariant
    violation raises ``ValidationError`` naming the sentence.
    """
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:line {lineno}: invalid JSON ({exc.msg})") from None
            sentence_id = str(obj.get("sentence_id", f"line {lineno}"))
            try:
                k = int(obj["layer_count"])
                l = int(obj["piece_count"])
                d = int(obj["dim"])
                words = tuple(
                    WordSpan(str(w["surface"]), int(w["span"][0]), int(w["span"][1]))
                    for w in obj["words"]
                )
                payload = base64.b64decode(obj["tensor"], validate=True)
            except (KeyError, TypeError, ValueError, IndexError, binascii.Error) as exc:
                raise _fail(sentence_id, f"malformed record ({exc})") from None
            if len(payload) != k * l * d * 4:
                raise _fail(
                    sentence_id,
                    f"tensor payload is {len(payload)} bytes, expected {k * l * d * 4}",
                )
            layers = np.frombuffer(payload, dtype="<f4").reshape(k, l, d)
            record = ContextualSentenceRecord(
                sentence_id=sentence_id,
                period=str(obj.get("period", "")),
                dim=d,
                layer_count=k,
                piece_count=l,
                layers=layers,
                words=words,
            )
            _validate_record(record)
            yield record


def sentence_embedding(record: ContextualSentenceRecord) -> np.ndarray:
    """Element-wise mean across the stored layers: one row per word piece."""
    return record.layers.mean(axis=0, dtype=np.float64)


def word_occurrence_embedding(sentence_matrix: np.ndarray, span: tuple[int, int]) -> np.ndarray:
    """Mean of the piece rows ``start .. end-1`` of one sentence matrix."""
    start, end = span
    if not (0 <= start < end <= sentence_matrix.shape[0]):
        raise ValidationError(f"invalid span [{start}, {end}) for {sentence_matrix.shape[0]} pieces")
    return sentence_matrix[start:end].mean(axis=0, dtype=np.float64)


@dataclass
class AggregatedEmbeddings:
    """Per-word mean occurrence vectors for one period."""

    period: str
    dim: int
    vectors: dict[str, np.ndarray] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)
    skipped_records: int = 0

    def __len__(self) -> int:
        return len(self.vectors)


def aggregate(records: Iterable[ContextualSentenceRecord], period: str) -> AggregatedEmbeddings:
    """Average every occurrence of every spanned surface across a period.

    Records carrying another period are skipped and counted.  The mean is a
    numerically stable running mean, so arbitrarily frequent words do not
    accumulate magnitude.
    """
    result = AggregatedEmbeddings(period=period, dim=0)
    matched = 0
    for rec in records:
        if rec.period != period:
            result.skipped_records += 1
            continue
        if result.dim == 0:
            result.dim = rec.dim
        elif rec.dim != result.dim:
            raise _fail(rec.sentence_id, f"dim {rec.dim} differs from stream dim {result.dim}")
        matched += 1
        sentence = sentence_embedding(rec)
        for span in rec.words:
            occurrence = word_occurrence_embedding(sentence, (span.start, span.end))
            n = result.counts.get(span.surface, 0) + 1
            result.counts[span.surface] = n
            if n == 1:
                result.vectors[span.surface] = occurrence.copy()
            else:
                mean = result.vectors[span.surface]
                mean += (occurrence - mean) / n
    if matched == 0:
        raise ValidationError(f"empty period stream: no records for period {period!r}")
    return result


def merge_aggregates(parts: Iterable[AggregatedEmbeddings]) -> AggregatedEmbeddings:
    """Combine partial aggregations (count-weighted mean of partial means).

    Supports sharded processing: each worker aggregates a subset of records
    and the shards merge into the same result as a single pass, up to float
    associativity.
    """
    parts = list(parts)
    if not parts:
        raise ValidationError("nothing to merge")
    periods = {p.period for p in parts}
    if len(periods) != 1:
        raise ValidationError(f"cannot merge aggregations of different periods: {sorted(periods)}")
    dims = {p.dim for p in parts if p.dim}
    if len(dims) > 1:
        raise ValidationError(f"cannot merge aggregations of different dims: {sorted(dims)}")
    merged = AggregatedEmbeddings(period=parts[0].period, dim=dims.pop() if dims else 0)
    merged.skipped_records = sum(p.skipped_records for p in parts)
    for part in parts:
        for word, vec in part.vectors.items():
            n_new = part.counts[word]
            n_old = merged.counts.get(word, 0)
            if n_old == 0:
                merged.vectors[word] = vec.copy()
            else:
                merged.vectors[word] = (n_old * merged.vectors[word] + n_new * vec) / (n_old + n_new)
            merged.counts[word] = n_old + n_new
    return merged


def export_as_wordvectors(agg: AggregatedEmbeddings, path: str | Path) -> None:
    """Write the aggregation in the plain text word-vector format, so the
    same downstream analysis reads static and contextual vectors alike."""
    if not agg.vectors:
        raise ValidationError("refusing to export an empty aggregation")
    save_text_vectors(path, agg.vectors)
