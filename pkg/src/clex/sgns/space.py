"""Embedding spaces: subword-composed word vectors and their file formats.

Binary space files start with the magic ``CLEX1``, an 8-byte little-endian
header length, a JSON header (dim, vocabulary, counts, indexer parameters),
then the input and output matrices as raw little-endian float32, row-major.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from ..errors import ParseError, ValidationError
from .subwords import SubwordIndexer
from .vocab import Vocab

__all__ = [
    "EmbeddingSpace",
    "save_space",
    "load_space",
    "save_text_vectors",
    "load_pretrained_text_vectors",
]

MAGIC = b"CLEX1"


@dataclass
class EmbeddingSpace:
    """Trained vectors for one period.

    ``input_vectors`` has one row per vocabulary word followed by one row per
    n-gram bucket; ``output_vectors`` has one row per vocabulary word.
    """

    vocab: Vocab
    indexer: SubwordIndexer
    input_vectors: np.ndarray  # float32, (|vocab| + bucket_count, dim)
    output_vectors: np.ndarray  # float32, (|vocab|, dim)

    def __post_init__(self) -> None:
        expected = len(self.vocab) + self.indexer.bucket_count
        if self.input_vectors.shape[0] != expected:
            raise ValidationError(
                f"input matrix has {self.input_vectors.shape[0]} rows, expected {expected}"
            )
        if self.output_vectors.shape != (len(self.vocab), self.dim):
            raise ValidationError("output matrix shape does not match vocabulary")

    @property
    def dim(self) -> int:
        return self.input_vectors.shape[1]

    def unit_indices(self, word: str) -> np.ndarray:
        """Input-matrix rows composing ``word``: its vocab row (if any) plus
        its n-gram buckets.  Repeated buckets appear with multiplicity."""
        ids: list[int] = []
        idx = self.vocab.index.get(word)
        if idx is not None:
            ids.append(idx)
        base = len(self.vocab)
        ids.extend(base + b for b in self.indexer.bucket_ids(word))
        if not ids:
            raise KeyError(f"no representable units for {word!r}")
        return np.asarray(ids, dtype=np.int64)

    def word_vector(self, word: str) -> np.ndarray:
        """Mean of the input rows of all of the word's subword units."""
        units = self.unit_indices(word)
        return self.input_vectors[units].mean(axis=0)

    def vectors_for(self, words) -> dict[str, np.ndarray]:
        """Composed vectors for the given words that are in vocabulary."""
        return {w: self.word_vector(w) for w in words if w in self.vocab}


def save_space(space: EmbeddingSpace, path: str | Path) -> None:
    """Write a space file; ``load_space`` recovers it bitwise."""
    header = {
        "dim": space.dim,
        "vocab": space.vocab.words,
        "counts": [int(c) for c in space.vocab.counts],
        "bucket_count": space.indexer.bucket_count,
        "ngram_min": space.indexer.ngram_min,
        "ngram_max": space.indexer.ngram_max,
    }
    blob = json.dumps(header, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(space.input_vectors, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(space.output_vectors, dtype="<f4").tobytes())


def load_space(path: str | Path) -> EmbeddingSpace:
    """Read a space file written by ``save_space``.

    A wrong magic/version tag or a truncated file raises without returning a
    partial space.
    """
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ParseError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        (header_len,) = struct.unpack("<Q", _read_exact(fh, 8, path))
        header = json.loads(_read_exact(fh, header_len, path).decode("utf-8"))
        dim = int(header["dim"])
        vocab = Vocab(words=list(header["vocab"]), counts=np.array(header["counts"], dtype=np.int64))
        indexer = SubwordIndexer(
            ngram_min=int(header["ngram_min"]),
            ngram_max=int(header["ngram_max"]),
            bucket_count=int(header["bucket_count"]),
        )
        n_input = (len(vocab) + indexer.bucket_count) * dim
        n_output = len(vocab) * dim
        inputs = np.frombuffer(_read_exact(fh, n_input * 4, path), dtype="<f4")
        outputs = np.frombuffer(_read_exact(fh, n_output * 4, path), dtype="<f4")
        if fh.read(1):
            raise ParseError(f"{path}: trailing bytes after matrices")
    if not (np.isfinite(inputs).all() and np.isfinite(outputs).all()):
        raise ParseError(f"{path}: matrices contain non-finite values")
    return EmbeddingSpace(
        vocab=vocab,
        indexer=indexer,
        input_vectors=inputs.reshape(-1, dim).copy(),
        output_vectors=outputs.reshape(-1, dim).copy(),
    )


def _read_exact(fh, n: int, path) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ParseError(f"{path}: truncated file ({len(data)} of {n} bytes)")
    return data


def save_text_vectors(path: str | Path, vectors: Mapping[str, np.ndarray]) -> None:
    """Write word vectors in the plain text format: a ``count dim`` header
    line, then one ``word v1 ... vdim`` line per word, alphabetically."""
    if not vectors:
        raise ValidationError("refusing to write an empty vector file")
    dims = {np.asarray(v).shape for v in vectors.values()}
    if len(dims) != 1 or len(next(iter(dims))) != 1:
        raise ValidationError(f"inconsistent vector shapes: {sorted(dims)}")
    (dim,) = next(iter(dims))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vectors)} {dim}\n")
        for word in sorted(vectors):
            values = " ".join(format(float(x), ".9g") for x in vectors[word])
            fh.write(f"{word} {values}\n")


def load_pretrained_text_vectors(path: str | Path) -> tuple[dict[str, np.ndarray], int]:
    """Read a text vector file; returns (word -> float32 vector, dim).

    The first line declares ``count dim``; every following line must carry a
    word and exactly ``dim`` decimals.  The declared count must match.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(f"{path.name}:line 1: expected 'count dim' header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(f"{path.name}:line 1: non-integer header fields") from None
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise ParseError(
                    f"{path.name}:line {lineno}: expected word + {dim} values, got {len(parts)} fields"
                )
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float32)
            except ValueError:
                raise ParseError(f"{path.name}:line {lineno}: non-numeric value") from None
            vectors[parts[0]] = vec
    if len(vectors) != count:
        raise ParseError(f"{path.name}: header declares {count} rows, found {len(vectors)}")
    return vectors, dim
