"""Character n-gram enumeration and hashing for subword-composed vectors."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["fnv1a_32", "SubwordIndexer"]

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193
_U32 = 0xFFFFFFFF


def fnv1a_32(data: bytes) -> int:
    """32-bit FNV-1a hash; deterministic across runs and platforms."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _U32
    return h


@dataclass(frozen=True)
class SubwordIndexer:
    """Maps a word's character n-grams to bucket indices in [0, bucket_count).

    N-grams are taken from the boundary-wrapped form ``<word>``; when the
    wrapped form itself is no longer than ``ngram_max`` it appears among the
    n-grams, so short words have a whole-word unit even out of vocabulary.
    """

    ngram_min: int = 3
    ngram_max: int = 6
    bucket_count: int = 2_000_000

    def __post_init__(self) -> None:
        if self.ngram_min < 1 or self.ngram_min > self.ngram_max:
            raise ValueError(f"invalid n-gram range [{self.ngram_min}, {self.ngram_max}]")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be positive")

    def ngrams(self, word: str) -> list[str]:
        """All length ngram_min..ngram_max substrings of ``<word>``."""
        wrapped = f"<{word}>"
        out = []
        for n in range(self.ngram_min, self.ngram_max + 1):
            for i in range(len(wrapped) - n + 1):
                out.append(wrapped[i : i + n])
        return out

    def bucket_ids(self, word: str) -> list[int]:
        """Bucket index of each n-gram, in enumeration order (may repeat)."""
        return [fnv1a_32(g.encode("utf-8")) % self.bucket_count for g in self.ngrams(word)]
