import json
import struct

import numpy as np
import pytest

from clex.errors import ParseError, ValidationError
from clex.sgns.space import (
    EmbeddingSpace,
    load_pretrained_text_vectors,
    load_space,
    save_space,
    save_text_vectors,
)
from clex.sgns.subwords import SubwordIndexer
from clex.sgns.vocab import Vocab


def make_space(words, dim=4, bucket_count=50, ngram_min=3, ngram_max=4, seed=0):
    rng = np.random.default_rng(seed)
    vocab = Vocab(words=list(words), counts=np.arange(5, 5 + len(words), dtype=np.int64))
    indexer = SubwordIndexer(ngram_min, ngram_max, bucket_count)
    return EmbeddingSpace(
        vocab=vocab,
        indexer=indexer,
        input_vectors=rng.normal(size=(len(words) + bucket_count, dim)).astype(np.float32),
        output_vectors=rng.normal(size=(len(words), dim)).astype(np.float32),
    )


class TestWordVector:
    def test_single_unit_is_row_verbatim(self):
        # min n-gram length 4 leaves "a" (wrapped "<a>") with its vocab row only
        space = make_space(["a"], ngram_min=4, ngram_max=5)
        np.testing.assert_array_equal(space.word_vector("a"), space.input_vectors[0])

    def test_two_units_mean(self):
        space = make_space(["a"], dim=2, ngram_min=3, ngram_max=3)
        (bucket,) = space.indexer.bucket_ids("a")  # "<a>" is the only 3-gram
        space.input_vectors[0] = [1.0, 0.0]
        space.input_vectors[1 + bucket] = [0.0, 1.0]
        np.testing.assert_allclose(space.word_vector("a"), [0.5, 0.5])

    def test_composition_matches_brute_force(self):
        space = make_space(["terram", "habet"], dim=6, seed=3)
        for word in ("terram", "habet", "terra"):  # last one is out of vocabulary
            rows = []
            idx = space.vocab.index.get(word)
            if idx is not None:
                rows.append(space.input_vectors[idx])
            for bucket in space.indexer.bucket_ids(word):
                rows.append(space.input_vectors[len(space.vocab) + bucket])
            expected = np.stack(rows).mean(axis=0)
            np.testing.assert_allclose(space.word_vector(word), expected, atol=0)

    def test_unrepresentable_word_rejected(self):
        space = make_space(["long"], ngram_min=6, ngram_max=6)
        with pytest.raises(KeyError, match="no representable units"):
            space.word_vector("z")  # wrapped form "<z>" is shorter than 6, and OOV

    def test_oov_sharing_ngrams_lands_near_vocab_word(self):
        # hand construction: the vocab word's own row is set to the mean of its
        # bucket rows, so its composed vector is exactly that mean; the longer
        # OOV spelling shares every distinct n-gram and only shifts weights
        space = make_space(["aaaaaa"], dim=8, ngram_min=3, ngram_max=3, bucket_count=4096, seed=11)
        buckets = space.indexer.bucket_ids("aaaaaa")
        rows = np.stack([space.input_vectors[1 + b] for b in buckets])
        space.input_vectors[0] = rows.mean(axis=0)

        assert set(space.indexer.ngrams("aaaaaaa")) == set(space.indexer.ngrams("aaaaaa"))
        v_in = space.word_vector("aaaaaa")
        v_oov = space.word_vector("aaaaaaa")
        cos = float(v_in @ v_oov / (np.linalg.norm(v_in) * np.linalg.norm(v_oov)))
        assert cos > 0.99

        oov_rows = np.stack(
            [space.input_vectors[1 + b] for b in space.indexer.bucket_ids("aaaaaaa")]
        )
        np.testing.assert_allclose(v_oov, oov_rows.mean(axis=0), atol=0)


class TestSpaceFile:
    def test_save_load_bitwise(self, tmp_path):
        space = make_space(["rex", "terram"], dim=5, seed=7)
        path = tmp_path / "s.clex"
        save_space(space, path)
        loaded = load_space(path)
        assert loaded.vocab.words == space.vocab.words
        np.testing.assert_array_equal(loaded.vocab.counts, space.vocab.counts)
        assert loaded.indexer == space.indexer
        np.testing.assert_array_equal(loaded.input_vectors, space.input_vectors)
        np.testing.assert_array_equal(loaded.output_vectors, space.output_vectors)

    def test_truncated_file_rejected(self, tmp_path):
        space = make_space(["rex"], dim=3)
        path = tmp_path / "s.clex"
        save_space(space, path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) - 10])
        with pytest.raises(ParseError, match="truncated"):
            load_space(path)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "s.clex"
        path.write_bytes(b"CLEX9" + b"\x00" * 64)
        with pytest.raises(ParseError, match="magic"):
            load_space(path)

    def test_little_endian_byte_fixture(self, tmp_path):
        # file assembled by hand, byte by byte, per the documented layout
        header = json.dumps(
            {
                "dim": 2,
                "vocab": ["ab"],
                "counts": [5],
                "bucket_count": 2,
                "ngram_min": 3,
                "ngram_max": 4,
            }
        ).encode()
        inputs = [1.5, -2.0, 0.25, 8.0, -0.5, 3.0]  # 3 rows x 2 dims
        outputs = [0.125, -1.0]  # 1 row x 2 dims
        blob = (
            b"CLEX1"
            + struct.pack("<Q", len(header))
            + header
            + struct.pack("<6f", *inputs)
            + struct.pack("<2f", *outputs)
        )
        path = tmp_path / "hand.clex"
        path.write_bytes(blob)
        space = load_space(path)
        np.testing.assert_array_equal(
            space.input_vectors, np.array(inputs, dtype=np.float32).reshape(3, 2)
        )
        np.testing.assert_array_equal(
            space.output_vectors, np.array(outputs, dtype=np.float32).reshape(1, 2)
        )
        assert space.vocab.words == ["ab"]


class TestTextVectors:
    def test_two_rows(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\nrex 1 2 3\nlex 4 5 6\n")
        vectors, dim = load_pretrained_text_vectors(path)
        assert dim == 3
        assert set(vectors) == {"rex", "lex"}
        np.testing.assert_allclose(vectors["rex"], [1, 2, 3])

    def test_count_mismatch(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\nrex 1 2 3\n")
        with pytest.raises(ParseError, match="declares 2"):
            load_pretrained_text_vectors(path)

    def test_scientific_notation(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("1 2\nrex 1.5e-3 -2E4\n")
        vectors, _ = load_pretrained_text_vectors(path)
        np.testing.assert_allclose(vectors["rex"], np.array([1.5e-3, -2e4], dtype=np.float32))

    def test_arity_mismatch_names_line(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\nrex 1 2 3\nlex 4 5\n")
        with pytest.raises(ParseError, match="line 3"):
            load_pretrained_text_vectors(path)

    def test_save_round_trip(self, tmp_path):
        vectors = {
            "beta": np.array([0.1, -0.25, 3.75], dtype=np.float32),
            "alpha": np.array([1e-8, 2.0, -7.125], dtype=np.float32),
        }
        path = tmp_path / "v.vec"
        save_text_vectors(path, vectors)
        loaded, dim = load_pretrained_text_vectors(path)
        assert dim == 3
        assert list(loaded) == ["alpha", "beta"]  # alphabetical
        for word in vectors:
            np.testing.assert_array_equal(loaded[word], vectors[word])

    def test_empty_refused(self, tmp_path):
        with pytest.raises(ValidationError):
            save_text_vectors(tmp_path / "v.vec", {})
