import numpy as np
import pytest
from hypothesis import given, strategies as st

from conceptbag.corpus import NGramVocabulary
from conceptbag.embeddings import (
    SgnsConfig,
    WordVectors,
    embed_all,
    embed_ngram,
    load_word_vectors,
    save_word_vectors,
    sgns_loss_and_grad,
    train_sgns,
)
from conceptbag.errors import DimensionMismatch, EmptyCorpus, MalformedLine, UnknownWord


def make_wv(mapping):
    words = {w: i for i, w in enumerate(mapping)}
    matrix = np.array([mapping[w] for w in mapping], dtype=np.float64)
    return WordVectors(words=words, matrix=matrix)


class TestLoader:
    def test_with_header(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("2 3\na 1 0 0\nb 0 1 0\n")
        wv = load_word_vectors(p)
        assert len(wv) == 2 and wv.dim == 3
        assert np.allclose(wv.vector("a"), [1, 0, 0])

    def test_headerless(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("a 1 0\nb 0 1\n")
        wv = load_word_vectors(p)
        assert len(wv) == 2 and wv.dim == 2

    def test_dimension_mismatch(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("2 3\na 1 0 0\nb 0 1\n")
        with pytest.raises(DimensionMismatch):
            load_word_vectors(p)

    def test_malformed_line_reports_number(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("2 2\na 1 0\nb x y\n")
        with pytest.raises(MalformedLine, match="line 3"):
            load_word_vectors(p)

    def test_duplicate_keeps_last(self, tmp_path, caplog):
        p = tmp_path / "v.txt"
        p.write_text("2 2\na 1 0\na 0 1\n")
        with caplog.at_level("WARNING"):
            wv = load_word_vectors(p)
        assert len(wv) == 1
        assert np.allclose(wv.vector("a"), [0, 1])
        assert any("duplicate" in r.message for r in caplog.records)

    def test_roundtrip(self, tmp_path):
        wv = make_wv({"a": [0.1, -2.5], "b": [3.25, 1e-8]})
        p = tmp_path / "v.txt"
        save_word_vectors(wv, p)
        back = load_word_vectors(p)
        assert back.words == wv.words
        assert np.array_equal(back.matrix, wv.matrix)


class TestEmbedNgram:
    def test_unigram_identity(self):
        wv = make_wv({"good": [1.0, 2.0]})
        assert np.array_equal(embed_ngram(("good",), wv), [1.0, 2.0])

    def test_bigram_mean(self):
        wv = make_wv({"a": [1.0, 0.0], "b": [0.0, 1.0]})
        assert np.allclose(embed_ngram(("a", "b"), wv), [0.5, 0.5])

    def test_trigram_mean(self):
        # oracle: independent summation of (3,0)+(0,3)+(3,3) over 3
        wv = make_wv({"a": [3.0, 0.0], "b": [0.0, 3.0], "c": [3.0, 3.0]})
        assert np.allclose(embed_ngram(("a", "b", "c"), wv), [2.0, 2.0])

    def test_unknown_word_names_position(self):
        wv = make_wv({"a": [1.0]})
        with pytest.raises(UnknownWord) as exc:
            embed_ngram(("a", "zzz"), wv)
        assert exc.value.word == "zzz" and exc.value.position == 1

    def test_repeated_word_equals_word(self):
        wv = make_wv({"w": [0.3, -0.7, 2.0]})
        assert np.allclose(embed_ngram(("w", "w"), wv), wv.vector("w"))

    @given(st.lists(st.sampled_from("ab"), min_size=1, max_size=3))
    def test_norm_bounded_by_max_word_norm(self, words):
        wv = make_wv({"a": [3.0, -1.0], "b": [0.5, 2.0]})
        out = embed_ngram(tuple(words), wv)
        max_norm = max(np.linalg.norm(wv.vector(w)) for w in set(words))
        assert np.linalg.norm(out) <= max_norm + 1e-12


class TestEmbedAll:
    def test_matches_individual_rows(self):
        wv = make_wv({"a": [1.0, 2.0], "b": [3.0, 4.0]})
        vocab = NGramVocabulary([("a",), ("a", "b"), ("b", "a")], {1, 2})
        table = embed_all(vocab, wv)
        for t, gram in enumerate(vocab.entries):
            assert np.array_equal(table[t], embed_ngram(gram, wv))

    def test_empty_vocab(self):
        wv = make_wv({"a": [1.0, 2.0]})
        table = embed_all(NGramVocabulary([], {1}), wv)
        assert table.shape == (0, 2)


class TestSgns:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            center = rng.normal(size=8)
            context = rng.normal(size=8)
            negatives = [rng.normal(size=8) for _ in range(5)]
            _, grad = sgns_loss_and_grad(center, context, negatives)
            fd = np.zeros_like(grad)
            h = 1e-6
            for j in range(8):
                up, down = center.copy(), center.copy()
                up[j] += h
                down[j] -= h
                fd[j] = (
                    sgns_loss_and_grad(up, context, negatives)[0]
                    - sgns_loss_and_grad(down, context, negatives)[0]
                ) / (2 * h)
            assert np.abs(grad - fd).max() / max(np.abs(fd).max(), 1e-12) < 1e-4

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            train_sgns([["a", "b"]], SgnsConfig(min_count=5))

    def test_zero_epochs_keeps_initialization(self):
        cfg = SgnsConfig(dim=4, epochs=0, min_count=1, seed=3)
        wv = train_sgns([["a", "b", "a", "b"]], cfg)
        rng = np.random.default_rng(3)
        expected = rng.uniform(-0.5 / 4, 0.5 / 4, size=(2, 4))
        assert np.array_equal(wv.matrix, expected)

    def test_deterministic(self):
        docs = [["x", "y", "z", "x", "y"] * 4] * 5
        cfg = SgnsConfig(dim=6, epochs=2, min_count=1, seed=11)
        a = train_sgns(docs, cfg)
        b = train_sgns(docs, cfg)
        assert a.words == b.words
        assert np.array_equal(a.matrix, b.matrix)

    def test_cooccurring_pair_becomes_similar(self):
        from conftest import cosine, sgns_pair_config, sgns_pair_corpus

        docs, words = sgns_pair_corpus(seed=1)
        wv = train_sgns(docs, sgns_pair_config(seed=1))
        pair = cosine(wv, "x", "y")
        present = [w for w in words if w in wv.words]
        rng = np.random.default_rng(1000)
        rand = [
            cosine(wv, *map(str, rng.choice(present, size=2, replace=False)))
            for _ in range(300)
        ]
        assert pair > np.quantile(rand, 0.95)
