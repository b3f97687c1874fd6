from __future__ import annotations

import numpy as np
import pytest

from embedsvc import ModelLoadError, WordVectorModel, tokenize


def write_vectors(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def small_model(tmp_path):
    path = write_vectors(tmp_path / "vectors.txt", [
        "alpha 1.0 0.0 0.0",
        "beta 0.0 1.0 0.0",
        "gamma 0.0 0.0 1.0",
        "delta 0.5 0.5 0.0",
    ])
    return WordVectorModel.from_file(path)


class TestTokenize:
    def test_lowercases_and_splits_punctuation(self):
        assert tokenize("Gradient DESCENT, converges?") == ["gradient", "descent", "converges"]

    def test_keeps_contractions_and_digits(self):
        assert tokenize("doesn't cover week 3") == ["doesn't", "cover", "week", "3"]

    def test_empty(self):
        assert tokenize("") == []
        assert tokenize("!!! ...") == []


class TestLoad:
    def test_reads_dim_and_identity(self, small_model):
        assert small_model.dim == 3
        assert small_model.provider_id == "wordvec-d3"
        assert "alpha" in small_model
        assert "zeta" not in small_model

    def test_blank_lines_skipped(self, tmp_path):
        path = write_vectors(tmp_path / "v.txt", ["a 1.0 2.0", "", "   ", "b 3.0 4.0"])
        model = WordVectorModel.from_file(path)
        assert model.dim == 2
        assert "a" in model and "b" in model

    def test_duplicate_token_names_line(self, tmp_path):
        path = write_vectors(tmp_path / "v.txt", ["a 1.0", "b 2.0", "a 3.0"])
        with pytest.raises(ModelLoadError, match=r":3:.*duplicate token 'a'"):
            WordVectorModel.from_file(path)

    def test_inconsistent_dim_names_line_and_sizes(self, tmp_path):
        path = write_vectors(tmp_path / "v.txt", ["a 1.0 2.0 3.0", "b 1.0 2.0"])
        with pytest.raises(ModelLoadError, match=r":2:.*has 2 components, expected 3"):
            WordVectorModel.from_file(path)

    def test_bad_float_names_line(self, tmp_path):
        path = write_vectors(tmp_path / "v.txt", ["a 1.0", "b one.zero"])
        with pytest.raises(ModelLoadError, match=r":2:"):
            WordVectorModel.from_file(path)

    def test_non_finite_rejected(self, tmp_path):
        path = write_vectors(tmp_path / "v.txt", ["a 1.0 nan"])
        with pytest.raises(ModelLoadError, match="non-finite"):
            WordVectorModel.from_file(path)

    def test_token_without_values_rejected(self, tmp_path):
        path = write_vectors(tmp_path / "v.txt", ["lonely"])
        with pytest.raises(ModelLoadError, match=r":1:"):
            WordVectorModel.from_file(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("\n\n", encoding="utf-8")
        with pytest.raises(ModelLoadError, match="no vectors"):
            WordVectorModel.from_file(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ModelLoadError, match="cannot read"):
            WordVectorModel.from_file(tmp_path / "absent.txt")


class TestPooling:
    def test_single_token_is_its_own_vector(self, small_model):
        [vec] = small_model.embed_batch(["alpha"])
        assert vec == [1.0, 0.0, 0.0]

    def test_mean_of_two(self, small_model):
        [vec] = small_model.embed_batch(["alpha beta"])
        assert vec == [0.5, 0.5, 0.0]

    def test_oov_tokens_are_excluded_not_averaged_in(self, small_model):
        with_noise = small_model.embed_batch(["alpha zzz qqq"])
        clean = small_model.embed_batch(["alpha"])
        assert with_noise == clean

    def test_all_oov_is_zero_vector(self, small_model):
        [vec] = small_model.embed_batch(["zzz qqq"])
        assert vec == [0.0, 0.0, 0.0]

    def test_empty_text_is_zero_vector(self, small_model):
        [vec] = small_model.embed_batch([""])
        assert vec == [0.0, 0.0, 0.0]

    def test_empty_batch(self, small_model):
        assert small_model.embed_batch([]) == []

    def test_order_preserved(self, small_model):
        out = small_model.embed_batch(["beta", "alpha", "gamma"])
        assert out == [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]

    def test_repeated_token_does_not_skew_the_mean_count(self, small_model):
        # Each occurrence contributes; "alpha alpha beta" pools 2:1.
        [vec] = small_model.embed_batch(["alpha alpha beta"])
        assert vec == pytest.approx([2 / 3, 1 / 3, 0.0])

    def test_deterministic(self, small_model):
        a = small_model.embed_batch(["alpha delta", "beta"])
        b = small_model.embed_batch(["alpha delta", "beta"])
        assert a == b

    def test_pooled_components_stay_inside_the_contributing_envelope(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            dim = int(rng.integers(1, 16))
            vocab = {f"w{i}": rng.normal(size=dim) * 10 for i in range(12)}
            model = WordVectorModel({k: v.copy() for k, v in vocab.items()}, dim)
            words = [f"w{int(i)}" for i in rng.integers(0, 12, size=int(rng.integers(1, 9)))]
            [pooled] = model.embed_batch([" ".join(words)])
            stack = np.vstack([vocab[w] for w in words])
            lo, hi = stack.min(axis=0), stack.max(axis=0)
            assert np.all(np.asarray(pooled) >= lo - 1e-12)
            assert np.all(np.asarray(pooled) <= hi + 1e-12)
