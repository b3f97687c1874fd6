from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from forumqa.embeddings import hash_embed
from forumqa.errors import ConfigError, SchemaError
from forumqa.similarity import (
    DEFAULT_WEIGHTS,
    SimilarityBreakdown,
    Weights,
    combine_similarities,
    cosine_similarity,
    jaccard_similarity,
    weighted_similarity,
)
from forumqa.textnorm import token_set

# Independent re-derivations used as oracles: element counting instead of
# set algebra, fsum instead of BLAS.


def _jaccard_by_counting(a, b):
    inter = sum(1 for x in a if x in b)
    union = len(a) + len(b) - inter
    return 1.0 if union == 0 else inter / union


def _cosine_by_fsum(a, b):
    dot = math.fsum(x * y for x, y in zip(a, b))
    na = math.sqrt(math.fsum(x * x for x in a))
    nb = math.sqrt(math.fsum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


tokens = st.sets(st.text(alphabet="abcdefgh", min_size=1, max_size=3), max_size=8)
components = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=2, max_size=8
)


class TestJaccard:
    def test_identity(self):
        assert jaccard_similarity({"a", "b", "c"}, {"a", "b", "c"}) == 1.0

    def test_disjoint(self):
        assert jaccard_similarity({"a", "b"}, {"c", "d"}) == 0.0

    def test_half_overlap(self):
        # |{b,c}| = 2 over |{a,b,c,d}| = 4
        assert jaccard_similarity({"a", "b", "c"}, {"b", "c", "d"}) == 0.5

    def test_both_empty_is_identical(self):
        assert jaccard_similarity(frozenset(), frozenset()) == 1.0

    def test_one_empty(self):
        assert jaccard_similarity(frozenset(), {"a"}) == 0.0
        assert jaccard_similarity({"a"}, frozenset()) == 0.0

    def test_accepts_token_sets(self):
        a = token_set("demo video missing")
        b = token_set("demo video broken")
        assert jaccard_similarity(a, b) == 0.5

    @given(tokens, tokens)
    def test_matches_counting_oracle(self, a, b):
        assert jaccard_similarity(a, b) == pytest.approx(_jaccard_by_counting(a, b), abs=1e-12)

    @given(tokens, tokens)
    def test_symmetry_and_bounds(self, a, b):
        forward = jaccard_similarity(a, b)
        assert forward == jaccard_similarity(b, a)
        assert 0.0 <= forward <= 1.0


class TestCosine:
    def test_orthogonal(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_forty_five_degrees(self):
        value = cosine_similarity(np.array([1.0, 1.0]), np.array([1.0, 0.0]))
        assert value == pytest.approx(0.70710678, abs=1e-6)

    def test_self_similarity(self):
        v = np.array([3.0, 4.0, 0.0, 1.0])
        assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-9)

    def test_zero_vector_policy(self):
        assert cosine_similarity(np.zeros(4), np.array([1.0, 2.0, 3.0, 4.0])) == 0.0
        assert cosine_similarity(np.zeros(4), np.zeros(4)) == 0.0

    def test_dim_mismatch(self):
        with pytest.raises(SchemaError):
            cosine_similarity(np.ones(3), np.ones(4))

    def test_opposite_vectors_clamp(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([-1.0, 0.0])) == -1.0

    @given(components, components)
    def test_matches_fsum_oracle(self, a, b):
        n = min(len(a), len(b))
        va, vb = np.array(a[:n]), np.array(b[:n])
        expected = max(-1.0, min(1.0, _cosine_by_fsum(va, vb)))
        assert cosine_similarity(va, vb) == pytest.approx(expected, abs=1e-12)

    @given(components, st.floats(min_value=0.001, max_value=1000))
    def test_scale_invariance(self, a, alpha):
        v = np.array(a)
        w = np.array(a[::-1])
        assert cosine_similarity(alpha * v, w) == pytest.approx(
            cosine_similarity(v, w), abs=1e-9
        )


class TestWeights:
    def test_default(self):
        assert (DEFAULT_WEIGHTS.p, DEFAULT_WEIGHTS.q, DEFAULT_WEIGHTS.r) == (2.0, 1.0, 1.0)

    def test_negative_rejected(self):
        with pytest.raises(ConfigError):
            Weights(-0.1, 1.0, 1.0)

    def test_sum_below_one_rejected(self):
        with pytest.raises(ConfigError):
            Weights(0.2, 0.2, 0.2)
        with pytest.raises(ConfigError):
            Weights(0.0, 0.0, 0.0)

    def test_sum_exactly_one_survives_float_addition(self):
        # 0.5 + 0.3 + 0.2 lands a hair under 1.0 in binary; must still pass.
        Weights(0.5, 0.3, 0.2)
        Weights(1.0, 0.0, 0.0)

    def test_non_finite_rejected(self):
        with pytest.raises(ConfigError):
            Weights(float("nan"), 1.0, 1.0)
        with pytest.raises(ConfigError):
            Weights(float("inf"), 1.0, 1.0)


class TestBlend:
    def test_worked_example(self):
        # (2*0.9 + 1*0.6 + 1*0.3) / 4
        value = combine_similarities(0.9, 0.6, 0.3, Weights(2, 1, 1))
        assert value == pytest.approx(0.675, abs=1e-12)

    def test_title_only_weights_passthrough_exact(self):
        for t in (0.0, 0.123456789, 0.7, 1.0):
            assert combine_similarities(t, 0.9, 0.2, Weights(1, 0, 0)) == t

    def test_all_ones_is_exactly_one(self):
        assert combine_similarities(1.0, 1.0, 1.0, Weights(2, 1, 1)) == 1.0
        assert combine_similarities(1.0, 1.0, 1.0, Weights(0.5, 0.3, 0.2)) == 1.0

    def test_negative_channels_floored(self):
        value = combine_similarities(-0.5, 0.2, 0.1, Weights(2, 1, 1))
        assert value == pytest.approx((0.2 + 0.1) / 4, abs=1e-12)

    channels = st.floats(min_value=0, max_value=1)
    weight = st.floats(min_value=0, max_value=5)

    @given(channels, channels, channels, weight, weight, weight)
    def test_bounded_by_channel_envelope(self, t, h, c, p, q, r):
        if p + q + r < 1:
            return
        w = Weights(p, q, r)
        n = combine_similarities(t, h, c, w)
        assert min(t, h, c) - 1e-12 <= n <= max(t, h, c) + 1e-12

    # k floor keeps the scaled sum 4k at or above the valid-weights line.
    @given(channels, channels, channels, st.floats(min_value=0.25, max_value=100))
    def test_weight_scaling_invariance(self, t, h, c, k):
        base = combine_similarities(t, h, c, Weights(2, 1, 1))
        scaled = combine_similarities(t, h, c, Weights(2 * k, k, k))
        assert scaled == pytest.approx(base, abs=1e-12)


class TestWeightedSimilarity:
    def _pair(self, title, content, dim=64):
        return (
            hash_embed(title, dim, field="title"),
            hash_embed(content, dim, field="content"),
        )

    def test_identical_pair_with_matching_fields(self):
        pair = self._pair("demo video", "demo video")
        b = weighted_similarity(pair, pair, Weights(2, 1, 1))
        assert b.t_sim == pytest.approx(1.0, abs=1e-9)
        assert b.c_sim == pytest.approx(1.0, abs=1e-9)
        assert b.n_sim == pytest.approx(1.0, abs=1e-9)

    def test_identical_pair_distinct_fields_needs_zero_q(self):
        pair = self._pair("demo video missing", "the portal does not show the video")
        partial = weighted_similarity(pair, pair, Weights(2, 1, 1))
        assert partial.t_sim == pytest.approx(1.0, abs=1e-9)
        assert partial.c_sim == pytest.approx(1.0, abs=1e-9)
        assert partial.n_sim < 1.0 - 1e-6  # h channel drags the blend down

        exact = weighted_similarity(pair, pair, Weights(2, 0, 1))
        assert exact.n_sim == pytest.approx(1.0, abs=1e-9)

    def test_asymmetry_of_title_content_channel(self):
        """Swapping query and candidate changes h_sim, on purpose."""
        query = self._pair("blender problem", "the robot stops")
        candidate = self._pair("robot stuck", "blender problem")
        forward = weighted_similarity(query, candidate, Weights(1, 2, 1))
        backward = weighted_similarity(candidate, query, Weights(1, 2, 1))
        assert forward.t_sim == pytest.approx(backward.t_sim, abs=1e-12)
        assert forward.c_sim == pytest.approx(backward.c_sim, abs=1e-12)
        assert forward.h_sim != pytest.approx(backward.h_sim, abs=1e-6)

    def test_mixed_providers_rejected(self):
        a = self._pair("x y", "z w")
        b = (
            hash_embed("x y", 64, seed=7, field="title"),
            hash_embed("z w", 64, seed=7, field="content"),
        )
        with pytest.raises(SchemaError):
            weighted_similarity(a, b)

    def test_breakdown_matches_channel_recomputation(self):
        query = self._pair("float division error", "moments of the color marker")
        candidate = self._pair("division by zero", "center of color marker using moments")
        b = weighted_similarity(query, candidate, Weights(2, 1, 1))
        t = max(0.0, cosine_similarity(query[0], candidate[0]))
        h = max(0.0, cosine_similarity(query[0], candidate[1]))
        c = max(0.0, cosine_similarity(query[1], candidate[1]))
        assert b.t_sim == t and b.h_sim == h and b.c_sim == c
        assert b.n_sim == combine_similarities(t, h, c, Weights(2, 1, 1))
        assert b.jaccard is None


class TestBreakdownValidation:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SimilarityBreakdown(t_sim=1.2, h_sim=0, c_sim=0, n_sim=0)
        with pytest.raises(ValueError):
            SimilarityBreakdown(t_sim=0, h_sim=0, c_sim=0, n_sim=0, jaccard=-0.1)

    def test_jaccard_optional(self):
        plain = SimilarityBreakdown(t_sim=0.5, h_sim=0.5, c_sim=0.5, n_sim=0.5)
        assert plain.jaccard is None
        tagged = SimilarityBreakdown(t_sim=0.5, h_sim=0.5, c_sim=0.5, n_sim=0.5, jaccard=0.25)
        assert tagged.jaccard == 0.25
