"""Similarity measures: token-set overlap, vector cosine, and their weighted blend.

The final ranking score blends three cosine channels between a query and a
candidate (title-title, title-content, content-content) with tunable
non-negative weights p, q, r whose sum must stay >= 1. Negative cosines are
floored to 0 before blending so every reported score lives in [0, 1] and the
match threshold keeps its meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError, SchemaError
from .textnorm import TokenSet

# Sum floor uses a tiny slack so weights like (0.5, 0.3, 0.2) survive float
# addition; anything meaningfully below 1 is rejected.
_WEIGHT_SUM_SLACK = 1e-9

VectorLike = Union["EmbeddingVector", np.ndarray]  # noqa: F821  (duck-typed, see _as_array)
SetLike = Union[TokenSet, frozenset, set]


@dataclass(frozen=True)
class Weights:
    """Blend weights for the title-title / title-content / content-content channels."""

    p: float
    q: float
    r: float

    def __post_init__(self) -> None:
        for name, value in (("p", self.p), ("q", self.q), ("r", self.r)):
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f"weight {name} must be a finite non-negative number, got {value!r}")
        if self.p + self.q + self.r < 1.0 - _WEIGHT_SUM_SLACK:
            raise ConfigError(
                f"weights must satisfy p+q+r >= 1, got p={self.p} q={self.q} r={self.r}"
            )

    @property
    def total(self) -> float:
        return self.p + self.q + self.r


# Title weighted above content by default; not a calibrated value, just the
# documented starting point. Override per deployment or per request.
DEFAULT_WEIGHTS = Weights(2.0, 1.0, 1.0)


@dataclass(frozen=True)
class SimilarityBreakdown:
    """Per-candidate channel scores plus the blended final score, all in [0, 1].

    jaccard is populated only when the lexical path actually ran for this
    candidate (jaccard mode); it stays None otherwise.
    """

    t_sim: float
    h_sim: float
    c_sim: float
    n_sim: float
    jaccard: float | None = None

    def __post_init__(self) -> None:
        for name, value in (
            ("t_sim", self.t_sim),
            ("h_sim", self.h_sim),
            ("c_sim", self.c_sim),
            ("n_sim", self.n_sim),
        ):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0,1], got {value!r}")
        if self.jaccard is not None and not 0.0 <= self.jaccard <= 1.0:
            raise ValueError(f"jaccard must be in [0,1], got {self.jaccard!r}")


def _as_token_set(value: SetLike) -> frozenset:
    if isinstance(value, TokenSet):
        return value.tokens
    return frozenset(value)


def jaccard_similarity(a: SetLike, b: SetLike) -> float:
    """Overlap ratio |A∩B| / |A∪B| of two token sets.

    Two empty sets compare as identical (1.0); one empty set against a
    non-empty one scores 0.0.
    """
    sa, sb = _as_token_set(a), _as_token_set(b)
    if not sa and not sb:
        return 1.0
    union = len(sa | sb)
    if union == 0:
        return 1.0
    return len(sa & sb) / union


def _as_array(value: VectorLike) -> np.ndarray:
    values = getattr(value, "values", value)
    return np.asarray(values, dtype=np.float64)


def cosine_similarity(a: VectorLike, b: VectorLike) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1].

    Either vector being zero yields 0.0 by policy rather than NaN, so
    degenerate (empty-text) embeddings rank last instead of crashing.
    """
    va, vb = _as_array(a), _as_array(b)
    if va.shape != vb.shape:
        raise SchemaError(f"cosine requires equal dimensions, got {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        return 0.0
    value = float(np.dot(va, vb)) / (na * nb)
    return max(-1.0, min(1.0, value))


def combine_similarities(t_sim: float, h_sim: float, c_sim: float, weights: Weights) -> float:
    """Weighted normalized blend (p*t + q*h + r*c) / (p+q+r) of the three channels.

    Inputs are floored at 0 first; for channel values already in [0, 1] the
    flooring is an exact no-op, so direct formula evaluation matches bit for bit.
    """
    t = max(0.0, t_sim)
    h = max(0.0, h_sim)
    c = max(0.0, c_sim)
    return (weights.p * t + weights.q * h + weights.r * c) / (weights.p + weights.q + weights.r)


def weighted_similarity(
    query: tuple[VectorLike, VectorLike],
    candidate: tuple[VectorLike, VectorLike],
    weights: Weights = DEFAULT_WEIGHTS,
    *,
    jaccard: float | None = None,
) -> SimilarityBreakdown:
    """Score one candidate against the query over both text fields.

    query and candidate are (title vector, content vector) pairs from the
    same provider. Channels: title-title, query-title vs candidate-content,
    content-content. Note the middle channel makes the result intentionally
    asymmetric under query/candidate swap.
    """
    title_q, content_q = query
    title_c, content_c = candidate
    _check_same_provider(title_q, content_q, title_c, content_c)
    t_sim = max(0.0, cosine_similarity(title_q, title_c))
    h_sim = max(0.0, cosine_similarity(title_q, content_c))
    c_sim = max(0.0, cosine_similarity(content_q, content_c))
    n_sim = combine_similarities(t_sim, h_sim, c_sim, weights)
    return SimilarityBreakdown(t_sim=t_sim, h_sim=h_sim, c_sim=c_sim, n_sim=n_sim, jaccard=jaccard)


def _check_same_provider(*vectors: VectorLike) -> None:
    providers = {v.provider_id for v in vectors if hasattr(v, "provider_id")}
    if len(providers) > 1:
        raise SchemaError(f"vectors from different providers cannot be compared: {sorted(providers)}")
