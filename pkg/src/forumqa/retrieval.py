"""Candidate ranking, top-k selection, and the lexical-then-semantic cascade.

A query is scored against every knowledge-base entry (exhaustive scan;
exact and fast enough at the 10^4 scale this targets), filtered by an
inclusive score threshold, and truncated to the top k. An empty result is
a meaningful outcome: the question has no known duplicate and should be
treated as new, so nothing here raises just because no candidate clears
the bar.

The cascade runs a cheap token-overlap prefilter first and reranks only
the survivors semantically. With a prefilter size of at least the corpus
size it degenerates to the full ranking, and the implementation keeps the
two paths numerically identical in that case: survivors are restored to
index order before scoring, so the semantic stage sees the exact same
matrices either way.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingProvider, embed_text
from .errors import ConfigError, ConsistencyError, UnknownIdError
from .index_store import EmbeddingIndex, build_index
from .kb import AnswerThread, KnowledgeBase
from .similarity import DEFAULT_WEIGHTS, SimilarityBreakdown, Weights, jaccard_similarity
from .textnorm import TokenSet, token_set

log = logging.getLogger(__name__)

DEFAULT_K = 5
DEFAULT_THRESHOLD = 0.70
DEFAULT_PREFILTER = 50

RANKING_MODES = ("weighted", "jaccard", "cosine_title", "cosine_content")


@dataclass(frozen=True)
class Query:
    """One incoming question plus its retrieval knobs."""

    title: str
    content: str
    tags: frozenset[str] = frozenset()
    k: int = DEFAULT_K
    threshold: float = DEFAULT_THRESHOLD
    mode: str = "weighted"
    prefilter_size: int | None = None
    restrict_tags: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must lie in [0, 1], got {self.threshold!r}")
        if self.mode not in RANKING_MODES:
            raise ConfigError(f"mode must be one of {RANKING_MODES}, got {self.mode!r}")
        if self.prefilter_size is not None and (
            not isinstance(self.prefilter_size, int) or self.prefilter_size < 1
        ):
            raise ConfigError(f"prefilter size must be a positive integer, got {self.prefilter_size!r}")
        if not isinstance(self.tags, frozenset):
            object.__setattr__(self, "tags", frozenset(self.tags))


@dataclass(frozen=True)
class RankedMatch:
    query_id: str
    rank: int
    title: str
    breakdown: SimilarityBreakdown
    thread_available: bool


def apply_threshold_topk(
    scored: list[tuple[str, float]], threshold: float, k: int
) -> list[tuple[str, float]]:
    """Inclusive threshold filter, then best-first truncation to k.

    Ties break toward the smaller id so the outcome never depends on input
    order.
    """
    kept = [(item_id, score) for item_id, score in scored if score >= threshold]
    kept.sort(key=lambda pair: (-pair[1], pair[0]))
    return kept[:k]


class RetrievalEngine:
    """Read-only ranking over one (knowledge base, embedding index) pair.

    Both snapshots are immutable, so any number of queries may run
    concurrently against one engine. Swapping in new data means building a
    new engine and replacing the reference; in-flight queries finish on
    the old one.
    """

    def __init__(
        self,
        kb: KnowledgeBase,
        provider: EmbeddingProvider,
        index: EmbeddingIndex | None = None,
        weights: Weights = DEFAULT_WEIGHTS,
    ) -> None:
        if index is None:
            index = build_index(kb, provider)
        if index.provider_id != provider.provider_id:
            raise ConsistencyError(
                f"index was built by {index.provider_id!r} but the active provider is "
                f"{provider.provider_id!r}"
            )
        if index.dim != provider.dim:
            raise ConsistencyError(f"index dim {index.dim} != provider dim {provider.dim}")
        missing = [query_id for query_id in kb.entries if query_id not in index.records]
        if missing:
            raise ConsistencyError(
                f"index lacks vectors for {len(missing)} entries (first: {sorted(missing)[:3]})"
            )

        self.kb = kb
        self.provider = provider
        self.index = index
        self.weights = weights
        self._ids = sorted(kb.entries)
        self._row_of = {query_id: row for row, query_id in enumerate(self._ids)}
        if self._ids:
            self._title_matrix = np.vstack([index.records[i][0] for i in self._ids])
            self._content_matrix = np.vstack([index.records[i][1] for i in self._ids])
        else:
            self._title_matrix = np.empty((0, index.dim), dtype=np.float64)
            self._content_matrix = np.empty((0, index.dim), dtype=np.float64)
        self._title_norms = np.linalg.norm(self._title_matrix, axis=1)
        self._content_norms = np.linalg.norm(self._content_matrix, axis=1)
        self._combined_tokens: list[TokenSet] | None = None

    # -- public API ---------------------------------------------------------

    def retrieve(self, query: Query, weights: Weights | None = None) -> list[RankedMatch]:
        """Dispatch to the cascade when the query asks for it."""
        if query.prefilter_size is not None:
            return self.cascade_rank(query, query.prefilter_size, weights)
        return self.rank_all(query, weights)

    def rank_all(self, query: Query, weights: Weights | None = None) -> list[RankedMatch]:
        rows = self._candidate_rows(query)
        return self._rank_rows(query, rows, weights or self.weights)

    def cascade_rank(
        self, query: Query, m: int = DEFAULT_PREFILTER, weights: Weights | None = None
    ) -> list[RankedMatch]:
        """Token-overlap prefilter to m survivors, semantic rerank after.

        The threshold and k apply to the second-stage scores only; the
        first stage is pure recall control.
        """
        if m < 1:
            raise ConfigError(f"prefilter size must be a positive integer, got {m!r}")
        candidate_rows = self._candidate_rows(query)
        overlap = self._stage1_scores(query, candidate_rows)
        kept = apply_threshold_topk(
            [(self._ids[row], overlap[pos]) for pos, row in enumerate(candidate_rows)],
            threshold=0.0,
            k=m,
        )
        # Index order, not overlap order: with m >= corpus size this makes
        # the rerank see the exact matrices rank_all would, so the two
        # paths return byte-identical results.
        survivor_rows = np.array(sorted(self._row_of[i] for i, _ in kept), dtype=np.intp)
        return self._rank_rows(query, survivor_rows, weights or self.weights)

    def get_thread(self, query_id: str) -> AnswerThread | None:
        """None means the id is known but nothing was ever answered."""
        if query_id not in self.kb.entries:
            raise UnknownIdError(f"no knowledge-base entry with id {query_id!r}")
        return self.kb.threads.get(query_id)

    # -- internals ----------------------------------------------------------

    def _candidate_rows(self, query: Query) -> np.ndarray:
        if not query.restrict_tags or not query.tags:
            return np.arange(len(self._ids), dtype=np.intp)
        rows = [
            pos
            for pos, query_id in enumerate(self._ids)
            if self.kb.entries[query_id].tags & query.tags
        ]
        return np.array(rows, dtype=np.intp)

    def _entry_tokens(self) -> list[TokenSet]:
        if self._combined_tokens is None:
            combined = []
            for query_id in self._ids:
                entry = self.kb.entries[query_id]
                merged = token_set(entry.title).tokens | token_set(entry.content).tokens
                combined.append(TokenSet(merged, "title+content"))
            self._combined_tokens = combined
        return self._combined_tokens

    def _stage1_scores(self, query: Query, rows: np.ndarray) -> list[float]:
        query_tokens = TokenSet(
            token_set(query.title).tokens | token_set(query.content).tokens, "title+content"
        )
        entry_tokens = self._entry_tokens()
        return [jaccard_similarity(query_tokens, entry_tokens[row]) for row in rows]

    def _channel_scores(
        self, query: Query, rows: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Floored cosine channels for each candidate row.

        Channel order matches the weighting scheme: title-title,
        title-content, content-content.
        """
        query_title = embed_text(self.provider, query.title, field="title")
        query_content = embed_text(self.provider, query.content, field="content")
        title_vec = query_title.values
        content_vec = query_content.values
        title_norm = float(np.linalg.norm(title_vec))
        content_norm = float(np.linalg.norm(content_vec))

        t = self._cosine_rows(self._title_matrix, self._title_norms, rows, title_vec, title_norm)
        h = self._cosine_rows(self._content_matrix, self._content_norms, rows, title_vec, title_norm)
        c = self._cosine_rows(self._content_matrix, self._content_norms, rows, content_vec, content_norm)
        return t, h, c

    @staticmethod
    def _cosine_rows(
        matrix: np.ndarray,
        row_norms: np.ndarray,
        rows: np.ndarray,
        vector: np.ndarray,
        vector_norm: float,
    ) -> np.ndarray:
        dots = matrix[rows] @ vector
        denom = row_norms[rows] * vector_norm
        safe = np.where(denom > 0.0, denom, 1.0)
        cosines = np.where(denom > 0.0, dots / safe, 0.0)
        return np.maximum(0.0, np.clip(cosines, -1.0, 1.0))

    def _rank_rows(self, query: Query, rows: np.ndarray, weights: Weights) -> list[RankedMatch]:
        if rows.size == 0:
            return []
        t, h, c = self._channel_scores(query, rows)
        # Same association order as the scalar blend, so a single-entry
        # ranking and a batch ranking agree to the last bit.
        n = (weights.p * t + weights.q * h + weights.r * c) / (weights.p + weights.q + weights.r)

        # The overlap score is reported only when it drove the ranking;
        # keeping it out of semantic-mode results lets the cascade return
        # exactly what the full scan would.
        jaccard_values: list[float | None]
        if query.mode == "jaccard":
            jaccard_values = list(self._stage1_scores(query, rows))
        else:
            jaccard_values = [None] * rows.size

        if query.mode == "weighted":
            ranking = n
        elif query.mode == "cosine_title":
            ranking = t
        elif query.mode == "cosine_content":
            ranking = c
        else:
            ranking = np.array(jaccard_values, dtype=np.float64)

        scored = [(self._ids[row], float(ranking[pos])) for pos, row in enumerate(rows)]
        selected = apply_threshold_topk(scored, query.threshold, query.k)

        position = {self._ids[row]: pos for pos, row in enumerate(rows)}
        matches = []
        for rank, (query_id, _score) in enumerate(selected, start=1):
            pos = position[query_id]
            breakdown = SimilarityBreakdown(
                t_sim=float(t[pos]),
                h_sim=float(h[pos]),
                c_sim=float(c[pos]),
                n_sim=float(n[pos]),
                jaccard=jaccard_values[pos],
            )
            matches.append(
                RankedMatch(
                    query_id=query_id,
                    rank=rank,
                    title=self.kb.entries[query_id].title,
                    breakdown=breakdown,
                    thread_available=query_id in self.kb.threads,
                )
            )
        return matches
