"""Duplicate-question retrieval over MOOC discussion-forum archives.

Pipeline: ingest TSV exports into a cleaned knowledge base, embed each
entry's title and content, persist the vectors, then answer incoming
questions with the top matches above a similarity threshold, each linked
to its recorded answer thread.
"""

from .bench import TartReport, bench_tart, format_report
from .config import ServiceConfig, load_config, parse_config
from .embeddings import (
    EmbeddingProvider,
    EmbeddingVector,
    HashEmbedder,
    RemoteEmbedder,
    embed_text,
    hash_embed,
    load_precomputed,
    pool_word_vectors,
    remote_embed,
)
from .errors import (
    ConfigError,
    ConsistencyError,
    DuplicateIdError,
    ForumQAError,
    IndexFormatError,
    ProtocolError,
    SchemaError,
    TransportError,
    UnknownIdError,
)
from .index_store import (
    EmbeddingIndex,
    IndexStaleWarning,
    build_index,
    is_stale,
    kb_fingerprint,
    load_index,
    save_index,
)
from .kb import (
    AnswerThread,
    KbEntry,
    KbStats,
    KnowledgeBase,
    ThreadPost,
    append_entry,
    build_knowledge_base,
    clean_entry,
    load_kb_json,
    parse_questions_tsv,
    parse_threads_tsv,
    save_kb_json,
)
from .retrieval import (
    DEFAULT_K,
    DEFAULT_PREFILTER,
    DEFAULT_THRESHOLD,
    RANKING_MODES,
    Query,
    RankedMatch,
    RetrievalEngine,
    apply_threshold_topk,
)
from .service import attach_engine, create_app
from .similarity import (
    DEFAULT_WEIGHTS,
    SimilarityBreakdown,
    Weights,
    combine_similarities,
    cosine_similarity,
    jaccard_similarity,
    weighted_similarity,
)
from .synth import synth_kb, synth_queries
from .textnorm import TokenSet, token_set, tokenize

__version__ = "0.1.0"

__all__ = [
    "AnswerThread",
    "ConfigError",
    "ConsistencyError",
    "DEFAULT_K",
    "DEFAULT_PREFILTER",
    "DEFAULT_THRESHOLD",
    "DEFAULT_WEIGHTS",
    "DuplicateIdError",
    "EmbeddingIndex",
    "EmbeddingProvider",
    "EmbeddingVector",
    "ForumQAError",
    "HashEmbedder",
    "IndexFormatError",
    "IndexStaleWarning",
    "KbEntry",
    "KbStats",
    "KnowledgeBase",
    "ProtocolError",
    "Query",
    "RANKING_MODES",
    "RankedMatch",
    "RemoteEmbedder",
    "RetrievalEngine",
    "SchemaError",
    "ServiceConfig",
    "SimilarityBreakdown",
    "TartReport",
    "ThreadPost",
    "TokenSet",
    "TransportError",
    "UnknownIdError",
    "Weights",
    "append_entry",
    "apply_threshold_topk",
    "attach_engine",
    "bench_tart",
    "build_index",
    "build_knowledge_base",
    "clean_entry",
    "combine_similarities",
    "cosine_similarity",
    "create_app",
    "embed_text",
    "format_report",
    "hash_embed",
    "is_stale",
    "jaccard_similarity",
    "kb_fingerprint",
    "load_config",
    "load_index",
    "load_kb_json",
    "load_precomputed",
    "parse_config",
    "parse_questions_tsv",
    "parse_threads_tsv",
    "pool_word_vectors",
    "remote_embed",
    "save_index",
    "save_kb_json",
    "synth_kb",
    "synth_queries",
    "token_set",
    "tokenize",
    "weighted_similarity",
]
