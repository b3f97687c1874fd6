"""Deterministic synthetic corpora for benchmarks and scale tests.

Entries mix a shared vocabulary (so questions genuinely overlap, like a
real forum) with serial-numbered tokens unique to each entry (so an entry
queried verbatim is never tied with a neighbor). Everything is driven by
a seeded RNG: same arguments, same corpus, byte for byte.
"""

from __future__ import annotations

import random

from .kb import KbEntry, KbStats, KnowledgeBase
from .retrieval import Query

_VOCAB = (
    "assignment quiz lecture video grader notebook kernel submission deadline "
    "error output install import module function variable loop dataset plot "
    "week unit module score regrade certificate browser upload timeout login"
).split()

_TAGS = ("logistics", "python", "grading", "content", "technical")


def synth_kb(entry_count: int, seed: int = 0) -> KnowledgeBase:
    if entry_count < 0:
        raise ValueError(f"entry_count must be non-negative, got {entry_count}")
    rng = random.Random(seed)
    entries: dict[str, KbEntry] = {}
    for serial in range(entry_count):
        query_id = f"q{serial:05d}"
        title_words = rng.sample(_VOCAB, rng.randint(3, 6))
        content_words = rng.sample(_VOCAB, rng.randint(8, 14))
        entries[query_id] = KbEntry(
            query_id=query_id,
            title=" ".join(title_words + [f"tser{serial}x"]),
            content=" ".join(content_words + [f"cser{serial}x"]),
            tags=frozenset(rng.sample(_TAGS, rng.randint(1, 2))),
            asked_at=1_500_000_000 + serial,
        )
    stats = KbStats(raw_count=entry_count, cleaned_count=entry_count, dropped_count=0)
    return KnowledgeBase(entries=entries, threads={}, stats=stats)


def synth_queries(kb: KnowledgeBase, count: int, seed: int = 0, **query_kwargs) -> list[Query]:
    """Sample entries and re-ask them verbatim (with replacement)."""
    ids = sorted(kb.entries)
    if not ids:
        raise ValueError("cannot sample queries from an empty knowledge base")
    rng = random.Random(seed)
    queries = []
    for _ in range(count):
        entry = kb.entries[rng.choice(ids)]
        queries.append(Query(title=entry.title, content=entry.content, **query_kwargs))
    return queries
