"""Turn-around-time benchmark for the query path.

Measures wall clock around exactly what a live request pays: embedding
the incoming question, scoring it against the corpus, and applying the
threshold/top-k selection. Corpus embedding is excluded on purpose; that
cost is paid once at index time, which is the whole point of persisting
the index.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .errors import ConfigError
from .retrieval import Query, RetrievalEngine

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TartReport:
    query_count: int
    min_ms: float
    mean_ms: float
    max_ms: float
    latencies_ms: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.query_count != len(self.latencies_ms):
            raise ConfigError(
                f"query_count {self.query_count} != {len(self.latencies_ms)} recorded latencies"
            )
        if not self.min_ms <= self.mean_ms <= self.max_ms:
            raise ConfigError(
                f"latency summary out of order: min {self.min_ms}, mean {self.mean_ms}, max {self.max_ms}"
            )


def bench_tart(engine: RetrievalEngine, queries: list[Query], repetitions: int = 1) -> TartReport:
    if not queries:
        raise ConfigError("benchmark needs at least one query")
    if repetitions < 1:
        raise ConfigError(f"repetitions must be a positive integer, got {repetitions!r}")
    latencies: list[float] = []
    for _ in range(repetitions):
        for query in queries:
            started = time.perf_counter()
            engine.retrieve(query)
            latencies.append((time.perf_counter() - started) * 1000.0)
    return TartReport(
        query_count=len(latencies),
        min_ms=min(latencies),
        mean_ms=sum(latencies) / len(latencies),
        max_ms=max(latencies),
        latencies_ms=tuple(latencies),
    )


def format_report(report: TartReport) -> str:
    rows = [
        ("min", report.min_ms),
        ("avg", report.mean_ms),
        ("max", report.max_ms),
    ]
    lines = [f"turn-around time over {report.query_count} queries"]
    lines.append(f"{'':>4}  latency_ms")
    for label, value in rows:
        lines.append(f"{label:>4}  {value:10.3f}")
    return "\n".join(lines)
