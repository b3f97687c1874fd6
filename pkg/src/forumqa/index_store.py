"""On-disk cache of per-entry title/content embedding vectors.

Query-time cost must exclude corpus embedding, so vectors are computed
once and persisted. The file format is plain text, line-oriented:

    EMBIDX 1
    provider=<id> dim=<N> fingerprint=<hex>
    T <query_id> <v1> ... <vN>
    C <query_id> <v1> ... <vN>
    ...

One T/C line pair per entry, T first. Floats are serialized as
shortest-round-trip decimals (Python repr), which reparse bit-exactly.
Ids and the provider id are percent-encoded so whitespace never breaks
the line structure. The fingerprint ties the index to the knowledge base
it was built from; a mismatch on load is surfaced as a staleness warning,
not an error, because rebuilding is the caller's decision.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterator
from urllib.parse import quote, unquote

import numpy as np

from .errors import ConsistencyError, IndexFormatError, SchemaError

if TYPE_CHECKING:
    from .embeddings import EmbeddingProvider
    from .kb import KnowledgeBase

log = logging.getLogger(__name__)

MAGIC = "EMBIDX 1"
_BATCH = 64


class IndexStaleWarning(UserWarning):
    """Loaded index was built from a different knowledge base snapshot."""


@dataclass(frozen=True)
class EmbeddingIndex:
    """All corpus vectors for one provider, keyed by entry id."""

    provider_id: str
    dim: int
    records: dict[str, tuple[np.ndarray, np.ndarray]]  # id -> (title, content)
    kb_fingerprint: str


def kb_fingerprint(kb: "KnowledgeBase") -> str:
    """Stable content hash over sorted (query_id, title, content) triples."""
    digest = hashlib.sha256()
    for query_id in sorted(kb.entries):
        entry = kb.entries[query_id]
        for part in (entry.query_id, entry.title, entry.content):
            digest.update(part.encode("utf-8"))
            digest.update(b"\x1f")
        digest.update(b"\x1e")
    return digest.hexdigest()


def is_stale(index: EmbeddingIndex, kb: "KnowledgeBase") -> bool:
    return index.kb_fingerprint != kb_fingerprint(kb)


def build_index(kb: "KnowledgeBase", provider: "EmbeddingProvider") -> EmbeddingIndex:
    """Embed every entry's title and content through the provider.

    Batches are submitted in sorted-id order, so a deterministic provider
    yields a byte-identical index on rebuild. Any provider failure aborts
    the build; nothing partial escapes.
    """
    ids = sorted(kb.entries)
    records: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for start in range(0, len(ids), _BATCH):
        chunk = ids[start : start + _BATCH]
        texts = [kb.entries[i].title for i in chunk] + [kb.entries[i].content for i in chunk]
        vectors = provider.embed_batch(texts)
        for offset, query_id in enumerate(chunk):
            title_vec = _checked(vectors[offset], provider.dim, query_id)
            content_vec = _checked(vectors[offset + len(chunk)], provider.dim, query_id)
            records[query_id] = (title_vec, content_vec)
    return EmbeddingIndex(
        provider_id=provider.provider_id,
        dim=provider.dim,
        records=records,
        kb_fingerprint=kb_fingerprint(kb),
    )


def _checked(vector: np.ndarray, dim: int, query_id: str) -> np.ndarray:
    values = np.asarray(vector, dtype=np.float64)
    if values.shape != (dim,):
        raise SchemaError(f"provider returned shape {values.shape} for {query_id!r}, expected ({dim},)")
    if not np.all(np.isfinite(values)):
        raise SchemaError(f"provider returned non-finite components for {query_id!r}")
    values = values.copy()
    values.flags.writeable = False
    return values


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _format_vector(values: np.ndarray) -> str:
    return " ".join(repr(float(v)) for v in values)


def _serialize_lines(index: EmbeddingIndex) -> Iterator[str]:
    yield MAGIC
    yield (
        f"provider={quote(index.provider_id, safe='')} "
        f"dim={index.dim} fingerprint={index.kb_fingerprint}"
    )
    for query_id in sorted(index.records):
        title, content = index.records[query_id]
        encoded = quote(query_id, safe="")
        yield f"T {encoded} {_format_vector(title)}"
        yield f"C {encoded} {_format_vector(content)}"


def save_index(index: EmbeddingIndex, path: str | Path) -> None:
    """Write atomically: serialize to a sibling temp file, then rename.

    A failure mid-write removes the temp file and leaves any existing file
    at path untouched, so a crash can never yield a loadable corrupt index.
    """
    target = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            for line in _serialize_lines(index):
                handle.write(line)
                handle.write("\n")
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _parse_header(line: str) -> tuple[str, int, str]:
    fields = {}
    for chunk in line.split(" "):
        key, sep, value = chunk.partition("=")
        if sep:
            fields[key] = value
    try:
        provider_id = unquote(fields["provider"])
        dim = int(fields["dim"])
        fingerprint = fields["fingerprint"]
    except (KeyError, ValueError) as exc:
        raise IndexFormatError(f"line 2: bad header {line!r}: {exc}") from exc
    if dim < 1:
        raise IndexFormatError(f"line 2: dim must be positive, got {dim}")
    return provider_id, dim, fingerprint


def _parse_record_line(line: str, line_no: int, kind: str, dim: int) -> tuple[str, np.ndarray]:
    parts = line.split(" ")
    if len(parts) < 2 or parts[0] != kind:
        raise IndexFormatError(f"line {line_no}: expected a {kind!r} record line")
    query_id = unquote(parts[1])
    raw = parts[2:]
    if len(raw) != dim:
        raise ConsistencyError(f"line {line_no}: {len(raw)} components, expected dim {dim}")
    try:
        values = np.array([float(v) for v in raw], dtype=np.float64)
    except ValueError as exc:
        raise IndexFormatError(f"line {line_no}: unparseable component: {exc}") from exc
    if not np.all(np.isfinite(values)):
        raise IndexFormatError(f"line {line_no}: non-finite component")
    values.flags.writeable = False
    return query_id, values


def load_index(path: str | Path, kb: "KnowledgeBase | None" = None) -> EmbeddingIndex:
    """Reload a saved index bit-exactly.

    When a knowledge base is supplied, a fingerprint mismatch emits
    IndexStaleWarning; loading still succeeds and the caller decides
    whether to rebuild.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MAGIC:
        found = lines[0] if lines else "<empty file>"
        raise IndexFormatError(f"line 1: expected magic {MAGIC!r}, found {found!r}")
    if len(lines) < 2:
        raise IndexFormatError("line 2: missing header line")
    provider_id, dim, fingerprint = _parse_header(lines[1])

    if (len(lines) - 2) % 2 != 0:
        raise IndexFormatError(f"line {len(lines)}: dangling record line, T/C pairs incomplete")

    records: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for i in range(2, len(lines), 2):
        title_id, title_vec = _parse_record_line(lines[i], i + 1, "T", dim)
        content_id, content_vec = _parse_record_line(lines[i + 1], i + 2, "C", dim)
        if title_id != content_id:
            raise IndexFormatError(
                f"line {i + 2}: content record for {content_id!r} does not match title record {title_id!r}"
            )
        if title_id in records:
            raise IndexFormatError(f"line {i + 1}: duplicate record for {title_id!r}")
        records[title_id] = (title_vec, content_vec)

    index = EmbeddingIndex(provider_id=provider_id, dim=dim, records=records, kb_fingerprint=fingerprint)
    if kb is not None and is_stale(index, kb):
        warnings.warn(
            f"{path}: index fingerprint does not match the knowledge base; consider rebuilding",
            IndexStaleWarning,
            stacklevel=2,
        )
    return index
